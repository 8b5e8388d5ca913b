#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "alscan/alr.hpp"
#include "alscan/core.hpp"
#include "alscan/gof.hpp"
#include "alscan/identify.hpp"
#include "alscan/scanset.hpp"

namespace alscan {

/// Malformed or unreadable input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MatrixFormat { csv, binary };

/// CSV: one sequence per line, comma separated. A first line containing a
/// non-numeric field is treated as a header and skipped. Blank lines are
/// ignored; every data line must have the same number of fields.
DataMatrix read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const DataMatrix& data);

/// Binary: "ALSC", u64 N, u64 T, then N*T little-endian doubles row-major.
DataMatrix read_matrix_binary(std::istream& in);
void write_matrix_binary(std::ostream& out, const DataMatrix& data);

/// Picks the format from the leading magic bytes.
DataMatrix read_matrix(const std::string& path);
void write_matrix(const std::string& path, const DataMatrix& data,
                  MatrixFormat format);
/// binary for a ".bin" or ".alsc" suffix, csv otherwise.
MatrixFormat format_for_path(const std::string& path);

/// Columns r, j, ell, raw, penalty, penalized, arg_n.
void write_interval_csv(std::ostream& out, const ScanReport& report);
std::vector<IntervalStatistic> read_interval_csv(std::istream& in);

/// Columns r, d, j, ell.
void write_scan_set_csv(std::ostream& out, const ScanSet& set);

/// Columns rank, j, ell, score.
void write_segments_csv(std::ostream& out, const IdentifiedSegments& segments);

/// Columns j, logL, L.
void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& profile);
/// Columns beta, logL, fraction.
void write_beta_profile_csv(std::ostream& out,
                            const std::vector<BetaProfilePoint>& profile);

/// Formats a double so that it reads back bit-identically.
std::string format_double(double v);
/// Parses a double, accepting inf/-inf/nan spellings. Throws FormatError.
double parse_double(const std::string& text);

}  // namespace alscan
