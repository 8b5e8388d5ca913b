#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "alscan/core.hpp"
#include "alscan/gof.hpp"

namespace alscan::cli {

/// Invalid flag combination or value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Command { gen, scan, identify, boundary, calibrate, power, profile };

Command parse_command(const std::string& name);
std::string to_string(Command command);

/// Where a rejection threshold comes from.
struct ThresholdSource {
  enum class Kind { lemma, value, file } kind = Kind::lemma;
  double value = 0;
  std::string path;
  double level = 0.95;  // quantile used from a calibration table

  /// Parses "lemma", "value:X" or "file:PATH".
  static ThresholdSource parse(const std::string& text);
  std::string describe() const;
};

/// Single-segment signal given on the command line.
struct SegmentFlags {
  std::optional<std::size_t> j;
  std::optional<std::size_t> ell;
  double beta = 0.5;
  double epsilon = 0.0;
  std::optional<double> pi;
  std::optional<double> zeta;
  std::optional<double> mu;
  std::optional<double> kappa;
  double tau = 0.0;
};

struct RunConfig {
  Command command = Command::scan;
  std::string input;
  std::string output;
  std::vector<StatKind> stats{StatKind::pbj};
  ThresholdSource threshold;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  Sidedness sided = Sidedness::one_sided;
  std::size_t quadrature_nodes = 64;

  // gen
  std::string model;          // JSON model file; overrides the flags below
  std::optional<std::size_t> n;
  std::optional<std::size_t> T;
  SegmentFlags segment;
  std::string truth_output;
  bool nonaligned = false;

  // scan
  std::string intervals_prefix;  // PREFIX.<stat>.csv per statistic
  std::string scanset_output;

  // identify
  std::optional<double> c;
  double f = 0.0;
  std::string intervals_input;

  // boundary
  std::vector<double> beta_grid;
  std::vector<double> zeta_grid;
  std::vector<double> tau_grid{0.0};

  // calibrate / power
  std::size_t reps = 100;
  std::vector<double> quantiles{0.9, 0.95, 0.99};
  std::vector<std::size_t> n_grid;
  std::vector<double> mu_grid;
  std::optional<double> target_zeta;
  std::string csv_output;

  // profile
  std::optional<std::size_t> ell;
  std::string beta_output;
  std::string summary_output;  // JSON with j_hat, beta_hat

  /// Throws ConfigError when the fields do not fit the command.
  void validate() const;
};

/// Parses a grid: "a,b,c" or "start:stop:step" (inclusive).
std::vector<double> parse_grid(const std::string& text);

/// Executes a command. Throws ConfigError, FormatError, NumericError.
void run(const RunConfig& config);

/// Runs a command and maps failures to an exit code, writing
/// {"error": {"kind", "message"}} to `err`.
int run_reporting(const RunConfig& config, std::ostream& err);

/// Exit codes by failure kind.
inline constexpr int kExitConfig = 2;
inline constexpr int kExitFormat = 3;
inline constexpr int kExitNumeric = 4;
inline constexpr int kExitInternal = 1;

/// Writes the error JSON for an exception and returns its exit code.
int report_error(const std::exception& e, std::ostream& err);

}  // namespace alscan::cli
