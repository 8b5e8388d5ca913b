#include "alscan/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace alscan {
namespace {

constexpr std::array<char, 4> kMagic{'A', 'L', 'S', 'C'};

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    fields.push_back(trim(std::string_view(line).substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return fields;
}

bool try_parse(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = first + text.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

void write_u64(std::ostream& out, std::uint64_t v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw FormatError("binary matrix: truncated header");
  }
  return to_little(v);
}

// Reads lines as numeric rows; skips a header line and blank lines.
std::vector<std::vector<double>> read_numeric_rows(std::istream& in,
                                                   const char* what) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size() && numeric; ++k) {
      numeric = try_parse(fields[k], row[k]);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw FormatError(std::string(what) + ": non-numeric field on line " +
                        std::to_string(lineno));
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError(std::string(what) + ": line " + std::to_string(lineno) +
                        " has " + std::to_string(row.size()) + " fields, expected " +
                        std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, std::ios::out | std::ios::trunc | mode);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

double parse_double(const std::string& text) {
  double v = 0;
  if (!try_parse(trim(text), v)) {
    throw FormatError("not a number: '" + text + "'");
  }
  return v;
}

DataMatrix read_matrix_csv(std::istream& in) {
  auto rows = read_numeric_rows(in, "matrix CSV");
  if (rows.empty()) throw FormatError("matrix CSV: no data rows");
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
  try {
    return DataMatrix(rows.size(), cols, std::move(values));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("matrix CSV: ") + e.what());
  }
}

void write_matrix_csv(std::ostream& out, const DataMatrix& data) {
  for (std::size_t n = 0; n < data.rows(); ++n) {
    const auto row = data.row(n);
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (t) out << ',';
      out << format_double(row[t]);
    }
    out << '\n';
  }
}

DataMatrix read_matrix_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError("binary matrix: missing ALSC magic");
  }
  const std::uint64_t rows = read_u64(in);
  const std::uint64_t cols = read_u64(in);
  if (rows == 0 || cols == 0 || rows > (std::uint64_t{1} << 40) / cols) {
    throw FormatError("binary matrix: implausible shape " + std::to_string(rows) +
                      " x " + std::to_string(cols));
  }
  std::vector<double> values(rows * cols);
  for (double& v : values) {
    const std::uint64_t bits = read_u64(in);
    v = std::bit_cast<double>(bits);
  }
  try {
    return DataMatrix(rows, cols, std::move(values));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("binary matrix: ") + e.what());
  }
}

void write_matrix_binary(std::ostream& out, const DataMatrix& data) {
  out.write(kMagic.data(), kMagic.size());
  write_u64(out, data.rows());
  write_u64(out, data.cols());
  for (double v : data.values()) write_u64(out, std::bit_cast<std::uint64_t>(v));
}

DataMatrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 4 && head == kMagic;
  in.clear();
  in.seekg(0);
  return binary ? read_matrix_binary(in) : read_matrix_csv(in);
}

void write_matrix(const std::string& path, const DataMatrix& data,
                  MatrixFormat format) {
  if (format == MatrixFormat::binary) {
    auto out = open_out(path, std::ios::binary);
    write_matrix_binary(out, data);
  } else {
    auto out = open_out(path);
    write_matrix_csv(out, data);
  }
}

MatrixFormat format_for_path(const std::string& path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return ends_with(".bin") || ends_with(".alsc") ? MatrixFormat::binary
                                                 : MatrixFormat::csv;
}

void write_interval_csv(std::ostream& out, const ScanReport& report) {
  out << "r,j,ell,raw,penalty,penalized,arg_n\n";
  for (const auto& rec : report.records) {
    out << rec.level << ',' << rec.interval.start << ',' << rec.interval.length << ','
        << format_double(rec.raw) << ',' << format_double(rec.penalty) << ','
        << format_double(rec.penalized) << ',' << rec.arg_n << '\n';
  }
}

std::vector<IntervalStatistic> read_interval_csv(std::istream& in) {
  std::vector<IntervalStatistic> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (lineno == 1 && line.starts_with("r,")) continue;
    const auto f = split_fields(line);
    if (f.size() != 7) {
      throw FormatError("interval CSV: line " + std::to_string(lineno) +
                        " needs 7 fields");
    }
    try {
      IntervalStatistic rec;
      rec.level = std::stoi(f[0]);
      rec.interval = {std::stoul(f[1]), std::stoul(f[2])};
      rec.raw = parse_double(f[3]);
      rec.penalty = parse_double(f[4]);
      rec.penalized = parse_double(f[5]);
      rec.arg_n = std::stoul(f[6]);
      out.push_back(rec);
    } catch (const std::logic_error&) {
      throw FormatError("interval CSV: bad field on line " + std::to_string(lineno));
    }
  }
  return out;
}

void write_scan_set_csv(std::ostream& out, const ScanSet& set) {
  out << "r,d,j,ell\n";
  for (const auto& level : set.levels()) {
    for (const auto& iv : level.intervals) {
      out << level.r << ',' << level.grid << ',' << iv.start << ',' << iv.length
          << '\n';
    }
  }
}

void write_segments_csv(std::ostream& out, const IdentifiedSegments& segments) {
  out << "rank,j,ell,score\n";
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const auto& s = segments[k];
    out << k + 1 << ',' << s.interval.start << ',' << s.interval.length << ','
        << format_double(s.score) << '\n';
  }
}

void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& profile) {
  out << "j,logL,L\n";
  for (const auto& p : profile) {
    out << p.j << ',' << format_double(p.log_likelihood) << ','
        << format_double(p.likelihood) << '\n';
  }
}

void write_beta_profile_csv(std::ostream& out,
                            const std::vector<BetaProfilePoint>& profile) {
  out << "beta,logL,fraction\n";
  for (const auto& p : profile) {
    out << format_double(p.beta) << ',' << format_double(p.log_likelihood) << ','
        << format_double(p.fraction) << '\n';
  }
}

}  // namespace alscan
