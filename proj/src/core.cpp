#include "alscan/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace alscan {

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols,
                       std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0) {
    throw std::invalid_argument("DataMatrix: shape must be at least 1x1");
  }
  if (values_.size() != rows_ * cols_) {
    throw std::invalid_argument("DataMatrix: expected " +
                                std::to_string(rows_ * cols_) +
                                " values, got " +
                                std::to_string(values_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw std::invalid_argument(
          "DataMatrix: non-finite value at row " + std::to_string(k / cols_) +
          ", column " + std::to_string(k % cols_));
    }
  }
}

DataMatrix DataMatrix::zeros(std::size_t rows, std::size_t cols) {
  return DataMatrix(rows, cols, std::vector<double>(rows * cols, 0.0));
}

std::span<const double> DataMatrix::row(std::size_t n) const {
  if (n >= rows_) throw std::out_of_range("DataMatrix::row: index out of range");
  return std::span<const double>(values_).subspan(n * cols_, cols_);
}

std::size_t overlap_length(const Interval& a, const Interval& b) noexcept {
  const std::size_t lo = std::max(a.start, b.start);
  const std::size_t hi = std::min(a.end(), b.end());
  return hi > lo ? hi - lo : 0;
}

PrefixSums::PrefixSums(const DataMatrix& data)
    : rows_(data.rows()),
      cols_(data.cols()),
      sums_(data.rows() * (data.cols() + 1), 0.0),
      carry_(data.rows() * (data.cols() + 1), 0.0) {
  for (std::size_t n = 0; n < rows_; ++n) {
    const auto row = data.row(n);
    const std::size_t base = n * (cols_ + 1);
    // Neumaier summation: sums_ holds the running total, carry_ the lost
    // low-order bits.
    double s = 0.0;
    double c = 0.0;
    for (std::size_t t = 0; t < cols_; ++t) {
      const double x = row[t];
      const double u = s + x;
      if (std::abs(s) >= std::abs(x)) {
        c += (s - u) + x;
      } else {
        c += (x - u) + s;
      }
      s = u;
      sums_[base + t + 1] = s;
      carry_[base + t + 1] = c;
    }
  }
}

PrefixSums build_prefix_sums(const DataMatrix& data) { return PrefixSums(data); }

void pooled_scores_into(const PrefixSums& prefix, Interval interval,
                        std::span<double> out) {
  if (!interval.fits(prefix.cols())) {
    throw std::out_of_range("pooled_scores: interval (" +
                            std::to_string(interval.start) + ", " +
                            std::to_string(interval.end()) +
                            "] exceeds T=" + std::to_string(prefix.cols()));
  }
  if (out.size() != prefix.rows()) {
    throw std::invalid_argument("pooled_scores: output size mismatch");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(interval.length));
  for (std::size_t n = 0; n < prefix.rows(); ++n) {
    out[n] = prefix.sum(n, interval.start, interval.end()) * scale;
  }
}

PooledScores pooled_scores(const PrefixSums& prefix, Interval interval) {
  PooledScores result{interval, std::vector<double>(prefix.rows())};
  pooled_scores_into(prefix, interval, result.scores);
  return result;
}

std::string to_string(Sidedness sided) {
  return sided == Sidedness::one_sided ? "one" : "two";
}

Sidedness parse_sidedness(std::string_view text) {
  if (text == "one" || text == "one_sided") return Sidedness::one_sided;
  if (text == "two" || text == "two_sided") return Sidedness::two_sided;
  throw std::invalid_argument("unknown sidedness '" + std::string(text) +
                              "' (expected one|two)");
}

double normal_upper_tail(double y) {
  return 0.5 * std::erfc(y / std::numbers::sqrt2);
}

double normal_cdf(double y) {
  return 0.5 * std::erfc(-y / std::numbers::sqrt2);
}

double p_value(double y, Sidedness sided) {
  const double p = sided == Sidedness::one_sided
                       ? normal_upper_tail(y)
                       : 2.0 * normal_upper_tail(std::abs(y));
  return std::clamp(p, kPValueFloor, 1.0 - kPValueFloor);
}

void p_values_into(std::span<const double> scores, Sidedness sided,
                   std::span<double> out) {
  if (out.size() != scores.size()) {
    throw std::invalid_argument("p_values: output size mismatch");
  }
  for (std::size_t n = 0; n < scores.size(); ++n) {
    out[n] = p_value(scores[n], sided);
  }
}

std::vector<double> p_values(const PooledScores& scores, Sidedness sided) {
  std::vector<double> out(scores.scores.size());
  p_values_into(scores.scores, sided, out);
  return out;
}

}  // namespace alscan
