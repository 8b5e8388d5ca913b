#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alscan {

/// Raised when a numeric evaluation produces a non-finite value where a
/// finite one is required.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// N x T grid of observations stored row-major, one sequence per row.
///
/// Immutable after construction; safe to share read-only between threads.
class DataMatrix {
 public:
  /// Throws std::invalid_argument on empty shape, size mismatch or a
  /// non-finite entry.
  DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static DataMatrix zeros(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t n, std::size_t t) const noexcept {
    return values_[n * cols_ + t];
  }
  std::span<const double> row(std::size_t n) const;
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const DataMatrix&, const DataMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

/// Index window (start, start + length] with 0-based start.
///
/// Covers the time points start+1, ..., start+length in 1-based numbering,
/// i.e. the 0-based columns start, ..., start+length-1.
struct Interval {
  std::size_t start = 0;
  std::size_t length = 1;

  std::size_t end() const noexcept { return start + length; }
  bool fits(std::size_t cols) const noexcept {
    return length >= 1 && start + length <= cols;
  }

  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Number of time points shared by two intervals.
std::size_t overlap_length(const Interval& a, const Interval& b) noexcept;

/// Per-row cumulative sums with a leading zero column.
///
/// Each entry carries a compensation term so interval sums stay accurate to
/// a few ulps of the interval sum itself, independent of the row's running
/// total.
class PrefixSums {
 public:
  explicit PrefixSums(const DataMatrix& data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  /// Cumulative sum S_n(b), 0 <= b <= T.
  double cumulative(std::size_t n, std::size_t b) const noexcept {
    const std::size_t k = n * (cols_ + 1) + b;
    return sums_[k] + carry_[k];
  }

  /// Sum of row n over (a, b].
  double sum(std::size_t n, std::size_t a, std::size_t b) const noexcept {
    const std::size_t base = n * (cols_ + 1);
    return (sums_[base + b] - sums_[base + a]) +
           (carry_[base + b] - carry_[base + a]);
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> sums_;
  std::vector<double> carry_;
};

PrefixSums build_prefix_sums(const DataMatrix& data);

/// Standardized interval sums Y_n = (S_n(j+l) - S_n(j)) / sqrt(l).
struct PooledScores {
  Interval interval;
  std::vector<double> scores;
};

/// Throws std::out_of_range if the interval does not fit.
PooledScores pooled_scores(const PrefixSums& prefix, Interval interval);

/// Allocation-free variant; `out` must have prefix.rows() entries.
void pooled_scores_into(const PrefixSums& prefix, Interval interval,
                        std::span<double> out);

enum class Sidedness { one_sided, two_sided };

std::string to_string(Sidedness sided);
Sidedness parse_sidedness(std::string_view text);

/// p-values are clamped to [kPValueFloor, 1 - kPValueFloor].
inline constexpr double kPValueFloor = 1e-16;

/// Standard normal distribution function.
double normal_cdf(double y);
/// Upper tail 1 - Phi(y), evaluated without cancellation for large y.
double normal_upper_tail(double y);

/// Clamped p-value of one standardized score.
double p_value(double y, Sidedness sided);

std::vector<double> p_values(const PooledScores& scores, Sidedness sided);
void p_values_into(std::span<const double> scores, Sidedness sided,
                   std::span<double> out);

}  // namespace alscan
