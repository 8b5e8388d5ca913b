#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "alscan/core.hpp"

namespace alscan {

/// One level r of the approximating family: intervals whose endpoints lie on
/// the grid d_{r,T} * Z and whose length satisfies T/e^r < l <= T/e^(r-1).
struct ScanLevel {
  int r = 1;
  std::size_t grid = 1;
  std::vector<Interval> intervals;  // ordered by (length, start)
};

/// An interval of a ScanSet tagged with its level.
struct LeveledInterval {
  int level;
  Interval interval;
};

/// Multiscale family of candidate windows covering all locations and
/// lengths with O(T log T) members.
///
/// Levels are numbered 1..max(floor(log T), 1). A level may be empty for
/// small T; it is kept so that level indices always equal r.
class ScanSet {
 public:
  ScanSet(std::size_t length, std::vector<ScanLevel> levels);

  std::size_t length() const noexcept { return length_; }
  const std::vector<ScanLevel>& levels() const noexcept { return levels_; }
  /// Total number of intervals across levels.
  std::size_t size() const noexcept { return members_.size(); }
  /// All intervals in (r, length, start) order.
  const std::vector<LeveledInterval>& members() const noexcept {
    return members_;
  }

  friend bool operator==(const ScanSet& a, const ScanSet& b);

 private:
  std::size_t length_;
  std::vector<ScanLevel> levels_;
  std::vector<LeveledInterval> members_;
};

/// max(floor(log T), 1).
int level_count(std::size_t T);

/// d_{r,T} = floor(T / (sqrt(r) e^r)) + 1.
std::size_t grid_spacing(int r, std::size_t T);

/// Builds every level of the family for sequence length T >= 1.
ScanSet build_scan_set(std::size_t T);

struct Approximant {
  Interval interval;
  int level;
};

/// Longest member nested inside `target` (ties: smallest start), or nullopt
/// when no member fits inside it. Throws std::out_of_range when the target
/// does not fit within T.
std::optional<Approximant> best_inner_approximation(const ScanSet& set,
                                                    Interval target);

}  // namespace alscan
