#include "alscan/scanset.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace alscan {
namespace {

// Length bounds (lower, upper] of level r.
struct LengthRange {
  double lower;
  double upper;
};

LengthRange length_range(int r, std::size_t T) {
  const double t = static_cast<double>(T);
  return {t / std::exp(static_cast<double>(r)),
          t / std::exp(static_cast<double>(r - 1))};
}

}  // namespace

ScanSet::ScanSet(std::size_t length, std::vector<ScanLevel> levels)
    : length_(length), levels_(std::move(levels)) {
  for (const auto& level : levels_) {
    for (const auto& iv : level.intervals) {
      if (!iv.fits(length_)) {
        throw std::invalid_argument("ScanSet: interval exceeds T");
      }
      members_.push_back({level.r, iv});
    }
  }
}

bool operator==(const ScanSet& a, const ScanSet& b) {
  if (a.length_ != b.length_ || a.members_.size() != b.members_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.members_.size(); ++i) {
    if (a.members_[i].level != b.members_[i].level ||
        a.members_[i].interval != b.members_[i].interval) {
      return false;
    }
  }
  return true;
}

int level_count(std::size_t T) {
  if (T == 0) throw std::invalid_argument("level_count: T must be >= 1");
  const int r = static_cast<int>(std::floor(std::log(static_cast<double>(T))));
  return r < 1 ? 1 : r;
}

std::size_t grid_spacing(int r, std::size_t T) {
  if (r < 1 || T < 1) {
    throw std::invalid_argument("grid_spacing: need r >= 1 and T >= 1");
  }
  const double denom =
      std::sqrt(static_cast<double>(r)) * std::exp(static_cast<double>(r));
  return static_cast<std::size_t>(std::floor(static_cast<double>(T) / denom)) +
         1;
}

ScanSet build_scan_set(std::size_t T) {
  if (T < 1) throw std::invalid_argument("build_scan_set: T must be >= 1");
  const int levels = level_count(T);
  std::vector<ScanLevel> out;
  out.reserve(static_cast<std::size_t>(levels));
  for (int r = 1; r <= levels; ++r) {
    ScanLevel level{r, grid_spacing(r, T), {}};
    const auto range = length_range(r, T);
    const std::size_t d = level.grid;
    for (std::size_t len = d; len <= T; len += d) {
      const double l = static_cast<double>(len);
      if (l > range.upper) break;
      if (!(l > range.lower)) continue;
      for (std::size_t j = 0; j + len <= T; j += d) {
        level.intervals.push_back({j, len});
      }
    }
    out.push_back(std::move(level));
  }
  return ScanSet(T, std::move(out));
}

std::optional<Approximant> best_inner_approximation(const ScanSet& set,
                                                    Interval target) {
  if (!target.fits(set.length())) {
    throw std::out_of_range("best_inner_approximation: target (" +
                            std::to_string(target.start) + ", " +
                            std::to_string(target.end()) +
                            "] exceeds T=" + std::to_string(set.length()));
  }
  std::optional<Approximant> best;
  for (const auto& level : set.levels()) {
    const std::size_t d = level.grid;
    // Smallest grid point >= start and largest grid point <= end.
    const std::size_t lo = (target.start + d - 1) / d * d;
    const std::size_t hi = target.end() / d * d;
    if (hi <= lo) continue;
    const auto range = length_range(level.r, set.length());
    // Longest grid-multiple length allowed at this level.
    std::size_t len = hi - lo;
    if (static_cast<double>(len) > range.upper) {
      len = static_cast<std::size_t>(std::floor(range.upper / d)) * d;
      while (len >= d && static_cast<double>(len) > range.upper) len -= d;
    }
    if (len < d || !(static_cast<double>(len) > range.lower)) continue;
    if (lo + len > set.length()) continue;
    if (!best || len > best->interval.length) {
      best = Approximant{{lo, len}, level.r};
    }
  }
  return best;
}

}  // namespace alscan
