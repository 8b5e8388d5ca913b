#include "alscan/identify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace alscan {

IdentifiedSegments identify(std::vector<Segment> candidates,
                            const IdentificationConfig& config) {
  if (!(config.overlap_fraction >= 0)) {
    throw std::invalid_argument("identify: overlap fraction must be >= 0");
  }
  std::erase_if(candidates, [&](const Segment& s) {
    return std::isnan(s.score) || s.score < config.threshold;
  });
  std::sort(candidates.begin(), candidates.end(),
            [](const Segment& a, const Segment& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.interval < b.interval;
            });
  IdentifiedSegments kept;
  for (const auto& cand : candidates) {
    const double limit =
        config.overlap_fraction * static_cast<double>(cand.interval.length);
    const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const Segment& k) {
      return static_cast<double>(overlap_length(cand.interval, k.interval)) > limit;
    });
    if (!dominated) kept.push_back(cand);
  }
  return kept;
}

IdentifiedSegments identify(const ScanReport& report,
                            const IdentificationConfig& config) {
  if (report.records.empty() && report.intervals > 0) {
    throw std::invalid_argument("identify: report has no per-interval records");
  }
  std::vector<Segment> candidates;
  candidates.reserve(report.records.size());
  for (const auto& rec : report.records) {
    candidates.push_back({rec.interval, rec.penalized});
  }
  return identify(std::move(candidates), config);
}

}  // namespace alscan
