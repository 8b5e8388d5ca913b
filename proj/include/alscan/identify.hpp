#pragma once

#include <vector>

#include "alscan/core.hpp"
#include "alscan/gof.hpp"

namespace alscan {

struct IdentificationConfig {
  double threshold = 0;         // c: scores below it are dropped
  double overlap_fraction = 0;  // f >= 0; f >= 1 disables pruning
};

struct Segment {
  Interval interval;
  double score;
};

/// Candidates ranked by descending score (ties by (start, length)).
/// Every score is >= c and no segment overlaps a higher-ranked one by more
/// than f times its own length.
using IdentifiedSegments = std::vector<Segment>;

/// Greedy identification over a score-labelled candidate list.
IdentifiedSegments identify(std::vector<Segment> candidates,
                            const IdentificationConfig& config);

/// Identification over the penalized per-window scores of a report.
/// Throws std::invalid_argument when the report carries no records.
IdentifiedSegments identify(const ScanReport& report,
                            const IdentificationConfig& config);

}  // namespace alscan
