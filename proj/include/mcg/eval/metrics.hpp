#pragma once

#include <span>
#include <vector>

#include "mcg/util/errors.hpp"

namespace mcg {

// Area under the ROC curve as the Mann-Whitney statistic: the fraction of
// (positive, negative) pairs ranked correctly, ties counting half. Computed
// by rank-sum in O(n log n) with midranks for ties. Throws
// DegenerateLabelsError when either class is absent.
double auc(std::span<const double> scores, std::span<const int> labels);

struct TurnAuc {
  int turn_lo = 0;
  int turn_hi = 0;  // inclusive; the final bucket pools everything above
  double auc = 0;
  long n = 0;
};

struct AucReport {
  double overall_auc = 0;
  long n_pos = 0, n_neg = 0;
  std::vector<TurnAuc> per_turn;  // buckets with a single class are skipped
};

// Overall plus per-turn AUC, one bucket per turn up to `max_single_turn`
// and one pooled bucket above it.
AucReport auc_report(std::span<const double> scores, std::span<const int> labels,
                     std::span<const uint16_t> turns, int max_single_turn = 30);

struct WilsonInterval {
  double lo = 0, hi = 0;
};

// 95% (z = 1.96) Wilson score interval by default.
WilsonInterval wilson(int successes, int trials, double z = 1.96);

}  // namespace mcg
