#include "mcg/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mcg {

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw ShapeMismatchError("auc: scores and labels differ in length");
  const long n = static_cast<long>(scores.size());
  long n_pos = 0;
  for (int l : labels) n_pos += l != 0;
  long n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw DegenerateLabelsError("auc needs both classes present");

  std::vector<long> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](long a, long b) { return scores[a] < scores[b]; });

  // Midranks over tie groups; accumulate the positive rank sum.
  double rank_sum_pos = 0;
  long i = 0;
  while (i < n) {
    long j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    double midrank = 0.5 * ((i + 1) + (j + 1));
    for (long k = i; k <= j; ++k)
      if (labels[order[k]] != 0) rank_sum_pos += midrank;
    i = j + 1;
  }
  double u = rank_sum_pos - 0.5 * double(n_pos) * double(n_pos + 1);
  return u / (double(n_pos) * double(n_neg));
}

AucReport auc_report(std::span<const double> scores, std::span<const int> labels,
                     std::span<const uint16_t> turns, int max_single_turn) {
  AucReport report;
  report.overall_auc = auc(scores, labels);
  for (int l : labels) (l != 0 ? report.n_pos : report.n_neg) += 1;

  int max_turn = 0;
  for (uint16_t t : turns) max_turn = std::max<int>(max_turn, t);
  for (int bucket = 1; bucket <= std::min(max_single_turn, max_turn) + 1; ++bucket) {
    bool pooled_tail = bucket == max_single_turn + 1;
    int lo = bucket, hi = pooled_tail ? max_turn : bucket;
    if (pooled_tail && max_turn <= max_single_turn) break;
    std::vector<double> s;
    std::vector<int> l;
    for (size_t k = 0; k < turns.size(); ++k)
      if (turns[k] >= lo && turns[k] <= hi) {
        s.push_back(scores[k]);
        l.push_back(labels[k]);
      }
    bool has_pos = std::find(l.begin(), l.end(), 1) != l.end();
    bool has_neg = std::find(l.begin(), l.end(), 0) != l.end();
    if (!has_pos || !has_neg) continue;
    report.per_turn.push_back({lo, hi, auc(s, l), static_cast<long>(l.size())});
  }
  return report;
}

WilsonInterval wilson(int successes, int trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  double n = trials;
  double p = double(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = p + z2 / (2 * n);
  double margin = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {(center - margin) / denom, (center + margin) / denom};
}

}  // namespace mcg
