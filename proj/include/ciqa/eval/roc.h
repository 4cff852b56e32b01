#ifndef CIQA_EVAL_ROC_H_
#define CIQA_EVAL_ROC_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ciqa/subjective/mos.h"

namespace ciqa {

// Two-sided 5% critical value of the standard normal.
inline constexpr double kZCritical95 = 1.959963984540054;

// Mann-Whitney AUC: probability that a positive outscores a negative, ties
// credited 0.5. Returns NaN when either class is empty.
double Auc(std::span<const double> scores, std::span<const int> labels);

// One entry per classified item. `group` identifies the unordered stimulus
// pair the entry came from, which is the bootstrap resampling unit.
struct RocAnalysis {
  std::vector<double> scores;
  std::vector<int> labels;
  std::vector<size_t> group;
  std::vector<std::pair<size_t, size_t>> pairs;  // per group, stimulus indices
  size_t positives = 0;
  size_t negatives = 0;
  double auc = 0.0;
  bool defined = false;  // both classes present
};

// True when the two-sample z-test on (mos, std, n) rejects equality at 5%.
// Zero pooled spread falls back to mos inequality.
bool SignificantlyDifferent(const MosEntry& a, const MosEntry& b);

// Every unordered pair i < j; label 1 = significantly different, score |dQ|.
RocAnalysis RocDifferentSimilar(std::span<const MosEntry> stats, std::span<const double> scores);

// Significant pairs only, each entered in both orientations so the classes
// balance: label 1 when the first stimulus has the higher MOS, score = dQ
// with Q negated for lower-is-better metrics.
RocAnalysis RocBetterWorse(std::span<const MosEntry> stats, std::span<const double> scores,
                           bool higher_is_better);

enum class SignificanceVerdict { kBetter, kWorse, kIndistinguishable };
std::string VerdictName(SignificanceVerdict v);

struct AucComparison {
  double auc_difference = 0.0;  // A - B on the full sample
  double ci_low = 0.0;
  double ci_high = 0.0;
  int valid_resamples = 0;
  SignificanceVerdict verdict = SignificanceVerdict::kIndistinguishable;
};

// Paired bootstrap over stimulus pairs; A is better/worse when the 95%
// percentile interval of AUC(A) - AUC(B) excludes 0. Both analyses must
// share the same pair universe and labels; resamples >= 100.
AucComparison AucSignificance(const RocAnalysis& a, const RocAnalysis& b, int resamples,
                              uint64_t seed);

}  // namespace ciqa

#endif  // CIQA_EVAL_ROC_H_
