#include "ciqa/eval/roc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ciqa/common/rng.h"

namespace ciqa {
namespace {

void CheckInputs(std::span<const MosEntry> stats, std::span<const double> scores, const char* what) {
  if (stats.size() != scores.size()) {
    throw std::invalid_argument(std::string(what) + ": " + std::to_string(stats.size()) +
                                " MOS entries vs " + std::to_string(scores.size()) + " scores");
  }
  if (stats.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least 2 stimuli");
  for (double s : scores) {
    if (!std::isfinite(s)) throw std::invalid_argument(std::string(what) + ": non-finite score");
  }
}

void Finish(RocAnalysis& roc) {
  roc.positives = static_cast<size_t>(std::count(roc.labels.begin(), roc.labels.end(), 1));
  roc.negatives = roc.labels.size() - roc.positives;
  roc.defined = roc.positives > 0 && roc.negatives > 0;
  roc.auc = roc.defined ? Auc(roc.scores, roc.labels) : std::numeric_limits<double>::quiet_NaN();
}

// Weighted Mann-Whitney: weight[k] copies of entry k.
double WeightedAuc(std::span<const double> scores, std::span<const int> labels,
                   std::span<const int> weight, std::span<const size_t> order) {
  double pos = 0.0, neg = 0.0;
  for (size_t k = 0; k < scores.size(); ++k) (labels[k] ? pos : neg) += weight[k];
  if (pos == 0.0 || neg == 0.0) return std::numeric_limits<double>::quiet_NaN();
  // Walk tie blocks in ascending score order.
  double wins = 0.0, neg_below = 0.0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    double block_pos = 0.0, block_neg = 0.0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] ? block_pos : block_neg) += weight[order[j]];
      ++j;
    }
    wins += block_pos * (neg_below + 0.5 * block_neg);
    neg_below += block_neg;
    i = j;
  }
  return wins / (pos * neg);
}

double Quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double Auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: length mismatch");
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  std::vector<int> ones(scores.size(), 1);
  return WeightedAuc(scores, labels, ones, order);
}

bool SignificantlyDifferent(const MosEntry& a, const MosEntry& b) {
  if (a.n_valid < 1 || b.n_valid < 1) throw std::invalid_argument("significance test: n_valid < 1");
  const double spread = std::sqrt(a.std * a.std / a.n_valid + b.std * b.std / b.n_valid);
  const double diff = std::abs(a.mos - b.mos);
  if (spread == 0.0) return diff > 0.0;
  return diff / spread > kZCritical95;
}

RocAnalysis RocDifferentSimilar(std::span<const MosEntry> stats, std::span<const double> scores) {
  CheckInputs(stats, scores, "different/similar ROC");
  RocAnalysis roc;
  const size_t n = stats.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      roc.group.push_back(roc.pairs.size());
      roc.pairs.emplace_back(i, j);
      roc.labels.push_back(SignificantlyDifferent(stats[i], stats[j]) ? 1 : 0);
      roc.scores.push_back(std::abs(scores[i] - scores[j]));
    }
  }
  Finish(roc);
  return roc;
}

RocAnalysis RocBetterWorse(std::span<const MosEntry> stats, std::span<const double> scores,
                           bool higher_is_better) {
  CheckInputs(stats, scores, "better/worse ROC");
  const double sign = higher_is_better ? 1.0 : -1.0;
  RocAnalysis roc;
  const size_t n = stats.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (!SignificantlyDifferent(stats[i], stats[j])) continue;
      const size_t g = roc.pairs.size();
      roc.pairs.emplace_back(i, j);
      const int i_better = stats[i].mos > stats[j].mos ? 1 : 0;
      const double dq = sign * (scores[i] - scores[j]);
      roc.group.push_back(g);
      roc.labels.push_back(i_better);
      roc.scores.push_back(dq);
      roc.group.push_back(g);
      roc.labels.push_back(1 - i_better);
      roc.scores.push_back(-dq);
    }
  }
  Finish(roc);
  return roc;
}

std::string VerdictName(SignificanceVerdict v) {
  switch (v) {
    case SignificanceVerdict::kBetter: return "better";
    case SignificanceVerdict::kWorse: return "worse";
    case SignificanceVerdict::kIndistinguishable: return "indistinguishable";
  }
  return "indistinguishable";
}

AucComparison AucSignificance(const RocAnalysis& a, const RocAnalysis& b, int resamples,
                              uint64_t seed) {
  if (resamples < 100) throw std::invalid_argument("auc significance: resamples must be >= 100");
  if (a.pairs != b.pairs || a.labels != b.labels || a.group != b.group) {
    throw std::invalid_argument("auc significance: analyses cover different pair sets");
  }
  AucComparison out;
  if (!a.defined || !b.defined) {
    out.auc_difference = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.auc_difference = a.auc - b.auc;

  auto sorted_order = [](const std::vector<double>& s) {
    std::vector<size_t> order(s.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return s[x] < s[y]; });
    return order;
  };
  const auto order_a = sorted_order(a.scores);
  const auto order_b = sorted_order(b.scores);

  const size_t groups = a.pairs.size();
  Rng rng(seed);
  std::vector<int> group_count(groups), weight(a.scores.size());
  std::vector<double> diffs;
  diffs.reserve(static_cast<size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    std::fill(group_count.begin(), group_count.end(), 0);
    for (size_t k = 0; k < groups; ++k) ++group_count[rng.Below(groups)];
    for (size_t k = 0; k < weight.size(); ++k) weight[k] = group_count[a.group[k]];
    const double auc_a = WeightedAuc(a.scores, a.labels, weight, order_a);
    const double auc_b = WeightedAuc(b.scores, b.labels, weight, order_b);
    if (std::isnan(auc_a) || std::isnan(auc_b)) continue;
    diffs.push_back(auc_a - auc_b);
  }
  out.valid_resamples = static_cast<int>(diffs.size());
  if (diffs.empty()) return out;
  std::sort(diffs.begin(), diffs.end());
  out.ci_low = Quantile(diffs, 0.025);
  out.ci_high = Quantile(diffs, 0.975);
  if (out.ci_low > 0.0) {
    out.verdict = SignificanceVerdict::kBetter;
  } else if (out.ci_high < 0.0) {
    out.verdict = SignificanceVerdict::kWorse;
  }
  return out;
}

}  // namespace ciqa
