#include "ciqa/ariqa/crossval.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ciqa/common/rng.h"
#include "ciqa/eval/correlation.h"

namespace ciqa {

TrainTestSplit RandomSplit(size_t n, double train_ratio, Rng& rng) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw std::invalid_argument("train ratio must lie in (0, 1)");
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(order);
  const size_t n_train = static_cast<size_t>(std::llround(static_cast<double>(n) * train_ratio));
  if (n_train < 1 || n_train >= n) throw std::invalid_argument("split leaves an empty side");
  TrainTestSplit s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

TrainTestSplit GroupSplit(std::span<const int> groups, size_t train_groups, Rng& rng) {
  std::vector<int> ids(groups.begin(), groups.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (train_groups < 1 || train_groups >= ids.size()) {
    throw std::invalid_argument("group split needs 1 <= train groups < " + std::to_string(ids.size()));
  }
  rng.Shuffle(ids);
  const std::set<int> train_ids(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(train_groups));
  TrainTestSplit s;
  for (size_t i = 0; i < groups.size(); ++i) (train_ids.count(groups[i]) ? s.train : s.test).push_back(i);
  return s;
}

void RequireGroupDisjoint(const TrainTestSplit& split, std::span<const int> groups) {
  std::set<int> train;
  for (size_t i : split.train) train.insert(groups[i]);
  for (size_t i : split.test) {
    if (train.count(groups[i])) {
      throw std::runtime_error("scene leakage: scene " + std::to_string(groups[i]) +
                               " appears in both training and test sets");
    }
  }
}

SvrCvResult SvrCrossval(const std::vector<std::vector<double>>& features, std::span<const double> mos,
                        const SvrCvOptions& options, std::span<const int> groups) {
  const size_t n = features.size();
  if (mos.size() != n) throw std::invalid_argument("cross-validation: feature rows and MOS differ in count");
  if (n < 10) throw std::invalid_argument("cross-validation needs at least 10 stimuli, got " + std::to_string(n));
  if (!groups.empty() && groups.size() != n) throw std::invalid_argument("cross-validation: group ids size mismatch");
  if (options.folds < 1) throw std::invalid_argument("cross-validation needs at least one fold");

  SvrCvResult result;
  Rng rng(options.seed);
  size_t distinct_groups = 0;
  if (!groups.empty()) {
    std::set<int> ids(groups.begin(), groups.end());
    distinct_groups = ids.size();
  }
  const int folds = options.train_equals_test ? 1 : options.folds;
  for (int f = 0; f < folds; ++f) {
    TrainTestSplit split;
    if (options.train_equals_test) {
      split.train.resize(n);
      std::iota(split.train.begin(), split.train.end(), 0);
      split.test = split.train;
    } else if (!groups.empty()) {
      const auto train_groups = static_cast<size_t>(std::llround(distinct_groups * options.train_ratio));
      split = GroupSplit(groups, train_groups, rng);
      RequireGroupDisjoint(split, groups);
    } else {
      split = RandomSplit(n, options.train_ratio, rng);
    }
    std::vector<std::vector<double>> xtr, xte;
    std::vector<double> ytr, yte;
    for (size_t i : split.train) {
      xtr.push_back(features[i]);
      ytr.push_back(mos[i]);
    }
    for (size_t i : split.test) {
      xte.push_back(features[i]);
      yte.push_back(mos[i]);
    }
    const SvrModel model = SvrTrain(xtr, ytr, options.svr);
    const auto pred = model.Predict(xte);
    result.splits.push_back(split);
    try {
      CorrelationSummary c;
      c.srcc = Srcc(pred, yte);
      c.krcc = Krcc(pred, yte);
      c.plcc = Plcc(pred, yte);
      c.rmse = Rmse(pred, yte);
      result.per_fold.push_back(c);
    } catch (const std::invalid_argument&) {
      ++result.skipped_folds;
    }
  }
  if (result.per_fold.empty()) throw std::runtime_error("cross-validation: every fold had undefined correlations");
  result.mean = Average(result.per_fold);
  return result;
}

}  // namespace ciqa
