#ifndef CIQA_ARIQA_CROSSVAL_H_
#define CIQA_ARIQA_CROSSVAL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ciqa/ariqa/svr.h"
#include "ciqa/common/rng.h"
#include "ciqa/eval/report.h"

namespace ciqa {

struct TrainTestSplit {
  std::vector<size_t> train;
  std::vector<size_t> test;
};

// Random split of n items with round(n * train_ratio) items for training.
TrainTestSplit RandomSplit(size_t n, double train_ratio, Rng& rng);

// Splits the distinct group ids, not the items, so no group straddles the
// split. `train_groups` distinct groups go to training.
TrainTestSplit GroupSplit(std::span<const int> groups, size_t train_groups, Rng& rng);

// Throws std::runtime_error when a group id occurs on both sides.
void RequireGroupDisjoint(const TrainTestSplit& split, std::span<const int> groups);

struct SvrCvOptions {
  int folds = 100;
  double train_ratio = 0.8;
  uint64_t seed = 0;
  SvrParams svr;
  // Degenerate check mode: one fold trained and tested on everything.
  bool train_equals_test = false;
};

struct SvrCvResult {
  // Mean over folds of SRCC/KRCC/PLCC/RMSE between held-out predictions and
  // MOS (no logistic mapping).
  CorrelationSummary mean;
  std::vector<CorrelationSummary> per_fold;
  std::vector<TrainTestSplit> splits;
  // Folds whose predictions were constant (correlation undefined).
  int skipped_folds = 0;
};

// Repeated random 4:1 splits. With non-empty `groups` the splits are made
// over group ids and checked for disjointness every fold. Needs >= 10 rows.
SvrCvResult SvrCrossval(const std::vector<std::vector<double>>& features, std::span<const double> mos,
                        const SvrCvOptions& options, std::span<const int> groups = {});

}  // namespace ciqa

#endif  // CIQA_ARIQA_CROSSVAL_H_
