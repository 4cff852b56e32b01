#ifndef CIQA_ARIQA_MODEL_H_
#define CIQA_ARIQA_MODEL_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "ciqa/ariqa/crossval.h"
#include "ciqa/ariqa/stimulus.h"
#include "ciqa/fusion/train.h"

namespace ciqa {

// One superimposed stimulus seen through both pathways: against the AR
// reference and against the background viewport.
struct AriqaItem {
  PathwayInput ar;
  PathwayInput bg;
  double mos = 0.0;
  int scene = 0;
};

AriqaItem MakeAriqaItem(const FeatureStack& superimposed, const FeatureStack& ar_ref,
                        const FeatureStack& background, const SaliencyMap& sal_ar, const SaliencyMap& sal_bg,
                        double mos, int scene);

// u s_ar + v s_bg + c (distance-like).
double FusedScore(const FusionParams& params, const AriqaItem& item);
// 100 x score head of the fused distance: a MOS-scale estimate, higher = better.
double PredictAriqa(const FusionParams& params, const AriqaItem& item);
// Built-in features of the stimulus images, then PredictAriqa.
double PredictAriqa(const FusionParams& params, const ArStimulus& st, const SaliencyMap& sal_ar,
                    const SaliencyMap& sal_bg);

// All unordered pairs of items that share a scene, restricted to `subset`.
std::vector<std::pair<size_t, size_t>> ScenePairs(const std::vector<AriqaItem>& items,
                                                  const std::vector<size_t>& subset);

// Pair loss on fused scores with analytic gradient through both pathways.
LossParts AriqaPairLoss(const FusionParams& params, const AriqaItem& a, const AriqaItem& b, double gamma,
                        std::vector<double>* grad = nullptr);

// Each epoch draws ceil(|train| / batch) batches of `batch` pairs uniformly
// (with replacement) from ScenePairs(items, train).
FusionParams TrainAriqa(const std::vector<AriqaItem>& items, const std::vector<size_t>& train,
                        const TrainConfig& cfg, FusionParams init, TrainHistory* history = nullptr);

struct AriqaCvOptions {
  int repeats = 5;
  // Scenes assigned to training in each repeat; 0 selects half.
  size_t train_scenes = 0;
  uint64_t seed = 0;
  uint64_t init_seed = 0;
};

struct AriqaCvResult {
  CorrelationSummary mean;
  std::vector<CorrelationSummary> per_repeat;
  std::vector<TrainTestSplit> splits;
};

// Repeated scene-disjoint splits: train on one side, correlate
// PredictAriqa with MOS on the held-out side (no logistic mapping).
AriqaCvResult AriqaCrossval(const std::vector<AriqaItem>& items, const std::string& extractor,
                            const TrainConfig& cfg, const AriqaCvOptions& options);

}  // namespace ciqa

#endif  // CIQA_ARIQA_MODEL_H_
