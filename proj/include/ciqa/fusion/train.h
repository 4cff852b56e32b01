#ifndef CIQA_FUSION_TRAIN_H_
#define CIQA_FUSION_TRAIN_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "ciqa/common/rng.h"
#include "ciqa/fusion/model.h"

namespace ciqa {

struct TrainConfig {
  double lr = 1e-4;
  int epochs_flat = 100;
  // Linear decay of the rate to 0 over these final epochs.
  int epochs_decay = 50;
  int batch = 10;
  double gamma = 2.0;
  uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  // Workers for per-item gradients; sums are always taken in batch order.
  int jobs = 1;

  void Validate() const;
  int total_epochs() const { return epochs_flat + epochs_decay; }
};

// Rate for 0-based `epoch`: lr during the flat phase, then
// lr * (1 - k / epochs_decay) for the k-th decay epoch.
double LearningRate(const TrainConfig& cfg, int epoch);

class Adam {
 public:
  Adam(size_t size, const TrainConfig& cfg);
  void Step(std::vector<double>& theta, const std::vector<double>& grad, double lr);

 private:
  double beta1_, beta2_, eps_;
  long long t_ = 0;
  std::vector<double> m_, v_;
};

struct TrainHistory {
  std::vector<double> epoch_loss;  // mean item loss per epoch
};

// Loss of one item; adds its gradient into `grad` when non-null.
using ItemLoss = std::function<double(const FusionParams&, size_t item, std::vector<double>* grad)>;
// Batches (lists of item indices) for one epoch.
using EpochPlan = std::function<std::vector<std::vector<size_t>>(int epoch, Rng& rng)>;

// Adam on the batch-mean loss. Throws std::runtime_error naming the epoch,
// batch and item when a loss or gradient is non-finite.
FusionParams RunTraining(FusionParams params, const TrainConfig& cfg, const EpochPlan& plan,
                         const ItemLoss& loss, TrainHistory* history = nullptr);

// One distorted stimulus with its two reference pathways and layer MOS.
struct CfiqaSample {
  PathwayInput ref1;
  PathwayInput ref2;
  double mos1 = 0.0;
  double mos2 = 0.0;
};

CfiqaSample MakeCfiqaSample(const FeatureStack& dist, const FeatureStack& ref1, const FeatureStack& ref2,
                            const SaliencyMap& sal1, const SaliencyMap& sal2, double mos1, double mos2);

// Full per-stimulus loss with analytic gradient.
LossParts CfiqaSampleLoss(const FusionParams& params, const CfiqaSample& sample, double gamma,
                          std::vector<double>* grad = nullptr);

// Shuffled epochs of `batch` stimuli.
FusionParams TrainCfiqa(const std::vector<CfiqaSample>& samples, const TrainConfig& cfg, FusionParams init,
                        TrainHistory* history = nullptr);

// Seeded split of n items into two halves (sizes floor(n/2), ceil(n/2)).
std::pair<std::vector<size_t>, std::vector<size_t>> TwoFoldSplit(size_t n, uint64_t seed);

}  // namespace ciqa

#endif  // CIQA_FUSION_TRAIN_H_
