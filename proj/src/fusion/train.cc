#include "ciqa/fusion/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ciqa/common/parallel.h"
#include "ciqa/fusion/features.h"

namespace ciqa {

void TrainConfig::Validate() const {
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw std::invalid_argument("learning rate must be finite and >= 0");
  if (epochs_flat < 0 || epochs_decay < 0 || total_epochs() < 1) {
    throw std::invalid_argument("epoch counts must be >= 0 with at least one epoch");
  }
  if (batch < 1) throw std::invalid_argument("batch size must be >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0 && adam_eps > 0.0)) {
    throw std::invalid_argument("invalid Adam constants");
  }
}

double LearningRate(const TrainConfig& cfg, int epoch) {
  if (epoch < cfg.epochs_flat) return cfg.lr;
  const int k = epoch - cfg.epochs_flat;
  return cfg.lr * std::max(0.0, 1.0 - static_cast<double>(k) / cfg.epochs_decay);
}

Adam::Adam(size_t size, const TrainConfig& cfg)
    : beta1_(cfg.adam_beta1), beta2_(cfg.adam_beta2), eps_(cfg.adam_eps), m_(size, 0.0), v_(size, 0.0) {}

void Adam::Step(std::vector<double>& theta, const std::vector<double>& grad, double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < theta.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    theta[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

FusionParams RunTraining(FusionParams params, const TrainConfig& cfg, const EpochPlan& plan,
                         const ItemLoss& loss, TrainHistory* history) {
  cfg.Validate();
  Rng rng(cfg.seed);
  Adam adam(params.size(), cfg);
  std::vector<double> grad(params.size());
  for (int epoch = 0; epoch < cfg.total_epochs(); ++epoch) {
    const double lr = LearningRate(cfg, epoch);
    const auto batches = plan(epoch, rng);
    double epoch_sum = 0.0;
    size_t epoch_items = 0;
    for (size_t b = 0; b < batches.size(); ++b) {
      const auto& batch = batches[b];
      if (batch.empty()) continue;
      std::vector<std::vector<double>> item_grad(batch.size(), std::vector<double>(params.size(), 0.0));
      std::vector<double> item_loss(batch.size());
      ParallelFor(batch.size(), cfg.jobs, [&](size_t i) {
        item_loss[i] = loss(params, batch[i], &item_grad[i]);
      });
      std::fill(grad.begin(), grad.end(), 0.0);
      for (size_t i = 0; i < batch.size(); ++i) {
        bool finite = std::isfinite(item_loss[i]);
        for (double g : item_grad[i]) finite = finite && std::isfinite(g);
        if (!finite) {
          throw std::runtime_error("non-finite loss or gradient at epoch " + std::to_string(epoch + 1) +
                                   ", batch " + std::to_string(b + 1) + ", item " + std::to_string(batch[i]) +
                                   " (loss " + std::to_string(item_loss[i]) + ")");
        }
        for (size_t k = 0; k < grad.size(); ++k) grad[k] += item_grad[i][k];
        epoch_sum += item_loss[i];
      }
      epoch_items += batch.size();
      const double scale = 1.0 / static_cast<double>(batch.size());
      for (double& g : grad) g *= scale;
      adam.Step(params.theta(), grad, lr);
    }
    if (history != nullptr) {
      history->epoch_loss.push_back(epoch_items ? epoch_sum / static_cast<double>(epoch_items) : 0.0);
    }
  }
  return params;
}

CfiqaSample MakeCfiqaSample(const FeatureStack& dist, const FeatureStack& ref1, const FeatureStack& ref2,
                            const SaliencyMap& sal1, const SaliencyMap& sal2, double mos1, double mos2) {
  const FeatureStack d = UnitNormalize(dist);
  CfiqaSample s;
  s.ref1 = MakePathwayInput(d, UnitNormalize(ref1), sal1);
  s.ref2 = MakePathwayInput(d, UnitNormalize(ref2), sal2);
  s.mos1 = mos1;
  s.mos2 = mos2;
  return s;
}

LossParts CfiqaSampleLoss(const FusionParams& params, const CfiqaSample& sample, double gamma,
                          std::vector<double>* grad) {
  const double s1 = PathwayScore(params, sample.ref1);
  const double s2 = PathwayScore(params, sample.ref2);
  PairGradient pg;
  const LossParts parts = PairLoss(params, s1, s2, sample.mos1, sample.mos2, gamma, grad, &pg);
  if (grad != nullptr) {
    PathwayBackward(params, sample.ref1, pg.ds1, *grad);
    PathwayBackward(params, sample.ref2, pg.ds2, *grad);
  }
  return parts;
}

FusionParams TrainCfiqa(const std::vector<CfiqaSample>& samples, const TrainConfig& cfg, FusionParams init,
                        TrainHistory* history) {
  if (samples.empty()) throw std::invalid_argument("training set is empty");
  const size_t n = samples.size();
  const size_t batch = static_cast<size_t>(cfg.batch);
  EpochPlan plan = [n, batch](int, Rng& rng) {
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.Shuffle(order);
    std::vector<std::vector<size_t>> batches;
    for (size_t i = 0; i < n; i += batch) {
      batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                           order.begin() + static_cast<std::ptrdiff_t>(std::min(n, i + batch)));
    }
    return batches;
  };
  ItemLoss loss = [&samples, gamma = cfg.gamma](const FusionParams& p, size_t i, std::vector<double>* g) {
    return CfiqaSampleLoss(p, samples[i], gamma, g).total;
  };
  return RunTraining(std::move(init), cfg, plan, loss, history);
}

std::pair<std::vector<size_t>, std::vector<size_t>> TwoFoldSplit(size_t n, uint64_t seed) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.Shuffle(order);
  const size_t half = n / 2;
  std::vector<size_t> a(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half));
  std::vector<size_t> b(order.begin() + static_cast<std::ptrdiff_t>(half), order.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return {a, b};
}

}  // namespace ciqa
