#include "gradcheck.h"

#include <algorithm>
#include <cmath>

#include "ciqa/common/rng.h"

namespace ciqa::testing {

GradCheckReport CompareGradient(FusionParams params,
                                const std::function<double(const FusionParams&, std::vector<double>*)>& loss,
                                double delta) {
  std::vector<double> analytic(params.size(), 0.0);
  loss(params, &analytic);
  GradCheckReport report;
  for (const ParamGroup& g : params.Groups()) {
    report.groups_seen.push_back(g.name);
    for (size_t i = g.offset; i < g.offset + g.size; ++i) {
      const double keep = params.theta()[i];
      params.theta()[i] = keep + delta;
      const double up = loss(params, nullptr);
      params.theta()[i] = keep - delta;
      const double down = loss(params, nullptr);
      params.theta()[i] = keep;
      const double numeric = (up - down) / (2.0 * delta);
      const double denom = std::max({std::abs(numeric), std::abs(analytic[i]), kGradCheckFloor});
      const double rel = std::abs(numeric - analytic[i]) / denom;
      ++report.checked;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_group = g.name;
        report.worst_index = i;
      }
    }
  }
  return report;
}

void RandomizeParams(FusionParams& params, uint64_t seed) {
  Rng rng(seed);
  for (double& v : params.theta()) v = rng.Normal(0.0, 0.5);
}

PathwayInput RandomPathway(const FusionParams& params, int size, uint64_t seed) {
  Rng rng(seed);
  PathwayInput in;
  for (size_t l = 0; l < params.num_layers(); ++l) {
    LayerInput li;
    li.distance = Tensor3(params.layer(l).channels, size, size);
    for (float& v : li.distance.data) v = static_cast<float>(rng.Uniform(0.0, 2.0));
    li.pool_weights.resize(li.distance.plane_size());
    double sum = 0.0;
    for (float& w : li.pool_weights) sum += w = static_cast<float>(rng.Uniform(0.1, 1.0));
    for (float& w : li.pool_weights) w = static_cast<float>(w / sum);
    in.layers.push_back(std::move(li));
  }
  return in;
}

double KinkDistance(const FusionParams& params, const PathwayInput& input) {
  const auto& th = params.theta();
  double best = INFINITY;
  double score = 0.0;
  for (size_t l = 0; l < params.num_layers(); ++l) {
    const LayerLayout& lay = params.layer(l);
    const Tensor3& x = input.layers[l].distance;
    const size_t n = x.plane_size();
    std::vector<double> g(lay.channels, 0.0), scale(lay.channels);
    for (int c = 0; c < lay.channels; ++c) {
      for (size_t p = 0; p < n; ++p) g[c] += x.data[c * n + p] / static_cast<double>(n);
    }
    std::vector<double> a(lay.reduced);
    for (int j = 0; j < lay.reduced; ++j) {
      a[j] = th[lay.fc1_b + j];
      for (int c = 0; c < lay.channels; ++c) a[j] += th[lay.fc1_w + j * lay.channels + c] * g[c];
      best = std::min(best, std::abs(a[j]));
    }
    for (int c = 0; c < lay.channels; ++c) {
      double z = th[lay.fc2_b + c];
      for (int j = 0; j < lay.reduced; ++j) z += th[lay.fc2_w + c * lay.reduced + j] * std::max(a[j], 0.0);
      scale[c] = 1.0 / (1.0 + std::exp(-z));
    }
    for (size_t p = 0; p < n; ++p) {
      double m = th[lay.conv2_b];
      for (int k = 0; k < lay.mid; ++k) {
        double h = th[lay.conv1_b + k];
        for (int c = 0; c < lay.channels; ++c) h += th[lay.conv1_w + k * lay.channels + c] * scale[c] * x.data[c * n + p];
        best = std::min(best, std::abs(h));
        m += th[lay.conv2_w + k] * std::max(h, 0.0);
      }
      score += input.layers[l].pool_weights[p] * m;
    }
  }
  score /= static_cast<double>(params.num_layers());
  for (int k = 0; k < kHeadHidden; ++k) {
    best = std::min(best, std::abs(th[params.head_w1() + k] * -score + th[params.head_b1() + k]));
  }
  return best;
}

GradCheckReport CheckCfiqaGradient(uint64_t seed, double delta) {
  Rng rng(seed);
  std::vector<int> channels(3);
  for (int& c : channels) c = 1 + static_cast<int>(rng.Below(8));
  FusionParams params = FusionParams::Initialize("gradcheck", channels, seed);
  CfiqaSample sample;
  int redraws = 0;
  double kink = 0.0;
  for (uint64_t draw = seed;; draw += 17, ++redraws) {
    RandomizeParams(params, draw + 1);
    sample.ref1 = RandomPathway(params, 6, draw + 2);
    sample.ref2 = RandomPathway(params, 6, draw + 3);
    kink = std::min(KinkDistance(params, sample.ref1), KinkDistance(params, sample.ref2));
    if (kink > 10.0 * delta) break;
  }
  sample.mos1 = rng.Uniform(0.0, 100.0);
  sample.mos2 = rng.Uniform(0.0, 100.0);
  GradCheckReport report = CompareGradient(
      params,
      [&](const FusionParams& p, std::vector<double>* grad) { return CfiqaSampleLoss(p, sample, 2.0, grad).total; },
      delta);
  report.redraws = redraws;
  report.kink_distance = kink;
  return report;
}

}  // namespace ciqa::testing
