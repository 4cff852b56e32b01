#include "ciqa/synth/blend.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ciqa {

BlendWeights BlendWeightsFor(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("blend lambda must be in [0, 1], got " + std::to_string(lambda));
  }
  // For w in [0.5, 1], 1 - w is exact (Sterbenz), so the larger weight is
  // always the rounded one and the smaller is its exact complement. This makes
  // the pair for 1 - lambda the exact swap of the pair for lambda.
  if (lambda >= 0.5) return {lambda, 1.0 - lambda};
  const double second = 1.0 - lambda;
  return {1.0 - second, second};
}

Image Blend(const Image& a, const Image& b, double lambda) {
  RequireSameShape(a, b, "Blend");
  const BlendWeights w = BlendWeightsFor(lambda);
  Image out(a.width(), a.height(), a.channels());
  auto pa = a.data(), pb = b.data();
  auto po = out.data();
  for (size_t i = 0; i < po.size(); ++i) {
    const double v = w.first * pa[i] + w.second * pb[i];
    const float lo = std::min(pa[i], pb[i]), hi = std::max(pa[i], pb[i]);
    po[i] = std::clamp(static_cast<float>(v), lo, hi);
  }
  return out;
}

double SampleLambda(double alpha, Rng& rng) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("Beta alpha must be positive, got " + std::to_string(alpha));
  }
  return rng.Beta(alpha, alpha);
}

}  // namespace ciqa
