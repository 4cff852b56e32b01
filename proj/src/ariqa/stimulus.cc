#include "ciqa/ariqa/stimulus.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ciqa/metrics/registry.h"
#include "ciqa/synth/blend.h"

namespace ciqa {
namespace {

void CheckComponents(const ArStimulus& st) {
  RequireSameShape(st.ar_ref, st.ar_dist, "AR reference vs distorted AR");
  RequireSameShape(st.ar_ref, st.background, "AR reference vs background");
  if (!(st.lambda >= 0.0 && st.lambda <= 1.0)) {
    throw std::invalid_argument("mixing value " + std::to_string(st.lambda) + " outside [0, 1]");
  }
}

}  // namespace

ArStimulus ArStimulus::Compose(Image ar_ref, Image ar_dist, Image background, double lambda) {
  ArStimulus st;
  st.ar_ref = std::move(ar_ref);
  st.ar_dist = std::move(ar_dist);
  st.background = std::move(background);
  st.lambda = lambda;
  CheckComponents(st);
  st.displayed_ar = Blend(st.ar_dist, Image(st.ar_dist.width(), st.ar_dist.height(), st.ar_dist.channels()), lambda);
  st.superimposed = Blend(st.ar_dist, st.background, lambda);
  return st;
}

ArStimulus ArStimulus::FromParts(Image ar_ref, Image ar_dist, Image background, double lambda, Image superimposed) {
  ArStimulus st = Compose(std::move(ar_ref), std::move(ar_dist), std::move(background), lambda);
  RequireSameShape(st.ar_ref, superimposed, "AR reference vs superimposed view");
  st.superimposed = std::move(superimposed);
  const double err = st.IdentityError();
  if (err > kSuperimposeTolerance) {
    throw std::invalid_argument("superimposed view deviates from lambda * AR + (1 - lambda) * background by " +
                                std::to_string(err));
  }
  return st;
}

double ArStimulus::IdentityError() const {
  double worst = 0.0;
  const auto s = superimposed.data(), a = ar_dist.data(), b = background.data();
  for (size_t i = 0; i < s.size(); ++i) {
    const double expect = lambda * a[i] + (1.0 - lambda) * b[i];
    worst = std::max(worst, std::abs(static_cast<double>(s[i]) - expect));
  }
  return worst;
}

VariantScores ComputeVariantScores(const ArStimulus& st, const std::string& metric, const SaliencyMap* saliency) {
  VariantScores v;
  v.type1 = ComputeMetric(metric, st.ar_ref, st.displayed_ar, saliency).score;
  v.type2 = ComputeMetric(metric, st.ar_ref, st.superimposed, saliency).score;
  v.type3_f1 = v.type2;
  v.type3_f2 = ComputeMetric(metric, st.background, st.superimposed, saliency).score;
  return v;
}

}  // namespace ciqa
