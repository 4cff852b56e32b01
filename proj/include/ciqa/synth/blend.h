#ifndef CIQA_SYNTH_BLEND_H_
#define CIQA_SYNTH_BLEND_H_

#include "ciqa/common/rng.h"
#include "ciqa/imaging/image.h"

namespace ciqa {

// Pixelwise lambda * a + (1 - lambda) * b for lambda in [0, 1].
//
// The weight pair is chosen so that the weights sum to exactly one and
// Blend(a, b, l) == Blend(b, a, 1 - l) bit for bit; lambda = 1 and 0 return
// a and b exactly. Results stay inside [min(a, b), max(a, b)] per sample.
Image Blend(const Image& a, const Image& b, double lambda);

// Weights (w_a, w_b) used by Blend.
struct BlendWeights {
  double first;
  double second;
};
BlendWeights BlendWeightsFor(double lambda);

// One draw from Beta(alpha, alpha); alpha > 0.
double SampleLambda(double alpha, Rng& rng);

}  // namespace ciqa

#endif  // CIQA_SYNTH_BLEND_H_
