#ifndef CIQA_FUSION_BASELINE_H_
#define CIQA_FUSION_BASELINE_H_

#include <span>
#include <vector>

#include "ciqa/fusion/tensor.h"

namespace ciqa {

// Mean over (c, h, w) of each layer.
std::vector<double> LayerScores(const DistanceStack& dist);

// Mean of the layer means; higher = more distorted.
double BaselineScore(const DistanceStack& dist);
// Same, restricted to `layers`.
double BaselineScore(const DistanceStack& dist, std::span<const int> layers);

// layer_scores[stimulus][layer]. Returns the 5 layers with the largest
// |SRCC| against MOS, ordered by decreasing |SRCC| with ties to the lower
// index. Constant columns count as correlation 0. Needs >= 6 stimuli and
// >= 5 layers.
std::vector<int> BaselinePlusSelect(const std::vector<std::vector<double>>& layer_scores,
                                    std::span<const double> mos);

}  // namespace ciqa

#endif  // CIQA_FUSION_BASELINE_H_
