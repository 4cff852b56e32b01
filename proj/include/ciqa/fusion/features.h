#ifndef CIQA_FUSION_FEATURES_H_
#define CIQA_FUSION_FEATURES_H_

#include <string>

#include "ciqa/fusion/tensor.h"
#include "ciqa/imaging/image.h"

namespace ciqa {

inline constexpr char kBuiltinExtractor[] = "pyrgrad-v1";
inline constexpr int kBuiltinLevels = 5;
inline constexpr double kBuiltinPyramidSigma = 1.0;
inline constexpr double kNormalizeEpsilon = 1e-10;

// Five Gaussian-pyramid levels of the luminance, each with channels
// (luminance, |gx|, |gy|, |Laplacian|) from Sobel and 4-neighbour operators.
// Needs min(width, height) >= 128.
FeatureStack BuiltinFeatures(const Image& img);

// Divides the channel vector at every location by (its L2 norm + 1e-10).
FeatureStack UnitNormalize(const FeatureStack& stack);

// (d - r)^2 per location and channel; the channel sum is the squared L2
// distance. Extractor names and layer dims must match.
DistanceStack FeatureDistance(const FeatureStack& d, const FeatureStack& r);

// Built-in features of an image file, memoized as CFQF under `cache_dir`
// (keyed by extractor name and a hash of the file bytes). An empty
// `cache_dir` disables caching.
FeatureStack CachedBuiltinFeatures(const std::string& image_path, const std::string& cache_dir);

}  // namespace ciqa

#endif  // CIQA_FUSION_FEATURES_H_
