#ifndef CIQA_METRICS_METRICS_H_
#define CIQA_METRICS_METRICS_H_

#include <optional>
#include <span>
#include <vector>

#include "ciqa/imaging/image.h"

namespace ciqa {

struct MetricResult {
  double score = 0.0;
  // Local quality (or distortion) map, when the metric defines one.
  std::optional<Image> map;
  bool higher_is_better = true;
};

// Nonnegative spatial weights with at least one positive entry.
class SaliencyMap {
 public:
  SaliencyMap(int width, int height, std::vector<float> weights);
  // Uses channel 0 of a 1-channel image as weights.
  static SaliencyMap FromImage(const Image& img);
  // Centered isotropic Gaussian prior, sigma = 0.3 * min(width, height).
  static SaliencyMap CenterPrior(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const float> weights() const { return weights_; }
  // Weights bilinearly resampled to (w, h); same-size returns a copy.
  std::vector<double> ResizedTo(int w, int h) const;

 private:
  int width_;
  int height_;
  std::vector<float> weights_;
};

// All metrics compare luminance (RGB inputs go through ToGray) at native
// resolution; inputs must have equal width and height.

// Mean squared difference on the [0, 1] scale.
MetricResult Mse(const Image& ref, const Image& dist);
// 10 log10(1 / mse), 100 dB when mse < 1e-10.
MetricResult Psnr(const Image& ref, const Image& dist);

// 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03, L = 1; the map
// has the input size (replicate padding) and the score is its mean.
MetricResult Ssim(const Image& ref, const Image& dist);

// Standard five-scale exponents.
inline constexpr double kMsSsimWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

// Multi-scale SSIM: contrast-structure means at the first scales, full SSIM
// mean at the last, 2x2 average downsampling between scales. Needs
// min(width, height) >= 11 * 2^(scales - 1). With a single weight of 1 this
// reduces to Ssim.
MetricResult MsSsim(const Image& ref, const Image& dist,
                    std::span<const double> weights = kMsSsimWeights);

inline constexpr double kGmsStabilizer = 0.0026;

// Gradient magnitude similarity (Prewitt) map with c = 0.0026.
Image GradientMagnitudeSimilarity(const Image& ref, const Image& dist);
// Standard deviation of the similarity map (lower is better).
MetricResult Gmsd(const Image& ref, const Image& dist);
// Mean of the similarity map (higher is better).
MetricResult Gmsm(const Image& ref, const Image& dist);

// MSE of the error field after Gaussian smoothing (sigma 0.8, 7 taps).
MetricResult Pamse(const Image& ref, const Image& dist);

// sum(w * map) / sum(w); saliency is resized to the map when sizes differ.
double SaliencyWeighted(const Image& map, const SaliencyMap& saliency);

MetricResult SsimSaliency(const Image& ref, const Image& dist, const SaliencyMap& saliency);
MetricResult GmsmSaliency(const Image& ref, const Image& dist, const SaliencyMap& saliency);

}  // namespace ciqa

#endif  // CIQA_METRICS_METRICS_H_
