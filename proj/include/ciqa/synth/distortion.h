#ifndef CIQA_SYNTH_DISTORTION_H_
#define CIQA_SYNTH_DISTORTION_H_

#include <string>
#include <vector>

#include "ciqa/imaging/image.h"

namespace ciqa {

enum class DistortionKind { kNone, kJpeg, kRescale, kGamma };

struct DistortionSpec {
  DistortionKind kind = DistortionKind::kNone;
  // JPEG quality (1..100), rescale factor (0, 1], or gamma exponent [1/4, 4].
  double param = 0.0;

  // Throws std::invalid_argument when param is outside the kind's range.
  void Validate() const;
  // Short token used in stimulus ids, e.g. "jpeg7", "rescale0.2", "ref".
  std::string Tag() const;

  friend bool operator==(const DistortionSpec&, const DistortionSpec&) = default;
};

std::string DistortionKindName(DistortionKind kind);
DistortionKind ParseDistortionKind(const std::string& name);

// JPEG q in {7, 3}, rescale 1/5 and 1/10, gamma n = 1/4 and n = 4.
std::vector<DistortionSpec> DefaultAriqaDistortions();

// y = (x * 255^(1/n - 1))^n on the 0..255 scale, clamped to [0, 255] and
// mapped back to [0, 1]. n in [1/4, 4].
Image GammaAdjust(const Image& img, double n);

// Encode/decode roundtrip through the baseline JPEG codec.
Image JpegDistort(const Image& img, int quality);

// Bilinear downscale to ceil(factor * dims) then bilinear upscale back.
// factor in (0, 1]; factor * min(width, height) must be >= 1.
Image RescaleDistort(const Image& img, double factor);

Image ApplyDistortion(const Image& img, const DistortionSpec& spec);

}  // namespace ciqa

#endif  // CIQA_SYNTH_DISTORTION_H_
