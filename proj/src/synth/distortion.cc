#include "ciqa/synth/distortion.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ciqa/common/csv.h"
#include "ciqa/imaging/io.h"
#include "ciqa/imaging/resample.h"

namespace ciqa {

std::string DistortionKindName(DistortionKind kind) {
  switch (kind) {
    case DistortionKind::kNone: return "none";
    case DistortionKind::kJpeg: return "jpeg";
    case DistortionKind::kRescale: return "rescale";
    case DistortionKind::kGamma: return "gamma";
  }
  return "none";
}

DistortionKind ParseDistortionKind(const std::string& name) {
  if (name == "none" || name.empty()) return DistortionKind::kNone;
  if (name == "jpeg") return DistortionKind::kJpeg;
  if (name == "rescale") return DistortionKind::kRescale;
  if (name == "gamma") return DistortionKind::kGamma;
  throw std::invalid_argument("unknown distortion kind '" + name + "'");
}

void DistortionSpec::Validate() const {
  switch (kind) {
    case DistortionKind::kNone:
      return;
    case DistortionKind::kJpeg:
      if (!(param >= 1.0 && param <= 100.0) || param != std::floor(param)) {
        throw std::invalid_argument("jpeg quality must be an integer in 1..100, got " +
                                    FormatDouble(param));
      }
      return;
    case DistortionKind::kRescale:
      if (!(param > 0.0 && param <= 1.0)) {
        throw std::invalid_argument("rescale factor must be in (0, 1], got " + FormatDouble(param));
      }
      return;
    case DistortionKind::kGamma:
      if (!(param >= 0.25 && param <= 4.0)) {
        throw std::invalid_argument("gamma n must be in [1/4, 4], got " + FormatDouble(param));
      }
      return;
  }
}

std::string DistortionSpec::Tag() const {
  if (kind == DistortionKind::kNone) return "ref";
  return DistortionKindName(kind) + FormatDouble(param);
}

std::vector<DistortionSpec> DefaultAriqaDistortions() {
  return {{DistortionKind::kJpeg, 7},      {DistortionKind::kJpeg, 3},
          {DistortionKind::kRescale, 0.2}, {DistortionKind::kRescale, 0.1},
          {DistortionKind::kGamma, 0.25},  {DistortionKind::kGamma, 4}};
}

Image GammaAdjust(const Image& img, double n) {
  DistortionSpec{DistortionKind::kGamma, n}.Validate();
  const double gain = std::pow(255.0, 1.0 / n - 1.0);
  Image out = img;
  for (float& v : out.data()) {
    const double x = static_cast<double>(v) * 255.0;
    const double y = std::pow(x * gain, n);
    v = static_cast<float>(std::clamp(y, 0.0, 255.0) / 255.0);
  }
  return out;
}

Image JpegDistort(const Image& img, int quality) {
  return DecodeJpeg(EncodeJpeg(img, quality));
}

Image RescaleDistort(const Image& img, double factor) {
  DistortionSpec{DistortionKind::kRescale, factor}.Validate();
  const double fw = factor * img.width(), fh = factor * img.height();
  if (fw < 1.0 || fh < 1.0) {
    throw std::invalid_argument("rescale factor " + FormatDouble(factor) +
                                " shrinks the image below one pixel");
  }
  // The small slack keeps products like 0.2 * 1440 from rounding up.
  const int dw = static_cast<int>(std::ceil(fw - 1e-9));
  const int dh = static_cast<int>(std::ceil(fh - 1e-9));
  const Image small = Resize(img, dw, dh, ResizeMode::kBilinear);
  return Resize(small, img.width(), img.height(), ResizeMode::kBilinear);
}

Image ApplyDistortion(const Image& img, const DistortionSpec& spec) {
  spec.Validate();
  switch (spec.kind) {
    case DistortionKind::kNone: return img;
    case DistortionKind::kJpeg: return JpegDistort(img, static_cast<int>(spec.param));
    case DistortionKind::kRescale: return RescaleDistort(img, spec.param);
    case DistortionKind::kGamma: return GammaAdjust(img, spec.param);
  }
  return img;
}

}  // namespace ciqa
