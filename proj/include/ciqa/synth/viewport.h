#ifndef CIQA_SYNTH_VIEWPORT_H_
#define CIQA_SYNTH_VIEWPORT_H_

#include <numbers>

#include "ciqa/imaging/image.h"

namespace ciqa {

// Rectilinear view into an equirectangular panorama. Yaw turns toward
// increasing longitude (image x), pitch toward the zenith (image top).
struct ViewportSpec {
  double yaw = 0.0;
  double pitch = 0.0;
  double fov_h = std::numbers::pi / 2.0;
  int out_w = 1440;
  int out_h = 900;

  void Validate() const;
};

// 90 degree horizontal FOV at the AR raster's 16:10 aspect.
ViewportSpec DefaultViewport(int out_w = 1440, int out_h = 900);

// Gnomonic projection of `omni`, sampled bilinearly. Longitude wraps at the
// +-180 degree seam; latitude clamps at the poles. Panorama pixel x covers
// longitude (x + 0.5) / W * 2 pi - pi, pixel y latitude pi / 2 - (y + 0.5) / H * pi.
Image ExtractViewport(const Image& omni, const ViewportSpec& spec);

// True when width == 2 * height (the expected equirectangular layout).
bool IsEquirectangular(const Image& omni);

}  // namespace ciqa

#endif  // CIQA_SYNTH_VIEWPORT_H_
