#include "ciqa/synth/viewport.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ciqa {
namespace {

constexpr double kPi = std::numbers::pi;

double SampleWrapped(const Image& img, double x, double y, int c) {
  const int w = img.width(), h = img.height();
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  const double fx0 = std::floor(x);
  const int y0 = static_cast<int>(std::floor(y));
  const int y1 = std::min(y0 + 1, h - 1);
  const double tx = x - fx0, ty = y - y0;
  int x0 = static_cast<int>(fx0) % w;
  if (x0 < 0) x0 += w;
  const int x1 = (x0 + 1) % w;
  const double top = img.at(x0, y0, c) + tx * (img.at(x1, y0, c) - img.at(x0, y0, c));
  const double bot = img.at(x0, y1, c) + tx * (img.at(x1, y1, c) - img.at(x0, y1, c));
  return top + ty * (bot - top);
}

}  // namespace

void ViewportSpec::Validate() const {
  if (!(fov_h > 0.0 && fov_h < kPi)) throw std::invalid_argument("viewport fov_h must be in (0, pi)");
  if (!(std::abs(pitch) <= kPi / 2.0)) throw std::invalid_argument("viewport |pitch| must be <= pi/2");
  if (out_w < 1 || out_h < 1) throw std::invalid_argument("viewport output size must be positive");
  if (!std::isfinite(yaw)) throw std::invalid_argument("viewport yaw must be finite");
}

ViewportSpec DefaultViewport(int out_w, int out_h) {
  ViewportSpec spec;
  spec.out_w = out_w;
  spec.out_h = out_h;
  return spec;
}

bool IsEquirectangular(const Image& omni) { return omni.width() == 2 * omni.height(); }

Image ExtractViewport(const Image& omni, const ViewportSpec& spec) {
  spec.Validate();
  const double tan_h = std::tan(spec.fov_h / 2.0);
  const double tan_v = tan_h * spec.out_h / spec.out_w;
  const double cp = std::cos(spec.pitch), sp = std::sin(spec.pitch);
  const double cy = std::cos(spec.yaw), sy = std::sin(spec.yaw);
  const double ow = omni.width(), oh = omni.height();
  Image out(spec.out_w, spec.out_h, omni.channels());
  for (int j = 0; j < spec.out_h; ++j) {
    const double yc = (1.0 - 2.0 * (j + 0.5) / spec.out_h) * tan_v;
    for (int i = 0; i < spec.out_w; ++i) {
      const double xc = (2.0 * (i + 0.5) / spec.out_w - 1.0) * tan_h;
      // Camera looks down +z with +y up; pitch about x, then yaw about y.
      const double y1 = yc * cp + sp;
      const double z1 = -yc * sp + cp;
      const double x2 = xc * cy + z1 * sy;
      const double z2 = -xc * sy + z1 * cy;
      const double norm = std::sqrt(x2 * x2 + y1 * y1 + z2 * z2);
      const double lon = std::atan2(x2, z2);
      const double lat = std::asin(std::clamp(y1 / norm, -1.0, 1.0));
      const double u = (lon / (2.0 * kPi) + 0.5) * ow - 0.5;
      const double v = (0.5 - lat / kPi) * oh - 0.5;
      for (int c = 0; c < omni.channels(); ++c) {
        out.at(i, j, c) = static_cast<float>(SampleWrapped(omni, u, v, c));
      }
    }
  }
  return out;
}

}  // namespace ciqa
