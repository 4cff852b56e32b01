#include "ciqa/imaging/filter.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ciqa {
namespace {

inline int Clamp(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

void RequireGray(const Image& img, const char* what) {
  if (img.channels() != 1) {
    throw std::invalid_argument(std::string(what) + ": expected a 1-channel image, got " +
                                std::to_string(img.channels()) + " channels");
  }
}

}  // namespace

std::vector<double> GaussianTaps(int size, double sigma) {
  if (size < 1 || size % 2 == 0) throw std::invalid_argument("kernel size must be odd and >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("Gaussian sigma must be positive");
  std::vector<double> taps(size);
  const int r = size / 2;
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    taps[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += taps[i + r];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

int GaussianSizeFor(double sigma) {
  return 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
}

Kernel2D Kernel2D::Separable(const std::vector<double>& taps_1d) {
  const int n = static_cast<int>(taps_1d.size());
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("kernel size must be odd and >= 1");
  Kernel2D k;
  k.size = n;
  k.taps.resize(static_cast<size_t>(n) * n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) k.taps[static_cast<size_t>(y) * n + x] = taps_1d[y] * taps_1d[x];
  }
  return k;
}

Kernel2D Kernel2D::Gaussian(int size, double sigma) {
  return Separable(GaussianTaps(size, sigma));
}

Image Filter2D(const Image& img, const Kernel2D& kernel) {
  if (kernel.size < 1 || kernel.size % 2 == 0 ||
      kernel.taps.size() != static_cast<size_t>(kernel.size) * kernel.size) {
    throw std::invalid_argument("Filter2D: malformed kernel");
  }
  const int w = img.width(), h = img.height(), r = kernel.size / 2;
  Image out(w, h, img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int ky = -r; ky <= r; ++ky) {
          const int sy = Clamp(y + ky, 0, h - 1);
          for (int kx = -r; kx <= r; ++kx) {
            acc += kernel.at(kx + r, ky + r) * img.at(Clamp(x + kx, 0, w - 1), sy, c);
          }
        }
        out.at(x, y, c) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

Image FilterSeparable(const Image& img, const std::vector<double>& taps) {
  const int n = static_cast<int>(taps.size());
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("FilterSeparable: kernel size must be odd");
  const int w = img.width(), h = img.height(), r = n / 2;
  Image out(w, h, img.channels());
  std::vector<double> tmp(static_cast<size_t>(w) * h);
  for (int c = 0; c < img.channels(); ++c) {
    auto src = img.plane(c);
    for (int y = 0; y < h; ++y) {
      const float* row = src.data() + static_cast<size_t>(y) * w;
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int k = -r; k <= r; ++k) acc += taps[k + r] * row[Clamp(x + k, 0, w - 1)];
        tmp[static_cast<size_t>(y) * w + x] = acc;
      }
    }
    auto dst = out.plane(c);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int k = -r; k <= r; ++k) {
          acc += taps[k + r] * tmp[static_cast<size_t>(Clamp(y + k, 0, h - 1)) * w + x];
        }
        dst[static_cast<size_t>(y) * w + x] = static_cast<float>(acc);
      }
    }
  }
  return out;
}

Image GaussianBlur(const Image& img, double sigma) {
  return FilterSeparable(img, GaussianTaps(GaussianSizeFor(sigma), sigma));
}

std::vector<Image> GaussianPyramid(const Image& img, int levels, double sigma) {
  if (levels < 1) throw std::invalid_argument("GaussianPyramid: levels must be >= 1");
  std::vector<Image> out;
  out.reserve(levels);
  out.push_back(img);
  auto too_small = [&](int w, int h, int level) {
    if (w < 8 || h < 8) {
      throw std::invalid_argument("GaussianPyramid: level " + std::to_string(level) + " would be " +
                                  std::to_string(w) + "x" + std::to_string(h) +
                                  ", below the 8x8 minimum");
    }
  };
  too_small(img.width(), img.height(), 0);
  const auto taps = GaussianTaps(GaussianSizeFor(sigma), sigma);
  for (int l = 1; l < levels; ++l) {
    const Image& prev = out.back();
    const int nw = (prev.width() + 1) / 2, nh = (prev.height() + 1) / 2;
    too_small(nw, nh, l);
    const Image blurred = FilterSeparable(prev, taps);
    Image next(nw, nh, prev.channels());
    for (int c = 0; c < prev.channels(); ++c) {
      for (int y = 0; y < nh; ++y) {
        for (int x = 0; x < nw; ++x) next.at(x, y, c) = blurred.at(2 * x, 2 * y, c);
      }
    }
    out.push_back(std::move(next));
  }
  return out;
}

Image Downsample2x2Average(const Image& img) {
  const int w = img.width(), h = img.height();
  const int nw = (w + 1) / 2, nh = (h + 1) / 2;
  Image out(nw, nh, img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    for (int y = 0; y < nh; ++y) {
      const int y0 = 2 * y, y1 = std::min(2 * y + 1, h - 1);
      for (int x = 0; x < nw; ++x) {
        const int x0 = 2 * x, x1 = std::min(2 * x + 1, w - 1);
        const double s = static_cast<double>(img.at(x0, y0, c)) + img.at(x1, y0, c) +
                         img.at(x0, y1, c) + img.at(x1, y1, c);
        out.at(x, y, c) = static_cast<float>(s * 0.25);
      }
    }
  }
  return out;
}

std::pair<Image, Image> Gradients(const Image& img, GradientOperator op) {
  RequireGray(img, "Gradients");
  const double side = op == GradientOperator::kPrewitt ? 1.0 / 3.0 : 1.0 / 4.0;
  const double mid = op == GradientOperator::kPrewitt ? 1.0 / 3.0 : 2.0 / 4.0;
  const int w = img.width(), h = img.height();
  Image gx(w, h, 1), gy(w, h, 1);
  for (int y = 0; y < h; ++y) {
    const int ym = Clamp(y - 1, 0, h - 1), yp = Clamp(y + 1, 0, h - 1);
    for (int x = 0; x < w; ++x) {
      const int xm = Clamp(x - 1, 0, w - 1), xp = Clamp(x + 1, 0, w - 1);
      // Differences first so constant neighbourhoods give exactly zero.
      const double dx_top = static_cast<double>(img.at(xp, ym)) - img.at(xm, ym);
      const double dx_mid = static_cast<double>(img.at(xp, y)) - img.at(xm, y);
      const double dx_bot = static_cast<double>(img.at(xp, yp)) - img.at(xm, yp);
      const double dy_left = static_cast<double>(img.at(xm, yp)) - img.at(xm, ym);
      const double dy_mid = static_cast<double>(img.at(x, yp)) - img.at(x, ym);
      const double dy_right = static_cast<double>(img.at(xp, yp)) - img.at(xp, ym);
      gx.at(x, y) = static_cast<float>(side * dx_top + mid * dx_mid + side * dx_bot);
      gy.at(x, y) = static_cast<float>(side * dy_left + mid * dy_mid + side * dy_right);
    }
  }
  return {std::move(gx), std::move(gy)};
}

Image Laplacian(const Image& img) {
  RequireGray(img, "Laplacian");
  const int w = img.width(), h = img.height();
  Image out(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = img.at(x, y);
      const double v = (img.at(Clamp(x - 1, 0, w - 1), y) - c) +
                       (img.at(Clamp(x + 1, 0, w - 1), y) - c) +
                       (img.at(x, Clamp(y - 1, 0, h - 1)) - c) +
                       (img.at(x, Clamp(y + 1, 0, h - 1)) - c);
      out.at(x, y) = static_cast<float>(v);
    }
  }
  return out;
}

}  // namespace ciqa
