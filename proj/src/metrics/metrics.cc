#include "ciqa/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ciqa/imaging/filter.h"
#include "ciqa/imaging/resample.h"

namespace ciqa {
namespace {

constexpr double kSsimSigma = 1.5;
constexpr int kSsimWindow = 11;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;
constexpr double kPsnrCap = 100.0;
constexpr double kPamseSigma = 0.8;

// Double-precision plane used for the windowed statistics.
struct Plane {
  int w = 0, h = 0;
  std::vector<double> v;

  Plane() = default;
  Plane(int width, int height) : w(width), h(height), v(static_cast<size_t>(width) * height) {}
  explicit Plane(const Image& gray) : w(gray.width()), h(gray.height()) {
    auto p = gray.plane(0);
    v.assign(p.begin(), p.end());
  }
};

inline int Clamp(int x, int lo, int hi) { return x < lo ? lo : (x > hi ? hi : x); }

Plane Blur(const Plane& in, const std::vector<double>& taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  Plane tmp(in.w, in.h), out(in.w, in.h);
  for (int y = 0; y < in.h; ++y) {
    for (int x = 0; x < in.w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) acc += taps[k + r] * in.v[static_cast<size_t>(y) * in.w + Clamp(x + k, 0, in.w - 1)];
      tmp.v[static_cast<size_t>(y) * in.w + x] = acc;
    }
  }
  for (int y = 0; y < in.h; ++y) {
    for (int x = 0; x < in.w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) acc += taps[k + r] * tmp.v[static_cast<size_t>(Clamp(y + k, 0, in.h - 1)) * in.w + x];
      out.v[static_cast<size_t>(y) * in.w + x] = acc;
    }
  }
  return out;
}

double MeanOf(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

Image ToImage(const Plane& p) {
  Image out(p.w, p.h, 1);
  auto d = out.data();
  for (size_t i = 0; i < d.size(); ++i) d[i] = static_cast<float>(p.v[i]);
  return out;
}

std::pair<Image, Image> LumaPair(const Image& ref, const Image& dist, const char* what) {
  if (!ref.SameSize(dist)) {
    throw std::invalid_argument(std::string(what) + ": image size mismatch (" +
                                std::to_string(ref.width()) + "x" + std::to_string(ref.height()) +
                                " vs " + std::to_string(dist.width()) + "x" +
                                std::to_string(dist.height()) + ")");
  }
  return {ToGray(ref), ToGray(dist)};
}

struct SsimMaps {
  Plane ssim;
  Plane cs;
};

SsimMaps ComputeSsimMaps(const Image& x_img, const Image& y_img) {
  static const std::vector<double> taps = GaussianTaps(kSsimWindow, kSsimSigma);
  const Plane x(x_img), y(y_img);
  Plane xx(x.w, x.h), yy(x.w, x.h), xy(x.w, x.h);
  for (size_t i = 0; i < x.v.size(); ++i) {
    xx.v[i] = x.v[i] * x.v[i];
    yy.v[i] = y.v[i] * y.v[i];
    xy.v[i] = x.v[i] * y.v[i];
  }
  const Plane mx = Blur(x, taps), my = Blur(y, taps);
  const Plane sxx = Blur(xx, taps), syy = Blur(yy, taps), sxy = Blur(xy, taps);
  SsimMaps maps{Plane(x.w, x.h), Plane(x.w, x.h)};
  for (size_t i = 0; i < x.v.size(); ++i) {
    const double mux = mx.v[i], muy = my.v[i];
    const double vx = sxx.v[i] - mux * mux;
    const double vy = syy.v[i] - muy * muy;
    const double cov = sxy.v[i] - mux * muy;
    const double cs = (2.0 * cov + kC2) / (vx + vy + kC2);
    const double lum = (2.0 * mux * muy + kC1) / (mux * mux + muy * muy + kC1);
    maps.cs.v[i] = cs;
    maps.ssim.v[i] = lum * cs;
  }
  return maps;
}

void RequireMinSize(const Image& img, int min_dim, const char* what) {
  if (std::min(img.width(), img.height()) < min_dim) {
    throw std::invalid_argument(std::string(what) + ": image " + std::to_string(img.width()) + "x" +
                                std::to_string(img.height()) + " is smaller than the required " +
                                std::to_string(min_dim) + " pixels per side");
  }
}

}  // namespace

SaliencyMap::SaliencyMap(int width, int height, std::vector<float> weights)
    : width_(width), height_(height), weights_(std::move(weights)) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("saliency map must have positive size");
  if (weights_.size() != static_cast<size_t>(width) * height) {
    throw std::invalid_argument("saliency weight count does not match its size");
  }
  bool any_positive = false;
  for (float w : weights_) {
    if (!(w >= 0.0f) || !std::isfinite(w)) throw std::invalid_argument("saliency weights must be finite and >= 0");
    any_positive |= w > 0.0f;
  }
  if (!any_positive) throw std::invalid_argument("saliency map is all zero");
}

SaliencyMap SaliencyMap::FromImage(const Image& img) {
  auto p = img.plane(0);
  return SaliencyMap(img.width(), img.height(), std::vector<float>(p.begin(), p.end()));
}

SaliencyMap SaliencyMap::CenterPrior(int width, int height) {
  const double sigma = 0.3 * std::min(width, height);
  const double cx = 0.5 * width, cy = 0.5 * height;
  std::vector<float> w(static_cast<size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      w[static_cast<size_t>(y) * width + x] =
          static_cast<float>(std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma)));
    }
  }
  return SaliencyMap(width, height, std::move(w));
}

std::vector<double> SaliencyMap::ResizedTo(int w, int h) const {
  std::vector<double> out;
  if (w == width_ && h == height_) {
    out.assign(weights_.begin(), weights_.end());
    return out;
  }
  const Image src(width_, height_, 1, weights_);
  const Image r = Resize(src, w, h, ResizeMode::kBilinear);
  auto d = r.data();
  out.assign(d.begin(), d.end());
  return out;
}

MetricResult Mse(const Image& ref, const Image& dist) {
  auto [r, d] = LumaPair(ref, dist, "mse");
  auto pr = r.data(), pd = d.data();
  Image map(r.width(), r.height(), 1);
  auto pm = map.data();
  double sum = 0.0;
  for (size_t i = 0; i < pr.size(); ++i) {
    const double e = static_cast<double>(pr[i]) - pd[i];
    sum += e * e;
    pm[i] = static_cast<float>(e * e);
  }
  return {sum / static_cast<double>(pr.size()), std::move(map), false};
}

MetricResult Psnr(const Image& ref, const Image& dist) {
  const double mse = Mse(ref, dist).score;
  const double psnr = mse < 1e-10 ? kPsnrCap : std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
  return {psnr, std::nullopt, true};
}

MetricResult Ssim(const Image& ref, const Image& dist) {
  auto [r, d] = LumaPair(ref, dist, "ssim");
  RequireMinSize(r, kSsimWindow, "ssim");
  SsimMaps maps = ComputeSsimMaps(r, d);
  return {MeanOf(maps.ssim.v), ToImage(maps.ssim), true};
}

MetricResult MsSsim(const Image& ref, const Image& dist, std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("ms_ssim: need at least one scale weight");
  auto [r, d] = LumaPair(ref, dist, "ms_ssim");
  const int scales = static_cast<int>(weights.size());
  RequireMinSize(r, kSsimWindow << (scales - 1), "ms_ssim");
  double score = 1.0;
  std::optional<Image> first_map;
  for (int s = 0; s < scales; ++s) {
    SsimMaps maps = ComputeSsimMaps(r, d);
    if (s == 0) first_map = ToImage(maps.ssim);
    const bool last = s == scales - 1;
    const double m = std::max(0.0, MeanOf(last ? maps.ssim.v : maps.cs.v));
    score *= std::pow(m, weights[s]);
    if (!last) {
      r = Downsample2x2Average(r);
      d = Downsample2x2Average(d);
    }
  }
  return {score, std::move(first_map), true};
}

Image GradientMagnitudeSimilarity(const Image& ref, const Image& dist) {
  auto [r, d] = LumaPair(ref, dist, "gms");
  auto [rx, ry] = Gradients(r, GradientOperator::kPrewitt);
  auto [dx, dy] = Gradients(d, GradientOperator::kPrewitt);
  Image map(r.width(), r.height(), 1);
  auto pm = map.data();
  auto prx = rx.data(), pry = ry.data(), pdx = dx.data(), pdy = dy.data();
  for (size_t i = 0; i < pm.size(); ++i) {
    const double g1sq = static_cast<double>(prx[i]) * prx[i] + static_cast<double>(pry[i]) * pry[i];
    const double g2sq = static_cast<double>(pdx[i]) * pdx[i] + static_cast<double>(pdy[i]) * pdy[i];
    const double g1 = std::sqrt(g1sq), g2 = std::sqrt(g2sq);
    pm[i] = static_cast<float>((2.0 * g1 * g2 + kGmsStabilizer) / (g1sq + g2sq + kGmsStabilizer));
  }
  return map;
}

MetricResult Gmsd(const Image& ref, const Image& dist) {
  Image map = GradientMagnitudeSimilarity(ref, dist);
  const double mean = map.Mean();
  double var = 0.0;
  for (float v : map.data()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(map.size());
  return {std::sqrt(var), std::move(map), false};
}

MetricResult Gmsm(const Image& ref, const Image& dist) {
  Image map = GradientMagnitudeSimilarity(ref, dist);
  const double mean = map.Mean();
  return {mean, std::move(map), true};
}

MetricResult Pamse(const Image& ref, const Image& dist) {
  auto [r, d] = LumaPair(ref, dist, "pamse");
  Plane err(r.width(), r.height());
  auto pr = r.data(), pd = d.data();
  for (size_t i = 0; i < err.v.size(); ++i) err.v[i] = static_cast<double>(pd[i]) - pr[i];
  static const std::vector<double> taps = GaussianTaps(GaussianSizeFor(kPamseSigma), kPamseSigma);
  Plane smooth = Blur(err, taps);
  for (double& v : smooth.v) v *= v;
  return {MeanOf(smooth.v), ToImage(smooth), false};
}

double SaliencyWeighted(const Image& map, const SaliencyMap& saliency) {
  if (map.channels() != 1) throw std::invalid_argument("SaliencyWeighted: map must have 1 channel");
  const auto w = saliency.ResizedTo(map.width(), map.height());
  auto m = map.data();
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < m.size(); ++i) {
    num += w[i] * m[i];
    den += w[i];
  }
  if (!(den > 0.0)) throw std::invalid_argument("SaliencyWeighted: saliency sums to zero after resizing");
  return num / den;
}

MetricResult SsimSaliency(const Image& ref, const Image& dist, const SaliencyMap& saliency) {
  MetricResult r = Ssim(ref, dist);
  r.score = SaliencyWeighted(*r.map, saliency);
  return r;
}

MetricResult GmsmSaliency(const Image& ref, const Image& dist, const SaliencyMap& saliency) {
  MetricResult r = Gmsm(ref, dist);
  r.score = SaliencyWeighted(*r.map, saliency);
  return r;
}

}  // namespace ciqa
