#include "procedural.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>

#include <unistd.h>

namespace ciqa::testing {

namespace {

Image Render(int width, int height, int channels, int waves, int disk_count, double f_lo, double f_hi,
             double exponent, Rng& rng) {
  Image img(width, height, channels);
  std::vector<double> fx(waves), fy(waves), amp(waves), phase(waves * channels);
  for (int k = 0; k < waves; ++k) {
    const double f = std::exp(rng.Uniform(std::log(f_lo), std::log(f_hi)));
    const double theta = rng.Uniform(0.0, std::numbers::pi);
    fx[k] = f * std::cos(theta) / width;
    fy[k] = f * std::sin(theta) / height;
    amp[k] = std::pow(f, -exponent);
    for (int c = 0; c < channels; ++c) phase[k * channels + c] = rng.Uniform(0.0, 2 * std::numbers::pi);
  }
  struct Disk {
    double x, y, r, v;
  };
  std::vector<Disk> disks(disk_count);
  for (auto& d : disks) {
    d = {rng.Uniform(0, width), rng.Uniform(0, height), rng.Uniform(0.05, 0.25) * std::min(width, height),
         rng.Uniform(-0.6, 0.6)};
  }
  // sin(a x + b y + p) = sin(a x) cos(b y + p) + cos(a x) sin(b y + p)
  // keeps the cost at one multiply-add per wave and pixel.
  std::vector<double> raw(img.size(), 0.0);
  std::vector<double> sx(width), cx(width), sy(height), cy(height);
  for (int k = 0; k < waves; ++k) {
    for (int x = 0; x < width; ++x) {
      sx[x] = std::sin(2 * std::numbers::pi * fx[k] * x);
      cx[x] = std::cos(2 * std::numbers::pi * fx[k] * x);
    }
    for (int c = 0; c < channels; ++c) {
      for (int y = 0; y < height; ++y) {
        sy[y] = amp[k] * std::sin(2 * std::numbers::pi * fy[k] * y + phase[k * channels + c]);
        cy[y] = amp[k] * std::cos(2 * std::numbers::pi * fy[k] * y + phase[k * channels + c]);
      }
      for (int y = 0; y < height; ++y) {
        double* row = raw.data() + (static_cast<size_t>(c) * height + y) * width;
        for (int x = 0; x < width; ++x) row[x] += sx[x] * cy[y] + cx[x] * sy[y];
      }
    }
  }
  for (int c = 0; c < channels; ++c) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        double v = 0.0;
        for (const auto& d : disks) {
          const double dist = std::hypot(x - d.x, y - d.y);
          v += d.v / (1.0 + std::exp((dist - d.r) / 1.5));
        }
        raw[(static_cast<size_t>(c) * height + y) * width + x] += v;
      }
    }
  }
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  const double span = std::max(*hi - *lo, 1e-12);
  auto data = img.data();
  for (size_t i = 0; i < raw.size(); ++i) data[i] = static_cast<float>(0.05 + 0.9 * (raw[i] - *lo) / span);
  return img;
}

}  // namespace

Image ProceduralImage(int width, int height, int channels, Rng& rng) {
  return Render(width, height, channels, 24, 6, 1.0, 0.45 * std::min(width, height), 1.0, rng);
}

Image StationaryTexture(int width, int height, int channels, Rng& rng) {
  return Render(width, height, channels, 200, 0, 8.0, 32.0, 0.0, rng);
}

Image RandomImage(int width, int height, int channels, Rng& rng) {
  Image img(width, height, channels);
  for (float& v : img.data()) v = static_cast<float>(rng.Uniform());
  return img;
}

Image ConstantImage(int width, int height, int channels, float value) {
  return Image(width, height, channels, value);
}

RatingsTable RandomRatings(size_t subjects, size_t stimuli, Rng& rng) {
  std::vector<std::string> s, t;
  for (size_t i = 0; i < subjects; ++i) s.push_back("u" + std::to_string(i));
  for (size_t j = 0; j < stimuli; ++j) t.push_back("x" + std::to_string(j));
  RatingsTable table(s, t);
  std::vector<double> quality(stimuli);
  for (auto& q : quality) q = rng.Uniform(2.0, 9.0);
  for (size_t i = 0; i < subjects; ++i) {
    const double bias = rng.Normal(0.0, 0.7);
    const double spread = rng.Uniform(0.3, 1.5);
    for (size_t j = 0; j < stimuli; ++j) {
      double r = quality[j] + bias + rng.Normal(0.0, spread);
      if (rng.Uniform() < 0.04) r = rng.Uniform() < 0.5 ? 1.0 : 10.0;
      table.at(i, j) = std::clamp(std::round(r), 1.0, 10.0);
    }
  }
  return table;
}

std::string TempDir(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("ciqa_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace ciqa::testing
