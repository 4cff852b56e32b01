#include "ciqa/fusion/features.h"

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "ciqa/common/hash.h"
#include "ciqa/fusion/cfqf.h"
#include "ciqa/imaging/filter.h"
#include "ciqa/imaging/io.h"

namespace ciqa {

FeatureStack BuiltinFeatures(const Image& img) {
  const int min_dim = 8 << (kBuiltinLevels - 1);
  if (std::min(img.width(), img.height()) < min_dim) {
    throw std::invalid_argument("built-in features need min dimension >= " + std::to_string(min_dim) +
                                ", got " + std::to_string(img.width()) + "x" + std::to_string(img.height()));
  }
  const auto pyramid = GaussianPyramid(ToGray(img), kBuiltinLevels, kBuiltinPyramidSigma);
  FeatureStack stack;
  stack.extractor = kBuiltinExtractor;
  for (const Image& level : pyramid) {
    const auto [gx, gy] = Gradients(level, GradientOperator::kSobel);
    const Image lap = Laplacian(level);
    Tensor3 t(4, level.height(), level.width());
    const size_t n = t.plane_size();
    for (size_t i = 0; i < n; ++i) {
      t.data[i] = level.data()[i];
      t.data[n + i] = std::abs(gx.data()[i]);
      t.data[2 * n + i] = std::abs(gy.data()[i]);
      t.data[3 * n + i] = std::abs(lap.data()[i]);
    }
    stack.layers.push_back(std::move(t));
  }
  return stack;
}

FeatureStack UnitNormalize(const FeatureStack& stack) {
  FeatureStack out = stack;
  for (Tensor3& t : out.layers) {
    const size_t n = t.plane_size();
    for (size_t p = 0; p < n; ++p) {
      double ss = 0.0;
      for (int c = 0; c < t.channels; ++c) {
        const double v = t.data[c * n + p];
        ss += v * v;
      }
      const double inv = 1.0 / (std::sqrt(ss) + kNormalizeEpsilon);
      for (int c = 0; c < t.channels; ++c) {
        t.data[c * n + p] = static_cast<float>(t.data[c * n + p] * inv);
      }
    }
  }
  return out;
}

DistanceStack FeatureDistance(const FeatureStack& d, const FeatureStack& r) {
  if (d.extractor != r.extractor) {
    throw std::invalid_argument("feature distance: extractor mismatch ('" + d.extractor + "' vs '" +
                                r.extractor + "')");
  }
  if (d.layers.size() != r.layers.size()) {
    throw std::invalid_argument("feature distance: layer count mismatch");
  }
  DistanceStack out;
  for (size_t l = 0; l < d.layers.size(); ++l) {
    const Tensor3& a = d.layers[l];
    const Tensor3& b = r.layers[l];
    if (!a.SameDims(b)) {
      throw std::invalid_argument("feature distance: layer " + std::to_string(l) + " dims differ");
    }
    Tensor3 t(a.channels, a.height, a.width);
    for (size_t i = 0; i < a.data.size(); ++i) {
      const double diff = static_cast<double>(a.data[i]) - b.data[i];
      t.data[i] = static_cast<float>(diff * diff);
    }
    out.layers.push_back(std::move(t));
  }
  return out;
}

FeatureStack CachedBuiltinFeatures(const std::string& image_path, const std::string& cache_dir) {
  namespace fs = std::filesystem;
  fs::path cached;
  if (!cache_dir.empty()) {
    Fnv1a64 key;
    key.Update(std::string_view(kBuiltinExtractor));
    const uint64_t content = HashFile(image_path);
    key.Update(&content, sizeof content);
    cached = fs::path(cache_dir) / (std::string(kBuiltinExtractor) + "-" + key.Hex() + ".cfqf");
    if (fs::exists(cached)) {
      FeatureStack stack = ReadCfqf(cached.string());
      if (stack.extractor == kBuiltinExtractor) return stack;
    }
  }
  FeatureStack stack = BuiltinFeatures(LoadImage(image_path));
  if (!cached.empty()) {
    fs::create_directories(cached.parent_path());
    // Write-then-rename so parallel workers never read a partial file.
    const fs::path tmp = cached.string() + ".tmp" + std::to_string(reinterpret_cast<uintptr_t>(&stack));
    WriteCfqf(stack, tmp.string());
    fs::rename(tmp, cached);
  }
  return stack;
}

}  // namespace ciqa
