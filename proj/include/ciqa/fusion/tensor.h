#ifndef CIQA_FUSION_TENSOR_H_
#define CIQA_FUSION_TENSOR_H_

#include <span>
#include <string>
#include <vector>

namespace ciqa {

// Dense float32 tensor in (c, h, w) row-major order.
struct Tensor3 {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  Tensor3() = default;
  Tensor3(int c, int h, int w, float fill = 0.0f);

  size_t plane_size() const { return static_cast<size_t>(height) * width; }
  float& at(int c, int y, int x) { return data[(static_cast<size_t>(c) * height + y) * width + x]; }
  float at(int c, int y, int x) const { return data[(static_cast<size_t>(c) * height + y) * width + x]; }
  std::span<const float> plane(int c) const {
    return std::span<const float>(data).subspan(c * plane_size(), plane_size());
  }
  std::span<float> plane(int c) { return std::span<float>(data).subspan(c * plane_size(), plane_size()); }
  bool SameDims(const Tensor3& o) const {
    return channels == o.channels && height == o.height && width == o.width;
  }
  friend bool operator==(const Tensor3&, const Tensor3&) = default;
};

struct FeatureStack {
  std::string extractor;
  std::vector<Tensor3> layers;

  // Throws std::invalid_argument on an empty stack, zero dims, size
  // mismatches or non-finite values.
  void Validate() const;
  friend bool operator==(const FeatureStack&, const FeatureStack&) = default;
};

// Per-channel squared differences of two unit-normalized stacks.
struct DistanceStack {
  std::vector<Tensor3> layers;
};

}  // namespace ciqa

#endif  // CIQA_FUSION_TENSOR_H_
