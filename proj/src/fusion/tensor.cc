#include "ciqa/fusion/tensor.h"

#include <cmath>
#include <stdexcept>

namespace ciqa {

Tensor3::Tensor3(int c, int h, int w, float fill) : channels(c), height(h), width(w) {
  if (c < 1 || h < 1 || w < 1) {
    throw std::invalid_argument("tensor dims must be >= 1, got " + std::to_string(c) + "x" +
                                std::to_string(h) + "x" + std::to_string(w));
  }
  data.assign(static_cast<size_t>(c) * h * w, fill);
}

void FeatureStack::Validate() const {
  if (layers.empty()) throw std::invalid_argument("feature stack '" + extractor + "' has no layers");
  for (size_t l = 0; l < layers.size(); ++l) {
    const Tensor3& t = layers[l];
    if (t.channels < 1 || t.height < 1 || t.width < 1) {
      throw std::invalid_argument("feature layer " + std::to_string(l) + " has a zero dimension");
    }
    if (t.data.size() != static_cast<size_t>(t.channels) * t.height * t.width) {
      throw std::invalid_argument("feature layer " + std::to_string(l) + " data size mismatch");
    }
    for (float v : t.data) {
      if (!std::isfinite(v)) throw std::invalid_argument("feature layer " + std::to_string(l) + " has non-finite values");
    }
  }
}

}  // namespace ciqa
