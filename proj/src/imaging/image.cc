#include "ciqa/imaging/image.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ciqa {
namespace {

void CheckDims(int width, int height, int channels) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("image dimensions must be positive, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw std::invalid_argument("image must have 1 or 3 channels, got " +
                                std::to_string(channels));
  }
}

}  // namespace

Image::Image(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  CheckDims(width, height, channels);
  if (!std::isfinite(fill)) throw std::invalid_argument("non-finite fill value");
  data_.assign(static_cast<size_t>(width) * height * channels, fill);
}

Image::Image(int width, int height, int channels, std::vector<float> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  CheckDims(width, height, channels);
  if (data_.size() != static_cast<size_t>(width) * height * channels) {
    throw std::invalid_argument("image data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(width) + "x" +
                                std::to_string(height) + "x" + std::to_string(channels));
  }
  for (float v : data_) {
    if (!std::isfinite(v)) throw std::invalid_argument("image data contains non-finite sample");
  }
}

Image Image::Channel(int c) const {
  if (c < 0 || c >= channels_) throw std::out_of_range("channel index out of range");
  auto p = plane(c);
  return Image(width_, height_, 1, std::vector<float>(p.begin(), p.end()));
}

Image Image::Clamped() const {
  Image out = *this;
  for (float& v : out.data_) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

double Image::Mean() const {
  double sum = 0.0;
  for (float v : data_) sum += v;
  return data_.empty() ? 0.0 : sum / static_cast<double>(data_.size());
}

Image ToGray(const Image& img) {
  if (img.channels() == 1) return img;
  Image out(img.width(), img.height(), 1);
  auto r = img.plane(0), g = img.plane(1), b = img.plane(2);
  auto dst = out.data();
  for (size_t i = 0; i < dst.size(); ++i) {
    const double y = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
    dst[i] = static_cast<float>(y);
  }
  return out;
}

void RequireSameShape(const Image& a, const Image& b, const char* what) {
  if (!a.SameShape(b)) {
    throw std::invalid_argument(std::string(what) + ": image shape mismatch (" +
                                std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                "x" + std::to_string(a.channels()) + " vs " +
                                std::to_string(b.width()) + "x" + std::to_string(b.height()) +
                                "x" + std::to_string(b.channels()) + ")");
  }
}

}  // namespace ciqa
