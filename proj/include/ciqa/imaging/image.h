#ifndef CIQA_IMAGING_IMAGE_H_
#define CIQA_IMAGING_IMAGE_H_

#include <cstddef>
#include <span>
#include <vector>

namespace ciqa {

// Planar float raster with 1 (gray) or 3 (RGB) channels. Sample (x, y, c)
// lives at data[(c * height + y) * width + x].
//
// Pixel images produced by the loaders and the synthesis operations hold
// values in [0, 1]; an 8-bit value v maps to v / 255. The same type carries
// signed intermediate rasters (gradients, quality maps), so construction only
// checks that every sample is finite.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, float fill = 0.0f);
  Image(int width, int height, int channels, std::vector<float> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  size_t pixel_count() const { return static_cast<size_t>(width_) * height_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float at(int x, int y, int c = 0) const { return data_[Index(x, y, c)]; }
  float& at(int x, int y, int c = 0) { return data_[Index(x, y, c)]; }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }
  std::span<const float> plane(int c) const {
    return std::span<const float>(data_).subspan(c * pixel_count(), pixel_count());
  }
  std::span<float> plane(int c) {
    return std::span<float>(data_).subspan(c * pixel_count(), pixel_count());
  }

  // Single channel c as a 1-channel image.
  Image Channel(int c) const;

  bool SameShape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }
  bool SameSize(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  // Copy with every sample clamped to [0, 1].
  Image Clamped() const;
  double Mean() const;

  friend bool operator==(const Image& a, const Image& b) {
    return a.SameShape(b) && a.data_ == b.data_;
  }

 private:
  size_t Index(int x, int y, int c) const {
    return (static_cast<size_t>(c) * height_ + y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

// Luminance: 0.299 R + 0.587 G + 0.114 B. Gray input is returned unchanged.
Image ToGray(const Image& img);

// Throws std::invalid_argument with `what` in the message when shapes differ.
void RequireSameShape(const Image& a, const Image& b, const char* what);

}  // namespace ciqa

#endif  // CIQA_IMAGING_IMAGE_H_
