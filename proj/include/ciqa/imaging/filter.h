#ifndef CIQA_IMAGING_FILTER_H_
#define CIQA_IMAGING_FILTER_H_

#include <utility>
#include <vector>

#include "ciqa/imaging/image.h"

namespace ciqa {

// Square filter kernel, row-major taps. Smoothing kernels sum to 1.
struct Kernel2D {
  int size = 1;
  std::vector<double> taps{1.0};

  double at(int kx, int ky) const { return taps[static_cast<size_t>(ky) * size + kx]; }

  // Normalized Gaussian; size odd and >= 1, sigma > 0.
  static Kernel2D Gaussian(int size, double sigma);
  // Outer product of a 1-D kernel with itself.
  static Kernel2D Separable(const std::vector<double>& taps_1d);
};

// Normalized 1-D Gaussian taps; size odd and >= 1.
std::vector<double> GaussianTaps(int size, double sigma);
// Odd support covering +-3 sigma: 2 * ceil(3 sigma) + 1.
int GaussianSizeFor(double sigma);

// All filters use replicate padding and keep the input size.
Image Filter2D(const Image& img, const Kernel2D& kernel);
Image FilterSeparable(const Image& img, const std::vector<double>& taps);
Image GaussianBlur(const Image& img, double sigma);

// Level 0 is the input; level k + 1 is level k blurred with a Gaussian of the
// given sigma and decimated by 2 (even pixels kept). Every level must be at
// least 8x8.
std::vector<Image> GaussianPyramid(const Image& img, int levels, double sigma);

// 2x2 box average followed by decimation; odd trailing rows/cols replicate.
Image Downsample2x2Average(const Image& img);

enum class GradientOperator { kPrewitt, kSobel };

// Horizontal and vertical derivative of a 1-channel image. Prewitt taps are
// [1 1 1]/3 across the smoothing direction, Sobel [1 2 1]/4; the derivative
// is right minus left (gx) and bottom minus top (gy).
std::pair<Image, Image> Gradients(const Image& img, GradientOperator op);

// 4-neighbour Laplacian of a 1-channel image.
Image Laplacian(const Image& img);

}  // namespace ciqa

#endif  // CIQA_IMAGING_FILTER_H_
