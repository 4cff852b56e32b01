#ifndef CIQA_IMAGING_RESAMPLE_H_
#define CIQA_IMAGING_RESAMPLE_H_

#include "ciqa/imaging/image.h"

namespace ciqa {

enum class ResizeMode { kBilinear, kBicubic };

// Pixel-centre aligned resampling (source x = (x + 0.5) * sw / dw - 0.5),
// clamped at the borders, no antialiasing prefilter. Same-size resize returns
// the input unchanged and constant images stay exactly constant. Bicubic uses
// the Keys kernel (a = -0.5) and is not clamped.
Image Resize(const Image& img, int new_width, int new_height,
             ResizeMode mode = ResizeMode::kBilinear);

// Bilinear sample at continuous pixel coordinates with border clamping.
double SampleBilinear(const Image& img, double x, double y, int c);

}  // namespace ciqa

#endif  // CIQA_IMAGING_RESAMPLE_H_
