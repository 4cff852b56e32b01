#ifndef CIQA_IMAGING_IO_H_
#define CIQA_IMAGING_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ciqa/imaging/image.h"

namespace ciqa {

enum class ImageFormat { kPng, kJpeg };

// Loads an 8-bit PNG or JPEG (detected from the file signature). Samples are
// v / 255. Color files load as 3 channels, gray files as 1; alpha is dropped.
Image LoadImage(const std::string& path);

// Writes an 8-bit file; samples are clamped to [0, 1] and rounded to the
// nearest of 256 levels. `quality` (1..100) applies to JPEG only.
void SaveImage(const Image& img, const std::string& path,
               ImageFormat format = ImageFormat::kPng, int quality = 95);

// Format from the path extension (.png, .jpg, .jpeg); throws otherwise.
ImageFormat FormatFromExtension(const std::string& path);

// Baseline sequential JPEG with the IJG quality scaling, 4:2:0 chroma
// subsampling for color input, integer DCT and standard Huffman tables.
std::vector<uint8_t> EncodeJpeg(const Image& img, int quality);
Image DecodeJpeg(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> EncodePng(const Image& img);

// Rounds every sample to the 8-bit grid (the value a PNG roundtrip yields).
Image Quantize8(const Image& img);

}  // namespace ciqa

#endif  // CIQA_IMAGING_IO_H_
