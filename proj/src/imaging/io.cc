#include "ciqa/imaging/io.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

// jpeglib.h needs FILE and size_t declared first.
#include <jpeglib.h>

namespace ciqa {
namespace {

std::vector<uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read image file: " + path);
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::string& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline uint8_t To8(float v) {
  const float c = std::clamp(v, 0.0f, 1.0f);
  return static_cast<uint8_t>(std::lround(c * 255.0f));
}

std::vector<uint8_t> Interleave(const Image& img) {
  const int ch = img.channels();
  std::vector<uint8_t> px(img.pixel_count() * ch);
  for (int c = 0; c < ch; ++c) {
    auto p = img.plane(c);
    for (size_t i = 0; i < p.size(); ++i) px[i * ch + c] = To8(p[i]);
  }
  return px;
}

Image Deinterleave(const uint8_t* px, int width, int height, int channels) {
  Image img(width, height, channels);
  const size_t n = img.pixel_count();
  for (int c = 0; c < channels; ++c) {
    auto p = img.plane(c);
    for (size_t i = 0; i < n; ++i) p[i] = px[i * channels + c] / 255.0f;
  }
  return img;
}

Image DecodePng(const std::vector<uint8_t>& bytes, const std::string& name) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw std::runtime_error("cannot decode PNG " + name + ": " + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw std::runtime_error("PNG has zero dimension: " + name);
  }
  std::vector<uint8_t> px(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, px.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw std::runtime_error("cannot decode PNG " + name + ": " + msg);
  }
  return Deinterleave(px.data(), static_cast<int>(image.width), static_cast<int>(image.height),
                      color ? 3 : 1);
}

struct JpegErrorManager {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void JpegErrorExit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void JpegSilence(j_common_ptr, int) {}

// setjmp/longjmp only cross plain C state inside these helpers; C++ objects
// with destructors are created before the setjmp and outlive it.
bool EncodeJpegRaw(const uint8_t* px, int width, int height, int channels, int quality,
                   unsigned char** out, unsigned long* out_size, char* message) {
  jpeg_compress_struct cinfo;
  JpegErrorManager jerr;
  cinfo.err = jpeg_std_error(&jerr.pub);
  jerr.pub.error_exit = JpegErrorExit;
  jerr.pub.emit_message = JpegSilence;
  if (setjmp(jerr.jump)) {
    std::strncpy(message, jerr.message, JMSG_LENGTH_MAX);
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, out, out_size);
  cinfo.image_width = static_cast<JDIMENSION>(width);
  cinfo.image_height = static_cast<JDIMENSION>(height);
  cinfo.input_components = channels;
  cinfo.in_color_space = channels == 3 ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  cinfo.dct_method = JDCT_ISLOW;
  cinfo.optimize_coding = FALSE;
  if (channels == 3) {
    cinfo.comp_info[0].h_samp_factor = 2;
    cinfo.comp_info[0].v_samp_factor = 2;
    cinfo.comp_info[1].h_samp_factor = 1;
    cinfo.comp_info[1].v_samp_factor = 1;
    cinfo.comp_info[2].h_samp_factor = 1;
    cinfo.comp_info[2].v_samp_factor = 1;
  }
  jpeg_start_compress(&cinfo, TRUE);
  const size_t stride = static_cast<size_t>(width) * channels;
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(px + cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

bool DecodeJpegHeader(const uint8_t* data, size_t size, int* width, int* height,
                      int* channels, uint8_t* px, char* message) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager jerr;
  cinfo.err = jpeg_std_error(&jerr.pub);
  jerr.pub.error_exit = JpegErrorExit;
  jerr.pub.emit_message = JpegSilence;
  if (setjmp(jerr.jump)) {
    std::strncpy(message, jerr.message, JMSG_LENGTH_MAX);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, data, static_cast<unsigned long>(size));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  cinfo.dct_method = JDCT_ISLOW;
  if (px == nullptr) {
    *width = static_cast<int>(cinfo.image_width);
    *height = static_cast<int>(cinfo.image_height);
    *channels = cinfo.num_components == 1 ? 1 : 3;
    jpeg_destroy_decompress(&cinfo);
    return true;
  }
  jpeg_start_decompress(&cinfo);
  const size_t stride = static_cast<size_t>(cinfo.output_width) * cinfo.output_components;
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = px + cinfo.output_scanline * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

bool IsPng(const std::vector<uint8_t>& b) {
  static const uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  return b.size() >= 8 && std::memcmp(b.data(), sig, 8) == 0;
}

bool IsJpeg(const std::vector<uint8_t>& b) {
  return b.size() >= 3 && b[0] == 0xff && b[1] == 0xd8 && b[2] == 0xff;
}

}  // namespace

std::vector<uint8_t> EncodeJpeg(const Image& img, int quality) {
  if (quality < 1 || quality > 100) {
    throw std::invalid_argument("JPEG quality must be in 1..100, got " + std::to_string(quality));
  }
  const auto px = Interleave(img);
  unsigned char* buf = nullptr;
  unsigned long size = 0;
  char message[JMSG_LENGTH_MAX] = {0};
  const bool ok = EncodeJpegRaw(px.data(), img.width(), img.height(), img.channels(), quality,
                                &buf, &size, message);
  std::vector<uint8_t> out;
  if (ok) out.assign(buf, buf + size);
  std::free(buf);
  if (!ok) throw std::runtime_error(std::string("JPEG encode failed: ") + message);
  return out;
}

Image DecodeJpeg(const std::vector<uint8_t>& bytes) {
  int w = 0, h = 0, ch = 0;
  char message[JMSG_LENGTH_MAX] = {0};
  if (!DecodeJpegHeader(bytes.data(), bytes.size(), &w, &h, &ch, nullptr, message)) {
    throw std::runtime_error(std::string("JPEG decode failed: ") + message);
  }
  if (w <= 0 || h <= 0) throw std::runtime_error("JPEG has zero dimension");
  std::vector<uint8_t> px(static_cast<size_t>(w) * h * ch);
  if (!DecodeJpegHeader(bytes.data(), bytes.size(), &w, &h, &ch, px.data(), message)) {
    throw std::runtime_error(std::string("JPEG decode failed: ") + message);
  }
  return Deinterleave(px.data(), w, h, ch);
}

std::vector<uint8_t> EncodePng(const Image& img) {
  const auto px = Interleave(img);
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, px.data(), 0, nullptr)) {
    throw std::runtime_error(std::string("PNG encode failed: ") + image.message);
  }
  std::vector<uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, px.data(), 0, nullptr)) {
    throw std::runtime_error(std::string("PNG encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

Image LoadImage(const std::string& path) {
  const auto bytes = ReadFileBytes(path);
  if (IsPng(bytes)) return DecodePng(bytes, path);
  if (IsJpeg(bytes)) {
    try {
      return DecodeJpeg(bytes);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": " + e.what());
    }
  }
  throw std::runtime_error("unsupported image format: " + path);
}

void SaveImage(const Image& img, const std::string& path, ImageFormat format, int quality) {
  if (img.empty()) throw std::invalid_argument("SaveImage: empty image");
  WriteFileBytes(path, format == ImageFormat::kPng ? EncodePng(img) : EncodeJpeg(img, quality));
}

ImageFormat FormatFromExtension(const std::string& path) {
  std::string ext;
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos) ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == "png") return ImageFormat::kPng;
  if (ext == "jpg" || ext == "jpeg") return ImageFormat::kJpeg;
  throw std::invalid_argument("unsupported image extension: " + path);
}

Image Quantize8(const Image& img) {
  Image out = img;
  for (float& v : out.data()) v = To8(v) / 255.0f;
  return out;
}

}  // namespace ciqa
