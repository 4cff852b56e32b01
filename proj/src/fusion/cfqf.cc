#include "ciqa/fusion/cfqf.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace ciqa {
namespace {

static_assert(std::endian::native == std::endian::little, "CFQF I/O assumes a little-endian host");

constexpr char kMagic[4] = {'C', 'F', 'Q', 'F'};

template <typename T>
void Put(std::vector<uint8_t>& out, T value) {
  const auto* p = reinterpret_cast<const uint8_t*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

class Reader {
 public:
  Reader(const std::vector<uint8_t>& bytes, const std::string& source) : bytes_(bytes), source_(source) {}

  template <typename T>
  T Get(const char* what) {
    T value;
    Take(&value, sizeof(T), what);
    return value;
  }
  void Take(void* dst, size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) Fail(std::string("truncated while reading ") + what);
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }
  [[noreturn]] void Fail(const std::string& msg) const {
    throw std::runtime_error("CFQF " + source_ + ": " + msg);
  }

 private:
  const std::vector<uint8_t>& bytes_;
  const std::string& source_;
  size_t pos_ = 0;
};

}  // namespace

std::vector<uint8_t> EncodeCfqf(const FeatureStack& stack) {
  stack.Validate();
  if (stack.extractor.size() > 0xFFFF) throw std::invalid_argument("extractor name too long");
  std::vector<uint8_t> out(kMagic, kMagic + 4);
  Put<uint16_t>(out, kCfqfVersion);
  Put<uint16_t>(out, static_cast<uint16_t>(stack.extractor.size()));
  out.insert(out.end(), stack.extractor.begin(), stack.extractor.end());
  Put<uint32_t>(out, static_cast<uint32_t>(stack.layers.size()));
  for (const Tensor3& t : stack.layers) {
    Put<uint32_t>(out, static_cast<uint32_t>(t.channels));
    Put<uint32_t>(out, static_cast<uint32_t>(t.height));
    Put<uint32_t>(out, static_cast<uint32_t>(t.width));
    const auto* p = reinterpret_cast<const uint8_t*>(t.data.data());
    out.insert(out.end(), p, p + t.data.size() * sizeof(float));
  }
  return out;
}

FeatureStack DecodeCfqf(const std::vector<uint8_t>& bytes, const std::string& source) {
  Reader in(bytes, source);
  char magic[4];
  in.Take(magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) in.Fail("bad magic");
  const auto version = in.Get<uint16_t>("version");
  if (version != kCfqfVersion) in.Fail("unsupported version " + std::to_string(version));
  const auto name_len = in.Get<uint16_t>("name length");
  FeatureStack stack;
  stack.extractor.resize(name_len);
  in.Take(stack.extractor.data(), name_len, "extractor name");
  const auto layers = in.Get<uint32_t>("layer count");
  if (layers == 0) in.Fail("zero layers");
  for (uint32_t l = 0; l < layers; ++l) {
    const auto c = in.Get<uint32_t>("layer dims");
    const auto h = in.Get<uint32_t>("layer dims");
    const auto w = in.Get<uint32_t>("layer dims");
    if (c == 0 || h == 0 || w == 0) in.Fail("layer " + std::to_string(l) + " has a zero dimension");
    const uint64_t count = uint64_t{c} * h * w;
    if (count > (bytes.size() / sizeof(float))) in.Fail("layer " + std::to_string(l) + " larger than file");
    Tensor3 t(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w));
    in.Take(t.data.data(), count * sizeof(float), "layer values");
    for (float v : t.data) {
      if (!std::isfinite(v)) in.Fail("layer " + std::to_string(l) + " has non-finite values");
    }
    stack.layers.push_back(std::move(t));
  }
  if (!in.AtEnd()) in.Fail("trailing bytes");
  return stack;
}

void WriteCfqf(const FeatureStack& stack, const std::string& path) {
  const auto bytes = EncodeCfqf(stack);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

FeatureStack ReadCfqf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return DecodeCfqf(bytes, path);
}

FeatureStack ConcatStacks(const FeatureStack& a, const FeatureStack& b) {
  if (a.layers.size() != b.layers.size()) {
    throw std::invalid_argument("concat: layer counts differ (" + std::to_string(a.layers.size()) + " vs " +
                                std::to_string(b.layers.size()) + ")");
  }
  FeatureStack out;
  out.extractor = a.extractor + "+" + b.extractor;
  for (size_t l = 0; l < a.layers.size(); ++l) {
    const Tensor3& x = a.layers[l];
    const Tensor3& y = b.layers[l];
    if (x.height != y.height || x.width != y.width) {
      throw std::invalid_argument("concat: layer " + std::to_string(l) + " spatial dims differ (" +
                                  std::to_string(x.height) + "x" + std::to_string(x.width) + " vs " +
                                  std::to_string(y.height) + "x" + std::to_string(y.width) + ")");
    }
    Tensor3 t(x.channels + y.channels, x.height, x.width);
    std::copy(x.data.begin(), x.data.end(), t.data.begin());
    std::copy(y.data.begin(), y.data.end(), t.data.begin() + static_cast<std::ptrdiff_t>(x.data.size()));
    out.layers.push_back(std::move(t));
  }
  return out;
}

SaliencyMap ReadSaliencyCfqf(const std::string& path) {
  FeatureStack s = ReadCfqf(path);
  if (s.layers.size() != 1 || s.layers[0].channels != 1) {
    throw std::runtime_error("saliency file " + path + " must hold one 1-channel layer");
  }
  Tensor3& t = s.layers[0];
  return SaliencyMap(t.width, t.height, std::move(t.data));
}

void WriteSaliencyCfqf(const SaliencyMap& map, const std::string& path) {
  FeatureStack s;
  s.extractor = "saliency";
  Tensor3 t(1, map.height(), map.width());
  std::copy(map.weights().begin(), map.weights().end(), t.data.begin());
  s.layers.push_back(std::move(t));
  WriteCfqf(s, path);
}

}  // namespace ciqa
