#include "ciqa/common/hash.h"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace ciqa {

Fnv1a64& Fnv1a64::Update(const void* data, size_t size) {
  const auto* p = static_cast<const uint8_t*>(data);
  for (size_t i = 0; i < size; ++i) {
    state_ ^= p[i];
    state_ *= 0x100000001b3ULL;
  }
  return *this;
}

Fnv1a64& Fnv1a64::Update(std::span<const uint8_t> bytes) {
  return Update(bytes.data(), bytes.size());
}

Fnv1a64& Fnv1a64::Update(std::string_view text) {
  return Update(text.data(), text.size());
}

std::string Fnv1a64::Hex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(state_));
  return buf;
}

uint64_t HashFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  Fnv1a64 h;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h.Update(buf.data(), static_cast<size_t>(in.gcount()));
  }
  return h.value();
}

}  // namespace ciqa
