#ifndef CIQA_COMMON_HASH_H_
#define CIQA_COMMON_HASH_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace ciqa {

// 64-bit FNV-1a. Stable across platforms, used for cache keys and run-log
// config hashes (not for anything security related).
class Fnv1a64 {
 public:
  Fnv1a64& Update(std::span<const uint8_t> bytes);
  Fnv1a64& Update(std::string_view text);
  Fnv1a64& Update(const void* data, size_t size);

  uint64_t value() const { return state_; }
  std::string Hex() const;

 private:
  uint64_t state_ = 0xcbf29ce484222325ULL;
};

// Hash of a whole file's bytes; throws if unreadable.
uint64_t HashFile(const std::string& path);

}  // namespace ciqa

#endif  // CIQA_COMMON_HASH_H_
