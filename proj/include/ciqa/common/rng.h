#ifndef CIQA_COMMON_RNG_H_
#define CIQA_COMMON_RNG_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace ciqa {

// Seeded generator whose draws are reproducible across standard libraries.
// Only the engine comes from <random>; every distribution is written out here
// because the std distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  // Uniform on (0, 1).
  double UniformOpen();
  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer on [0, n); n > 0.
  uint64_t Below(uint64_t n);

  // Standard normal via the Marsaglia polar method.
  double Normal();
  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

  // Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double Gamma(double shape);
  // Beta(a, b) composed from two gamma draws.
  double Beta(double a, double b);

  // Fisher-Yates.
  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(Below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace ciqa

#endif  // CIQA_COMMON_RNG_H_
