#include "ciqa/eval/correlation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ciqa {
namespace {

void CheckPair(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
  if (a.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least 2 samples");
}

inline int Sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

std::vector<double> AverageRanks(std::span<const double> values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t i, size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold 1-based ranks i+1..j.
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

double Plcc(std::span<const double> a, std::span<const double> b) {
  CheckPair(a, b, "plcc");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw std::invalid_argument("correlation undefined: zero-variance input");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double Srcc(std::span<const double> a, std::span<const double> b) {
  CheckPair(a, b, "srcc");
  const auto ra = AverageRanks(a), rb = AverageRanks(b);
  return Plcc(ra, rb);
}

double Krcc(std::span<const double> a, std::span<const double> b) {
  CheckPair(a, b, "krcc");
  long long concordance = 0, untied_a = 0, untied_b = 0;
  const size_t n = a.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const int sa = Sign(a[i] - a[j]), sb = Sign(b[i] - b[j]);
      concordance += sa * sb;
      untied_a += sa != 0;
      untied_b += sb != 0;
    }
  }
  if (untied_a == 0 || untied_b == 0) throw std::invalid_argument("correlation undefined: zero-variance input");
  return static_cast<double>(concordance) /
         std::sqrt(static_cast<double>(untied_a) * static_cast<double>(untied_b));
}

double Rmse(std::span<const double> a, std::span<const double> b) {
  CheckPair(a, b, "rmse");
  double ss = 0.0;
  for (size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(ss / static_cast<double>(a.size()));
}

}  // namespace ciqa
