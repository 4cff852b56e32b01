#include "eval_oracle.h"

#include <cmath>
#include <cstddef>

namespace ciqa::testing {
namespace {

double RankOf(std::span<const double> v, size_t i) {
  double r = 1.0;
  for (double x : v) r += x < v[i] ? 1.0 : 0.0;
  return r;
}

}  // namespace

double SpearmanNoTies(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  double d2 = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d2 += std::pow(RankOf(a, i) - RankOf(b, i), 2);
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

double KendallTauBPairs(std::span<const double> a, std::span<const double> b) {
  double concordant = 0, discordant = 0, ties_a = 0, ties_b = 0, pairs = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = i + 1; j < a.size(); ++j) {
      pairs += 1;
      const double s = (a[i] - a[j]) * (b[i] - b[j]);
      if (s > 0) concordant += 1;
      if (s < 0) discordant += 1;
      if (a[i] == a[j]) ties_a += 1;
      if (b[i] == b[j]) ties_b += 1;
    }
  }
  return (concordant - discordant) / std::sqrt((pairs - ties_a) * (pairs - ties_b));
}

double AucPairs(std::span<const double> scores, std::span<const int> labels) {
  double credit = 0, count = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      count += 1;
      credit += scores[i] > scores[j] ? 1.0 : (scores[i] == scores[j] ? 0.5 : 0.0);
    }
  }
  return credit / count;
}

}  // namespace ciqa::testing
