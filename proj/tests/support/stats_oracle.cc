#include "stats_oracle.h"

#include <algorithm>
#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <vector>

namespace ciqa::testing {

double BetaChiSquarePValue(std::span<const double> draws, double a, double b, int bins) {
  const boost::math::beta_distribution<double> dist(a, b);
  std::vector<double> edges(bins - 1);
  // Bisection on the cdf; the library quantile's Newton solver stalls for symmetric shapes.
  for (int k = 1; k < bins; ++k) {
    const double p = static_cast<double>(k) / bins;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (boost::math::cdf(dist, mid) < p ? lo : hi) = mid;
    }
    edges[k - 1] = 0.5 * (lo + hi);
  }
  std::vector<double> counts(bins, 0.0);
  for (double x : draws) counts[std::upper_bound(edges.begin(), edges.end(), x) - edges.begin()] += 1.0;
  const double expected = static_cast<double>(draws.size()) / bins;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(bins - 1), chi2));
}

double SampleMean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

double SampleVariance(std::span<const double> v) {
  const double m = SampleMean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

}  // namespace ciqa::testing
