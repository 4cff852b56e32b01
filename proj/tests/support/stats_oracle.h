#ifndef CIQA_TESTS_SUPPORT_STATS_ORACLE_H_
#define CIQA_TESTS_SUPPORT_STATS_ORACLE_H_

#include <span>

namespace ciqa::testing {

// Pearson chi-squared goodness of fit of `draws` against Beta(a, b) with
// `bins` equiprobable bins; returns the upper-tail p-value.
double BetaChiSquarePValue(std::span<const double> draws, double a, double b, int bins);

// Sample mean and unbiased variance.
double SampleMean(std::span<const double> v);
double SampleVariance(std::span<const double> v);

}  // namespace ciqa::testing

#endif  // CIQA_TESTS_SUPPORT_STATS_ORACLE_H_
