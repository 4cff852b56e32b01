#ifndef CIQA_EVAL_CORRELATION_H_
#define CIQA_EVAL_CORRELATION_H_

#include <span>
#include <vector>

namespace ciqa {

// 1-based ranks, ties get the average of the ranks they span.
std::vector<double> AverageRanks(std::span<const double> values);

// All take equal-length inputs with n >= 2 and throw std::invalid_argument
// otherwise. Correlations throw when an input has zero variance.
double Plcc(std::span<const double> a, std::span<const double> b);
// Pearson correlation of average ranks.
double Srcc(std::span<const double> a, std::span<const double> b);
// Kendall tau-b.
double Krcc(std::span<const double> a, std::span<const double> b);
double Rmse(std::span<const double> a, std::span<const double> b);

}  // namespace ciqa

#endif  // CIQA_EVAL_CORRELATION_H_
