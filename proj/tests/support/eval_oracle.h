#ifndef CIQA_TESTS_SUPPORT_EVAL_ORACLE_H_
#define CIQA_TESTS_SUPPORT_EVAL_ORACLE_H_

#include <span>

namespace ciqa::testing {

// 1 - 6 sum d^2 / (n (n^2 - 1)); valid only without ties.
double SpearmanNoTies(std::span<const double> a, std::span<const double> b);

// Tau-b from explicit concordant / discordant / tied pair counts.
double KendallTauBPairs(std::span<const double> a, std::span<const double> b);

// Every positive against every negative, ties worth one half.
double AucPairs(std::span<const double> scores, std::span<const int> labels);

}  // namespace ciqa::testing

#endif  // CIQA_TESTS_SUPPORT_EVAL_ORACLE_H_
