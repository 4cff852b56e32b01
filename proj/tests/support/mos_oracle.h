#ifndef CIQA_TESTS_SUPPORT_MOS_ORACLE_H_
#define CIQA_TESTS_SUPPORT_MOS_ORACLE_H_

#include <optional>
#include <string>
#include <vector>

#include "ciqa/subjective/ratings.h"

namespace ciqa::testing {

// Dense subjects x stimuli matrix with NaN for missing ratings.
using DenseRatings = std::vector<std::vector<double>>;

DenseRatings ToDense(const RatingsTable& table);

struct OracleMos {
  std::vector<double> mos;  // per stimulus, in table order
  std::vector<size_t> rejected;
  // Stimuli screened with the 2 sigma and the sqrt(20) sigma rule.
  size_t gaussian_columns = 0;
  size_t heavy_tailed_columns = 0;
  size_t flagged = 0;
};

// Straight-line reimplementation of outlier screening, subject rejection and
// z-score MOS over a dense matrix. Empty when the pipeline has no defined
// result (too few ratings, zero variance, everybody rejected).
std::optional<OracleMos> BruteForceMos(const DenseRatings& r);

}  // namespace ciqa::testing

#endif  // CIQA_TESTS_SUPPORT_MOS_ORACLE_H_
