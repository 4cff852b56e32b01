#ifndef CIQA_TESTS_SUPPORT_SVR_ORACLE_H_
#define CIQA_TESTS_SUPPORT_SVR_ORACLE_H_

#include <span>
#include <vector>

#include "ciqa/ariqa/svr.h"

namespace ciqa::testing {

struct SvrDualCheck {
  // Largest distance of any alpha / alpha* outside [0, C].
  double box_violation = 0.0;
  // Largest complementary-slackness residual measured on the primal
  // residuals r_i = y_i - f(x_i): alpha_i > 0 needs r_i >= eps, alpha_i < C
  // needs r_i <= eps, and the mirrored conditions for alpha*.
  double kkt_residual = 0.0;
  // |sum(alpha - alpha*)|.
  double equality_residual = 0.0;
};

SvrDualCheck CheckSvrDual(const SvrModel& model, const SvrTrainInfo& info,
                          const std::vector<std::vector<double>>& x, std::span<const double> y);

}  // namespace ciqa::testing

#endif  // CIQA_TESTS_SUPPORT_SVR_ORACLE_H_
