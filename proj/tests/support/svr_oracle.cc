#include "svr_oracle.h"

#include <algorithm>
#include <cmath>

namespace ciqa::testing {

SvrDualCheck CheckSvrDual(const SvrModel& model, const SvrTrainInfo& info,
                          const std::vector<std::vector<double>>& x, std::span<const double> y) {
  SvrDualCheck out;
  const double c = model.c, eps = model.epsilon;
  // Dual values this close to a bound count as at the bound.
  const double at_bound = 1e-12 * c;
  double sum = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double a = info.alpha[i], as = info.alpha_star[i];
    out.box_violation = std::max({out.box_violation, -a, -as, a - c, as - c});
    sum += a - as;
    const double r = y[i] - model.Predict(x[i]);
    double v = 0.0;
    if (a > at_bound) v = std::max(v, eps - r);
    if (a < c - at_bound) v = std::max(v, r - eps);
    if (as > at_bound) v = std::max(v, r + eps);
    if (as < c - at_bound) v = std::max(v, -eps - r);
    out.kkt_residual = std::max(out.kkt_residual, v);
  }
  out.equality_residual = std::abs(sum);
  return out;
}

}  // namespace ciqa::testing
