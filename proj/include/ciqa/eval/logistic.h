#ifndef CIQA_EVAL_LOGISTIC_H_
#define CIQA_EVAL_LOGISTIC_H_

#include <cstdint>
#include <span>
#include <vector>

namespace ciqa {

// Q'(Q) = b1 (1/2 - 1/(1 + exp(b2 (Q - b3)))) + b4 Q + b5
struct LogisticParams {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;
  double beta4 = 0.0;
  double beta5 = 0.0;

  double operator()(double q) const;
  std::vector<double> Apply(std::span<const double> q) const;
};

struct LogisticFitOptions {
  // Random restarts in addition to the deterministic start.
  int restarts = 20;
  uint64_t seed = 0;
  int max_iterations = 300;
};

struct LogisticFit {
  LogisticParams params;
  double sse = 0.0;
  // False when no start reached a stationary point; params are then the
  // best seen.
  bool converged = false;
};

// Levenberg-Marquardt on standardized coordinates followed by an exact
// least-squares solve of (b1, b4, b5) for the fitted (b2, b3). The linear
// solve spans {1, Q}, so the fitted curve never correlates worse with mos
// than Q itself. Needs n >= 5 and non-constant q.
LogisticFit FitLogistic(std::span<const double> q, std::span<const double> mos,
                        const LogisticFitOptions& options = {});

}  // namespace ciqa

#endif  // CIQA_EVAL_LOGISTIC_H_
