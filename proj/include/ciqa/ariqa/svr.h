#ifndef CIQA_ARIQA_SVR_H_
#define CIQA_ARIQA_SVR_H_

#include <span>
#include <string>
#include <vector>

namespace ciqa {

enum class SvrKernel { kRbf, kLinear };

std::string SvrKernelName(SvrKernel k);
SvrKernel ParseSvrKernel(const std::string& name);

struct SvrParams {
  SvrKernel kernel = SvrKernel::kRbf;
  // RBF width on standardized features; <= 0 selects 1 / d.
  double gamma = 0.0;
  double c = 1.0;
  double epsilon = 0.1;
  double tolerance = 1e-3;
  long long max_iterations = 10'000'000;
};

// Epsilon-SVR over standardized features: f(x) = sum_i coef_i K(sv_i, z(x)) + bias
// with z(x) = (x - mean) / scale.
struct SvrModel {
  SvrKernel kernel = SvrKernel::kRbf;
  double gamma = 0.0;
  double c = 1.0;
  double epsilon = 0.1;
  std::vector<double> mean;
  std::vector<double> scale;
  std::vector<std::vector<double>> support;  // standardized
  std::vector<double> coef;                  // alpha - alpha*
  double bias = 0.0;

  double Predict(std::span<const double> x) const;
  std::vector<double> Predict(const std::vector<std::vector<double>>& rows) const;

  std::string ToJson() const;
  static SvrModel FromJson(const std::string& text);
};

struct SvrTrainInfo {
  long long iterations = 0;
  // Maximal KKT violation m(alpha) - M(alpha) at exit.
  double kkt_violation = 0.0;
  bool converged = false;
  std::vector<double> alpha;       // per training row
  std::vector<double> alpha_star;  // per training row
};

// SMO with second-order working-set selection on the 2n-variable dual,
// stopping when the maximal violating pair gap is <= tolerance. Targets that
// are all equal give a constant model with no support vectors. n >= 1.
SvrModel SvrTrain(const std::vector<std::vector<double>>& features, std::span<const double> targets,
                  const SvrParams& params = {}, SvrTrainInfo* info = nullptr);

}  // namespace ciqa

#endif  // CIQA_ARIQA_SVR_H_
