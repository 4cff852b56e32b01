#include "ciqa/eval/logistic.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ciqa/common/rng.h"

namespace ciqa {
namespace {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// 1/2 - 1/(1 + exp(z)) == sigmoid(z) - 1/2.
double Curve(const Vec5& b, double q) {
  return b[0] * (Sigmoid(b[1] * (q - b[2])) - 0.5) + b[3] * q + b[4];
}

double Sse(const Vec5& b, const std::vector<double>& q, const std::vector<double>& m) {
  double s = 0.0;
  for (size_t i = 0; i < q.size(); ++i) {
    const double r = Curve(b, q[i]) - m[i];
    s += r * r;
  }
  return s;
}

// Exact least squares for the linear coefficients given b[1], b[2].
void LinearRefit(Vec5& b, const std::vector<double>& q, const std::vector<double>& m) {
  const Eigen::Index n = static_cast<Eigen::Index>(q.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = Sigmoid(b[1] * (q[i] - b[2])) - 0.5;
    a(i, 1) = q[i];
    a(i, 2) = 1.0;
    y[i] = m[i];
  }
  const Eigen::Vector3d x = a.completeOrthogonalDecomposition().solve(y);
  if (x.allFinite()) {
    b[0] = x[0];
    b[3] = x[1];
    b[4] = x[2];
  }
}

struct LmResult {
  Vec5 beta;
  double sse;
  bool converged;
};

LmResult LevenbergMarquardt(Vec5 b, const std::vector<double>& q, const std::vector<double>& m,
                            int max_iterations) {
  const size_t n = q.size();
  double sse = Sse(b, q, m);
  double damping = 1e-3;
  bool converged = false;
  for (int it = 0; it < max_iterations; ++it) {
    Mat5 jtj = Mat5::Zero();
    Vec5 jtr = Vec5::Zero();
    for (size_t i = 0; i < n; ++i) {
      const double z = b[1] * (q[i] - b[2]);
      const double s = Sigmoid(z);
      const double ds = s * (1.0 - s);
      Vec5 j;
      j << s - 0.5, b[0] * ds * (q[i] - b[2]), -b[0] * ds * b[1], q[i], 1.0;
      const double r = Curve(b, q[i]) - m[i];
      jtj.noalias() += j * j.transpose();
      jtr += j * r;
    }
    if (jtr.cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + sse)) {
      converged = true;
      break;
    }
    bool accepted = false;
    while (damping < 1e16) {
      Mat5 lhs = jtj;
      for (int k = 0; k < 5; ++k) lhs(k, k) += damping * std::max(jtj(k, k), 1e-12);
      const Vec5 step = lhs.ldlt().solve(-jtr);
      if (!step.allFinite()) {
        damping *= 10.0;
        continue;
      }
      const Vec5 trial = b + step;
      const double trial_sse = Sse(trial, q, m);
      if (std::isfinite(trial_sse) && trial_sse <= sse) {
        const double rel_drop = (sse - trial_sse) / std::max(sse, 1e-300);
        const double rel_step = step.norm() / (b.norm() + 1e-12);
        b = trial;
        sse = trial_sse;
        damping = std::max(damping * 0.1, 1e-12);
        accepted = true;
        if (rel_step < 1e-12 || rel_drop < 1e-15 || sse < 1e-28) converged = true;
        break;
      }
      damping *= 10.0;
    }
    if (!accepted) {
      // No descent direction at any damping: a stationary point to working precision.
      converged = true;
      break;
    }
    if (converged) break;
  }
  return {b, sse, converged};
}

}  // namespace

double LogisticParams::operator()(double q) const {
  return beta1 * (0.5 - 1.0 / (1.0 + std::exp(beta2 * (q - beta3)))) + beta4 * q + beta5;
}

std::vector<double> LogisticParams::Apply(std::span<const double> q) const {
  std::vector<double> out(q.size());
  for (size_t i = 0; i < q.size(); ++i) out[i] = (*this)(q[i]);
  return out;
}

LogisticFit FitLogistic(std::span<const double> q, std::span<const double> mos,
                        const LogisticFitOptions& options) {
  if (q.size() != mos.size()) throw std::invalid_argument("fit_logistic: length mismatch");
  if (q.size() < 5) throw std::invalid_argument("fit_logistic: need at least 5 points");
  if (options.restarts < 0) throw std::invalid_argument("fit_logistic: negative restart count");
  const size_t n = q.size();
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(q[i]) || !std::isfinite(mos[i])) {
      throw std::invalid_argument("fit_logistic: non-finite input");
    }
  }

  auto mean_std = [n](std::span<const double> v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(ss / static_cast<double>(n - 1))};
  };
  const auto [mq, sq] = mean_std(q);
  auto [mm, sm] = mean_std(mos);
  if (!(sq > 0.0)) throw std::invalid_argument("fit_logistic: q is constant");
  if (!(sm > 0.0)) sm = 1.0;

  std::vector<double> qs(n), ms(n);
  for (size_t i = 0; i < n; ++i) {
    qs[i] = (q[i] - mq) / sq;
    ms[i] = (mos[i] - mm) / sm;
  }
  double cov = 0.0;
  for (size_t i = 0; i < n; ++i) cov += qs[i] * ms[i];
  const double direction = cov < 0.0 ? -1.0 : 1.0;
  const auto [mlo, mhi] = std::minmax_element(ms.begin(), ms.end());
  const double range = *mhi - *mlo;

  Rng rng(options.seed);
  Vec5 best_beta = Vec5::Zero();
  double best_sse = std::numeric_limits<double>::infinity();
  bool any_converged = false;
  for (int start = 0; start <= options.restarts; ++start) {
    Vec5 b;
    if (start == 0) {
      b << range, 4.0 * direction, 0.0, 1e-3 * direction, 0.0;
    } else {
      const double slope = std::exp(rng.Uniform(std::log(0.2), std::log(20.0)));
      b << range * rng.Uniform(0.5, 2.0), slope * direction, rng.Uniform(-1.5, 1.5),
          rng.Uniform(-0.1, 0.1), rng.Uniform(-0.5, 0.5);
    }
    LmResult r = LevenbergMarquardt(b, qs, ms, options.max_iterations);
    LinearRefit(r.beta, qs, ms);
    const double sse = Sse(r.beta, qs, ms);
    any_converged = any_converged || r.converged;
    if (sse < best_sse) {
      best_sse = sse;
      best_beta = r.beta;
    }
  }

  // Undo the standardization: Q~ = (Q - mq)/sq, M = sm M~ + mm.
  LogisticFit fit;
  fit.params.beta1 = sm * best_beta[0];
  fit.params.beta2 = best_beta[1] / sq;
  fit.params.beta3 = mq + sq * best_beta[2];
  fit.params.beta4 = sm * best_beta[3] / sq;
  fit.params.beta5 = sm * (best_beta[4] - best_beta[3] * mq / sq) + mm;
  fit.converged = any_converged;
  double sse = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = fit.params(q[i]) - mos[i];
    sse += r * r;
  }
  fit.sse = sse;
  return fit;
}

}  // namespace ciqa
