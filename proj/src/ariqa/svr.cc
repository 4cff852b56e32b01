#include "ciqa/ariqa/svr.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace ciqa {
namespace {

constexpr double kTau = 1e-12;

double KernelValue(SvrKernel k, double gamma, std::span<const double> a, std::span<const double> b) {
  if (k == SvrKernel::kLinear) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }
  double d2 = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
  return std::exp(-gamma * d2);
}

}  // namespace

std::string SvrKernelName(SvrKernel k) { return k == SvrKernel::kLinear ? "linear" : "rbf"; }

SvrKernel ParseSvrKernel(const std::string& name) {
  if (name == "rbf") return SvrKernel::kRbf;
  if (name == "linear") return SvrKernel::kLinear;
  throw std::invalid_argument("unknown SVR kernel '" + name + "' (rbf|linear)");
}

double SvrModel::Predict(std::span<const double> x) const {
  if (x.size() != mean.size()) {
    throw std::invalid_argument("SVR expects " + std::to_string(mean.size()) + " features, got " +
                                std::to_string(x.size()));
  }
  std::vector<double> z(x.size());
  for (size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean[j]) / scale[j];
  double f = bias;
  for (size_t i = 0; i < support.size(); ++i) f += coef[i] * KernelValue(kernel, gamma, support[i], z);
  return f;
}

std::vector<double> SvrModel::Predict(const std::vector<std::vector<double>>& rows) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(Predict(r));
  return out;
}

std::string SvrModel::ToJson() const {
  nlohmann::ordered_json j;
  j["format"] = "ciqa-svr";
  j["version"] = 1;
  j["kernel"] = SvrKernelName(kernel);
  j["gamma"] = gamma;
  j["c"] = c;
  j["epsilon"] = epsilon;
  j["mean"] = mean;
  j["scale"] = scale;
  j["bias"] = bias;
  j["coef"] = coef;
  j["support"] = support;
  return j.dump(2) + "\n";
}

SvrModel SvrModel::FromJson(const std::string& text) {
  SvrModel m;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "ciqa-svr" || j.at("version") != 1) throw std::runtime_error("not an SVR model file");
    m.kernel = ParseSvrKernel(j.at("kernel").get<std::string>());
    m.gamma = j.at("gamma").get<double>();
    m.c = j.at("c").get<double>();
    m.epsilon = j.at("epsilon").get<double>();
    m.mean = j.at("mean").get<std::vector<double>>();
    m.scale = j.at("scale").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.coef = j.at("coef").get<std::vector<double>>();
    m.support = j.at("support").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad SVR model JSON: ") + e.what());
  }
  if (m.mean.size() != m.scale.size() || m.coef.size() != m.support.size()) {
    throw std::runtime_error("bad SVR model JSON: inconsistent sizes");
  }
  for (const auto& s : m.support) {
    if (s.size() != m.mean.size()) throw std::runtime_error("bad SVR model JSON: support vector width");
  }
  return m;
}

SvrModel SvrTrain(const std::vector<std::vector<double>>& features, std::span<const double> targets,
                  const SvrParams& params, SvrTrainInfo* info) {
  const size_t n = features.size();
  if (n == 0) throw std::invalid_argument("SVR needs at least one training row");
  if (targets.size() != n) throw std::invalid_argument("SVR: feature rows and targets differ in count");
  const size_t d = features.front().size();
  if (d == 0) throw std::invalid_argument("SVR needs at least one feature");
  for (const auto& row : features) {
    if (row.size() != d) throw std::invalid_argument("SVR: ragged feature matrix");
    for (double v : row) {
      if (!std::isfinite(v)) throw std::invalid_argument("SVR: non-finite feature");
    }
  }
  for (double t : targets) {
    if (!std::isfinite(t)) throw std::invalid_argument("SVR: non-finite target");
  }
  if (!(params.c > 0.0) || !(params.epsilon >= 0.0) || !(params.tolerance > 0.0)) {
    throw std::invalid_argument("SVR: need C > 0, epsilon >= 0, tolerance > 0");
  }

  SvrModel model;
  model.kernel = params.kernel;
  model.gamma = params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(d);
  model.c = params.c;
  model.epsilon = params.epsilon;
  model.mean.assign(d, 0.0);
  model.scale.assign(d, 1.0);
  for (size_t j = 0; j < d; ++j) {
    double m = 0.0;
    for (const auto& row : features) m += row[j];
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (const auto& row : features) ss += (row[j] - m) * (row[j] - m);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    model.mean[j] = m;
    model.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  std::vector<std::vector<double>> z(n, std::vector<double>(d));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < d; ++j) z[i][j] = (features[i][j] - model.mean[j]) / model.scale[j];
  }

  if (info != nullptr) *info = SvrTrainInfo{};
  const bool constant = std::all_of(targets.begin(), targets.end(), [&](double t) { return t == targets[0]; });
  if (constant) {
    model.bias = targets[0];
    if (info != nullptr) {
      info->converged = true;
      info->alpha.assign(n, 0.0);
      info->alpha_star.assign(n, 0.0);
    }
    return model;
  }

  // Kernel matrix over training rows.
  std::vector<double> k(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      const double v = KernelValue(model.kernel, model.gamma, z[i], z[j]);
      k[i * n + j] = v;
      k[j * n + i] = v;
    }
  }
  auto kb = [&](size_t a, size_t b) { return k[(a % n) * n + (b % n)]; };

  // Variables 0..n-1 are alpha (y = +1), n..2n-1 are alpha* (y = -1).
  const size_t m = 2 * n;
  const double c = params.c;
  std::vector<double> alpha(m, 0.0), grad(m);
  std::vector<int> y(m);
  for (size_t i = 0; i < n; ++i) {
    y[i] = 1;
    y[i + n] = -1;
    grad[i] = params.epsilon - targets[i];
    grad[i + n] = params.epsilon + targets[i];
  }

  long long iter = 0;
  double gap = std::numeric_limits<double>::infinity();
  bool converged = false;
  while (iter < params.max_iterations) {
    // Maximal violating index i, then second-order choice of j.
    double gmax = -std::numeric_limits<double>::infinity();
    long long ii = -1;
    for (size_t t = 0; t < m; ++t) {
      if (y[t] == 1) {
        if (alpha[t] < c && -grad[t] >= gmax) {
          gmax = -grad[t];
          ii = static_cast<long long>(t);
        }
      } else if (alpha[t] > 0.0 && grad[t] >= gmax) {
        gmax = grad[t];
        ii = static_cast<long long>(t);
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    long long jj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < m; ++t) {
      double grad_diff;
      if (y[t] == 1) {
        if (!(alpha[t] > 0.0)) continue;
        grad_diff = gmax + grad[t];
        gmax2 = std::max(gmax2, grad[t]);
      } else {
        if (!(alpha[t] < c)) continue;
        grad_diff = gmax - grad[t];
        gmax2 = std::max(gmax2, -grad[t]);
      }
      if (ii < 0 || grad_diff <= 0.0) continue;
      double quad = kb(static_cast<size_t>(ii), static_cast<size_t>(ii)) + kb(t, t) -
                    2.0 * kb(static_cast<size_t>(ii), t);
      if (quad <= 0.0) quad = kTau;
      const double obj = -grad_diff * grad_diff / quad;
      if (obj <= best) {
        best = obj;
        jj = static_cast<long long>(t);
      }
    }
    gap = gmax + gmax2;
    if (gap < params.tolerance || ii < 0 || jj < 0) {
      converged = true;
      break;
    }
    ++iter;

    const size_t i = static_cast<size_t>(ii), j = static_cast<size_t>(jj);
    const double qij = y[i] * y[j] * kb(i, j);
    const double old_i = alpha[i], old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = kb(i, i) + kb(j, j) + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else {
        if (alpha[i] < 0.0) {
          alpha[i] = 0.0;
          alpha[j] = -diff;
        }
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = c + diff;
        }
      }
    } else {
      double quad = kb(i, i) + kb(j, j) - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = sum;
        }
        if (alpha[i] < 0.0) {
          alpha[i] = 0.0;
          alpha[j] = sum;
        }
      }
    }
    const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
    for (size_t t = 0; t < m; ++t) {
      grad[t] += y[t] * (y[i] * kb(t, i) * di + y[j] * kb(t, j) * dj);
    }
  }

  // Bias from free variables, else the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity(), lb = -ub, free_sum = 0.0;
  int free_count = 0;
  for (size_t t = 0; t < m; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho = free_count > 0 ? free_sum / free_count : 0.5 * (ub + lb);
  model.bias = -rho;
  for (size_t i = 0; i < n; ++i) {
    const double coef = alpha[i] - alpha[i + n];
    if (coef != 0.0) {
      model.coef.push_back(coef);
      model.support.push_back(z[i]);
    }
  }
  if (info != nullptr) {
    info->iterations = iter;
    info->kkt_violation = gap;
    info->converged = converged;
    info->alpha.assign(alpha.begin(), alpha.begin() + static_cast<std::ptrdiff_t>(n));
    info->alpha_star.assign(alpha.begin() + static_cast<std::ptrdiff_t>(n), alpha.end());
  }
  return model;
}

}  // namespace ciqa
