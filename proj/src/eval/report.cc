#include "ciqa/eval/report.h"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ciqa/eval/correlation.h"
#include "json.hpp"

namespace ciqa {
namespace {

RocSummary Summarize(const RocAnalysis& roc) {
  return {roc.auc, roc.defined, roc.positives, roc.negatives};
}

nlohmann::ordered_json Number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string Cell(double v, int precision) {
  if (!std::isfinite(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace

MetricPerformance EvaluateMetric(std::span<const double> q, std::span<const double> mos,
                                 bool higher_is_better, const LogisticFitOptions& fit) {
  MetricPerformance out;
  std::vector<double> oriented(q.begin(), q.end());
  if (!higher_is_better) {
    for (double& v : oriented) v = -v;
  }
  out.corr.srcc = Srcc(oriented, mos);
  out.corr.krcc = Krcc(oriented, mos);
  out.logistic = FitLogistic(q, mos, fit);
  const auto mapped = out.logistic.params.Apply(q);
  out.corr.plcc = Plcc(mapped, mos);
  out.corr.rmse = Rmse(mapped, mos);
  return out;
}

CorrelationSummary Average(std::span<const CorrelationSummary> items) {
  if (items.empty()) throw std::invalid_argument("average of zero reports");
  CorrelationSummary s;
  for (const auto& c : items) {
    s.srcc += c.srcc;
    s.krcc += c.krcc;
    s.plcc += c.plcc;
    s.rmse += c.rmse;
  }
  const double n = static_cast<double>(items.size());
  s.srcc /= n;
  s.krcc /= n;
  s.plcc /= n;
  s.rmse /= n;
  return s;
}

EvalReport BuildEvalReport(std::span<const MosEntry> mos, std::span<const MetricScores> metrics,
                           const EvalOptions& options) {
  EvalReport report;
  report.num_stimuli = mos.size();
  std::vector<double> mos_values;
  for (const auto& e : mos) mos_values.push_back(e.mos);

  std::vector<RocAnalysis> ds, bw;
  for (const auto& m : metrics) {
    if (m.scores.size() != mos.size()) {
      throw std::invalid_argument("metric '" + m.name + "' has " + std::to_string(m.scores.size()) +
                                  " scores for " + std::to_string(mos.size()) + " stimuli");
    }
    MetricReport r;
    r.name = m.name;
    r.higher_is_better = m.higher_is_better;
    r.performance = EvaluateMetric(m.scores, mos_values, m.higher_is_better, options.logistic);
    if (options.roc) {
      ds.push_back(RocDifferentSimilar(mos, m.scores));
      bw.push_back(RocBetterWorse(mos, m.scores, m.higher_is_better));
      r.different_similar = Summarize(ds.back());
      r.better_worse = Summarize(bw.back());
    }
    report.metrics.push_back(std::move(r));
  }

  if (options.roc && options.significance && metrics.size() > 1) {
    const size_t k = metrics.size();
    auto matrix = [&](const std::vector<RocAnalysis>& rocs) {
      std::vector<std::vector<std::string>> v(k, std::vector<std::string>(k, "-"));
      for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j) {
          if (i == j || !rocs[i].defined) continue;
          v[i][j] = VerdictName(AucSignificance(rocs[i], rocs[j], options.resamples, options.seed).verdict);
        }
      }
      return v;
    };
    report.significance_different_similar = matrix(ds);
    report.significance_better_worse = matrix(bw);
  }
  return report;
}

std::string ReportToJson(const EvalReport& report) {
  nlohmann::ordered_json root;
  root["num_stimuli"] = report.num_stimuli;
  auto& metrics = root["metrics"] = nlohmann::ordered_json::array();
  for (const auto& m : report.metrics) {
    const auto& p = m.performance;
    nlohmann::ordered_json j;
    j["name"] = m.name;
    j["higher_is_better"] = m.higher_is_better;
    j["srcc"] = Number(p.corr.srcc);
    j["krcc"] = Number(p.corr.krcc);
    j["plcc"] = Number(p.corr.plcc);
    j["rmse"] = Number(p.corr.rmse);
    j["pwrc"] = nullptr;
    j["logistic"] = {{"beta1", Number(p.logistic.params.beta1)},
                     {"beta2", Number(p.logistic.params.beta2)},
                     {"beta3", Number(p.logistic.params.beta3)},
                     {"beta4", Number(p.logistic.params.beta4)},
                     {"beta5", Number(p.logistic.params.beta5)},
                     {"sse", Number(p.logistic.sse)},
                     {"converged", p.logistic.converged}};
    auto roc = [](const RocSummary& s) {
      return nlohmann::ordered_json{{"auc", Number(s.defined ? s.auc : NAN)},
                                    {"defined", s.defined},
                                    {"positives", s.positives},
                                    {"negatives", s.negatives}};
    };
    j["different_similar"] = roc(m.different_similar);
    j["better_worse"] = roc(m.better_worse);
    metrics.push_back(std::move(j));
  }
  if (!report.significance_different_similar.empty()) {
    root["significance"] = {{"different_similar", report.significance_different_similar},
                            {"better_worse", report.significance_better_worse}};
  }
  return root.dump(2) + "\n";
}

std::string RenderReportTable(const EvalReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %8s %8s %8s %8s %6s %8s %8s\n", "metric", "SRCC", "KRCC",
                "PLCC", "RMSE", "PWRC", "AUC-DS", "AUC-BW");
  out << line;
  for (const auto& m : report.metrics) {
    const auto& c = m.performance.corr;
    std::snprintf(line, sizeof line, "%-16s %8s %8s %8s %8s %6s %8s %8s\n", m.name.c_str(),
                  Cell(c.srcc, 4).c_str(), Cell(c.krcc, 4).c_str(), Cell(c.plcc, 4).c_str(),
                  Cell(c.rmse, 4).c_str(), "n/a",
                  Cell(m.different_similar.defined ? m.different_similar.auc : NAN, 4).c_str(),
                  Cell(m.better_worse.defined ? m.better_worse.auc : NAN, 4).c_str());
    out << line;
  }
  return out.str();
}

}  // namespace ciqa
