#ifndef CIQA_EVAL_REPORT_H_
#define CIQA_EVAL_REPORT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ciqa/eval/logistic.h"
#include "ciqa/eval/roc.h"
#include "ciqa/subjective/mos.h"

namespace ciqa {

struct CorrelationSummary {
  // Rank correlations use Q negated for lower-is-better metrics, so a good
  // metric scores positive either way. PLCC and RMSE are taken after the
  // logistic mapping.
  double srcc = 0.0;
  double krcc = 0.0;
  double plcc = 0.0;
  double rmse = 0.0;
};

struct MetricPerformance {
  CorrelationSummary corr;
  LogisticFit logistic;
};

MetricPerformance EvaluateMetric(std::span<const double> q, std::span<const double> mos,
                                 bool higher_is_better, const LogisticFitOptions& fit = {});

CorrelationSummary Average(std::span<const CorrelationSummary> items);

struct MetricScores {
  std::string name;
  bool higher_is_better = true;
  std::vector<double> scores;  // aligned with the MOS entries
};

struct RocSummary {
  double auc = 0.0;
  bool defined = false;
  size_t positives = 0;
  size_t negatives = 0;
};

struct MetricReport {
  std::string name;
  bool higher_is_better = true;
  MetricPerformance performance;
  RocSummary different_similar;
  RocSummary better_worse;
};

struct EvalOptions {
  uint64_t seed = 0;
  int resamples = 1000;
  bool roc = true;
  bool significance = true;
  LogisticFitOptions logistic;
};

struct EvalReport {
  size_t num_stimuli = 0;
  std::vector<MetricReport> metrics;
  // verdict[i][j]: metric i against metric j; empty when not computed.
  std::vector<std::vector<std::string>> significance_different_similar;
  std::vector<std::vector<std::string>> significance_better_worse;
};

EvalReport BuildEvalReport(std::span<const MosEntry> mos, std::span<const MetricScores> metrics,
                           const EvalOptions& options = {});

std::string ReportToJson(const EvalReport& report);
// SRCC/KRCC/PLCC/RMSE table with a PWRC column marked n/a, then AUCs.
std::string RenderReportTable(const EvalReport& report);

}  // namespace ciqa

#endif  // CIQA_EVAL_REPORT_H_
