#include <iostream>
#include <memory>

#include "ciqa/eval/report.h"
#include "common.h"

namespace ciqa::cli {
namespace {

struct EvalCliOptions {
  std::string scores;
  std::string mos;
  std::string out;
  std::string table;
  std::string ids;
  int resamples = 1000;
  bool no_significance = false;
  EvalOptions eval;
};

void RunEvaluation(EvalCliOptions o, RunContext& ctx, bool roc) {
  ctx.seed = o.eval.seed;
  ctx.inputs.push_back(o.scores);
  ctx.inputs.push_back(o.mos);
  std::vector<std::string> keep;
  if (!o.ids.empty()) {
    ctx.inputs.push_back(o.ids);
    keep = ReadIdList(o.ids);
  }
  const MosTable mos = ReadMosCsv(o.mos);
  const ScoreTable table = LoadScoreTable(o.scores, mos, keep);
  std::vector<MosEntry> entries;
  entries.reserve(table.units.size());
  for (const auto& u : table.units) entries.push_back(mos.Find(u));
  std::vector<MetricScores> metrics;
  for (const auto& c : table.columns) metrics.push_back({c.name, c.higher_is_better, c.values});

  o.eval.roc = roc;
  o.eval.significance = roc && !o.no_significance;
  o.eval.resamples = o.resamples;
  o.eval.logistic.seed = o.eval.seed;
  const EvalReport report = BuildEvalReport(entries, metrics, o.eval);
  WriteTextFile(o.out, ReportToJson(report));
  const std::string rendered = RenderReportTable(report);
  if (!o.table.empty()) WriteTextFile(o.table, rendered);
  std::cout << rendered;
}

CLI::App* AddCommon(CLI::App& app, const char* name, const char* help, EvalCliOptions& o) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--scores", o.scores, "Score CSV (long or variants format)")->required();
  sub->add_option("--mos", o.mos, "MOS CSV")->required();
  sub->add_option("--out", o.out, "Report JSON")->required();
  sub->add_option("--table", o.table, "Also write the rendered table here");
  sub->add_option("--ids", o.ids, "CSV or text file of stimulus ids to keep (e.g. a held-out fold)");
  AddSeedOption(sub, o.eval.seed);
  return sub;
}

}  // namespace

void AddEvalCommands(CLI::App& app, CommandList& commands) {
  {
    auto o = std::make_shared<EvalCliOptions>();
    CLI::App* sub = AddCommon(app, "evaluate", "SRCC, KRCC, PLCC and RMSE after logistic mapping", *o);
    sub->add_option("--restarts", o->eval.logistic.restarts, "Logistic fit restarts")->capture_default_str();
    commands.push_back({sub, [o](RunContext& ctx) { RunEvaluation(*o, ctx, false); }});
  }
  {
    auto o = std::make_shared<EvalCliOptions>();
    CLI::App* sub = AddCommon(app, "roc", "Different/similar and better/worse ROC analysis with correlations", *o);
    sub->add_option("--resamples", o->resamples, "Bootstrap resamples for AUC comparison")
        ->check(CLI::Range(100, 1000000))
        ->capture_default_str();
    sub->add_option("--restarts", o->eval.logistic.restarts, "Logistic fit restarts")->capture_default_str();
    sub->add_flag("--no-significance", o->no_significance, "Skip pairwise AUC significance tests");
    commands.push_back({sub, [o](RunContext& ctx) { RunEvaluation(*o, ctx, true); }});
  }
}

}  // namespace ciqa::cli
