#include <array>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "ciqa/ariqa/stimulus.h"
#include "ciqa/ariqa/svr.h"
#include "ciqa/common/csv.h"
#include "ciqa/common/parallel.h"
#include "ciqa/fusion/baseline.h"
#include "ciqa/fusion/features.h"
#include "ciqa/imaging/io.h"
#include "ciqa/metrics/registry.h"
#include "ciqa/subjective/ratings.h"
#include "common.h"

namespace ciqa::cli {
namespace {

constexpr char kBaselineMetric[] = "baseline";

std::vector<std::string> ParseMetrics(const std::string& text) {
  auto names = SplitList(text);
  if (names.empty()) throw UsageError("--metrics is empty");
  for (const auto& n : names) {
    if (n != kBaselineMetric && !IsNativeMetric(n)) {
      std::string known;
      for (const auto& m : NativeMetrics()) known += " " + m.name;
      throw UsageError("unknown metric '" + n + "'; available:" + known + " " + kBaselineMetric);
    }
  }
  return names;
}

struct ScoreOptions {
  std::string manifest;
  std::string metrics = "psnr,ssim,gmsm";
  std::string out;
  std::string layout = "cfiqa";
  FeatureOptions features;
  int jobs = 0;
};

void RunScore(const ScoreOptions& o, RunContext& ctx) {
  if (o.jobs > 0) ctx.jobs = o.jobs;
  const auto metrics = ParseMetrics(o.metrics);
  const Manifest manifest = LoadManifestInput(o.manifest, ctx);
  RegisterFeatureInputs(o.features, ctx);
  const bool ariqa = o.layout == "ariqa";
  const std::string t1 = ariqa ? "ar" : "ref1", t2 = ariqa ? "bg" : "ref2";

  // rows x metrics x 2 targets
  std::vector<std::vector<std::array<double, 2>>> scores(manifest.rows.size(),
                                                          std::vector<std::array<double, 2>>(metrics.size()));
  ParallelFor(manifest.rows.size(), ctx.jobs, [&](size_t i) {
    const ManifestRow& row = manifest.rows[i];
    const std::string stim_path = ResolveManifestPath(o.manifest, row.output);
    const std::string ref_paths[2] = {ResolveManifestPath(o.manifest, row.ref1),
                                      ResolveManifestPath(o.manifest, row.ref2)};
    const Image stim = LoadImage(stim_path);
    for (int t = 0; t < 2; ++t) {
      const Image ref = LoadImage(ref_paths[t]);
      const auto sal = TryLoadSaliency(o.features, ref_paths[t]);
      for (size_t m = 0; m < metrics.size(); ++m) {
        if (metrics[m] == kBaselineMetric) {
          const auto d = UnitNormalize(LoadFeatures(o.features, stim_path));
          const auto r = UnitNormalize(LoadFeatures(o.features, ref_paths[t]));
          scores[i][m][t] = BaselineScore(FeatureDistance(d, r));
        } else {
          scores[i][m][t] = ComputeMetric(metrics[m], ref, stim, sal ? &*sal : nullptr).score;
        }
      }
    }
  });

  EnsureParent(o.out);
  std::ofstream out(o.out, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + o.out);
  WriteCsvRow(out, {"stimulus_id", "metric", "target", "score"});
  for (size_t i = 0; i < manifest.rows.size(); ++i) {
    for (size_t m = 0; m < metrics.size(); ++m) {
      WriteCsvRow(out, {manifest.rows[i].stimulus_id, metrics[m], t1, FormatDouble(scores[i][m][0])});
      WriteCsvRow(out, {manifest.rows[i].stimulus_id, metrics[m], t2, FormatDouble(scores[i][m][1])});
    }
  }
  std::cerr << "scored " << manifest.rows.size() << " stimuli x " << metrics.size() << " metrics\n";
}

struct MosOptions {
  std::string ratings;
  std::string out;
};

void RunMos(const MosOptions& o, RunContext& ctx) {
  ctx.inputs.push_back(o.ratings);
  const RatingsTable table = ReadRatingsCsv(o.ratings);
  const MosPipelineResult r = RunMosPipeline(table);
  EnsureParent(o.out);
  WriteMosCsv(r.mos, o.out);
  std::cerr << "subjects: " << table.subjects().size() << ", rejected: " << r.rejected_subjects.size();
  for (const auto& s : r.rejected_subjects) std::cerr << " " << s;
  std::cerr << "\noutlier ratings flagged: " << r.mask.Total() << ", removed from kept subjects: "
            << r.removed_ratings << "\n";
}

struct VariantOptions {
  std::string manifest;
  std::string metrics = "ssim";
  std::string out;
  std::string svr_model;
  FeatureOptions features;
  int jobs = 0;
};

void RunVariants(const VariantOptions& o, RunContext& ctx) {
  if (o.jobs > 0) ctx.jobs = o.jobs;
  const auto metrics = ParseMetrics(o.metrics);
  for (const auto& m : metrics) {
    if (m == kBaselineMetric) throw UsageError("variants support native metrics only");
  }
  std::optional<SvrModel> svr;
  if (!o.svr_model.empty()) {
    if (metrics.size() != 1) throw UsageError("--svr-model applies to exactly one metric");
    ctx.inputs.push_back(o.svr_model);
    std::ifstream in(o.svr_model);
    if (!in) throw std::runtime_error("cannot read " + o.svr_model);
    std::stringstream ss;
    ss << in.rdbuf();
    svr = SvrModel::FromJson(ss.str());
  }
  const Manifest manifest = LoadManifestInput(o.manifest, ctx);
  RegisterFeatureInputs(o.features, ctx);

  std::vector<std::vector<VariantScores>> scores(manifest.rows.size(), std::vector<VariantScores>(metrics.size()));
  ParallelFor(manifest.rows.size(), ctx.jobs, [&](size_t i) {
    const ManifestRow& row = manifest.rows[i];
    const std::string ar_path = ResolveManifestPath(o.manifest, row.ref1);
    Image ar_ref = LoadImage(ar_path);
    Image ar_dist = ApplyDistortion(ar_ref, row.distortion);
    // The superimposed view is recomposed from its parts so the identity
    // holds exactly rather than up to 8-bit rounding of the stored file.
    const ArStimulus st = ArStimulus::Compose(std::move(ar_ref), std::move(ar_dist),
                                              LoadImage(ResolveManifestPath(o.manifest, row.ref2)), row.lambda);
    const auto sal = TryLoadSaliency(o.features, ar_path);
    for (size_t m = 0; m < metrics.size(); ++m) {
      VariantScores v = ComputeVariantScores(st, metrics[m], sal ? &*sal : nullptr);
      if (svr) v.type3 = svr->Predict(std::vector<double>{v.type3_f1, v.type3_f2});
      scores[i][m] = v;
    }
  });

  EnsureParent(o.out);
  std::ofstream out(o.out, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + o.out);
  std::vector<std::string> header = {"stimulus_id", "metric", "type1", "type2", "type3_f1", "type3_f2"};
  if (svr) header.push_back("type3");
  WriteCsvRow(out, header);
  for (size_t i = 0; i < manifest.rows.size(); ++i) {
    for (size_t m = 0; m < metrics.size(); ++m) {
      const VariantScores& v = scores[i][m];
      std::vector<std::string> fields = {manifest.rows[i].stimulus_id, metrics[m], FormatDouble(v.type1),
                                         FormatDouble(v.type2), FormatDouble(v.type3_f1), FormatDouble(v.type3_f2)};
      if (svr) fields.push_back(FormatDouble(*v.type3));
      WriteCsvRow(out, fields);
    }
  }
  std::cerr << "variant scores for " << manifest.rows.size() << " stimuli\n";
}

}  // namespace

void AddScoreCommands(CLI::App& app, CommandList& commands) {
  {
    auto o = std::make_shared<ScoreOptions>();
    CLI::App* sub = app.add_subcommand("score", "Full-reference scores of every stimulus against both layers");
    sub->add_option("--manifest", o->manifest, "Manifest CSV")->required();
    sub->add_option("--metrics", o->metrics, "Comma-separated metric names")->capture_default_str();
    sub->add_option("--out", o->out, "Output CSV (stimulus_id,metric,target,score)")->required();
    sub->add_option("--layout", o->layout, "Target naming: cfiqa (ref1/ref2) or ariqa (ar/bg)")
        ->check(CLI::IsMember({"cfiqa", "ariqa"}))
        ->capture_default_str();
    AddFeatureOptions(sub, o->features);
    AddJobsOption(sub, o->jobs);
    commands.push_back({sub, [o](RunContext& ctx) { RunScore(*o, ctx); }});
  }
  {
    auto o = std::make_shared<MosOptions>();
    CLI::App* sub = app.add_subcommand("mos", "Outlier screening, subject rejection and MOS from raw ratings");
    sub->add_option("--ratings", o->ratings, "CSV subject_id,stimulus_id,rating")->required();
    sub->add_option("--out", o->out, "Output CSV stimulus_id,mos,std,n_valid")->required();
    commands.push_back({sub, [o](RunContext& ctx) { RunMos(*o, ctx); }});
  }
  {
    auto o = std::make_shared<VariantOptions>();
    CLI::App* sub = app.add_subcommand("ariqa-variants", "Type I/II/III benchmark inputs for AR stimuli");
    sub->add_option("--manifest", o->manifest, "AR manifest CSV")->required();
    sub->add_option("--metrics", o->metrics, "Comma-separated native metric names")->capture_default_str();
    sub->add_option("--out", o->out, "Output CSV")->required();
    sub->add_option("--svr-model", o->svr_model, "Trained SVR (JSON) to fill the type3 column");
    AddFeatureOptions(sub, o->features);
    AddJobsOption(sub, o->jobs);
    commands.push_back({sub, [o](RunContext& ctx) { RunVariants(*o, ctx); }});
  }
}

}  // namespace ciqa::cli
