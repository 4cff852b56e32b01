#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "ciqa/ariqa/crossval.h"
#include "ciqa/ariqa/model.h"
#include "ciqa/common/csv.h"
#include "ciqa/common/parallel.h"
#include "ciqa/fusion/train.h"
#include "common.h"
#include "json.hpp"

namespace ciqa::cli {
namespace {

void AddTrainOptions(CLI::App* sub, TrainConfig& cfg) {
  sub->add_option("--lr", cfg.lr, "Adam learning rate")->capture_default_str();
  sub->add_option("--epochs-flat", cfg.epochs_flat, "Epochs at the full rate")->capture_default_str();
  sub->add_option("--epochs-decay", cfg.epochs_decay, "Epochs of linear decay to 0")->capture_default_str();
  sub->add_option("--batch", cfg.batch, "Batch size")->capture_default_str();
  sub->add_option("--gamma", cfg.gamma, "Weight of the ranking loss")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "Seed for initialization, shuffling and splits")->capture_default_str();
}

std::vector<int> Channels(const FeatureStack& s) {
  std::vector<int> c;
  for (const auto& t : s.layers) c.push_back(t.channels);
  return c;
}

void WriteHistory(const std::string& path, const TrainHistory& h) {
  if (path.empty()) return;
  EnsureParent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  WriteCsvRow(out, {"epoch", "mean_loss"});
  for (size_t e = 0; e < h.epoch_loss.size(); ++e) {
    WriteCsvRow(out, {std::to_string(e + 1), FormatDouble(h.epoch_loss[e])});
  }
}

// Features and saliency for the three images of a confusing stimulus.
struct StimulusFeatures {
  FeatureStack dist, ref1, ref2;
  std::optional<SaliencyMap> sal1, sal2;
};

StimulusFeatures LoadStimulusFeatures(const FeatureOptions& f, const std::string& manifest_path,
                                      const ManifestRow& row) {
  StimulusFeatures s;
  const std::string r1 = ResolveManifestPath(manifest_path, row.ref1);
  const std::string r2 = ResolveManifestPath(manifest_path, row.ref2);
  s.dist = LoadFeatures(f, ResolveManifestPath(manifest_path, row.output));
  s.ref1 = LoadFeatures(f, r1);
  s.ref2 = LoadFeatures(f, r2);
  const Tensor3& base = s.dist.layers.front();
  s.sal1 = LoadSaliency(f, r1, base.width, base.height);
  s.sal2 = LoadSaliency(f, r2, base.width, base.height);
  return s;
}

struct TrainCfiqaOptions {
  std::string manifest;
  std::string mos;
  std::string out;
  std::string fold = "all";
  std::string heldout_out;
  std::string history_out;
  FeatureOptions features;
  TrainConfig cfg;
  int jobs = 0;
};

void RunTrainCfiqa(TrainCfiqaOptions o, RunContext& ctx) {
  ctx.seed = o.cfg.seed;
  if (o.jobs > 0) ctx.jobs = o.jobs;
  o.cfg.jobs = ctx.jobs;
  const Manifest manifest = LoadManifestInput(o.manifest, ctx);
  ctx.inputs.push_back(o.mos);
  RegisterFeatureInputs(o.features, ctx);
  const MosTable mos = ReadMosCsv(o.mos);

  std::vector<size_t> train(manifest.rows.size()), heldout;
  std::iota(train.begin(), train.end(), 0);
  if (o.fold != "all") {
    auto [a, b] = TwoFoldSplit(manifest.rows.size(), o.cfg.seed);
    train = o.fold == "1" ? a : b;
    heldout = o.fold == "1" ? b : a;
  }
  if (train.empty()) throw std::runtime_error("no training stimuli");

  std::vector<CfiqaSample> samples(train.size());
  std::vector<std::string> extractor(train.size());
  std::vector<std::vector<int>> channels(train.size());
  ParallelFor(train.size(), ctx.jobs, [&](size_t k) {
    const ManifestRow& row = manifest.rows[train[k]];
    const StimulusFeatures s = LoadStimulusFeatures(o.features, o.manifest, row);
    extractor[k] = s.dist.extractor;
    channels[k] = Channels(s.dist);
    samples[k] = MakeCfiqaSample(s.dist, s.ref1, s.ref2, *s.sal1, *s.sal2,
                                 LayerMos(mos, row.stimulus_id, "ref1"), LayerMos(mos, row.stimulus_id, "ref2"));
  });
  for (size_t k = 1; k < train.size(); ++k) {
    if (extractor[k] != extractor[0] || channels[k] != channels[0]) {
      throw std::runtime_error("stimulus " + manifest.rows[train[k]].stimulus_id +
                               " has features from a different extractor or layout");
    }
  }
  TrainHistory history;
  const FusionParams init = FusionParams::Initialize(extractor[0], channels[0], o.cfg.seed);
  const FusionParams params = TrainCfiqa(samples, o.cfg, init, &history);
  EnsureParent(o.out);
  SaveFusionParams(params, o.out);
  WriteHistory(o.history_out, history);
  if (!o.heldout_out.empty()) {
    std::string text = "stimulus_id\n";
    for (size_t i : heldout) text += manifest.rows[i].stimulus_id + "\n";
    WriteTextFile(o.heldout_out, text);
  }
  std::cerr << "trained on " << train.size() << " stimuli; final epoch loss "
            << (history.epoch_loss.empty() ? 0.0 : history.epoch_loss.back()) << "\n";
}

struct PredictOptions {
  std::string manifest;
  std::string model;
  std::string out;
  FeatureOptions features;
  int jobs = 0;
};

void RunPredictCfiqa(const PredictOptions& o, RunContext& ctx) {
  if (o.jobs > 0) ctx.jobs = o.jobs;
  const Manifest manifest = LoadManifestInput(o.manifest, ctx);
  ctx.inputs.push_back(o.model);
  RegisterFeatureInputs(o.features, ctx);
  const FusionParams params = LoadFusionParams(o.model);
  std::vector<CfiqaPrediction> pred(manifest.rows.size());
  ParallelFor(manifest.rows.size(), ctx.jobs, [&](size_t i) {
    const StimulusFeatures s = LoadStimulusFeatures(o.features, o.manifest, manifest.rows[i]);
    pred[i] = PredictCfiqa(s.dist, s.ref1, s.ref2, *s.sal1, *s.sal2, params);
  });
  EnsureParent(o.out);
  std::ofstream out(o.out, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + o.out);
  WriteCsvRow(out, {"stimulus_id", "metric", "target", "score"});
  for (size_t i = 0; i < manifest.rows.size(); ++i) {
    WriteCsvRow(out, {manifest.rows[i].stimulus_id, "cfiqa", "ref1", FormatDouble(pred[i].s1)});
    WriteCsvRow(out, {manifest.rows[i].stimulus_id, "cfiqa", "ref2", FormatDouble(pred[i].s2)});
  }
}

struct SvrCvCliOptions {
  std::string variants;
  std::string mos;
  std::string metric = "ssim";
  std::string out;
  std::string model_out;
  std::string kernel = "rbf";
  bool by_scene = false;
  SvrCvOptions cv;
};

void RunSvrCv(SvrCvCliOptions o, RunContext& ctx) {
  ctx.seed = o.cv.seed;
  ctx.inputs.push_back(o.variants);
  ctx.inputs.push_back(o.mos);
  o.cv.svr.kernel = ParseSvrKernel(o.kernel);
  const MosTable mos = ReadMosCsv(o.mos);
  const CsvTable csv = ReadCsv(o.variants);
  const size_t id_col = csv.Column("stimulus_id"), metric_col = csv.Column("metric");
  const size_t f1_col = csv.Column("type3_f1"), f2_col = csv.Column("type3_f2");
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  std::vector<int> groups;
  std::map<std::string, int> scene_ids;
  for (const auto& row : csv.rows) {
    if (row[metric_col] != o.metric) continue;
    x.push_back({ParseDouble(row[f1_col], "type3_f1"), ParseDouble(row[f2_col], "type3_f2")});
    y.push_back(mos.Find(row[id_col]).mos);
    // Stimulus ids of AR sets start with the scenario token ("s01_...").
    const std::string scene = row[id_col].substr(0, row[id_col].find('_'));
    groups.push_back(scene_ids.emplace(scene, static_cast<int>(scene_ids.size())).first->second);
  }
  if (x.empty()) throw std::runtime_error("no rows for metric '" + o.metric + "' in " + o.variants);
  const SvrCvResult r = SvrCrossval(x, y, o.cv, o.by_scene ? std::span<const int>(groups) : std::span<const int>());

  nlohmann::ordered_json j;
  j["metric"] = o.metric;
  j["folds"] = r.per_fold.size() + r.skipped_folds;
  j["skipped_folds"] = r.skipped_folds;
  j["train_ratio"] = o.cv.train_ratio;
  j["scene_disjoint"] = o.by_scene;
  j["mean"] = {{"srcc", r.mean.srcc}, {"krcc", r.mean.krcc}, {"plcc", r.mean.plcc}, {"rmse", r.mean.rmse}};
  auto& folds = j["per_fold"] = nlohmann::ordered_json::array();
  for (const auto& c : r.per_fold) folds.push_back({{"srcc", c.srcc}, {"krcc", c.krcc}, {"plcc", c.plcc}, {"rmse", c.rmse}});
  WriteTextFile(o.out, j.dump(2) + "\n");
  if (!o.model_out.empty()) WriteTextFile(o.model_out, SvrTrain(x, y, o.cv.svr).ToJson());
  std::cerr << "mean held-out SRCC " << r.mean.srcc << " over " << r.per_fold.size() << " folds\n";
}

struct TrainAriqaOptions {
  std::string manifest;
  std::string mos;
  std::string out;
  std::string cv_out;
  std::string history_out;
  int repeats = 5;
  size_t train_scenes = 0;
  FeatureOptions features;
  TrainConfig cfg;
  int jobs = 0;
};

void RunTrainAriqa(TrainAriqaOptions o, RunContext& ctx) {
  ctx.seed = o.cfg.seed;
  if (o.jobs > 0) ctx.jobs = o.jobs;
  o.cfg.jobs = ctx.jobs;
  const Manifest manifest = LoadManifestInput(o.manifest, ctx);
  ctx.inputs.push_back(o.mos);
  RegisterFeatureInputs(o.features, ctx);
  const MosTable mos = ReadMosCsv(o.mos);
  const std::vector<int> scenes = manifest.SceneIds();

  std::vector<AriqaItem> items(manifest.rows.size());
  std::vector<std::string> extractor(items.size());
  std::vector<std::vector<int>> channels(items.size());
  ParallelFor(items.size(), ctx.jobs, [&](size_t i) {
    const ManifestRow& row = manifest.rows[i];
    const std::string ar = ResolveManifestPath(o.manifest, row.ref1);
    const std::string bg = ResolveManifestPath(o.manifest, row.ref2);
    const FeatureStack s = LoadFeatures(o.features, ResolveManifestPath(o.manifest, row.output));
    const Tensor3& base = s.layers.front();
    items[i] = MakeAriqaItem(s, LoadFeatures(o.features, ar), LoadFeatures(o.features, bg),
                             LoadSaliency(o.features, ar, base.width, base.height),
                             LoadSaliency(o.features, bg, base.width, base.height), mos.Find(row.stimulus_id).mos,
                             scenes[i]);
    extractor[i] = s.extractor;
    channels[i] = Channels(s);
  });
  for (size_t i = 1; i < items.size(); ++i) {
    if (extractor[i] != extractor[0] || channels[i] != channels[0]) {
      throw std::runtime_error("stimulus " + manifest.rows[i].stimulus_id +
                               " has features from a different extractor or layout");
    }
  }

  if (!o.cv_out.empty()) {
    AriqaCvOptions cv;
    cv.repeats = o.repeats;
    cv.train_scenes = o.train_scenes;
    cv.seed = o.cfg.seed;
    cv.init_seed = o.cfg.seed;
    const AriqaCvResult r = AriqaCrossval(items, extractor[0], o.cfg, cv);
    nlohmann::ordered_json j;
    j["repeats"] = r.per_repeat.size();
    j["mean"] = {{"srcc", r.mean.srcc}, {"krcc", r.mean.krcc}, {"plcc", r.mean.plcc}, {"rmse", r.mean.rmse}};
    auto& reps = j["per_repeat"] = nlohmann::ordered_json::array();
    for (size_t k = 0; k < r.per_repeat.size(); ++k) {
      const auto& c = r.per_repeat[k];
      std::vector<std::string> test_ids;
      for (size_t i : r.splits[k].test) test_ids.push_back(manifest.rows[i].stimulus_id);
      reps.push_back({{"srcc", c.srcc}, {"krcc", c.krcc}, {"plcc", c.plcc}, {"rmse", c.rmse}, {"test", test_ids}});
    }
    WriteTextFile(o.cv_out, j.dump(2) + "\n");
    std::cerr << "scene-disjoint mean SRCC " << r.mean.srcc << " over " << r.per_repeat.size() << " repeats\n";
  }

  std::vector<size_t> all(items.size());
  std::iota(all.begin(), all.end(), 0);
  TrainHistory history;
  const FusionParams params =
      TrainAriqa(items, all, o.cfg, FusionParams::Initialize(extractor[0], channels[0], o.cfg.seed), &history);
  EnsureParent(o.out);
  SaveFusionParams(params, o.out);
  WriteHistory(o.history_out, history);
}

}  // namespace

void AddModelCommands(CLI::App& app, CommandList& commands) {
  {
    auto o = std::make_shared<TrainCfiqaOptions>();
    CLI::App* sub = app.add_subcommand("train-cfiqa", "Train the attention fusion model on confusing images");
    sub->add_option("--manifest", o->manifest, "Manifest CSV")->required();
    sub->add_option("--mos", o->mos, "MOS CSV with <id>/ref1 and <id>/ref2 rows (or plain <id>)")->required();
    sub->add_option("--out", o->out, "Model file to write")->required();
    sub->add_option("--fold", o->fold, "Train on half 1 or 2 of a seeded two-fold split, or all")
        ->check(CLI::IsMember({"all", "1", "2"}))
        ->capture_default_str();
    sub->add_option("--heldout-out", o->heldout_out, "Write the held-out stimulus ids here");
    sub->add_option("--history-out", o->history_out, "Write per-epoch mean loss CSV here");
    AddFeatureOptions(sub, o->features);
    AddTrainOptions(sub, o->cfg);
    AddJobsOption(sub, o->jobs);
    commands.push_back({sub, [o](RunContext& ctx) { RunTrainCfiqa(*o, ctx); }});
  }
  {
    auto o = std::make_shared<PredictOptions>();
    CLI::App* sub = app.add_subcommand("predict-cfiqa", "Per-layer distances s1, s2 from a trained model");
    sub->add_option("--manifest", o->manifest, "Manifest CSV")->required();
    sub->add_option("--model", o->model, "Model file")->required();
    sub->add_option("--out", o->out, "Output CSV (stimulus_id,metric,target,score)")->required();
    AddFeatureOptions(sub, o->features);
    AddJobsOption(sub, o->jobs);
    commands.push_back({sub, [o](RunContext& ctx) { RunPredictCfiqa(*o, ctx); }});
  }
  {
    auto o = std::make_shared<SvrCvCliOptions>();
    CLI::App* sub = app.add_subcommand("svr-cv", "Repeated 4:1 cross-validation of SVR fusion (Type III)");
    sub->add_option("--variants", o->variants, "Variants CSV from ariqa-variants")->required();
    sub->add_option("--mos", o->mos, "MOS CSV")->required();
    sub->add_option("--metric", o->metric, "Metric whose type3 features are fused")->capture_default_str();
    sub->add_option("--out", o->out, "Report JSON")->required();
    sub->add_option("--model-out", o->model_out, "Also fit on all rows and save the SVR here");
    sub->add_option("--folds", o->cv.folds, "Number of random splits")->capture_default_str();
    sub->add_option("--train-ratio", o->cv.train_ratio, "Training share of each split")->capture_default_str();
    sub->add_option("--kernel", o->kernel, "rbf or linear")->capture_default_str();
    sub->add_option("--c", o->cv.svr.c, "Box constraint C")->capture_default_str();
    sub->add_option("--epsilon", o->cv.svr.epsilon, "Tube half-width")->capture_default_str();
    sub->add_option("--rbf-gamma", o->cv.svr.gamma, "RBF width (0 = 1 / features)")->capture_default_str();
    sub->add_flag("--by-scene", o->by_scene, "Split by scenario so no scene is on both sides");
    AddSeedOption(sub, o->cv.seed);
    commands.push_back({sub, [o](RunContext& ctx) { RunSvrCv(*o, ctx); }});
  }
  {
    auto o = std::make_shared<TrainAriqaOptions>();
    CLI::App* sub = app.add_subcommand("train-ariqa", "Train the two-pathway AR model");
    sub->add_option("--manifest", o->manifest, "AR manifest CSV")->required();
    sub->add_option("--mos", o->mos, "MOS CSV keyed by stimulus id")->required();
    sub->add_option("--out", o->out, "Model file trained on every stimulus")->required();
    sub->add_option("--cv-out", o->cv_out, "Also run scene-disjoint cross-validation and write its report");
    sub->add_option("--repeats", o->repeats, "Cross-validation repeats")->capture_default_str();
    sub->add_option("--train-scenes", o->train_scenes, "Training scenes per repeat (0 = half)");
    sub->add_option("--history-out", o->history_out, "Write per-epoch mean loss CSV here");
    AddFeatureOptions(sub, o->features);
    AddTrainOptions(sub, o->cfg);
    AddJobsOption(sub, o->jobs);
    commands.push_back({sub, [o](RunContext& ctx) { RunTrainAriqa(*o, ctx); }});
  }
}

}  // namespace ciqa::cli
