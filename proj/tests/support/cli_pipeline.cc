#include "cli_pipeline.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ciqa/cli/cli.h"
#include "ciqa/common/rng.h"
#include "ciqa/imaging/io.h"
#include "ciqa/synth/manifest.h"
#include "procedural.h"

namespace fs = std::filesystem;

namespace ciqa::testing {

int RunCliArgs(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"confusion_iqa"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return RunCli(static_cast<int>(argv.size()), argv.data());
}

void WriteSyntheticRatings(const std::string& manifest_path, const std::string& out, bool cfiqa, uint64_t seed) {
  const Manifest manifest = ReadManifest(manifest_path);
  Rng rng(seed);
  std::ofstream f(out);
  f << "subject_id,stimulus_id,rating\n";
  auto rate = [&](double q) { return std::clamp(std::round(1.0 + 9.0 * q + rng.Normal(0.0, 1.0)), 1.0, 10.0); };
  for (int s = 0; s < 15; ++s) {
    for (const ManifestRow& row : manifest.rows) {
      const std::string subject = "u" + std::to_string(s);
      if (cfiqa) {
        f << subject << ',' << row.stimulus_id << "/ref1," << rate(row.lambda) << '\n';
        f << subject << ',' << row.stimulus_id << "/ref2," << rate(1.0 - row.lambda) << '\n';
      } else {
        const double q = row.lambda * (row.distortion.kind == DistortionKind::kNone ? 1.0 : 0.5);
        f << subject << ',' << row.stimulus_id << ',' << rate(q) << '\n';
      }
    }
  }
}

std::vector<CliStep> PrepareCliPipeline(const std::string& root, uint64_t seed) {
  Rng rng(seed);
  for (const char* d : {"refs", "ar", "omni"}) fs::create_directories(fs::path(root) / d);
  for (int i = 0; i < 16; ++i) {
    SaveImage(ProceduralImage(160, 140, 3, rng), root + "/refs/r" + (i < 10 ? "0" : "") + std::to_string(i) + ".png");
  }
  for (int i = 0; i < 4; ++i) {
    SaveImage(ProceduralImage(200, 150, 3, rng), root + "/ar/a" + std::to_string(i) + ".png");
    SaveImage(ProceduralImage(512, 256, 3, rng), root + "/omni/o" + std::to_string(i) + ".png");
  }
  const std::string r = root + "/";
  const std::string log = r + "runs.jsonl";
  auto step = [&](std::string sub, std::vector<std::string> args, std::vector<std::string> outputs,
                  std::function<void()> before = {}) {
    args.insert(args.begin(), {"--run-log", log, sub});
    return CliStep{sub, args, outputs, before};
  };
  return {
      step("synth-cfiqa", {"--refs", r + "refs", "--out", r + "cf", "--size", "176", "--seed", "3"}, {r + "cf"}),
      step("synth-ariqa",
           {"--ar", r + "ar", "--omni", r + "omni", "--out", r + "arset", "--width", "160", "--height", "128",
            "--lambdas", "0.5,0.7", "--distortions", "jpeg:7,gamma:4"},
           {r + "arset"}),
      step("mos", {"--ratings", r + "cf_ratings.csv", "--out", r + "cf_mos.csv"}, {r + "cf_mos.csv"},
           [=] { WriteSyntheticRatings(r + "cf/manifest.csv", r + "cf_ratings.csv", true, seed + 1); }),
      step("mos", {"--ratings", r + "ar_ratings.csv", "--out", r + "ar_mos.csv"}, {r + "ar_mos.csv"},
           [=] { WriteSyntheticRatings(r + "arset/manifest.csv", r + "ar_ratings.csv", false, seed + 2); }),
      step("score",
           {"--manifest", r + "cf/manifest.csv", "--out", r + "cf_scores.csv", "--metrics",
            "psnr,ssim,ms_ssim,gmsd,gmsm,pamse,baseline", "--jobs", "2"},
           {r + "cf_scores.csv"}),
      step("evaluate", {"--scores", r + "cf_scores.csv", "--mos", r + "cf_mos.csv", "--out", r + "cf_eval.json",
                        "--table", r + "cf_eval.txt"},
           {r + "cf_eval.json", r + "cf_eval.txt"}),
      step("roc", {"--scores", r + "cf_scores.csv", "--mos", r + "cf_mos.csv", "--out", r + "cf_roc.json",
                   "--resamples", "200"},
           {r + "cf_roc.json"}),
      step("train-cfiqa",
           {"--manifest", r + "cf/manifest.csv", "--mos", r + "cf_mos.csv", "--out", r + "cf.cfqm", "--epochs-flat",
            "3", "--epochs-decay", "2", "--fold", "1", "--heldout-out", r + "held.csv", "--history-out",
            r + "cf_history.csv", "--jobs", "2"},
           {r + "cf.cfqm", r + "held.csv", r + "cf_history.csv"}),
      step("predict-cfiqa", {"--manifest", r + "cf/manifest.csv", "--model", r + "cf.cfqm", "--out", r + "cf_pred.csv"},
           {r + "cf_pred.csv"}),
      step("ariqa-variants",
           {"--manifest", r + "arset/manifest.csv", "--out", r + "var.csv", "--metrics", "ssim,psnr,gmsm"},
           {r + "var.csv"}),
      step("svr-cv",
           {"--variants", r + "var.csv", "--mos", r + "ar_mos.csv", "--metric", "ssim", "--out", r + "svr.json",
            "--model-out", r + "svr_model.json", "--folds", "10", "--by-scene"},
           {r + "svr.json", r + "svr_model.json"}),
      step("train-ariqa",
           {"--manifest", r + "arset/manifest.csv", "--mos", r + "ar_mos.csv", "--out", r + "ar.cfqm", "--cv-out",
            r + "ar_cv.json", "--repeats", "2", "--epochs-flat", "2", "--epochs-decay", "1", "--history-out",
            r + "ar_history.csv"},
           {r + "ar.cfqm", r + "ar_cv.json", r + "ar_history.csv"}),
  };
}

std::string SnapshotOutputs(const std::vector<std::string>& paths) {
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file()) files.push_back(e.path());
      }
    } else {
      files.emplace_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  std::ostringstream out;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw std::runtime_error("missing output " + f.string());
    out << "== " << f.string() << '\n' << in.rdbuf();
  }
  return out.str();
}

}  // namespace ciqa::testing
