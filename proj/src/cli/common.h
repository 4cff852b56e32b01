// Shared plumbing for the CLI subcommands.
#ifndef CIQA_SRC_CLI_COMMON_H_
#define CIQA_SRC_CLI_COMMON_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ciqa/fusion/tensor.h"
#include "ciqa/metrics/metrics.h"
#include "ciqa/subjective/mos.h"
#include "ciqa/synth/manifest.h"

namespace ciqa::cli {

// Bad flag combinations found after parsing; exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunContext {
  uint64_t seed = 0;
  int jobs = 1;
  // Files and directories whose bytes feed the run-log config hash.
  std::vector<std::string> inputs;
};

struct Command {
  CLI::App* app = nullptr;
  std::function<void(RunContext&)> run;
};

using CommandList = std::vector<Command>;

void AddSynthCommands(CLI::App& app, CommandList& commands);
void AddScoreCommands(CLI::App& app, CommandList& commands);
void AddModelCommands(CLI::App& app, CommandList& commands);
void AddEvalCommands(CLI::App& app, CommandList& commands);

// --seed and --jobs, bound to the run context.
void AddSeedOption(CLI::App* sub, uint64_t& seed);
void AddJobsOption(CLI::App* sub, int& jobs);

// Regular image files (png/jpg/jpeg) of a directory, sorted by name.
std::vector<std::string> ListImages(const std::string& dir);
void EnsureDir(const std::string& path);
// Creates the parent directory of a file path.
void EnsureParent(const std::string& file_path);
std::string Stem(const std::string& path);

// Registers the manifest and every file it references as run inputs.
Manifest LoadManifestInput(const std::string& path, RunContext& ctx);

struct FeatureOptions {
  std::string features_dir;
  std::string edge_features_dir;
  std::string saliency_dir;
};
void AddFeatureOptions(CLI::App* sub, FeatureOptions& opts);
void RegisterFeatureInputs(const FeatureOptions& opts, RunContext& ctx);

// <features_dir>/<stem>.cfqf when set, else the built-in extractor with the
// on-disk cache; edge stacks are concatenated when configured.
FeatureStack LoadFeatures(const FeatureOptions& opts, const std::string& image_path);
// <saliency_dir>/<stem>.cfqf when present, else a center prior of (w, h).
SaliencyMap LoadSaliency(const FeatureOptions& opts, const std::string& image_path, int width, int height);
std::optional<SaliencyMap> TryLoadSaliency(const FeatureOptions& opts, const std::string& image_path);
// CONFUSION_IQA_CACHE, else <tmp>/confusion_iqa_cache.
std::string FeatureCacheDir();

// MOS of one layer of a confusing stimulus: "<id>/<target>", falling back
// to "<id>".
double LayerMos(const MosTable& mos, const std::string& stimulus_id, const std::string& target);

// Score table loaded from either the long format
// (stimulus_id,metric,target,score) or the variants format.
struct ScoreColumn {
  std::string name;
  bool higher_is_better = true;
  std::vector<double> values;  // aligned with ScoreTable::units
};
struct ScoreTable {
  std::vector<std::string> units;  // MOS keys
  std::vector<ScoreColumn> columns;
};
// `keep_ids`, when non-empty, restricts to those stimulus ids.
ScoreTable LoadScoreTable(const std::string& path, const MosTable& mos, const std::vector<std::string>& keep_ids);
std::vector<std::string> ReadIdList(const std::string& path);

void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace ciqa::cli

#endif  // CIQA_SRC_CLI_COMMON_H_
