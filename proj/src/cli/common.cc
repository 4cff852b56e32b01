#include "common.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "ciqa/common/csv.h"
#include "ciqa/common/parallel.h"
#include "ciqa/fusion/cfqf.h"
#include "ciqa/fusion/features.h"
#include "ciqa/metrics/registry.h"

namespace fs = std::filesystem;

namespace ciqa::cli {

void AddSeedOption(CLI::App* sub, uint64_t& seed) {
  sub->add_option("--seed", seed, "Random seed")->capture_default_str();
}

void AddJobsOption(CLI::App* sub, int& jobs) {
  sub->add_option("--jobs", jobs, "Worker threads (default: logical cores)")->check(CLI::PositiveNumber);
}

std::vector<std::string> ListImages(const std::string& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw std::runtime_error("no png/jpeg images in " + dir);
  return out;
}

void EnsureDir(const std::string& path) {
  if (!path.empty()) fs::create_directories(path);
}

void EnsureParent(const std::string& file_path) {
  const fs::path parent = fs::path(file_path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

std::string Stem(const std::string& path) { return fs::path(path).stem().string(); }

Manifest LoadManifestInput(const std::string& path, RunContext& ctx) {
  Manifest m = ReadManifest(path);
  ctx.inputs.push_back(path);
  std::set<std::string> seen;
  for (const auto& row : m.rows) {
    for (const auto* rel : {&row.ref1, &row.ref2, &row.output}) {
      const std::string p = ResolveManifestPath(path, *rel);
      if (seen.insert(p).second && fs::exists(p)) ctx.inputs.push_back(p);
    }
  }
  return m;
}

void AddFeatureOptions(CLI::App* sub, FeatureOptions& opts) {
  sub->add_option("--features-dir", opts.features_dir,
                  "Directory of <image stem>.cfqf feature stacks (default: built-in extractor)");
  sub->add_option("--edge-features-dir", opts.edge_features_dir,
                  "Directory of <image stem>.cfqf edge stacks concatenated channel-wise");
  sub->add_option("--saliency-dir", opts.saliency_dir,
                  "Directory of <image stem>.cfqf saliency maps (default: center prior)");
}

void RegisterFeatureInputs(const FeatureOptions& opts, RunContext& ctx) {
  for (const auto* d : {&opts.features_dir, &opts.edge_features_dir, &opts.saliency_dir}) {
    if (!d->empty()) ctx.inputs.push_back(*d);
  }
}

std::string FeatureCacheDir() {
  if (const char* env = std::getenv("CONFUSION_IQA_CACHE"); env != nullptr && *env != '\0') return env;
  return (fs::temp_directory_path() / "confusion_iqa_cache").string();
}

FeatureStack LoadFeatures(const FeatureOptions& opts, const std::string& image_path) {
  FeatureStack stack = opts.features_dir.empty()
                           ? CachedBuiltinFeatures(image_path, FeatureCacheDir())
                           : ReadCfqf((fs::path(opts.features_dir) / (Stem(image_path) + ".cfqf")).string());
  if (!opts.edge_features_dir.empty()) {
    stack = ConcatStacks(stack, ReadCfqf((fs::path(opts.edge_features_dir) / (Stem(image_path) + ".cfqf")).string()));
  }
  return stack;
}

std::optional<SaliencyMap> TryLoadSaliency(const FeatureOptions& opts, const std::string& image_path) {
  if (opts.saliency_dir.empty()) return std::nullopt;
  const fs::path p = fs::path(opts.saliency_dir) / (Stem(image_path) + ".cfqf");
  if (!fs::exists(p)) return std::nullopt;
  return ReadSaliencyCfqf(p.string());
}

SaliencyMap LoadSaliency(const FeatureOptions& opts, const std::string& image_path, int width, int height) {
  if (auto s = TryLoadSaliency(opts, image_path)) return *s;
  return SaliencyMap::CenterPrior(width, height);
}

double LayerMos(const MosTable& mos, const std::string& stimulus_id, const std::string& target) {
  if (const MosEntry* e = mos.TryFind(stimulus_id + "/" + target)) return e->mos;
  if (const MosEntry* e = mos.TryFind(stimulus_id)) return e->mos;
  throw std::runtime_error("no MOS for " + stimulus_id + "/" + target + " or " + stimulus_id);
}

std::vector<std::string> ReadIdList(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read id list " + path);
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty() && line != "stimulus_id") ids.push_back(line);
  }
  return ids;
}

ScoreTable LoadScoreTable(const std::string& path, const MosTable& mos, const std::vector<std::string>& keep_ids) {
  const CsvTable csv = ReadCsv(path);
  const std::set<std::string> keep(keep_ids.begin(), keep_ids.end());
  const size_t id_col = csv.Column("stimulus_id");
  const size_t metric_col = csv.Column("metric");

  // (column name, unit) -> value, plus orders of first appearance.
  std::map<std::string, std::map<std::string, double>> cells;
  std::vector<std::string> column_order, unit_order;
  std::map<std::string, bool> higher;
  std::set<std::string> units_seen;
  auto add = [&](const std::string& column, bool hib, const std::string& unit, double value) {
    if (!cells.count(column)) {
      column_order.push_back(column);
      higher[column] = hib;
    }
    if (!cells[column].emplace(unit, value).second) {
      throw std::runtime_error(path + ": duplicate score for " + column + " / " + unit);
    }
    if (units_seen.insert(unit).second) unit_order.push_back(unit);
  };

  const bool variants = csv.HasColumn("type1");
  for (const auto& row : csv.rows) {
    const std::string& id = row[id_col];
    if (!keep.empty() && !keep.count(id)) continue;
    const std::string& metric = row[metric_col];
    if (variants) {
      if (!mos.TryFind(id)) throw std::runtime_error("no MOS for stimulus " + id);
      const bool hib = HigherIsBetter(metric);
      add(metric + ":type1", hib, id, ParseDouble(row[csv.Column("type1")], "type1"));
      add(metric + ":type2", hib, id, ParseDouble(row[csv.Column("type2")], "type2"));
      if (csv.HasColumn("type3") && !row[csv.Column("type3")].empty()) {
        add(metric + ":type3", true, id, ParseDouble(row[csv.Column("type3")], "type3"));
      }
    } else {
      const std::string& target = row[csv.Column("target")];
      const double score = ParseDouble(row[csv.Column("score")], "score");
      const std::string layer_key = id + "/" + target;
      if (mos.TryFind(layer_key)) {
        add(metric, HigherIsBetter(metric), layer_key, score);
      } else if (mos.TryFind(id)) {
        add(metric + "[" + target + "]", HigherIsBetter(metric), id, score);
      } else {
        throw std::runtime_error("no MOS for " + layer_key + " or " + id);
      }
    }
  }
  if (column_order.empty()) throw std::runtime_error(path + ": no scores selected");

  ScoreTable table;
  table.units = unit_order;
  for (const auto& name : column_order) {
    ScoreColumn col;
    col.name = name;
    col.higher_is_better = higher[name];
    for (const auto& unit : unit_order) {
      auto it = cells[name].find(unit);
      if (it == cells[name].end()) throw std::runtime_error(path + ": column " + name + " has no score for " + unit);
      col.values.push_back(it->second);
    }
    table.columns.push_back(std::move(col));
  }
  return table;
}

void WriteTextFile(const std::string& path, const std::string& text) {
  EnsureParent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ciqa::cli
