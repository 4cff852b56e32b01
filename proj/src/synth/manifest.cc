#include "ciqa/synth/manifest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "ciqa/common/csv.h"
#include "ciqa/common/rng.h"
#include "ciqa/synth/blend.h"

namespace ciqa {
namespace fs = std::filesystem;

void Manifest::Validate() const {
  std::set<std::string> seen;
  for (const auto& row : rows) {
    if (row.stimulus_id.empty()) throw std::runtime_error("manifest row with empty stimulus_id");
    if (!seen.insert(row.stimulus_id).second) {
      throw std::runtime_error("duplicate stimulus_id in manifest: " + row.stimulus_id);
    }
    if (!(row.lambda >= 0.0 && row.lambda <= 1.0)) {
      throw std::runtime_error("lambda out of [0, 1] for " + row.stimulus_id);
    }
    row.distortion.Validate();
  }
}

const ManifestRow& Manifest::Find(const std::string& stimulus_id) const {
  for (const auto& row : rows) {
    if (row.stimulus_id == stimulus_id) return row;
  }
  throw std::runtime_error("stimulus not in manifest: " + stimulus_id);
}

std::vector<int> Manifest::SceneIds() const {
  std::map<std::pair<std::string, std::string>, int> index;
  std::vector<int> ids;
  ids.reserve(rows.size());
  for (const auto& row : rows) {
    auto [it, inserted] = index.emplace(std::make_pair(row.ref1, row.ref2),
                                        static_cast<int>(index.size()));
    ids.push_back(it->second);
  }
  return ids;
}

std::string JsonMirrorPath(const std::string& csv_path) {
  fs::path p(csv_path);
  p.replace_extension(".json");
  return p.string();
}

void WriteManifest(const Manifest& manifest, const std::string& csv_path) {
  manifest.Validate();
  CsvTable table;
  table.header = SplitList(kManifestHeader);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : manifest.rows) {
    table.rows.push_back({r.stimulus_id, r.ref1, r.ref2, FormatDouble(r.lambda),
                          DistortionKindName(r.distortion.kind), FormatDouble(r.distortion.param),
                          r.output});
    rows.push_back({{"stimulus_id", r.stimulus_id},
                    {"ref1", r.ref1},
                    {"ref2", r.ref2},
                    {"lambda", r.lambda},
                    {"distortion_kind", DistortionKindName(r.distortion.kind)},
                    {"distortion_param", r.distortion.param},
                    {"output", r.output}});
  }
  WriteCsv(csv_path, table);
  std::ofstream json(JsonMirrorPath(csv_path), std::ios::binary);
  if (!json) throw std::runtime_error("cannot write " + JsonMirrorPath(csv_path));
  json << rows.dump(2) << '\n';
}

Manifest ReadManifest(const std::string& csv_path) {
  const CsvTable table = ReadCsv(csv_path);
  const size_t id = table.Column("stimulus_id"), r1 = table.Column("ref1"),
               r2 = table.Column("ref2"), lam = table.Column("lambda"),
               kind = table.Column("distortion_kind"), param = table.Column("distortion_param"),
               out = table.Column("output");
  Manifest m;
  for (const auto& row : table.rows) {
    ManifestRow r;
    r.stimulus_id = row[id];
    r.ref1 = row[r1];
    r.ref2 = row[r2];
    r.lambda = ParseDouble(row[lam], "lambda");
    r.distortion.kind = ParseDistortionKind(row[kind]);
    r.distortion.param = ParseDouble(row[param], "distortion_param");
    r.output = row[out];
    m.rows.push_back(std::move(r));
  }
  m.Validate();
  return m;
}

std::string ResolveManifestPath(const std::string& manifest_path, const std::string& relative) {
  const fs::path rel(relative);
  if (rel.is_absolute()) return rel.string();
  return (fs::path(manifest_path).parent_path() / rel).lexically_normal().string();
}

Manifest BuildCfiqaSet(const std::vector<std::string>& refs, const CfiqaSetOptions& options) {
  if (refs.size() < 2 || refs.size() % 2 != 0) {
    throw std::invalid_argument("BuildCfiqaSet: need an even, nonzero number of references, got " +
                                std::to_string(refs.size()));
  }
  const size_t pairs = refs.size() / 2;
  if (options.count < 1 || static_cast<size_t>(options.count) > pairs) {
    throw std::invalid_argument("BuildCfiqaSet: count " + std::to_string(options.count) +
                                " exceeds the " + std::to_string(pairs) + " available pairs");
  }
  if (options.fixed_lambda && !(*options.fixed_lambda >= 0.0 && *options.fixed_lambda <= 1.0)) {
    throw std::invalid_argument("BuildCfiqaSet: fixed lambda outside [0, 1]");
  }
  std::vector<std::string> group1(refs.begin(), refs.begin() + pairs);
  std::vector<std::string> group2(refs.begin() + pairs, refs.end());
  Rng rng(options.seed);
  rng.Shuffle(group1);
  rng.Shuffle(group2);
  Manifest m;
  const int width = std::max(4, static_cast<int>(std::to_string(options.count).size()));
  for (int k = 0; k < options.count; ++k) {
    const double lambda = options.fixed_lambda ? *options.fixed_lambda : SampleLambda(options.alpha, rng);
    std::string id = std::to_string(k + 1);
    id = "cf" + std::string(width - id.size(), '0') + id;
    ManifestRow row;
    row.stimulus_id = id;
    row.ref1 = group1[k];
    row.ref2 = group2[k];
    row.lambda = lambda;
    row.output = (fs::path(options.output_dir) / (id + ".png")).string();
    m.rows.push_back(std::move(row));
  }
  return m;
}

Manifest BuildAriqaSet(const std::vector<std::string>& ar_refs,
                       const std::vector<std::string>& backgrounds,
                       const std::vector<double>& lambdas,
                       const std::vector<DistortionSpec>& specs, const std::string& output_dir) {
  if (ar_refs.empty() || lambdas.empty()) {
    throw std::invalid_argument("BuildAriqaSet: need at least one scenario and one lambda");
  }
  if (ar_refs.size() != backgrounds.size()) {
    throw std::invalid_argument("BuildAriqaSet: " + std::to_string(ar_refs.size()) +
                                " AR references but " + std::to_string(backgrounds.size()) +
                                " backgrounds");
  }
  for (double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("BuildAriqaSet: lambda outside [0, 1]");
  }
  std::vector<DistortionSpec> levels;
  levels.push_back(DistortionSpec{});
  for (const auto& s : specs) {
    s.Validate();
    levels.push_back(s);
  }
  Manifest m;
  for (size_t s = 0; s < ar_refs.size(); ++s) {
    for (const auto& level : levels) {
      for (double lambda : lambdas) {
        char scene[16];
        std::snprintf(scene, sizeof(scene), "s%02zu", s + 1);
        ManifestRow row;
        row.stimulus_id = std::string(scene) + "_" + level.Tag() + "_l" + FormatDouble(lambda);
        row.ref1 = ar_refs[s];
        row.ref2 = backgrounds[s];
        row.lambda = lambda;
        row.distortion = level;
        row.output = (fs::path(output_dir) / (row.stimulus_id + ".png")).string();
        m.rows.push_back(std::move(row));
      }
    }
  }
  m.Validate();
  return m;
}

Image RenderStimulus(const ManifestRow& row, const Image& ref1, const Image& ref2) {
  return Blend(ApplyDistortion(ref1, row.distortion), ref2, row.lambda);
}

}  // namespace ciqa
