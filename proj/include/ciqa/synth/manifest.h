#ifndef CIQA_SYNTH_MANIFEST_H_
#define CIQA_SYNTH_MANIFEST_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ciqa/imaging/image.h"
#include "ciqa/synth/distortion.h"

namespace ciqa {

// One stimulus: output = lambda * distort(ref1) + (1 - lambda) * ref2.
// For confusing-image sets ref1/ref2 are the two layers (no distortion); for
// AR sets ref1 is the AR reference and ref2 the background viewport.
// Paths are relative to the manifest file.
struct ManifestRow {
  std::string stimulus_id;
  std::string ref1;
  std::string ref2;
  double lambda = 0.5;
  DistortionSpec distortion;
  std::string output;
};

struct Manifest {
  std::vector<ManifestRow> rows;

  // Throws if stimulus ids repeat or a lambda is outside [0, 1].
  void Validate() const;
  const ManifestRow& Find(const std::string& stimulus_id) const;
  // Scenario index per row: rows sharing (ref1, ref2) share a scenario,
  // numbered in order of first appearance.
  std::vector<int> SceneIds() const;
};

inline const char* kManifestHeader =
    "stimulus_id,ref1,ref2,lambda,distortion_kind,distortion_param,output";

// Writes `csv_path` and a JSON mirror next to it (same stem, .json).
void WriteManifest(const Manifest& manifest, const std::string& csv_path);
Manifest ReadManifest(const std::string& csv_path);
std::string JsonMirrorPath(const std::string& csv_path);

// Resolves a manifest-relative path against the manifest's directory.
std::string ResolveManifestPath(const std::string& manifest_path, const std::string& relative);

struct CfiqaSetOptions {
  int count = 300;
  double alpha = 5.0;
  uint64_t seed = 0;
  // When set, every row uses this lambda instead of a Beta draw.
  std::optional<double> fixed_lambda;
  std::string output_dir = "stimuli";
};

// First half of `refs` is group 1, second half group 2. Both groups are
// shuffled with the seed and zipped positionally; row k pairs the k-th
// elements and draws lambda ~ Beta(alpha, alpha). No reference is reused.
Manifest BuildCfiqaSet(const std::vector<std::string>& refs, const CfiqaSetOptions& options);

// For each scenario s (ar_refs[s] over backgrounds[s]): the undistorted AR
// reference and every spec, each at every lambda. Rows are scenario-major,
// then distortion (reference first), then lambda.
Manifest BuildAriqaSet(const std::vector<std::string>& ar_refs,
                       const std::vector<std::string>& backgrounds,
                       const std::vector<double>& lambdas,
                       const std::vector<DistortionSpec>& specs,
                       const std::string& output_dir = "stimuli");

// Pixels of a manifest row given its decoded references.
Image RenderStimulus(const ManifestRow& row, const Image& ref1, const Image& ref2);

}  // namespace ciqa

#endif  // CIQA_SYNTH_MANIFEST_H_
