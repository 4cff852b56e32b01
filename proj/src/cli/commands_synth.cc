#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <numbers>
#include <set>

#include "ciqa/common/csv.h"
#include "ciqa/common/parallel.h"
#include "ciqa/imaging/io.h"
#include "ciqa/imaging/resample.h"
#include "ciqa/synth/viewport.h"
#include "common.h"

namespace fs = std::filesystem;

namespace ciqa::cli {
namespace {

Image ToRgb(const Image& img) {
  if (img.channels() == 3) return img;
  Image out(img.width(), img.height(), 3);
  for (int c = 0; c < 3; ++c) std::copy(img.plane(0).begin(), img.plane(0).end(), out.plane(c).begin());
  return out;
}

std::vector<DistortionSpec> ParseDistortions(const std::string& text) {
  std::vector<DistortionSpec> out;
  if (text == "none") return out;
  for (const auto& item : SplitList(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("distortion '" + item + "' must look like kind:param");
    DistortionSpec spec{ParseDistortionKind(item.substr(0, colon)),
                        ParseDouble(item.substr(colon + 1), "distortion parameter")};
    spec.Validate();
    out.push_back(spec);
  }
  return out;
}

// Loads, converts to RGB and optionally resizes, then saves as PNG.
void PrepareReference(const std::string& src, const std::string& dst, int width, int height) {
  Image img = ToRgb(LoadImage(src));
  if (width > 0 && height > 0) img = Resize(img, width, height, ResizeMode::kBilinear);
  SaveImage(img, dst, ImageFormat::kPng);
}

void RenderRows(const Manifest& manifest, const std::string& manifest_path, int jobs) {
  ParallelFor(manifest.rows.size(), jobs, [&](size_t i) {
    const ManifestRow& row = manifest.rows[i];
    const Image r1 = LoadImage(ResolveManifestPath(manifest_path, row.ref1));
    const Image r2 = LoadImage(ResolveManifestPath(manifest_path, row.ref2));
    const std::string out = ResolveManifestPath(manifest_path, row.output);
    EnsureParent(out);
    SaveImage(RenderStimulus(row, r1, r2), out, ImageFormat::kPng);
  });
}

struct SynthCfiqaOptions {
  std::string refs;
  std::string out;
  int count = 0;
  double alpha = 5.0;
  std::optional<double> lambda;
  int size = 512;
  uint64_t seed = 0;
  int jobs = 0;
};

void RunSynthCfiqa(const SynthCfiqaOptions& o, RunContext& ctx) {
  ctx.seed = o.seed;
  if (o.jobs > 0) ctx.jobs = o.jobs;
  ctx.inputs.push_back(o.refs);
  const auto sources = ListImages(o.refs);
  if (sources.size() % 2 != 0) {
    throw std::runtime_error("need an even number of references, found " + std::to_string(sources.size()));
  }
  EnsureDir(o.out + "/refs");
  std::vector<std::string> rel(sources.size());
  std::set<std::string> names;
  for (size_t i = 0; i < sources.size(); ++i) {
    rel[i] = "refs/" + Stem(sources[i]) + ".png";
    if (!names.insert(rel[i]).second) throw std::runtime_error("two references share the stem of " + sources[i]);
  }
  ParallelFor(sources.size(), ctx.jobs, [&](size_t i) {
    PrepareReference(sources[i], o.out + "/" + rel[i], o.size, o.size);
  });
  if (o.size <= 0) {
    // Without resizing the pairs still need equal dimensions; RenderStimulus checks per row.
    std::cerr << "note: references kept at native size\n";
  }
  CfiqaSetOptions opts;
  opts.count = o.count > 0 ? o.count : static_cast<int>(sources.size() / 2);
  opts.alpha = o.alpha;
  opts.seed = o.seed;
  opts.fixed_lambda = o.lambda;
  const Manifest manifest = BuildCfiqaSet(rel, opts);
  const std::string manifest_path = o.out + "/manifest.csv";
  WriteManifest(manifest, manifest_path);
  RenderRows(manifest, manifest_path, ctx.jobs);
  std::cerr << "seed " << o.seed << ": wrote " << manifest.rows.size() << " stimuli to " << o.out << "\n";
}

struct SynthAriqaOptions {
  std::string ar;
  std::string omni;
  std::string out;
  std::string lambdas = "0.26,0.42,0.58,0.74";
  std::string distortions = "jpeg:7,jpeg:3,rescale:0.2,rescale:0.1,gamma:0.25,gamma:4";
  int width = 1440;
  int height = 900;
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
  double fov_deg = 90.0;
  uint64_t seed = 0;
  int jobs = 0;
};

void RunSynthAriqa(const SynthAriqaOptions& o, RunContext& ctx) {
  ctx.seed = o.seed;
  if (o.jobs > 0) ctx.jobs = o.jobs;
  ctx.inputs.push_back(o.ar);
  ctx.inputs.push_back(o.omni);
  const auto ar = ListImages(o.ar);
  const auto omni = ListImages(o.omni);
  if (ar.size() != omni.size()) {
    throw std::runtime_error(std::to_string(ar.size()) + " AR images but " + std::to_string(omni.size()) +
                             " omnidirectional backgrounds; scenarios pair them 1:1 in name order");
  }
  std::vector<double> lambdas;
  for (const auto& t : SplitList(o.lambdas)) lambdas.push_back(ParseDouble(t, "lambda"));
  const auto specs = ParseDistortions(o.distortions);

  ViewportSpec vp = DefaultViewport(o.width, o.height);
  vp.yaw = o.yaw_deg * std::numbers::pi / 180.0;
  vp.pitch = o.pitch_deg * std::numbers::pi / 180.0;
  vp.fov_h = o.fov_deg * std::numbers::pi / 180.0;
  vp.Validate();

  EnsureDir(o.out + "/ar");
  EnsureDir(o.out + "/bg");
  std::vector<std::string> ar_rel(ar.size()), bg_rel(ar.size());
  for (size_t s = 0; s < ar.size(); ++s) {
    char name[32];
    std::snprintf(name, sizeof name, "s%02zu.png", s + 1);
    ar_rel[s] = std::string("ar/") + name;
    bg_rel[s] = std::string("bg/") + name;
  }
  ParallelFor(ar.size(), ctx.jobs, [&](size_t s) {
    PrepareReference(ar[s], o.out + "/" + ar_rel[s], o.width, o.height);
    const Image pano = ToRgb(LoadImage(omni[s]));
    if (!IsEquirectangular(pano)) {
      std::cerr << "warning: " << omni[s] << " is not 2:1 equirectangular\n";
    }
    SaveImage(ExtractViewport(pano, vp), o.out + "/" + bg_rel[s], ImageFormat::kPng);
  });
  const Manifest manifest = BuildAriqaSet(ar_rel, bg_rel, lambdas, specs);
  const std::string manifest_path = o.out + "/manifest.csv";
  WriteManifest(manifest, manifest_path);
  RenderRows(manifest, manifest_path, ctx.jobs);
  std::cerr << "wrote " << manifest.rows.size() << " AR stimuli (" << ar.size() << " scenarios) to " << o.out
            << "\n";
}

}  // namespace

void AddSynthCommands(CLI::App& app, CommandList& commands) {
  {
    auto o = std::make_shared<SynthCfiqaOptions>();
    CLI::App* sub = app.add_subcommand("synth-cfiqa", "Blend pairs of references into confusing images");
    sub->add_option("--refs", o->refs, "Directory of reference images (first half group 1, second half group 2)")
        ->required();
    sub->add_option("--out", o->out, "Output directory")->required();
    sub->add_option("--count", o->count, "Stimuli to generate (default: all pairs)");
    sub->add_option("--alpha", o->alpha, "Beta(alpha, alpha) parameter for lambda")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--lambda", o->lambda, "Use this lambda for every stimulus instead of sampling");
    sub->add_option("--size", o->size, "Square side references are resized to (0 keeps native size)")
        ->capture_default_str();
    AddSeedOption(sub, o->seed);
    AddJobsOption(sub, o->jobs);
    commands.push_back({sub, [o](RunContext& ctx) { RunSynthCfiqa(*o, ctx); }});
  }
  {
    auto o = std::make_shared<SynthAriqaOptions>();
    CLI::App* sub = app.add_subcommand("synth-ariqa", "Superimpose distorted AR images on viewport backgrounds");
    sub->add_option("--ar", o->ar, "Directory of AR reference images")->required();
    sub->add_option("--omni", o->omni, "Directory of equirectangular backgrounds (paired with --ar by name order)")
        ->required();
    sub->add_option("--out", o->out, "Output directory")->required();
    sub->add_option("--lambdas", o->lambdas, "Comma-separated mixing values")->capture_default_str();
    sub->add_option("--distortions", o->distortions, "kind:param list, or 'none'")->capture_default_str();
    sub->add_option("--width", o->width, "AR raster width")->capture_default_str();
    sub->add_option("--height", o->height, "AR raster height")->capture_default_str();
    sub->add_option("--yaw", o->yaw_deg, "Viewport yaw in degrees")->capture_default_str();
    sub->add_option("--pitch", o->pitch_deg, "Viewport pitch in degrees")->capture_default_str();
    sub->add_option("--fov", o->fov_deg, "Horizontal field of view in degrees")->capture_default_str();
    AddSeedOption(sub, o->seed);
    AddJobsOption(sub, o->jobs);
    commands.push_back({sub, [o](RunContext& ctx) { RunSynthAriqa(*o, ctx); }});
  }
}

}  // namespace ciqa::cli
