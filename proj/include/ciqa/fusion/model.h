#ifndef CIQA_FUSION_MODEL_H_
#define CIQA_FUSION_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ciqa/fusion/tensor.h"
#include "ciqa/metrics/metrics.h"

namespace ciqa {

inline constexpr int kAttentionReduction = 16;
inline constexpr int kHeadHidden = 16;
inline constexpr double kHeadLeakySlope = 0.2;

// Offsets of every parameter block inside FusionParams::theta.
struct LayerLayout {
  int channels = 0;  // C
  int reduced = 0;   // max(1, ceil(C / 16))
  int mid = 0;       // ceil(C / 2)
  size_t fc1_w = 0, fc1_b = 0, fc2_w = 0, fc2_b = 0;
  size_t conv1_w = 0, conv1_b = 0, conv2_w = 0, conv2_b = 0;
  size_t end = 0;

  friend bool operator==(const LayerLayout&, const LayerLayout&) = default;
};

struct ParamGroup {
  std::string name;
  size_t offset = 0;
  size_t size = 0;
};

// Trainable parameters of the fusion head, flattened into one vector so the
// optimizer and gradient checks can treat them uniformly.
//
// Per layer: squeeze-excitation MLP (C -> R -> C) with biases, 1x1 conv
// C -> ceil(C/2) with ReLU, 1x1 conv to one map. Shared: ranking calibration
// (w_rank = softplus(rho), b_rank), the score head Linear(1->16) ->
// LeakyReLU(0.2) -> Linear(16->1) -> sigmoid fed with -s, and the two-pathway
// fusion s = u s_ar + v s_bg + c used by the AR model.
class FusionParams {
 public:
  FusionParams() = default;
  // Attention fc1 He-uniform, fc2 zero (scale 0.5 everywhere at start);
  // convs and head weights |He-uniform| with zero bias;
  // w_rank = 1, b_rank = 0; u = 1, v = 0, c = 0.
  static FusionParams Initialize(const std::string& extractor, std::span<const int> channels, uint64_t seed);

  const std::string& extractor() const { return extractor_; }
  size_t num_layers() const { return layers_.size(); }
  const LayerLayout& layer(size_t l) const { return layers_[l]; }
  std::vector<int> channels() const;

  std::vector<double>& theta() { return theta_; }
  const std::vector<double>& theta() const { return theta_; }
  size_t size() const { return theta_.size(); }
  double operator[](size_t i) const { return theta_[i]; }

  size_t rho_index() const { return global_; }
  size_t b_rank_index() const { return global_ + 1; }
  size_t head_w1() const { return global_ + 2; }
  size_t head_b1() const { return head_w1() + kHeadHidden; }
  size_t head_w2() const { return head_b1() + kHeadHidden; }
  size_t head_b2() const { return head_w2() + kHeadHidden; }
  size_t fuse_u() const { return head_b2() + 1; }
  size_t fuse_v() const { return fuse_u() + 1; }
  size_t fuse_c() const { return fuse_v() + 1; }

  double w_rank() const;

  std::vector<ParamGroup> Groups() const;

  // Throws std::invalid_argument when the extractor or per-layer channel
  // counts differ from `stack`.
  void RequireCompatible(const std::string& extractor, std::span<const int> channels) const;

  friend bool operator==(const FusionParams&, const FusionParams&) = default;

 private:
  void BuildLayout(std::span<const int> channels);

  std::string extractor_;
  std::vector<LayerLayout> layers_;
  size_t global_ = 0;
  std::vector<double> theta_;
};

// Binary "CFQM": u16 version, u16 name length + name, u32 L, L x u32 C,
// u64 parameter count, float64 parameters. Little-endian.
void SaveFusionParams(const FusionParams& params, const std::string& path);
FusionParams LoadFusionParams(const std::string& path);

// One distance layer plus its pooling weights (saliency resized to the
// layer grid and divided by its sum).
struct LayerInput {
  Tensor3 distance;
  std::vector<float> pool_weights;
};

// Everything one pathway (one reference) needs for a forward pass.
struct PathwayInput {
  std::vector<LayerInput> layers;
};

// Normalized feature stacks of the distorted image and one reference, plus
// that reference's saliency, turned into a pathway input.
PathwayInput MakePathwayInput(const FeatureStack& dist_normalized, const FeatureStack& ref_normalized,
                              const SaliencyMap& saliency);

std::vector<double> NormalizedPoolWeights(const SaliencyMap& saliency, int width, int height);

// Per-layer distance map m^l (H x W, row-major).
std::vector<double> ChannelAttention(const FusionParams& params, size_t layer, const Tensor3& distance);
// sum(W m) / sum(W) with the saliency bilinearly resized to (width, height).
double SpatialPool(std::span<const double> map, int width, int height, const SaliencyMap& saliency);

// Layer-averaged pooled distance s (lower = closer to the reference).
double PathwayScore(const FusionParams& params, const PathwayInput& input);
// Adds d(score)/d(theta) * upstream into grad.
void PathwayBackward(const FusionParams& params, const PathwayInput& input, double upstream,
                     std::vector<double>& grad);

struct CfiqaPrediction {
  double s1 = 0.0;
  double s2 = 0.0;
};

// Features -> normalize -> distance -> attention -> pooling -> layer mean,
// once per reference.
CfiqaPrediction PredictCfiqa(const FeatureStack& dist, const FeatureStack& ref1, const FeatureStack& ref2,
                             const SaliencyMap& sal1, const SaliencyMap& sal2, const FusionParams& params);

// Score head output in (0, 1) for a distance-like s.
double HeadQuality(const FusionParams& params, double s);

struct LossParts {
  double score1 = 0.0;   // L_S1
  double score2 = 0.0;   // L_S2
  double ranking = 0.0;  // L_R
  double total = 0.0;    // L_S1 + L_S2 + gamma L_R
};

struct PairGradient {
  double ds1 = 0.0;
  double ds2 = 0.0;
};

// Ranking BCE on sigmoid(w_rank (s2 - s1) + b_rank) against h (1 when
// mos1 > mos2, 0.5 on ties), score BCE of the head on mos/100. When `grad`
// is non-null, adds the gradient w.r.t. the ranking and head parameters and
// returns dL/ds1, dL/ds2 through `pair_grad`.
LossParts PairLoss(const FusionParams& params, double s1, double s2, double mos1, double mos2, double gamma,
                   std::vector<double>* grad = nullptr, PairGradient* pair_grad = nullptr);

// Binary cross entropy of probability p against soft target t.
double Bce(double p, double t);

}  // namespace ciqa

#endif  // CIQA_FUSION_MODEL_H_
