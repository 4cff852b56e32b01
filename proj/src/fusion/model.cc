#include "ciqa/fusion/model.h"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "ciqa/common/rng.h"
#include "ciqa/fusion/features.h"

namespace ciqa {
namespace {

static_assert(std::endian::native == std::endian::little, "model I/O assumes a little-endian host");

constexpr char kModelMagic[4] = {'C', 'F', 'Q', 'M'};
constexpr uint16_t kModelVersion = 1;

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

// Squeeze-excitation state of one layer: channel means g, hidden
// pre-activations a, and channel scales sc = sigmoid(z).
struct Attention {
  std::vector<double> g, a, sc;
};

Attention Squeeze(const double* th, const LayerLayout& lay, const Tensor3& x) {
  const int c_n = lay.channels, r_n = lay.reduced;
  const size_t n = x.plane_size();
  Attention at;
  at.g.assign(c_n, 0.0);
  for (int c = 0; c < c_n; ++c) {
    double s = 0.0;
    for (size_t p = 0; p < n; ++p) s += x.data[c * n + p];
    at.g[c] = s / static_cast<double>(n);
  }
  at.a.assign(r_n, 0.0);
  for (int j = 0; j < r_n; ++j) {
    double s = th[lay.fc1_b + j];
    for (int c = 0; c < c_n; ++c) s += th[lay.fc1_w + j * c_n + c] * at.g[c];
    at.a[j] = s;
  }
  at.sc.assign(c_n, 0.0);
  for (int c = 0; c < c_n; ++c) {
    double s = th[lay.fc2_b + c];
    for (int j = 0; j < r_n; ++j) s += th[lay.fc2_w + c * r_n + j] * std::max(at.a[j], 0.0);
    at.sc[c] = Sigmoid(s);
  }
  return at;
}

void CheckLayer(const FusionParams& params, size_t l, const Tensor3& x) {
  if (l >= params.num_layers()) {
    throw std::invalid_argument("layer " + std::to_string(l) + " beyond model depth " +
                                std::to_string(params.num_layers()));
  }
  if (x.channels != params.layer(l).channels) {
    throw std::invalid_argument("layer " + std::to_string(l) + ": model expects " +
                                std::to_string(params.layer(l).channels) + " channels, got " +
                                std::to_string(x.channels));
  }
}

// Calls fn(p, m_p) for every location of the attention output.
template <typename Fn>
void ForEachMapValue(const double* th, const LayerLayout& lay, const Tensor3& x, const Attention& at, Fn&& fn) {
  const int c_n = lay.channels, m_n = lay.mid;
  const size_t n = x.plane_size();
  std::vector<double> y(c_n);
  for (size_t p = 0; p < n; ++p) {
    for (int c = 0; c < c_n; ++c) y[c] = at.sc[c] * x.data[c * n + p];
    double m = th[lay.conv2_b];
    for (int k = 0; k < m_n; ++k) {
      double h = th[lay.conv1_b + k];
      const double* w = th + lay.conv1_w + static_cast<size_t>(k) * c_n;
      for (int c = 0; c < c_n; ++c) h += w[c] * y[c];
      if (h > 0.0) m += th[lay.conv2_w + k] * h;
    }
    fn(p, m);
  }
}

template <typename T>
void Put(std::vector<uint8_t>& out, T value) {
  const auto* p = reinterpret_cast<const uint8_t*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

}  // namespace

void FusionParams::BuildLayout(std::span<const int> channels) {
  if (channels.empty()) throw std::invalid_argument("fusion model needs at least one layer");
  layers_.clear();
  size_t off = 0;
  for (int c : channels) {
    if (c < 1) throw std::invalid_argument("layer channel count must be >= 1");
    LayerLayout lay;
    lay.channels = c;
    lay.reduced = std::max(1, (c + kAttentionReduction - 1) / kAttentionReduction);
    lay.mid = (c + 1) / 2;
    const size_t r = lay.reduced, m = lay.mid, cc = c;
    lay.fc1_w = off;
    lay.fc1_b = lay.fc1_w + r * cc;
    lay.fc2_w = lay.fc1_b + r;
    lay.fc2_b = lay.fc2_w + cc * r;
    lay.conv1_w = lay.fc2_b + cc;
    lay.conv1_b = lay.conv1_w + m * cc;
    lay.conv2_w = lay.conv1_b + m;
    lay.conv2_b = lay.conv2_w + m;
    lay.end = lay.conv2_b + 1;
    off = lay.end;
    layers_.push_back(lay);
  }
  global_ = off;
  theta_.assign(fuse_c() + 1, 0.0);
}

FusionParams FusionParams::Initialize(const std::string& extractor, std::span<const int> channels,
                                      uint64_t seed) {
  FusionParams p;
  p.extractor_ = extractor;
  p.BuildLayout(channels);
  Rng rng(seed);
  auto he_abs = [&](size_t offset, size_t count, int fan_in) {
    const double bound = std::sqrt(6.0 / fan_in);
    for (size_t i = 0; i < count; ++i) p.theta_[offset + i] = std::abs(rng.Uniform(-bound, bound));
  };
  for (const LayerLayout& lay : p.layers_) {
    // fc2 stays zero so the attention scale starts at sigmoid(0) = 0.5;
    // a nonzero fc1 lets fc2 receive gradient.
    const double bound = std::sqrt(6.0 / lay.channels);
    for (size_t i = lay.fc1_w; i < lay.fc1_b; ++i) p.theta_[i] = rng.Uniform(-bound, bound);
    he_abs(lay.conv1_w, static_cast<size_t>(lay.mid) * lay.channels, lay.channels);
    he_abs(lay.conv2_w, lay.mid, lay.mid);
  }
  he_abs(p.head_w1(), kHeadHidden, 1);
  he_abs(p.head_w2(), kHeadHidden, kHeadHidden);
  p.theta_[p.rho_index()] = std::log(std::expm1(1.0));  // softplus^-1(1)
  p.theta_[p.fuse_u()] = 1.0;
  return p;
}

std::vector<int> FusionParams::channels() const {
  std::vector<int> c;
  for (const auto& l : layers_) c.push_back(l.channels);
  return c;
}

double FusionParams::w_rank() const { return Softplus(theta_[rho_index()]); }

std::vector<ParamGroup> FusionParams::Groups() const {
  std::vector<ParamGroup> g;
  for (size_t l = 0; l < layers_.size(); ++l) {
    const auto& lay = layers_[l];
    const std::string p = "layer" + std::to_string(l) + ".";
    g.push_back({p + "fc1_w", lay.fc1_w, lay.fc1_b - lay.fc1_w});
    g.push_back({p + "fc1_b", lay.fc1_b, lay.fc2_w - lay.fc1_b});
    g.push_back({p + "fc2_w", lay.fc2_w, lay.fc2_b - lay.fc2_w});
    g.push_back({p + "fc2_b", lay.fc2_b, lay.conv1_w - lay.fc2_b});
    g.push_back({p + "conv1_w", lay.conv1_w, lay.conv1_b - lay.conv1_w});
    g.push_back({p + "conv1_b", lay.conv1_b, lay.conv2_w - lay.conv1_b});
    g.push_back({p + "conv2_w", lay.conv2_w, lay.conv2_b - lay.conv2_w});
    g.push_back({p + "conv2_b", lay.conv2_b, 1});
  }
  g.push_back({"rank.rho", rho_index(), 1});
  g.push_back({"rank.bias", b_rank_index(), 1});
  g.push_back({"head.w1", head_w1(), kHeadHidden});
  g.push_back({"head.b1", head_b1(), kHeadHidden});
  g.push_back({"head.w2", head_w2(), kHeadHidden});
  g.push_back({"head.b2", head_b2(), 1});
  g.push_back({"fuse.u", fuse_u(), 1});
  g.push_back({"fuse.v", fuse_v(), 1});
  g.push_back({"fuse.c", fuse_c(), 1});
  return g;
}

void FusionParams::RequireCompatible(const std::string& extractor, std::span<const int> channels) const {
  if (extractor != extractor_) {
    throw std::invalid_argument("model was trained on extractor '" + extractor_ + "', features are '" +
                                extractor + "'");
  }
  const auto mine = this->channels();
  if (!std::equal(mine.begin(), mine.end(), channels.begin(), channels.end())) {
    throw std::invalid_argument("model layer channel counts do not match the features");
  }
}

void SaveFusionParams(const FusionParams& params, const std::string& path) {
  std::vector<uint8_t> out(kModelMagic, kModelMagic + 4);
  Put<uint16_t>(out, kModelVersion);
  Put<uint16_t>(out, static_cast<uint16_t>(params.extractor().size()));
  out.insert(out.end(), params.extractor().begin(), params.extractor().end());
  Put<uint32_t>(out, static_cast<uint32_t>(params.num_layers()));
  for (int c : params.channels()) Put<uint32_t>(out, static_cast<uint32_t>(c));
  Put<uint64_t>(out, params.size());
  for (double v : params.theta()) Put<double>(out, v);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

FusionParams LoadFusionParams(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open model " + path);
  const std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  size_t pos = 0;
  auto take = [&](void* dst, size_t n) {
    if (bytes.size() - pos < n) throw std::runtime_error("model " + path + ": truncated");
    std::memcpy(dst, bytes.data() + pos, n);
    pos += n;
  };
  char magic[4];
  take(magic, 4);
  if (std::memcmp(magic, kModelMagic, 4) != 0) throw std::runtime_error("model " + path + ": bad magic");
  uint16_t version = 0, name_len = 0;
  take(&version, 2);
  if (version != kModelVersion) throw std::runtime_error("model " + path + ": unsupported version");
  take(&name_len, 2);
  std::string name(name_len, '\0');
  take(name.data(), name_len);
  uint32_t layers = 0;
  take(&layers, 4);
  if (layers == 0 || layers > 4096) throw std::runtime_error("model " + path + ": bad layer count");
  std::vector<int> channels(layers);
  for (auto& c : channels) {
    uint32_t v = 0;
    take(&v, 4);
    if (v == 0 || v > (1u << 20)) throw std::runtime_error("model " + path + ": bad channel count");
    c = static_cast<int>(v);
  }
  FusionParams p = FusionParams::Initialize(name, channels, 0);
  uint64_t count = 0;
  take(&count, 8);
  if (count != p.size()) throw std::runtime_error("model " + path + ": parameter count mismatch");
  take(p.theta().data(), count * sizeof(double));
  if (pos != bytes.size()) throw std::runtime_error("model " + path + ": trailing bytes");
  for (double v : p.theta()) {
    if (!std::isfinite(v)) throw std::runtime_error("model " + path + ": non-finite parameter");
  }
  return p;
}

std::vector<double> NormalizedPoolWeights(const SaliencyMap& saliency, int width, int height) {
  auto w = saliency.ResizedTo(width, height);
  double sum = 0.0;
  for (double v : w) sum += v;
  if (!(sum > 0.0)) {
    throw std::invalid_argument("saliency resized to " + std::to_string(width) + "x" + std::to_string(height) +
                                " has zero total weight");
  }
  for (double& v : w) v /= sum;
  return w;
}

PathwayInput MakePathwayInput(const FeatureStack& dist_normalized, const FeatureStack& ref_normalized,
                              const SaliencyMap& saliency) {
  DistanceStack d = FeatureDistance(dist_normalized, ref_normalized);
  PathwayInput in;
  for (Tensor3& t : d.layers) {
    LayerInput li;
    const auto w = NormalizedPoolWeights(saliency, t.width, t.height);
    li.pool_weights.assign(w.begin(), w.end());
    li.distance = std::move(t);
    in.layers.push_back(std::move(li));
  }
  return in;
}

std::vector<double> ChannelAttention(const FusionParams& params, size_t layer, const Tensor3& distance) {
  CheckLayer(params, layer, distance);
  const double* th = params.theta().data();
  const LayerLayout& lay = params.layer(layer);
  const Attention at = Squeeze(th, lay, distance);
  std::vector<double> map(distance.plane_size());
  ForEachMapValue(th, lay, distance, at, [&](size_t p, double m) { map[p] = m; });
  return map;
}

double SpatialPool(std::span<const double> map, int width, int height, const SaliencyMap& saliency) {
  if (map.size() != static_cast<size_t>(width) * height) throw std::invalid_argument("spatial pool: map size mismatch");
  const auto w = saliency.ResizedTo(width, height);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < map.size(); ++i) {
    num += w[i] * map[i];
    den += w[i];
  }
  if (!(den > 0.0)) throw std::invalid_argument("spatial pool: resized saliency has zero total weight");
  return num / den;
}

double PathwayScore(const FusionParams& params, const PathwayInput& input) {
  if (input.layers.size() != params.num_layers()) {
    throw std::invalid_argument("pathway has " + std::to_string(input.layers.size()) + " layers, model has " +
                                std::to_string(params.num_layers()));
  }
  const double* th = params.theta().data();
  double total = 0.0;
  for (size_t l = 0; l < input.layers.size(); ++l) {
    const LayerInput& li = input.layers[l];
    CheckLayer(params, l, li.distance);
    const Attention at = Squeeze(th, params.layer(l), li.distance);
    double pooled = 0.0;
    ForEachMapValue(th, params.layer(l), li.distance, at,
                    [&](size_t p, double m) { pooled += li.pool_weights[p] * m; });
    total += pooled;
  }
  return total / static_cast<double>(input.layers.size());
}

void PathwayBackward(const FusionParams& params, const PathwayInput& input, double upstream,
                     std::vector<double>& grad) {
  if (grad.size() != params.size()) throw std::invalid_argument("gradient buffer size mismatch");
  const double* th = params.theta().data();
  double* gr = grad.data();
  const double d_pool = upstream / static_cast<double>(input.layers.size());
  for (size_t l = 0; l < input.layers.size(); ++l) {
    const LayerInput& li = input.layers[l];
    const LayerLayout& lay = params.layer(l);
    const Tensor3& x = li.distance;
    const int c_n = lay.channels, m_n = lay.mid, r_n = lay.reduced;
    const size_t n = x.plane_size();
    const Attention at = Squeeze(th, lay, x);

    std::vector<double> y(c_n), h(m_n), d_scale(c_n, 0.0);
    for (size_t p = 0; p < n; ++p) {
      const double dm = d_pool * li.pool_weights[p];
      if (dm == 0.0) continue;
      for (int c = 0; c < c_n; ++c) y[c] = at.sc[c] * x.data[c * n + p];
      gr[lay.conv2_b] += dm;
      for (int k = 0; k < m_n; ++k) {
        double hk = th[lay.conv1_b + k];
        const double* w = th + lay.conv1_w + static_cast<size_t>(k) * c_n;
        for (int c = 0; c < c_n; ++c) hk += w[c] * y[c];
        if (hk <= 0.0) continue;
        gr[lay.conv2_w + k] += dm * hk;
        const double dh = dm * th[lay.conv2_w + k];
        gr[lay.conv1_b + k] += dh;
        double* gw = gr + lay.conv1_w + static_cast<size_t>(k) * c_n;
        for (int c = 0; c < c_n; ++c) {
          gw[c] += dh * y[c];
          d_scale[c] += dh * w[c] * x.data[c * n + p];
        }
      }
    }
    // Back through the excitation MLP.
    std::vector<double> dz(c_n);
    for (int c = 0; c < c_n; ++c) dz[c] = d_scale[c] * at.sc[c] * (1.0 - at.sc[c]);
    std::vector<double> dr(r_n, 0.0);
    for (int c = 0; c < c_n; ++c) {
      gr[lay.fc2_b + c] += dz[c];
      for (int j = 0; j < r_n; ++j) {
        gr[lay.fc2_w + c * r_n + j] += dz[c] * std::max(at.a[j], 0.0);
        dr[j] += dz[c] * th[lay.fc2_w + c * r_n + j];
      }
    }
    for (int j = 0; j < r_n; ++j) {
      if (at.a[j] <= 0.0) continue;
      gr[lay.fc1_b + j] += dr[j];
      for (int c = 0; c < c_n; ++c) gr[lay.fc1_w + j * c_n + c] += dr[j] * at.g[c];
    }
  }
}

CfiqaPrediction PredictCfiqa(const FeatureStack& dist, const FeatureStack& ref1, const FeatureStack& ref2,
                             const SaliencyMap& sal1, const SaliencyMap& sal2, const FusionParams& params) {
  std::vector<int> ch;
  for (const auto& t : dist.layers) ch.push_back(t.channels);
  params.RequireCompatible(dist.extractor, ch);
  const FeatureStack d = UnitNormalize(dist);
  CfiqaPrediction out;
  out.s1 = PathwayScore(params, MakePathwayInput(d, UnitNormalize(ref1), sal1));
  out.s2 = PathwayScore(params, MakePathwayInput(d, UnitNormalize(ref2), sal2));
  return out;
}

namespace {

struct HeadPass {
  std::array<double, kHeadHidden> pre{};
  double logit = 0.0;
};

HeadPass HeadForward(const FusionParams& params, double s) {
  const auto& th = params.theta();
  HeadPass hp;
  const double u = -s;
  hp.logit = th[params.head_b2()];
  for (int k = 0; k < kHeadHidden; ++k) {
    const double a = th[params.head_w1() + k] * u + th[params.head_b1() + k];
    hp.pre[k] = a;
    hp.logit += th[params.head_w2() + k] * (a > 0.0 ? a : kHeadLeakySlope * a);
  }
  return hp;
}

// Adds the head gradient for dL/dlogit = d_logit; returns dL/ds.
double HeadBackward(const FusionParams& params, double s, const HeadPass& hp, double d_logit,
                    std::vector<double>& grad) {
  const auto& th = params.theta();
  const double u = -s;
  grad[params.head_b2()] += d_logit;
  double du = 0.0;
  for (int k = 0; k < kHeadHidden; ++k) {
    const double a = hp.pre[k];
    const double slope = a > 0.0 ? 1.0 : kHeadLeakySlope;
    grad[params.head_w2() + k] += d_logit * slope * a;
    const double da = d_logit * th[params.head_w2() + k] * slope;
    grad[params.head_w1() + k] += da * u;
    grad[params.head_b1() + k] += da;
    du += da * th[params.head_w1() + k];
  }
  return -du;
}

// BCE of sigmoid(o) against t, from the logit.
double BceLogit(double o, double t) { return Softplus(o) - t * o; }

}  // namespace

double HeadQuality(const FusionParams& params, double s) { return Sigmoid(HeadForward(params, s).logit); }

double Bce(double p, double t) {
  auto xlogy = [](double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); };
  return -xlogy(t, p) - xlogy(1.0 - t, 1.0 - p);
}

LossParts PairLoss(const FusionParams& params, double s1, double s2, double mos1, double mos2, double gamma,
                   std::vector<double>* grad, PairGradient* pair_grad) {
  if (!(gamma > 0.0)) throw std::invalid_argument("loss weight gamma must be > 0");
  for (double m : {mos1, mos2}) {
    if (!(m >= 0.0 && m <= 100.0)) throw std::invalid_argument("MOS " + std::to_string(m) + " outside [0, 100]");
  }
  const auto& th = params.theta();
  const double rho = th[params.rho_index()];
  const double w = Softplus(rho);
  const double o_r = w * (s2 - s1) + th[params.b_rank_index()];
  const double h = mos1 > mos2 ? 1.0 : (mos1 < mos2 ? 0.0 : 0.5);
  const double t1 = mos1 / 100.0, t2 = mos2 / 100.0;
  const HeadPass hp1 = HeadForward(params, s1);
  const HeadPass hp2 = HeadForward(params, s2);

  LossParts parts;
  parts.ranking = BceLogit(o_r, h);
  parts.score1 = BceLogit(hp1.logit, t1);
  parts.score2 = BceLogit(hp2.logit, t2);
  parts.total = parts.score1 + parts.score2 + gamma * parts.ranking;

  if (grad != nullptr) {
    if (grad->size() != params.size()) throw std::invalid_argument("gradient buffer size mismatch");
    const double d_or = gamma * (Sigmoid(o_r) - h);
    (*grad)[params.rho_index()] += d_or * (s2 - s1) * Sigmoid(rho);
    (*grad)[params.b_rank_index()] += d_or;
    PairGradient pg;
    pg.ds1 = -d_or * w + HeadBackward(params, s1, hp1, Sigmoid(hp1.logit) - t1, *grad);
    pg.ds2 = d_or * w + HeadBackward(params, s2, hp2, Sigmoid(hp2.logit) - t2, *grad);
    if (pair_grad != nullptr) *pair_grad = pg;
  }
  return parts;
}

}  // namespace ciqa
