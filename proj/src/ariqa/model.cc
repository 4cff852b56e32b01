#include "ciqa/ariqa/model.h"

#include <stdexcept>

#include "ciqa/eval/correlation.h"
#include "ciqa/fusion/features.h"

namespace ciqa {

AriqaItem MakeAriqaItem(const FeatureStack& superimposed, const FeatureStack& ar_ref,
                        const FeatureStack& background, const SaliencyMap& sal_ar, const SaliencyMap& sal_bg,
                        double mos, int scene) {
  const FeatureStack s = UnitNormalize(superimposed);
  AriqaItem item;
  item.ar = MakePathwayInput(s, UnitNormalize(ar_ref), sal_ar);
  item.bg = MakePathwayInput(s, UnitNormalize(background), sal_bg);
  item.mos = mos;
  item.scene = scene;
  return item;
}

double FusedScore(const FusionParams& params, const AriqaItem& item) {
  return params[params.fuse_u()] * PathwayScore(params, item.ar) +
         params[params.fuse_v()] * PathwayScore(params, item.bg) + params[params.fuse_c()];
}

double PredictAriqa(const FusionParams& params, const AriqaItem& item) {
  return 100.0 * HeadQuality(params, FusedScore(params, item));
}

double PredictAriqa(const FusionParams& params, const ArStimulus& st, const SaliencyMap& sal_ar,
                    const SaliencyMap& sal_bg) {
  const FeatureStack s = BuiltinFeatures(st.superimposed);
  std::vector<int> ch;
  for (const auto& t : s.layers) ch.push_back(t.channels);
  params.RequireCompatible(s.extractor, ch);
  const AriqaItem item = MakeAriqaItem(s, BuiltinFeatures(st.ar_ref), BuiltinFeatures(st.background), sal_ar,
                                       sal_bg, 0.0, 0);
  return PredictAriqa(params, item);
}

std::vector<std::pair<size_t, size_t>> ScenePairs(const std::vector<AriqaItem>& items,
                                                  const std::vector<size_t>& subset) {
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t a = 0; a < subset.size(); ++a) {
    for (size_t b = a + 1; b < subset.size(); ++b) {
      if (items[subset[a]].scene == items[subset[b]].scene) pairs.emplace_back(subset[a], subset[b]);
    }
  }
  return pairs;
}

LossParts AriqaPairLoss(const FusionParams& params, const AriqaItem& a, const AriqaItem& b, double gamma,
                        std::vector<double>* grad) {
  const double u = params[params.fuse_u()], v = params[params.fuse_v()];
  const double a_ar = PathwayScore(params, a.ar), a_bg = PathwayScore(params, a.bg);
  const double b_ar = PathwayScore(params, b.ar), b_bg = PathwayScore(params, b.bg);
  const double c = params[params.fuse_c()];
  const double sa = u * a_ar + v * a_bg + c;
  const double sb = u * b_ar + v * b_bg + c;
  PairGradient pg;
  const LossParts parts = PairLoss(params, sa, sb, a.mos, b.mos, gamma, grad, &pg);
  if (grad != nullptr) {
    auto& g = *grad;
    g[params.fuse_u()] += pg.ds1 * a_ar + pg.ds2 * b_ar;
    g[params.fuse_v()] += pg.ds1 * a_bg + pg.ds2 * b_bg;
    g[params.fuse_c()] += pg.ds1 + pg.ds2;
    PathwayBackward(params, a.ar, pg.ds1 * u, g);
    PathwayBackward(params, a.bg, pg.ds1 * v, g);
    PathwayBackward(params, b.ar, pg.ds2 * u, g);
    PathwayBackward(params, b.bg, pg.ds2 * v, g);
  }
  return parts;
}

FusionParams TrainAriqa(const std::vector<AriqaItem>& items, const std::vector<size_t>& train,
                        const TrainConfig& cfg, FusionParams init, TrainHistory* history) {
  const auto pairs = ScenePairs(items, train);
  if (pairs.empty()) throw std::invalid_argument("AR training set has no same-scene pairs");
  const size_t batch = static_cast<size_t>(cfg.batch);
  const size_t batches_per_epoch = (train.size() + batch - 1) / batch;
  EpochPlan plan = [&pairs, batch, batches_per_epoch](int, Rng& rng) {
    std::vector<std::vector<size_t>> batches(batches_per_epoch);
    for (auto& b : batches) {
      for (size_t k = 0; k < batch; ++k) b.push_back(static_cast<size_t>(rng.Below(pairs.size())));
    }
    return batches;
  };
  ItemLoss loss = [&](const FusionParams& p, size_t k, std::vector<double>* g) {
    return AriqaPairLoss(p, items[pairs[k].first], items[pairs[k].second], cfg.gamma, g).total;
  };
  return RunTraining(std::move(init), cfg, plan, loss, history);
}

AriqaCvResult AriqaCrossval(const std::vector<AriqaItem>& items, const std::string& extractor,
                            const TrainConfig& cfg, const AriqaCvOptions& options) {
  if (items.empty()) throw std::invalid_argument("AR cross-validation: no items");
  if (options.repeats < 1) throw std::invalid_argument("AR cross-validation needs at least one repeat");
  std::vector<int> scenes;
  for (const auto& it : items) scenes.push_back(it.scene);
  std::vector<int> distinct = scenes;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const size_t train_scenes = options.train_scenes ? options.train_scenes : distinct.size() / 2;
  std::vector<int> channels;
  for (const auto& l : items.front().ar.layers) channels.push_back(l.distance.channels);

  AriqaCvResult result;
  Rng rng(options.seed);
  for (int r = 0; r < options.repeats; ++r) {
    TrainTestSplit split = GroupSplit(scenes, train_scenes, rng);
    RequireGroupDisjoint(split, scenes);
    TrainConfig fold_cfg = cfg;
    fold_cfg.seed = cfg.seed + static_cast<uint64_t>(r);
    const FusionParams params = TrainAriqa(items, split.train, fold_cfg,
                                           FusionParams::Initialize(extractor, channels, options.init_seed));
    std::vector<double> pred, mos;
    for (size_t i : split.test) {
      pred.push_back(PredictAriqa(params, items[i]));
      mos.push_back(items[i].mos);
    }
    CorrelationSummary c;
    c.srcc = Srcc(pred, mos);
    c.krcc = Krcc(pred, mos);
    c.plcc = Plcc(pred, mos);
    c.rmse = Rmse(pred, mos);
    result.per_repeat.push_back(c);
    result.splits.push_back(std::move(split));
  }
  result.mean = Average(result.per_repeat);
  return result;
}

}  // namespace ciqa
