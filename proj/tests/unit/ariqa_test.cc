#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "ciqa/ariqa/crossval.h"
#include "ciqa/ariqa/model.h"
#include "ciqa/ariqa/stimulus.h"
#include "ciqa/ariqa/svr.h"
#include "ciqa/eval/correlation.h"
#include "ciqa/fusion/features.h"
#include "gradcheck.h"
#include "procedural.h"
#include "svr_oracle.h"

namespace ciqa {
namespace {

using Rows = std::vector<std::vector<double>>;

TEST(ArStimulus, ComposeIdentity) {
  Rng rng(1);
  const Image ar = testing::ProceduralImage(64, 48, 3, rng), bg = testing::ProceduralImage(64, 48, 3, rng);
  const ArStimulus st = ArStimulus::Compose(ar, ar, bg, 0.42);
  EXPECT_LE(st.IdentityError(), kSuperimposeTolerance);
  for (size_t i = 0; i < st.superimposed.size(); ++i) {
    const double expected = 0.42 * ar.data()[i] + 0.58 * bg.data()[i];
    ASSERT_NEAR(st.superimposed.data()[i], expected, 1e-6);
  }
  EXPECT_NO_THROW(ArStimulus::FromParts(ar, ar, bg, 0.42, st.superimposed));
  Image off = st.superimposed;
  off.data()[5] += 1e-3f;
  EXPECT_THROW(ArStimulus::FromParts(ar, ar, bg, 0.42, off), std::invalid_argument);
  EXPECT_THROW(ArStimulus::Compose(ar, ar, Image(10, 10, 3), 0.5), std::invalid_argument);
}

TEST(ArStimulus, VariantEndpoints) {
  Rng rng(2);
  const Image ar = testing::ProceduralImage(64, 64, 3, rng), bg = testing::ProceduralImage(64, 64, 3, rng);
  const VariantScores one = ComputeVariantScores(ArStimulus::Compose(ar, ar, bg, 1.0), "ssim");
  EXPECT_NEAR(one.type1, 1.0, 1e-9);
  EXPECT_EQ(one.type2, one.type1);
  EXPECT_FALSE(one.type3.has_value());
  const VariantScores zero = ComputeVariantScores(ArStimulus::Compose(ar, ar, bg, 0.0), "ssim");
  EXPECT_NEAR(zero.type3_f2, 1.0, 1e-9);
  EXPECT_EQ(zero.type3_f1, zero.type2);
  const VariantScores mse = ComputeVariantScores(ArStimulus::Compose(ar, ar, bg, 0.0), "mse");
  EXPECT_EQ(mse.type3_f2, 0.0);
}

Rows UniformRows(size_t n, size_t d, Rng& rng) {
  Rows x(n, std::vector<double>(d));
  for (auto& row : x) {
    for (auto& v : row) v = rng.Uniform(-1.0, 1.0);
  }
  return x;
}

double RmseOf(const SvrModel& m, const Rows& x, std::span<const double> y) {
  return Rmse(m.Predict(x), y);
}

TEST(Svr, DualFeasibilityAndKkt) {
  Rng rng(3);
  const Rows x = UniformRows(80, 2, rng);
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = std::sin(3 * x[i][0]) + x[i][1] * x[i][1] + rng.Normal(0, 0.1);
  for (SvrKernel k : {SvrKernel::kRbf, SvrKernel::kLinear}) {
    SvrTrainInfo info;
    SvrParams params;
    params.kernel = k;
    params.c = 3.0;
    const SvrModel m = SvrTrain(x, y, params, &info);
    EXPECT_TRUE(info.converged);
    EXPECT_LE(info.kkt_violation, 1e-3);
    const testing::SvrDualCheck check = testing::CheckSvrDual(m, info, x, y);
    EXPECT_EQ(check.box_violation, 0.0);
    EXPECT_LE(check.kkt_residual, 1e-3);
    EXPECT_LE(check.equality_residual, 1e-9);
  }
}

TEST(Svr, LinearNoiseFreeFit) {
  Rng rng(4);
  const Rows x = UniformRows(60, 3, rng);
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = 2.0 * x[i][0] - 1.5 * x[i][1] + 0.5 * x[i][2] + 3.0;
  SvrParams params;
  params.kernel = SvrKernel::kLinear;
  params.c = 100.0;
  const SvrModel m = SvrTrain(x, y, params);
  EXPECT_LE(RmseOf(m, x, y), params.epsilon + 1e-6);
}

TEST(Svr, RbfSinusoid) {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 100; ++i) {
    const double t = 2 * std::numbers::pi * i / 99.0;
    x.push_back({t});
    y.push_back(std::sin(t));
  }
  SvrParams params;
  params.gamma = 1.0;
  params.c = 10.0;
  EXPECT_LT(RmseOf(SvrTrain(x, y, params), x, y), 0.1);
}

TEST(Svr, AffineColumnInvariance) {
  Rng rng(5);
  const Rows x = UniformRows(50, 2, rng);
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = std::exp(x[i][0]) - x[i][1];
  Rows z = x;
  for (auto& row : z) row[1] = -40.0 * row[1] + 7.0;
  const SvrModel a = SvrTrain(x, y), b = SvrTrain(z, y);
  for (size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(a.Predict(x[i]), b.Predict(z[i]), 1e-6);
}

TEST(Svr, DegenerateInputs) {
  const SvrModel single = SvrTrain({{1.0, 2.0}}, std::vector<double>{4.0});
  EXPECT_LE(std::abs(single.Predict(std::vector<double>{1.0, 2.0}) - 4.0), 0.1 + 1e-12);

  const Rows dup = {{1, 2}, {1, 2}, {3, 1}, {0, 0}};
  const std::vector<double> y = {1.0, 2.0, 0.0, 5.0};
  const SvrModel m = SvrTrain(dup, y);
  EXPECT_EQ(m.Predict(dup[0]), m.Predict(dup[1]));

  const SvrModel flat = SvrTrain(dup, std::vector<double>(4, 3.0));
  EXPECT_TRUE(flat.support.empty());
  EXPECT_EQ(flat.Predict(std::vector<double>{9, 9}), 3.0);

  EXPECT_THROW(SvrTrain({}, std::vector<double>{}), std::invalid_argument);
  SvrParams bad;
  bad.c = 0.0;
  EXPECT_THROW(SvrTrain(dup, y, bad), std::invalid_argument);
  EXPECT_EQ(ParseSvrKernel(SvrKernelName(SvrKernel::kLinear)), SvrKernel::kLinear);
  EXPECT_THROW(ParseSvrKernel("poly"), std::invalid_argument);
}

TEST(Svr, JsonRoundTripAndDeterminism) {
  Rng rng(6);
  const Rows x = UniformRows(40, 2, rng);
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = x[i][0] * x[i][1];
  const SvrModel m = SvrTrain(x, y);
  const SvrModel back = SvrModel::FromJson(m.ToJson());
  for (const auto& row : x) EXPECT_EQ(back.Predict(row), m.Predict(row));
  EXPECT_EQ(SvrTrain(x, y).ToJson(), m.ToJson());
}

TEST(Crossval, SplitsAndLeakage) {
  Rng rng(7);
  const TrainTestSplit s = RandomSplit(23, 0.8, rng);
  EXPECT_EQ(s.train.size(), 18u);
  EXPECT_EQ(s.test.size(), 5u);
  std::vector<int> groups;
  for (int g = 0; g < 10; ++g) {
    for (int k = 0; k < 3; ++k) groups.push_back(g);
  }
  const TrainTestSplit gs = GroupSplit(groups, 8, rng);
  EXPECT_NO_THROW(RequireGroupDisjoint(gs, groups));
  std::set<int> train_groups;
  for (size_t i : gs.train) train_groups.insert(groups[i]);
  EXPECT_EQ(train_groups.size(), 8u);
  EXPECT_EQ(gs.train.size() + gs.test.size(), groups.size());
  const TrainTestSplit leak{{0, 1}, {2, 3}};
  EXPECT_THROW(RequireGroupDisjoint(leak, groups), std::runtime_error);
}

TEST(Crossval, DegenerateModeEqualsInSample) {
  Rng rng(8);
  const Rows x = UniformRows(40, 2, rng);
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = 50 + 20 * x[i][0] + 10 * std::sin(4 * x[i][1]);
  SvrCvOptions o;
  o.train_equals_test = true;
  const SvrCvResult r = SvrCrossval(x, y, o);
  ASSERT_EQ(r.per_fold.size(), 1u);
  EXPECT_NEAR(r.mean.srcc, Srcc(SvrTrain(x, y, o.svr).Predict(x), y), 1e-12);
}

TEST(Crossval, SeededAndGrouped) {
  Rng rng(9);
  const Rows x = UniformRows(60, 2, rng);
  std::vector<double> y(x.size());
  std::vector<int> groups(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    y[i] = 3 * x[i][0] + x[i][1];
    groups[i] = static_cast<int>(i % 12);
  }
  SvrCvOptions o;
  o.folds = 20;
  o.seed = 4;
  const SvrCvResult a = SvrCrossval(x, y, o), b = SvrCrossval(x, y, o, groups);
  EXPECT_EQ(a.mean.srcc, SvrCrossval(x, y, o).mean.srcc);
  EXPECT_EQ(a.per_fold.size() + a.skipped_folds, 20u);
  for (const auto& s : b.splits) EXPECT_NO_THROW(RequireGroupDisjoint(s, groups));
  EXPECT_GT(a.mean.srcc, 0.9);
  EXPECT_THROW(SvrCrossval(Rows(9, {1.0}), std::vector<double>(9, 1.0), o), std::invalid_argument);
}

AriqaItem RandomItem(const FusionParams& p, uint64_t seed, double mos, int scene) {
  return {testing::RandomPathway(p, 4, seed), testing::RandomPathway(p, 4, seed + 100), mos, scene};
}

TEST(AriqaModel, PairLossGradient) {
  const std::vector<int> ch = {3, 5, 2};
  for (uint64_t seed : {1u, 2u, 3u}) {
    FusionParams p = FusionParams::Initialize("t", ch, seed);
    testing::RandomizeParams(p, seed + 10);
    const AriqaItem a = RandomItem(p, seed + 20, 70.0, 0), b = RandomItem(p, seed + 30, 35.0, 0);
    const auto report = testing::CompareGradient(
        p, [&](const FusionParams& q, std::vector<double>* g) { return AriqaPairLoss(q, a, b, 2.0, g).total; },
        1e-4);
    EXPECT_LT(report.max_rel_error, 1e-4) << report.worst_group;
  }
}

TEST(AriqaModel, FusedScoreAndPairs) {
  const std::vector<int> ch = {2};
  FusionParams p = FusionParams::Initialize("t", ch, 4);
  std::vector<AriqaItem> items;
  for (int k = 0; k < 6; ++k) items.push_back(RandomItem(p, 40 + k, 10.0 * k, k / 3));
  p.theta()[p.fuse_u()] = 2.0;
  p.theta()[p.fuse_v()] = -0.5;
  p.theta()[p.fuse_c()] = 0.25;
  const double expected = 2.0 * PathwayScore(p, items[0].ar) - 0.5 * PathwayScore(p, items[0].bg) + 0.25;
  EXPECT_NEAR(FusedScore(p, items[0]), expected, 1e-12);
  const double q = PredictAriqa(p, items[0]);
  EXPECT_NEAR(q, 100.0 * HeadQuality(p, expected), 1e-9);
  const std::vector<size_t> all = {0, 1, 2, 3, 4, 5}, some = {0, 1, 3};
  EXPECT_EQ(ScenePairs(items, all).size(), 6u);
  EXPECT_EQ(ScenePairs(items, some).size(), 1u);
}

TEST(AriqaModel, ZeroRateTraining) {
  const std::vector<int> ch = {2, 3};
  const FusionParams p = FusionParams::Initialize("t", ch, 5);
  std::vector<AriqaItem> items;
  for (int k = 0; k < 8; ++k) items.push_back(RandomItem(p, 50 + k, 12.0 * k, k % 2));
  TrainConfig cfg;
  cfg.lr = 0.0;
  cfg.epochs_flat = 2;
  cfg.epochs_decay = 1;
  cfg.batch = 3;
  const std::vector<size_t> train = {0, 1, 2, 3, 4, 5};
  TrainHistory h;
  EXPECT_EQ(TrainAriqa(items, train, cfg, p, &h), p);
  EXPECT_EQ(h.epoch_loss.size(), 3u);
  cfg.lr = 1e-3;
  EXPECT_EQ(TrainAriqa(items, train, cfg, p), TrainAriqa(items, train, cfg, p));
}

TEST(AriqaModel, TrainedOnMonotoneDataPrefersCleanFullOpacity) {
  Rng rng(6);
  const SaliencyMap sal = SaliencyMap::CenterPrior(128, 128);
  const std::vector<double> lambdas = {0.26, 0.42, 0.58, 0.74, 1.0};
  std::vector<AriqaItem> items;
  std::vector<ArStimulus> stimuli;
  for (int scene = 0; scene < 4; ++scene) {
    const Image ar = testing::StationaryTexture(128, 128, 3, rng);
    const Image bg = testing::StationaryTexture(128, 128, 3, rng);
    const FeatureStack far = BuiltinFeatures(ar), fbg = BuiltinFeatures(bg);
    for (double lambda : lambdas) {
      const ArStimulus st = ArStimulus::Compose(ar, ar, bg, lambda);
      items.push_back(MakeAriqaItem(BuiltinFeatures(st.superimposed), far, fbg, sal, sal, 20.0 + 70.0 * lambda, scene));
      stimuli.push_back(st);
    }
  }
  std::vector<int> channels;
  for (const auto& l : items[0].ar.layers) channels.push_back(l.distance.channels);
  TrainConfig cfg;
  cfg.epochs_flat = 10;
  cfg.epochs_decay = 5;
  std::vector<size_t> train(items.size());
  for (size_t i = 0; i < train.size(); ++i) train[i] = i;
  const FusionParams p =
      TrainAriqa(items, train, cfg, FusionParams::Initialize(kBuiltinExtractor, channels, 6));
  for (int scene = 0; scene < 4; ++scene) {
    const size_t low = scene * lambdas.size(), full = low + lambdas.size() - 1;
    EXPECT_GE(PredictAriqa(p, items[full]), PredictAriqa(p, items[low])) << scene;
    EXPECT_EQ(PredictAriqa(p, stimuli[full], sal, sal), PredictAriqa(p, stimuli[full], sal, sal));
  }
  // Identical pixels give identical scores, through features or item.
  EXPECT_EQ(PredictAriqa(p, items[0]), PredictAriqa(p, MakeAriqaItem(BuiltinFeatures(stimuli[0].superimposed),
                                                                         BuiltinFeatures(stimuli[0].ar_ref),
                                                                         BuiltinFeatures(stimuli[0].background),
                                                                         sal, sal, 0.0, 0)));
  const FusionParams wrong = FusionParams::Initialize("other", channels, 6);
  EXPECT_THROW(PredictAriqa(wrong, stimuli[0], sal, sal), std::invalid_argument);
}

}  // namespace
}  // namespace ciqa
