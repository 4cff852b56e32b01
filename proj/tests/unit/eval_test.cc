#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ciqa/common/rng.h"
#include "ciqa/eval/correlation.h"
#include "ciqa/eval/logistic.h"
#include "ciqa/eval/report.h"
#include "ciqa/eval/roc.h"
#include "eval_oracle.h"
#include "json.hpp"

namespace ciqa {
namespace {

std::vector<double> Iota(size_t n) {
  std::vector<double> v(n);
  std::iota(v.begin(), v.end(), 1.0);
  return v;
}

TEST(Correlation, ExhaustivePermutationsMatchClosedForms) {
  for (size_t n = 2; n <= 8; ++n) {
    const std::vector<double> a = Iota(n);
    std::vector<double> b = a;
    do {
      ASSERT_NEAR(Srcc(a, b), testing::SpearmanNoTies(a, b), 1e-12);
      ASSERT_NEAR(Krcc(a, b), testing::KendallTauBPairs(a, b), 1e-12);
    } while (std::next_permutation(b.begin(), b.end()));
  }
  const std::vector<double> x = {1, 2, 3}, y = {1, 3, 2};
  EXPECT_NEAR(Krcc(x, y), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(Srcc(x, y), 0.5, 1e-15);
}

TEST(Correlation, TiesUseAverageRanksAndTauB) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(12), b(12);
    for (auto& v : a) v = static_cast<double>(rng.Below(4));
    for (auto& v : b) v = static_cast<double>(rng.Below(5));
    if (std::all_of(a.begin(), a.end(), [&](double v) { return v == a[0]; })) continue;
    if (std::all_of(b.begin(), b.end(), [&](double v) { return v == b[0]; })) continue;
    EXPECT_NEAR(Krcc(a, b), testing::KendallTauBPairs(a, b), 1e-12);
    EXPECT_NEAR(Srcc(a, b), Plcc(AverageRanks(a), AverageRanks(b)), 1e-12);
  }
  EXPECT_EQ(AverageRanks(std::vector<double>{3, 1, 3, 2}), (std::vector<double>{3.5, 1, 3.5, 2}));
}

TEST(Correlation, AffineInvariance) {
  Rng rng(2);
  std::vector<double> a(30), b(30);
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.Normal();
    b[i] = a[i] + rng.Normal(0.0, 0.5);
  }
  std::vector<double> c = a;
  for (auto& v : c) v = 3.5 * v - 11.0;
  EXPECT_NEAR(Plcc(a, b), Plcc(c, b), 1e-12);
  EXPECT_NEAR(Srcc(a, b), Srcc(c, b), 1e-12);
  EXPECT_NEAR(Krcc(a, b), Krcc(c, b), 1e-12);
  for (auto& v : c) v = -v;
  EXPECT_NEAR(Plcc(a, b), -Plcc(c, b), 1e-12);
  EXPECT_NEAR(Srcc(a, b), -Srcc(c, b), 1e-12);
}

TEST(Correlation, RejectsBadInput) {
  const std::vector<double> a = {1, 2, 3}, flat = {2, 2, 2}, short_v = {1, 2};
  EXPECT_THROW(Plcc(a, short_v), std::invalid_argument);
  EXPECT_THROW(Srcc(a, flat), std::invalid_argument);
  EXPECT_THROW(Krcc(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
  EXPECT_DOUBLE_EQ(Rmse(a, std::vector<double>{2, 3, 4}), 1.0);
}

TEST(Logistic, RecoversNoiseFreeCurve) {
  const LogisticParams truth{40.0, 0.9, 5.0, 2.0, 30.0};
  std::vector<double> q(50), mos(50);
  for (size_t i = 0; i < q.size(); ++i) {
    q[i] = 10.0 * static_cast<double>(i) / 49.0;
    mos[i] = truth(q[i]);
  }
  const LogisticFit fit = FitLogistic(q, mos);
  EXPECT_LT(fit.sse, 1e-10);
  EXPECT_TRUE(fit.converged);
}

TEST(Logistic, LinearSubfamily) {
  std::vector<double> q(30), mos(30);
  for (size_t i = 0; i < q.size(); ++i) {
    q[i] = 0.1 * static_cast<double>(i) - 1.0;
    mos[i] = 2.0 * q[i] + 1.0;
  }
  const LogisticFit fit = FitLogistic(q, mos);
  for (size_t i = 0; i < q.size(); ++i) EXPECT_NEAR(fit.params(q[i]), mos[i], 1e-6);
}

TEST(Logistic, NeverWorsensPlcc) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> q(40), mos(40);
    for (size_t i = 0; i < q.size(); ++i) {
      q[i] = rng.Uniform(0.0, 1.0);
      mos[i] = 100.0 / (1.0 + std::exp(-6.0 * (q[i] - 0.5))) + rng.Normal(0.0, 8.0);
    }
    const LogisticFit fit = FitLogistic(q, mos, {.restarts = 5, .seed = static_cast<uint64_t>(trial)});
    EXPECT_GE(Plcc(fit.params.Apply(q), mos), Plcc(q, mos) - 1e-12);
  }
}

TEST(Logistic, MoreRestartsNeverRaiseSse) {
  Rng rng(4);
  std::vector<double> q(40), mos(40);
  for (size_t i = 0; i < q.size(); ++i) {
    q[i] = rng.Uniform(-3.0, 3.0);
    mos[i] = 50.0 * std::tanh(q[i]) + rng.Normal(0.0, 10.0);
  }
  double prev = INFINITY;
  for (int restarts : {0, 2, 5, 10, 20}) {
    const double sse = FitLogistic(q, mos, {.restarts = restarts, .seed = 9}).sse;
    EXPECT_LE(sse, prev + 1e-9) << restarts;
    prev = sse;
  }
}

TEST(Logistic, RejectsDegenerateInput) {
  const std::vector<double> four = {1, 2, 3, 4}, flat(6, 1.0), six = {1, 2, 3, 4, 5, 6};
  EXPECT_THROW(FitLogistic(four, four), std::invalid_argument);
  EXPECT_THROW(FitLogistic(flat, six), std::invalid_argument);
}

TEST(Auc, MatchesPairCountingWithTies) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t n = 2 + rng.Below(40);
    std::vector<double> s(n);
    std::vector<int> l(n);
    for (size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.Below(6));
      l[i] = static_cast<int>(rng.Below(2));
    }
    l[0] = 1;
    l[1] = 0;
    EXPECT_NEAR(Auc(s, l), testing::AucPairs(s, l), 1e-12);
    std::vector<double> neg = s;
    for (auto& v : neg) v = -v;
    EXPECT_NEAR(Auc(s, l) + Auc(neg, l), 1.0, 1e-12);
  }
  EXPECT_TRUE(std::isnan(Auc(std::vector<double>{1, 2}, std::vector<int>{1, 1})));
}

std::vector<MosEntry> SpreadMos(size_t n) {
  std::vector<MosEntry> stats;
  for (size_t i = 0; i < n; ++i) stats.push_back({"s" + std::to_string(i), 10.0 * i, 2.0, 20});
  return stats;
}

TEST(Roc, PairCountsAndPerfectOrdering) {
  const auto stats = SpreadMos(10);
  std::vector<double> q(10), anti(10);
  for (size_t i = 0; i < q.size(); ++i) {
    q[i] = static_cast<double>(i);
    anti[i] = -q[i];
  }
  const RocAnalysis ds = RocDifferentSimilar(stats, q);
  EXPECT_EQ(ds.positives + ds.negatives, 45u);
  const RocAnalysis good = RocBetterWorse(stats, q, true), bad = RocBetterWorse(stats, anti, true);
  EXPECT_EQ(good.pairs.size(), 45u);
  EXPECT_DOUBLE_EQ(good.auc, 1.0);
  EXPECT_DOUBLE_EQ(bad.auc, 0.0);
  // A lower-is-better metric sees its scores negated.
  EXPECT_DOUBLE_EQ(RocBetterWorse(stats, anti, false).auc, 1.0);

  EXPECT_EQ(AucSignificance(good, bad, 500, 1).verdict, SignificanceVerdict::kBetter);
  EXPECT_EQ(AucSignificance(bad, good, 500, 1).verdict, SignificanceVerdict::kWorse);
  const AucComparison self = AucSignificance(good, good, 500, 1);
  EXPECT_EQ(self.verdict, SignificanceVerdict::kIndistinguishable);
  EXPECT_EQ(self.auc_difference, 0.0);
  EXPECT_THROW(AucSignificance(good, good, 50, 1), std::invalid_argument);
}

TEST(Roc, SignificanceTest) {
  const MosEntry a{"a", 50.0, 10.0, 20}, b{"b", 58.0, 10.0, 20}, c{"c", 52.0, 10.0, 20};
  // |dMOS| / sqrt(100/20 + 100/20) = 8 / 3.162 = 2.53 and 0.63.
  EXPECT_TRUE(SignificantlyDifferent(a, b));
  EXPECT_FALSE(SignificantlyDifferent(a, c));
  EXPECT_TRUE(SignificantlyDifferent({"x", 1, 0, 1}, {"y", 2, 0, 1}));
  EXPECT_FALSE(SignificantlyDifferent({"x", 1, 0, 1}, {"y", 1, 0, 1}));
}

TEST(Report, JsonAndTable) {
  Rng rng(6);
  std::vector<MosEntry> mos;
  std::vector<MetricScores> metrics = {{"good", true, {}}, {"noise", false, {}}};
  for (int i = 0; i < 30; ++i) {
    const double m = rng.Uniform(0.0, 100.0);
    mos.push_back({"s" + std::to_string(i), m, 5.0, 20});
    metrics[0].scores.push_back(m + rng.Normal(0.0, 5.0));
    metrics[1].scores.push_back(rng.Uniform());
  }
  EvalOptions options;
  options.resamples = 200;
  options.logistic.restarts = 3;
  const EvalReport report = BuildEvalReport(mos, metrics, options);
  const auto j = nlohmann::json::parse(ReportToJson(report));
  EXPECT_EQ(j["num_stimuli"], 30);
  ASSERT_EQ(j["metrics"].size(), 2u);
  EXPECT_GT(j["metrics"][0]["srcc"].get<double>(), 0.9);
  EXPECT_TRUE(j["metrics"][0]["pwrc"].is_null());
  EXPECT_EQ(j["significance"]["better_worse"][0][1], "better");
  const std::string table = RenderReportTable(report);
  EXPECT_NE(table.find("good"), std::string::npos);
  EXPECT_NE(table.find("n/a"), std::string::npos);
  EXPECT_EQ(ReportToJson(BuildEvalReport(mos, metrics, options)), ReportToJson(report));

  metrics[1].scores.pop_back();
  EXPECT_THROW(BuildEvalReport(mos, metrics, options), std::invalid_argument);
}

}  // namespace
}  // namespace ciqa
