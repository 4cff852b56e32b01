#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ciqa/metrics/metrics.h"
#include "ciqa/metrics/registry.h"
#include "ciqa/synth/blend.h"
#include "procedural.h"

namespace ciqa {
namespace {

using testing::ProceduralImage;
using testing::RandomImage;

Image Noisy(const Image& img, double sigma, Rng& rng) {
  Image out = img;
  for (float& v : out.data()) v = static_cast<float>(std::clamp(v + rng.Normal(0.0, sigma), 0.0, 1.0));
  return out;
}

TEST(Metrics, IdealSelfScores) {
  Rng rng(1);
  const Image x = ProceduralImage(192, 192, 3, rng);
  EXPECT_NEAR(Ssim(x, x).score, 1.0, 1e-9);
  EXPECT_NEAR(MsSsim(x, x).score, 1.0, 1e-9);
  EXPECT_NEAR(Gmsm(x, x).score, 1.0, 1e-9);
  EXPECT_EQ(Mse(x, x).score, 0.0);
  EXPECT_NEAR(Gmsd(x, x).score, 0.0, 1e-9);
  EXPECT_EQ(Pamse(x, x).score, 0.0);
  EXPECT_EQ(Psnr(x, x).score, 100.0);
}

TEST(Metrics, MseAndPsnrOfBlackVersusWhite) {
  const Image black(16, 16, 1, 0.0f), white(16, 16, 1, 1.0f);
  EXPECT_DOUBLE_EQ(Mse(black, white).score, 1.0);
  EXPECT_DOUBLE_EQ(Psnr(black, white).score, 0.0);
}

TEST(Metrics, SymmetricOnRandomPairs) {
  Rng rng(2);
  for (int k = 0; k < 5; ++k) {
    const Image a = ProceduralImage(48, 40, 1, rng), b = ProceduralImage(48, 40, 1, rng);
    for (const char* m : {"mse", "psnr", "ssim", "gmsd", "gmsm", "pamse"}) {
      EXPECT_NEAR(ComputeMetric(m, a, b).score, ComputeMetric(m, b, a).score, 1e-9) << m;
    }
  }
}

TEST(Metrics, RangesOnRandomPairs) {
  Rng rng(3);
  for (int k = 0; k < 5; ++k) {
    const Image a = RandomImage(200, 180, 1, rng), b = ProceduralImage(200, 180, 1, rng);
    for (const char* m : {"ssim", "ms_ssim", "gmsm"}) {
      const double s = ComputeMetric(m, a, b).score;
      EXPECT_GT(s, 0.0) << m;
      EXPECT_LE(s, 1.0) << m;
    }
    const double g = Gmsd(a, b).score;
    EXPECT_GE(g, 0.0);
    EXPECT_LT(g, 1.0);
    const double e = Mse(a, b).score;
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 1.0);
  }
}

TEST(Ssim, ConstantImagesMatchLuminanceFormula) {
  const double k1 = 0.01;
  const double expected = (2 * 0.5 * 0.6 + k1 * k1) / (0.5 * 0.5 + 0.6 * 0.6 + k1 * k1);
  const MetricResult r = Ssim(Image(20, 20, 1, 0.5f), Image(20, 20, 1, 0.6f));
  // Samples are float, so 0.6 carries float rounding.
  EXPECT_NEAR(r.score, expected, 1e-7);
  ASSERT_TRUE(r.map.has_value());
  EXPECT_EQ(r.map->width(), 20);
}

TEST(Ssim, RejectsTooSmall) {
  EXPECT_THROW(Ssim(Image(10, 10, 1), Image(10, 10, 1)), std::invalid_argument);
  EXPECT_THROW(Ssim(Image(12, 12, 1), Image(12, 13, 1)), std::invalid_argument);
}

TEST(MsSsim, SingleScaleEqualsSsim) {
  Rng rng(4);
  const Image a = ProceduralImage(64, 64, 1, rng), b = ProceduralImage(64, 64, 1, rng);
  const double w[1] = {1.0};
  EXPECT_NEAR(MsSsim(a, b, w).score, Ssim(a, b).score, 1e-9);
}

TEST(MsSsim, DecreasesWithNoise) {
  Rng rng(5);
  const Image a = ProceduralImage(192, 192, 1, rng);
  double prev = 1.0;
  for (double sigma : {0.01, 0.05, 0.1}) {
    const double s = MsSsim(a, Noisy(a, sigma, rng)).score;
    EXPECT_LT(s, prev) << sigma;
    prev = s;
  }
  EXPECT_THROW(MsSsim(Image(100, 100, 1), Image(100, 100, 1)), std::invalid_argument);
}

TEST(Gms, ConstantImagesGiveUnitMap) {
  const Image sim = GradientMagnitudeSimilarity(Image(12, 12, 1, 0.2f), Image(12, 12, 1, 0.9f));
  for (float v : sim.data()) EXPECT_EQ(v, 1.0f);
  EXPECT_EQ(Gmsd(Image(12, 12, 1, 0.2f), Image(12, 12, 1, 0.9f)).score, 0.0);
}

TEST(Gms, CraftedPatchMatchesHandArithmetic) {
  Rng rng(6);
  const Image a = RandomImage(8, 8, 1, rng), b = RandomImage(8, 8, 1, rng);
  auto magnitude = [](const Image& img, int x, int y) {
    auto px = [&](int xx, int yy) {
      return static_cast<double>(img.at(std::clamp(xx, 0, 7), std::clamp(yy, 0, 7)));
    };
    double gx = 0.0, gy = 0.0;
    for (int d = -1; d <= 1; ++d) {
      gx += (px(x + 1, y + d) - px(x - 1, y + d)) / 3.0;
      gy += (px(x + d, y + 1) - px(x + d, y - 1)) / 3.0;
    }
    return std::sqrt(gx * gx + gy * gy);
  };
  const Image sim = GradientMagnitudeSimilarity(a, b);
  double mean = 0.0;
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      const double g1 = magnitude(a, x, y), g2 = magnitude(b, x, y);
      const double expected = (2 * g1 * g2 + kGmsStabilizer) / (g1 * g1 + g2 * g2 + kGmsStabilizer);
      EXPECT_NEAR(sim.at(x, y), expected, 1e-5) << x << "," << y;
      mean += expected;
    }
  }
  EXPECT_NEAR(Gmsm(a, b).score, mean / 64.0, 1e-6);
}

TEST(Pamse, ConstantErrorIsSquared) {
  const double score = Pamse(Image(16, 16, 1, 0.25f), Image(16, 16, 1, 0.75f)).score;
  EXPECT_NEAR(score, 0.25, 1e-9);
}

TEST(Pamse, ImpulseErrorMatchesKernelEnergy) {
  const int n = 21;
  Image ref(n, n, 1, 0.5f), dist = ref;
  const double amp = 0.25;
  dist.at(10, 10) = static_cast<float>(0.5 + amp);
  // Normalized 7-tap Gaussian, sigma 0.8; the smoothed error is amp k(x) k(y).
  double taps[7], sum = 0.0, sq = 0.0;
  for (int i = -3; i <= 3; ++i) sum += taps[i + 3] = std::exp(-(i * i) / (2 * 0.8 * 0.8));
  for (double& t : taps) {
    t /= sum;
    sq += t * t;
  }
  const double expected = amp * amp * sq * sq / (n * n);
  EXPECT_NEAR(Pamse(ref, dist).score, expected, 1e-9);
}

TEST(SaliencyWeighted, UniformDeltaAndHandCase) {
  Rng rng(7);
  const Image map = RandomImage(5, 4, 1, rng);
  const SaliencyMap uniform(5, 4, std::vector<float>(20, 2.0f));
  EXPECT_NEAR(SaliencyWeighted(map, uniform), map.Mean(), 1e-12);
  std::vector<float> delta(20, 0.0f);
  delta[7] = 1.0f;
  EXPECT_NEAR(SaliencyWeighted(map, SaliencyMap(5, 4, delta)), map.data()[7], 1e-12);
  const Image diag(2, 2, 1, std::vector<float>{1, 0, 0, 1});
  EXPECT_DOUBLE_EQ(SaliencyWeighted(diag, SaliencyMap(2, 2, {3, 1, 1, 3})), 0.75);
  EXPECT_THROW(SaliencyMap(2, 2, {0, 0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(SaliencyMap(2, 2, {1, -1, 0, 0}), std::invalid_argument);
}

TEST(Metrics, BlendMonotoneInLambda) {
  Rng rng(8);
  const Image r1 = ProceduralImage(192, 192, 3, rng), r2 = ProceduralImage(192, 192, 3, rng);
  const SaliencyMap prior = SaliencyMap::CenterPrior(192, 192);
  for (const auto& info : NativeMetrics()) {
    double prev = 0.0;
    for (int k = 1; k <= 9; ++k) {
      const double s = ComputeMetric(info.name, r1, Blend(r1, r2, k / 10.0), &prior).score;
      const double oriented = info.higher_is_better ? s : -s;
      if (k > 1) {
        EXPECT_GE(oriented, prev) << info.name << " lambda " << k / 10.0;
      }
      prev = oriented;
    }
  }
}

TEST(Registry, LookupAndOrientation) {
  EXPECT_TRUE(IsNativeMetric("ssim"));
  EXPECT_FALSE(IsNativeMetric("vif"));
  EXPECT_THROW(LookupMetric("vif"), std::invalid_argument);
  EXPECT_FALSE(HigherIsBetter("gmsd"));
  EXPECT_FALSE(HigherIsBetter("cfiqa"));
  EXPECT_TRUE(HigherIsBetter("psnr"));
}

}  // namespace
}  // namespace ciqa
