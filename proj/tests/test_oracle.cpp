#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mixbound/constants.hpp"
#include "mixbound/errors.hpp"
#include "mixbound/oracle.hpp"

using namespace mixbound;
using namespace mixbound::oracle;

namespace {

TwoMixture two_gaussians(double a, double p) {
  return {make_gaussian(-a, 1.0), make_gaussian(a, 1.0), p};
}

Measure1D surprising(double a, double p) {
  return mixture_measure(
      {make_exp_power(a), make_gaussian(0.0, 1.0 / std::numbers::sqrt2), p});
}

}  // namespace

TEST(Spectral, StandardGaussian) {
  const double c = spectral_pi(make_gaussian(0.0, 1.0), 4000);
  EXPECT_GT(c, 0.98);
  EXPECT_LT(c, 1.02);
}

TEST(Spectral, ScaledGaussianIsVariance) {
  EXPECT_NEAR(spectral_pi(make_gaussian(3.0, 2.0), 4000), 4.0, 0.02 * 4.0);
}

TEST(Spectral, UnitUniform) {
  const double c = spectral_pi(make_uniform(0.0, 1.0), 4000);
  const double exact = 1.0 / (std::numbers::pi * std::numbers::pi);
  EXPECT_NEAR(c / exact, 1.0, 0.02);
}

TEST(Spectral, DisconnectedUniformsThrow) {
  const Measure1D mu =
      mixture_measure({make_uniform(0, 1), make_uniform(2, 3), 0.5});
  EXPECT_THROW(spectral_pi(mu, 500), DisconnectedSupport);
}

TEST(Spectral, GridDoublingIsStable) {
  for (const Measure1D& mu :
       {make_gaussian(0, 1), make_uniform(0, 1),
        mixture_measure(two_gaussians(1.0, 0.1)), surprising(4.0, 0.01)}) {
    const double c1 = spectral_pi(mu, 4000);
    const double c2 = spectral_pi(mu, 8000);
    EXPECT_LE(std::abs(c1 - c2) / c2, 0.01) << mu.label();
  }
}

TEST(Spectral, DominatesVariance) {
  for (double p : {0.01, 0.1, 0.5, 0.9}) {
    const Measure1D mu = mixture_measure(two_gaussians(1.0, p));
    EXPECT_GE(spectral_pi(mu), mu.variance() * 0.98) << p;
  }
}

TEST(Spectral, BelowMixtureBounds) {
  for (double p : {0.01, 0.1, 0.5, 0.9, 0.99}) {
    const TwoMixture mix = two_gaussians(1.0, p);
    const double c = spectral_pi(mixture_measure(mix));
    const double bound = constants::pi_upper_two_mixture(mix, 1, 1).value;
    EXPECT_LE(c, bound * 1.02) << p;
  }
}

TEST(Spectral, ReportSensitivity) {
  const auto r = spectral_pi_report(make_gaussian(0, 1), 2000);
  EXPECT_LT(r.truncation_sensitivity, 1e-3);
  EXPECT_EQ(r.cells, 2000u);
  EXPECT_LT(r.domain.lo, -6.0);
  const auto u = spectral_pi_report(make_uniform(0, 1), 2000);
  EXPECT_EQ(u.truncation_sensitivity, 0.0);
}

TEST(Grid, WeightsNormalised) {
  const GridMeasure g = make_grid(make_gaussian(0, 1), 1000);
  double s = 0;
  for (double w : g.weights) s += w;
  EXPECT_NEAR(s, 1.0, 1e-12);
  for (std::size_t i = 1; i < g.nodes.size(); ++i) {
    EXPECT_GT(g.nodes[i], g.nodes[i - 1]);
  }
}

TEST(McTail, NormalTwoSidedFivePercent) {
  const auto t = mc_tail(make_gaussian(0, 1), {0.0, 1.96}, 1'000'000, 42);
  EXPECT_EQ(t.empirical_prob[0], 1.0);
  EXPECT_NEAR(t.empirical_prob[1], 0.0499958, 3 * t.stderr_[1]);
  EXPECT_NEAR(t.stderr_[1],
              std::sqrt(t.empirical_prob[1] * (1 - t.empirical_prob[1]) / 1e6),
              1e-15);
}

TEST(McTail, DeterministicAcrossThreadCounts) {
  const Measure1D mu = mixture_measure(two_gaussians(1.0, 0.3));
  const std::vector<double> radii{0.5, 1, 2, 3};
  const auto a = mc_tail(mu, radii, 20'000, 7, 1);
  const auto b = mc_tail(mu, radii, 20'000, 7, 4);
  EXPECT_EQ(a.empirical_prob, b.empirical_prob);
  const auto c = mc_tail(mu, radii, 20'000, 8, 4);
  EXPECT_NE(a.empirical_prob, c.empirical_prob);
  for (std::size_t j = 1; j < radii.size(); ++j) {
    EXPECT_LE(a.empirical_prob[j], a.empirical_prob[j - 1]);
  }
}

TEST(McTail, RejectsBadInput) {
  EXPECT_THROW(mc_tail(make_gaussian(0, 1), {-1.0}, 10, 1), InvalidParameter);
  EXPECT_THROW(mc_tail(make_gaussian(0, 1), {1.0}, 0, 1), InvalidParameter);
}

TEST(Splitmix, KnownValue) {
  // First output of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(EntropyProbe, GaussianTilts) {
  const auto r =
      entropy_ratio_probe(make_gaussian(0, 1), WitnessFamily::exponential_tilts());
  EXPECT_GE(r.value, 1.9);
  EXPECT_LE(r.value, 2.0 + 1e-6);
  const auto s =
      entropy_ratio_probe(make_gaussian(1, 2), WitnessFamily::exponential_tilts());
  EXPECT_NEAR(s.value, 8.0, 1e-6);
}

TEST(EntropyProbe, BelowHardyUpper) {
  for (const Measure1D& mu :
       {make_gaussian(0, 1), make_uniform(0, 1),
        mixture_measure(two_gaussians(1.0, 0.2))}) {
    const double upper = constants::hardy_lsi_bounds(mu).upper;
    for (const auto& fam :
         {WitnessFamily::exponential_tilts(), WitnessFamily::shifted_bumps()}) {
      EXPECT_LE(entropy_ratio_probe(mu, fam).value, upper * (1 + 1e-6))
          << mu.label();
    }
  }
}

TEST(EntropyProbe, TwoLevelGrowsInDeepWell) {
  // Steps placed across the low-density region between the two wells.
  std::vector<double> centers;
  for (int k = 0; k <= 25; ++k) centers.push_back(-3.5 + 0.1 * k);
  double prev = 0.0;
  for (double p : {1e-2, 1e-4, 1e-6}) {
    const auto r = entropy_ratio_probe(surprising(4.0, p),
                                       WitnessFamily::two_level(centers));
    EXPECT_GT(r.value, prev) << p << " " << r.witness;
    prev = r.value;
  }
}
