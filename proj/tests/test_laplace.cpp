#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mixbound/errors.hpp"
#include "mixbound/laplace.hpp"
#include "mixbound/numerics.hpp"

using namespace mixbound;

namespace {

// Grid scan of the two-point objective followed by local refinement.
numerics::Extremum scan_two_point(double p, double x_max) {
  const int n = 200000;
  double best_x = 0.0;
  double best_v = -1.0;
  for (int i = 1; i <= n; ++i) {
    const double x = x_max * i / n;
    const double v = two_point_objective(p, x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  const double h = x_max / n;
  const auto refined = numerics::maximize_1d([&](double x) { return two_point_objective(p, x); },
                                             {std::max(best_x - h, 1e-9), best_x + h}, 1e-12);
  return refined.value > best_v ? refined : numerics::Extremum{best_x, best_v};
}

void expect_envelope_shape(const LaplaceEnvelope& env, double lambda_max, bool convex) {
  EXPECT_NEAR(env.eval(0.0), 0.0, 1e-14);
  const int n = 200;
  const double h = lambda_max / n;
  for (int i = 1; i < n; ++i) {
    const double a = env.eval((i - 1) * h);
    const double b = env.eval(i * h);
    const double c = env.eval((i + 1) * h);
    EXPECT_GE(b, a - 1e-12);
    if (convex) EXPECT_GE(a + c - 2 * b, -1e-9 * std::max(1.0, std::abs(b)));
  }
}

}  // namespace

TEST(TwoPoint, HalfIsOneEighth) {
  const auto t = two_point_constants(0.5);
  EXPECT_EQ(t.c_p, 0.125);
  EXPECT_EQ(t.argmax_x, 0.0);
  EXPECT_EQ(two_point_constants(0.0).c_p, 0.0);
  EXPECT_EQ(two_point_constants(1.0).c_p, 0.0);
}

TEST(TwoPoint, QuarterAgainstBruteForceScan) {
  const auto t = two_point_constants(0.25);
  const auto scan = scan_two_point(0.25, 50.0);
  EXPECT_NEAR(t.c_p, 0.5 / (4.0 * std::log(3.0)), 1e-15);
  EXPECT_NEAR(scan.value, t.c_p, 1e-8);
  EXPECT_NEAR(t.argmax_x, 2.0 * std::log(3.0), 1e-14);
  EXPECT_NEAR(scan.arg, t.argmax_x, 1e-4);
}

TEST(TwoPoint, ScanMatchesClosedFormOnGrid) {
  for (double p : {0.01, 0.1, 0.25, 0.5}) {
    const auto t = two_point_constants(p);
    const auto scan = scan_two_point(p, 200.0);
    EXPECT_NEAR(scan.value, t.c_p, 1e-7) << p;
    EXPECT_NEAR(scan.arg, 2.0 * std::log((1 - p) / p), 1e-3) << p;
  }
}

TEST(TwoPoint, BoundedByHoeffdingAndContinuousAtHalf) {
  for (int i = 0; i <= 1000; ++i) {
    EXPECT_LE(two_point_constants(i / 1000.0).c_p, 0.125);
  }
  EXPECT_NEAR(two_point_constants(0.5 + 1e-9).c_p, 0.125, 1e-10);
  EXPECT_NEAR(two_point_constants(0.5 - 1e-9).c_p, 0.125, 1e-10);
  EXPECT_NEAR(log_ratio_over_gap(0.5 + 1e-8), 2.0, 1e-6);
  EXPECT_THROW(two_point_constants(1.5), InvalidParameter);
}

TEST(AlphaGeneral, ZeroDiameterAndCrossover) {
  auto bar = [](double l) { return 0.7 * l * l; };
  EXPECT_EQ(alpha_general(1.3, bar, 0.0), bar(1.3));
  const double w = 2.5;
  const double l = 8.0 / w;
  EXPECT_NEAR(8.0 * w * l, w * w * l * l, 1e-12);
  EXPECT_NEAR(alpha_general(l, bar, w), bar(l) + w * l, 1e-12);
}

TEST(AlphaGeneral, BoundedGaussianComponents) {
  const double rho = 1.7;
  const double w = 3.0;
  for (double l : {0.1, 1.0, 5.0}) {
    const double expected = 0.5 * rho * l * l + std::min(8 * w * l, w * w * l * l) / 8;
    EXPECT_NEAR(alpha_general(l, [&](double x) { return 0.5 * rho * x * x; }, w), expected, 1e-12);
  }
}

TEST(AlphaTwoComponent, SmallWeightRecoversComponents) {
  auto base = [](double l) { return 0.5 * l * l; };
  double prev = 1e9;
  for (double p : {1e-2, 1e-4, 1e-8, 1e-16}) {
    const double v = alpha_two_component(2.0, base, 1.0, p) - base(2.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 0.06);
  EXPECT_EQ(alpha_two_component(2.0, base, 1.0, 0.0), base(2.0));
}

TEST(AlphaTwoComponent, ContinuousAtBranchPoint) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pu(0.001, 0.999);
  std::uniform_real_distribution<double> wu(0.1, 10.0);
  auto base = [](double) { return 0.0; };
  for (int i = 0; i < 20; ++i) {
    const double p = pu(rng);
    const double w = wu(rng);
    const auto t = two_point_constants(p);
    const double m = std::max(p, 1 - p);
    EXPECT_NEAR(t.c_p * t.x_p * t.x_p, m * t.x_p / 2, 1e-12 * m * t.x_p);
    const double star = t.x_p / w;
    const double below = alpha_two_component(star * (1 - 1e-14), base, w, p);
    const double above = alpha_two_component(star * (1 + 1e-14), base, w, p);
    EXPECT_NEAR(below, above, 1e-12 * std::abs(above));
  }
}

TEST(AlphaTwoComponent, SymmetricGaussianPenalty) {
  const double a = 1.3;
  const double l = 0.4;
  auto base = [](double) { return 0.0; };
  EXPECT_NEAR(alpha_two_component(l, base, 2 * a, 0.5), l * l * a * a / 2, 1e-14);
}

TEST(Envelopes, ShapeInvariants) {
  const auto quad = quadratic_envelope(0.5);
  expect_envelope_shape(quad, 10.0, true);
  expect_envelope_shape(two_component_envelope(quad, 2.0, 0.1), 10.0, true);
  // min(8 W l, W^2 l^2) has a concave kink at l = 8 / W.
  expect_envelope_shape(general_diameter_envelope(quad, 2.0), 10.0, false);
  EXPECT_EQ(two_component_envelope(quad, 2.0, 0.1).provenance, EnvelopeProvenance::two_component);
}

TEST(TailFromEnvelope, QuadraticClosedForms) {
  for (double c : {0.5, 1.0, 4.0}) {
    for (double r : {0.1, 1.0, 5.0}) {
      const double quarter = tail_from_envelope(quadratic_envelope(0.25 * c), r);
      EXPECT_NEAR(quarter, 2 * std::exp(-r * r / c), 1e-8 * 2 * std::exp(-r * r / c));
      const double half = tail_from_envelope(quadratic_envelope(0.5 * c), r);
      EXPECT_NEAR(half, 2 * std::exp(-r * r / (2 * c)), 1e-8 * 2 * std::exp(-r * r / (2 * c)));
    }
  }
}

TEST(TailFromEnvelope, KinkedDiameterEnvelopeUsesBestBranch) {
  // Legendre transform of max of two concave gains: the larger branch sup.
  const double rho = 1.0;
  const double w = 4.0;
  const double r = 6.0;
  const auto env = general_diameter_envelope(quadratic_envelope(0.5 * rho), w);
  const double quad_branch = r * r / (2 * (rho + w * w / 4));
  const double lin_branch = (r - w) * (r - w) / (2 * rho);
  const double expected = 2 * std::exp(-std::max(quad_branch, lin_branch));
  EXPECT_NEAR(tail_from_envelope(env, r), expected, 1e-8 * expected);
}

TEST(TailFromEnvelope, SmallRadiusApproachesTwo) {
  EXPECT_NEAR(tail_from_envelope(quadratic_envelope(1.0), 1e-6), 2.0, 1e-9);
}

TEST(TailFromEnvelope, LinearEnvelopeBeyondSlopeIsZero) {
  const auto env = user_envelope([](double l) { return 2.0 * l; });
  EXPECT_EQ(tail_from_envelope(env, 3.0), 0.0);
  EXPECT_EQ(tail_from_envelope(env, 1.0), 2.0);
}

TEST(TailBound, NonincreasingOnGrid) {
  const auto quad = quadratic_envelope(0.5);
  for (const auto& env : {quad, general_diameter_envelope(quad, 2.0),
                          two_component_envelope(quad, 2.0, 0.2)}) {
    const auto tb = make_tail_bound(env);
    double prev = 2.0;
    for (int i = 1; i <= 100; ++i) {
      const double v = tb.eval(0.1 * i);
      EXPECT_LE(v, prev + 1e-12);
      EXPECT_LE(v, 2.0);
      prev = v;
    }
  }
}

TEST(TailTwoComponent, ContinuousAtThreshold) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> pu(0.001, 0.999);
  std::uniform_real_distribution<double> wu(0.1, 5.0);
  std::uniform_real_distribution<double> cu(0.1, 5.0);
  for (int i = 0; i < 20; ++i) {
    const double p = pu(rng);
    const double w = wu(rng);
    const double c = cu(rng);
    const double star = tail_two_component_threshold(c, w, p);
    const auto t = two_point_constants(p);
    const double m = std::max(p, 1 - p);
    const double exponent = m * m * (c + 2 * t.c_p * w * w) / (8 * t.c_p * t.c_p * w * w);
    EXPECT_NEAR(star * star / (2 * c + 4 * t.c_p * w * w), exponent, 1e-10 * exponent);
    const double below = tail_two_component(star * (1 - 1e-13), c, w, p);
    const double above = tail_two_component(star * (1 + 1e-13), c, w, p);
    EXPECT_NEAR(below, above, 1e-10 * above);
  }
}

TEST(TailTwoComponent, DirectLaplaceRemarkAtHalf) {
  const double sigma2 = 1.5;
  const double w = 2.0;
  const double r = 0.8;
  EXPECT_NEAR(tail_two_component(r, sigma2, w, 0.5), 2 * std::exp(-r * r / (2 * sigma2 + w * w / 2)),
              1e-15);
}

TEST(TailTwoComponent, BernoulliLimit) {
  const double w = 2.0;
  const double r = 0.7;
  const double limit = 2 * std::exp(-r * r / (w * w / 2));
  EXPECT_NEAR(tail_two_component(r, 1e-12, w, 0.5), limit, 1e-9);
}

TEST(TailTwoComponent, DegenerateFallsBackToGaussian) {
  EXPECT_NEAR(tail_two_component(1.5, 1.0, 0.0, 0.3), 2 * std::exp(-1.125), 1e-15);
  EXPECT_NEAR(tail_two_component(1.5, 1.0, 2.0, 0.0), 2 * std::exp(-1.125), 1e-15);
}

TEST(ScaledTwoRegime, EqualComponentsAndCrossover) {
  EXPECT_NEAR(alpha_scaled_two_regime(1.7, 1.2, 1.2, 0.3), 0.5 * 1.44 * 1.7 * 1.7, 1e-14);
  bool second_wins_small = false;
  bool first_wins_large = false;
  const double p = 0.1;
  const double c = two_point_constants(p).c_p;
  for (int i = 1; i <= 10000; ++i) {
    const double l = 0.01 * i;
    const double first = 2.0 * l * l + l;
    const double second = 0.5 * (p * 4 + 0.9) * l * l + c * (9.0 / 4 + 1) * l * l * l;
    const double v = alpha_scaled_two_regime(l, 1.0, 2.0, p);
    EXPECT_DOUBLE_EQ(v, std::min(first, second));
    if (l < 0.1 && second < first) second_wins_small = true;
    if (l > 50 && first < second) first_wins_large = true;
  }
  EXPECT_TRUE(second_wins_small);
  EXPECT_TRUE(first_wins_large);
  EXPECT_THROW(alpha_scaled_two_regime(1.0, 2.0, 1.0, 0.5), InvalidParameter);
}

TEST(Melvar, GaussianMixingBelowOne) {
  const double l = 0.5;
  const auto t = melvar_terms(l, 2.0);
  EXPECT_NEAR(t.moment_term, -0.25 * std::log(1 - l * l), 1e-10);
  EXPECT_TRUE(std::isfinite(t.total()));
  EXPECT_THROW(melvar_chain(1.2, 2.0), Divergent);
  EXPECT_THROW(melvar_chain(1.0, 2.0), Divergent);
}

TEST(Melvar, WitnessTermAgainstDirectQuadrature) {
  const double g = 4.0;
  const double l = 0.5;
  const double norm = g / std::tgamma(1 / g);
  auto log_nu = [&](double th) { return std::log(norm) - std::pow(th, g); };
  auto nu = [&](double th) { return std::exp(log_nu(th)); };
  const double mean = numerics::integrate([&](double th) { return th * nu(th); }, {0, numerics::kInf});
  double alpha = -1e300;
  for (double s : {1.0, -1.0}) {
    const double mgf = numerics::integrate(
        [&](double th) { return std::exp(2 * l * s * (th - mean) + log_nu(th)); }, {0, numerics::kInf});
    alpha = std::max(alpha, std::log(mgf));
  }
  EXPECT_NEAR(melvar_terms(l, g).witness_term, 0.5 * alpha, 1e-10);
}

TEST(Melvar, VanishesAtZero) {
  EXPECT_NEAR(melvar_chain(1e-6, 4.0), 0.0, 1e-9);
  EXPECT_NEAR(melvar_chain(1e-6, 2.0), 0.0, 1e-9);
}

TEST(Melvar, PolynomialGrowthForGammaFour) {
  std::vector<double> x;
  std::vector<double> y;
  for (int i = 0; i <= 10; ++i) {
    const double l = 10.0 * std::pow(10.0, i / 10.0);
    x.push_back(std::log(l));
    y.push_back(std::log(melvar_chain(l, 4.0)));
  }
  const auto fit = numerics::fit_line(x, y);
  EXPECT_GE(fit.slope, 3.5);
  EXPECT_LE(fit.slope, 4.5);
}
