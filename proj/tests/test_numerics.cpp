#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "mixbound/errors.hpp"
#include "mixbound/numerics.hpp"
#include "mixbound/special.hpp"

using namespace mixbound;
using namespace mixbound::numerics;

TEST(Integrate, PolynomialExactness) {
  EXPECT_NEAR(integrate([](double x) { return x * x; }, {0.0, 1.0}), 1.0 / 3.0,
              1e-14);
}

TEST(Integrate, GaussianDensityOverRealLine) {
  EXPECT_NEAR(integrate(special::normal_pdf, Interval::real_line()), 1.0, 1e-11);
}

TEST(Integrate, ExponentialOnHalfLine) {
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x); }, {0.0, kInf}), 1.0,
              1e-11);
}

TEST(Integrate, LeftInfiniteEndpoint) {
  EXPECT_NEAR(integrate([](double x) { return std::exp(x); }, {-kInf, 1.0}),
              std::exp(1.0), 1e-10);
}

TEST(Integrate, IntegrableEndpointSingularity) {
  const auto r = integrate_detailed([](double x) { return 1.0 / std::sqrt(x); },
                                    {0.0, 1.0});
  EXPECT_FALSE(r.diverged);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Integrate, ReportedErrorWithinTolerance) {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-9;
  cfg.rel_tol = 1e-9;
  const auto r = integrate_detailed([](double x) { return std::sin(10 * x); },
                                    {0.0, 3.0}, cfg);
  EXPECT_LE(r.error, std::max(cfg.abs_tol, cfg.rel_tol * std::abs(r.value)));
  EXPECT_NEAR(r.value, (1.0 - std::cos(30.0)) / 10.0, 1e-9);
}

TEST(Integrate, DivergentConstantOnHalfLine) {
  const auto r = integrate_detailed([](double) { return 1.0; }, {0.0, kInf});
  EXPECT_TRUE(r.diverged);
  EXPECT_EQ(r.value, kInf);
}

TEST(Integrate, InfiniteIntegrandValueIsDivergence) {
  EXPECT_EQ(integrate([](double) { return kInf; }, {0.0, 1.0}), kInf);
}

TEST(Integrate, NanIntegrandThrows) {
  EXPECT_THROW(integrate([](double) { return std::nan(""); }, {0.0, 1.0}),
               NonConvergence);
}

TEST(Integrate, EmptyAndPointDomains) {
  EXPECT_EQ(integrate([](double) { return 1.0; }, Interval::empty()), 0.0);
  EXPECT_EQ(integrate([](double) { return 1.0; }, {2.0, 2.0}), 0.0);
}

TEST(Integrate, ConfigValidation) {
  QuadratureConfig cfg;
  cfg.tail_mass_cut = 1e-3;
  EXPECT_THROW(cfg.validate(), InvalidParameter);
  cfg = {};
  cfg.abs_tol = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidParameter);
}

TEST(Integrate, LinearityOnRandomPolynomials) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> c1(6);
    std::vector<double> c2(6);
    for (auto& c : c1) c = coef(rng);
    for (auto& c : c2) c = coef(rng);
    auto poly = [](const std::vector<double>& c) {
      return [c](double x) {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
      };
    };
    const double a = coef(rng);
    const double b = coef(rng);
    const Interval dom{-1.0, 2.0};
    const auto f = poly(c1);
    const auto g = poly(c2);
    const double lhs = integrate([&](double x) { return a * f(x) + b * g(x); }, dom);
    const double rhs = a * integrate(f, dom) + b * integrate(g, dom);
    EXPECT_NEAR(lhs, rhs, 1e-9 * (1.0 + std::abs(rhs)));
  }
}

TEST(IntegratePieces, SumsAcrossBreakpoints) {
  const std::vector<double> cuts{-kInf, -1.0, 0.0, 3.0, kInf};
  EXPECT_NEAR(integrate_pieces(special::normal_pdf, cuts), 1.0, 1e-11);
}

TEST(Maximize, QuadraticVertex) {
  const auto m = maximize_1d([](double x) { return -(x - 2) * (x - 2); }, {0.0, 5.0});
  EXPECT_NEAR(m.arg, 2.0, 1e-8);
  EXPECT_NEAR(m.value, 0.0, 1e-14);
}

TEST(Maximize, XExpMinusX) {
  const auto m = maximize_1d([](double x) { return x * std::exp(-x); }, {0.0, 10.0});
  EXPECT_NEAR(m.arg, 1.0, 1e-8);
  EXPECT_NEAR(m.value, std::exp(-1.0), 1e-14);
}

TEST(Maximize, GaussianBandRatio) {
  auto ratio = [](double x) {
    return (special::normal_cdf(x + 1) - special::normal_cdf(x - 1)) /
           (special::normal_pdf(x + 1) + special::normal_pdf(x - 1));
  };
  const auto m = maximize_1d(ratio, {-5.0, 5.0});
  EXPECT_NEAR(m.arg, 0.0, 1e-6);
  EXPECT_NEAR(m.value, 1.410686134, 1e-8);
}

TEST(Maximize, EndpointMaximum) {
  const auto m = maximize_1d([](double x) { return x; }, {0.0, 1.0});
  EXPECT_EQ(m.arg, 1.0);
}

TEST(Maximize, ConcaveQuadraticsProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> vertex(-4.0, 4.0);
  std::uniform_real_distribution<double> curvature(0.01, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double v = vertex(rng);
    const double k = curvature(rng);
    const auto m = maximize_1d([&](double x) { return -k * (x - v) * (x - v); },
                               {-5.0, 5.0}, 1e-9);
    EXPECT_NEAR(m.arg, v, 1e-8);
  }
}

TEST(Maximize, InvalidBrackets) {
  auto f = [](double x) { return x; };
  EXPECT_THROW(maximize_1d(f, Interval::empty()), InvalidBracket);
  EXPECT_THROW(maximize_1d(f, {1.0, 1.0}), InvalidBracket);
  EXPECT_THROW(maximize_1d(f, {0.0, kInf}), InvalidBracket);
}

TEST(MaximizeScan, FindsGlobalPeakAmongSeveral) {
  auto f = [](double x) { return std::exp(-(x - 3) * (x - 3)) + 0.5 * std::exp(-(x + 3) * (x + 3)); };
  const auto m = maximize_scan(f, {-5.0, 5.0}, 101);
  EXPECT_NEAR(m.arg, 3.0, 1e-6);
}

TEST(FindRoot, CubeRootOfTwo) {
  const double r = find_root([](double x) { return x * x * x - 2.0; }, 0.0, 2.0);
  EXPECT_NEAR(r, std::cbrt(2.0), 1e-14);
}

TEST(FindRoot, RejectsBracketWithoutSignChange) {
  EXPECT_THROW(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), InvalidBracket);
}

TEST(Intervals, MergeAndHull) {
  const auto merged = merge_intervals({{2, 3}, {0, 1}, {0.5, 2}, {5, 6}});
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_EQ(merged[0].lo, 0.0);
  EXPECT_EQ(merged[0].hi, 3.0);
  EXPECT_EQ(merged[1].lo, 5.0);
  const Interval h = hull({0, 1}, {4, 5});
  EXPECT_EQ(h.lo, 0.0);
  EXPECT_EQ(h.hi, 5.0);
  EXPECT_TRUE(Interval::empty().is_empty());
  EXPECT_FALSE(Interval({1, 1}).is_empty());
}

TEST(FitLine, ExactLine) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{3, 5, 7, 9};
  const auto fit = fit_line(x, y);
  EXPECT_NEAR(fit.slope, 2.0, 1e-14);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-14);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-14);
}
