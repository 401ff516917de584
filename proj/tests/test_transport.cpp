#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "mixbound/errors.hpp"
#include "mixbound/transport.hpp"

using namespace mixbound;

namespace {

// Direct evaluation of the covariance term with Eigen's solver, pairing
// eigenvalues in descending order.
double gaussian_bound_oracle(const GaussianVec& g0, const GaussianVec& g1) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s0(g0.cov);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s1(g1.cov);
  const auto d = g0.mean.size();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::Index i = d - 1 - k;
    const double l0 = std::max(0.0, s0.eigenvalues()(i));
    const double l1 = std::max(0.0, s1.eigenvalues()(i));
    const double dot = std::abs(s0.eigenvectors().col(i).dot(s1.eigenvectors().col(i)));
    sum += std::pow(std::sqrt(l1) - std::sqrt(l0), 2) + 2 * std::sqrt(l0 * l1) * (1 - dot);
  }
  return (g1.mean - g0.mean).norm() + std::sqrt(sum);
}

Eigen::MatrixXd random_spd(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = n(rng);
  return a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d);
}

}  // namespace

TEST(W1, IdenticalMeasures) {
  EXPECT_NEAR(w1_1d(make_gaussian(0, 1), make_gaussian(0, 1)), 0.0, 1e-15);
}

TEST(W1, TranslatedGaussians) {
  for (double t : {0.1, 1.0, 3.0, 7.5}) {
    EXPECT_NEAR(w1_1d(make_gaussian(0, 1.3), make_gaussian(t, 1.3)), t, 1e-9);
  }
}

TEST(W1, ScaledGaussians) {
  const double c = std::sqrt(2.0 / std::numbers::pi);
  for (auto [a, b] : {std::pair{1.0, 2.0}, {0.5, 3.0}, {2.0, 2.1}}) {
    EXPECT_NEAR(w1_1d(make_gaussian(0, a), make_gaussian(0, b)), c * std::abs(a - b), 1e-9);
  }
}

TEST(W1, SymmetricAndTriangle) {
  const std::vector<Measure1D> ms{make_gaussian(0, 1), make_uniform(-1, 2), make_exp_power(4),
                                  mixture_measure({make_gaussian(-1, 1), make_gaussian(2, 1), 0.3})};
  for (const auto& a : ms)
    for (const auto& b : ms) {
      EXPECT_NEAR(w1_1d(a, b), w1_1d(b, a), 1e-10);
      for (const auto& c : ms) EXPECT_LE(w1_1d(a, c), w1_1d(a, b) + w1_1d(b, c) + 2e-9);
    }
}

TEST(Wk, QuadraticShiftIsTranslation) {
  EXPECT_NEAR(wk_1d(make_gaussian(0, 1), make_gaussian(2.5, 1), 2.0), 2.5, 1e-9);
}

TEST(Wk, OrderOneAgreesWithCdfForm) {
  const auto a = make_uniform(0, 1);
  const auto b = make_uniform(0.5, 1.5);
  EXPECT_NEAR(wk_1d(a, b, 1.0), w1_1d(a, b), 1e-7);
  const auto g = make_gaussian(0, 1);
  const auto h = make_gaussian(0, 2);
  EXPECT_NEAR(wk_1d(g, h, 1.0), w1_1d(g, h), 1e-7);
}

TEST(Wk, UnitShiftOfSquareMarginal) {
  EXPECT_NEAR(wk_1d(make_uniform(0, 2), make_uniform(1, 3), 2.0), 1.0, 1e-10);
}

TEST(Wk, NondecreasingInOrder) {
  const auto a = make_gaussian(0, 1);
  const auto b = make_uniform(-0.5, 2.5);
  const double w1 = wk_1d(a, b, 1.0);
  const double w15 = wk_1d(a, b, 1.5);
  const double w2 = wk_1d(a, b, 2.0);
  EXPECT_LE(w1, w15 + 1e-10);
  EXPECT_LE(w15, w2 + 1e-10);
  EXPECT_THROW(wk_1d(a, b, 0.5), InvalidParameter);
}

TEST(Jacobi, MatchesEigenSolver) {
  std::mt19937_64 rng(3);
  for (int d : {1, 2, 3, 6, 12}) {
    const Eigen::MatrixXd a = random_spd(rng, d);
    const auto mine = jacobi_eigen(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    for (int k = 0; k < d; ++k) {
      EXPECT_NEAR(mine.values(k), ref.eigenvalues()(d - 1 - k), 1e-10 * ref.eigenvalues().maxCoeff());
      EXPECT_NEAR((a * mine.vectors.col(k) - mine.values(k) * mine.vectors.col(k)).norm(), 0.0, 1e-9);
    }
  }
}

TEST(GaussianW1, IdenticalLaws) {
  std::mt19937_64 rng(5);
  GaussianVec g{Eigen::VectorXd::Random(4), random_spd(rng, 4)};
  EXPECT_NEAR(w1_gaussian_upper(g, g), 0.0, 1e-7);
}

TEST(GaussianW1, CommonVarianceIsMeanShift) {
  GaussianVec g0{Eigen::VectorXd::Constant(1, -1.0), Eigen::MatrixXd::Constant(1, 1, 2.0)};
  GaussianVec g1{Eigen::VectorXd::Constant(1, 2.5), Eigen::MatrixXd::Constant(1, 1, 2.0)};
  EXPECT_NEAR(w1_gaussian_upper(g0, g1), 3.5, 1e-14);
}

TEST(GaussianW1, SwappedDiagonalSpectra) {
  GaussianVec g0{Eigen::VectorXd::Zero(2), Eigen::Vector2d(1, 4).asDiagonal()};
  GaussianVec g1{Eigen::VectorXd::Zero(2), Eigen::Vector2d(4, 1).asDiagonal()};
  const double oracle = gaussian_bound_oracle(g0, g1);
  EXPECT_NEAR(oracle, std::sqrt(10.0), 1e-14);
  EXPECT_NEAR(w1_gaussian_upper(g0, g1), std::sqrt(10.0), 1e-12);
}

TEST(GaussianW1, MatchesOracleOnRandomInputs) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 5;
    GaussianVec g0{Eigen::VectorXd::Random(d), random_spd(rng, d)};
    GaussianVec g1{Eigen::VectorXd::Random(d), random_spd(rng, d)};
    const double bound = w1_gaussian_upper(g0, g1);
    EXPECT_NEAR(bound, gaussian_bound_oracle(g0, g1), 1e-8);
    EXPECT_GE(bound, (g1.mean - g0.mean).norm());
  }
}

TEST(GaussianW1, EqualCovarianceWithTiesIsMeanShift) {
  GaussianVec g0{Eigen::Vector3d(0, 0, 0), Eigen::Matrix3d::Identity() * 2.0};
  GaussianVec g1{Eigen::Vector3d(1, 2, 2), Eigen::Matrix3d::Identity() * 2.0};
  EXPECT_NEAR(w1_gaussian_upper(g0, g1), 3.0, 1e-12);
}

TEST(GaussianW1, Errors) {
  GaussianVec g2{Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)};
  GaussianVec g3{Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3)};
  EXPECT_THROW(w1_gaussian_upper(g2, g3), DimensionMismatch);
  GaussianVec bad{Eigen::VectorXd::Zero(2), Eigen::Vector2d(1, -1).asDiagonal()};
  EXPECT_THROW(w1_gaussian_upper(g2, bad), NonPSD);
}

TEST(SquarePair, ClosedForms) {
  const auto h = square_pair_constants({SquareOverlap::horizontal, 0.2});
  EXPECT_DOUBLE_EQ(h.path_energy, 1.0);
  EXPECT_DOUBLE_EQ(h.mean_diff_constant, 5.0);
  const auto d = square_pair_constants({SquareOverlap::diagonal, 0.5});
  EXPECT_DOUBLE_EQ(d.path_energy, 8.0 / 3.0);
  EXPECT_DOUBLE_EQ(d.mean_diff_constant, 64.0 / 3.0);
  EXPECT_DOUBLE_EQ(d.density_ratio, 8.0);
}

TEST(SquarePair, NumericalVerification) {
  for (double p : {0.2, 0.5}) {
    const auto hc = verify_square_pair({SquareOverlap::horizontal, p});
    EXPECT_NEAR(hc.path_energy, 1.0, 1e-9);
    EXPECT_LE(hc.density_ratio_sup, 1.0 / std::min(p, 1 - p) + 1e-8);
    const auto dc = verify_square_pair({SquareOverlap::diagonal, p});
    EXPECT_NEAR(dc.path_energy, 8.0 / 3.0, 1e-6);
    EXPECT_LE(dc.density_ratio_sup, square_pair_constants({SquareOverlap::diagonal, p}).density_ratio);
  }
}
