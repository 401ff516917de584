#pragma once

#include <Eigen/Dense>

#include "mixbound/dist1d.hpp"

namespace mixbound {

/// W1 distance as the integral of |F0 - F1| over the hull of both supports.
double w1_1d(const Measure1D& mu0, const Measure1D& mu1,
             const QuadratureConfig& cfg = {});

/// Wk distance through the quantile coupling, k >= 1.
double wk_1d(const Measure1D& mu0, const Measure1D& mu1, double k,
             const QuadratureConfig& cfg = {});

/// Gaussian vector law N(mean, cov).
struct GaussianVec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  /// Throws DimensionMismatch for inconsistent sizes and InvalidParameter
  /// for a covariance that is not symmetric within 1e-12.
  void validate() const;
};

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns, unit norm
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a);

/// Upper bound on W1(N(m0, G0), N(m1, G1)) from the eigen-decompositions of
/// both covariances:
///   |m1 - m0| + sqrt(sum_i (sqrt(l1_i) - sqrt(l0_i))^2
///                        + 2 sqrt(l1_i l0_i) (1 - v1_i . v0_i)).
/// Eigenvalues are paired in descending order. Inside a group of tied
/// eigenvalues of G1 the eigenvectors are matched greedily to those of G0,
/// and each v1_i is flipped so that v1_i . v0_i >= 0.
double w1_gaussian_upper(const GaussianVec& g0, const GaussianVec& g1);

/// The two planar examples: mu0 uniform on [0,2]^2 and mu1 its translate by
/// e1 (horizontal) or by e1 + e2 (diagonal).
enum class SquareOverlap { horizontal, diagonal };

struct SquarePairScenario {
  SquareOverlap which = SquareOverlap::horizontal;
  double p = 0.5;
};

struct SquarePairConstants {
  double path_energy = 0.0;
  double density_ratio = 0.0;
  double mean_diff_constant = 0.0;
};

/// Closed-form constants of the interpolation argument:
/// mean_diff_constant = path_energy * density_ratio.
SquarePairConstants square_pair_constants(const SquarePairScenario& s);

struct SquarePairCheck {
  double path_energy = 0.0;        // by quadrature over [0,2]^2
  double density_ratio_sup = 0.0;  // sup of d(mu_bar)/d(mu_p) on a grid
};

/// Recomputes the path energy and the density ratio of the interpolation
/// numerically. grid is the number of sample points per axis.
SquarePairCheck verify_square_pair(const SquarePairScenario& s, int grid = 61);

}  // namespace mixbound
