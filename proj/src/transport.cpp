#include "mixbound/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mixbound/errors.hpp"

namespace mixbound {

namespace {

std::vector<double> split_points(const Measure1D& a, const Measure1D& b) {
  const Interval h = numerics::hull(a.support(), b.support());
  std::vector<double> cuts{h.lo};
  for (const auto& m : {a, b}) {
    for (double x : m.landmarks()) {
      if (x > h.lo && x < h.hi) cuts.push_back(x);
    }
  }
  cuts.push_back(h.hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

// Affine interpolation map x -> scale * x + shift applied to U([0,2]^2).
struct AffineStep {
  double scale;
  double shift_x;
  double shift_y;
};

// |d/ds gamma_x(s)|^2 for the starting point (x, y).
double speed_sq(SquareOverlap which, double x, double y, double s) {
  if (which == SquareOverlap::horizontal) return 1.0;
  if (s <= 0.5) return (2.0 - x) * (2.0 - x) + (2.0 - y) * (2.0 - y);
  return x * x + y * y;
}

AffineStep path_at(SquareOverlap which, double s) {
  if (which == SquareOverlap::horizontal) return {1.0, s, 0.0};
  if (s <= 0.5) return {1.0 - s, 2.0 * s, 2.0 * s};
  return {s, 1.0, 1.0};
}

bool in_square(double x, double y, double lo, double hi) {
  return x >= lo && x <= hi && y >= lo && y <= hi;
}

}  // namespace

double w1_1d(const Measure1D& mu0, const Measure1D& mu1,
             const QuadratureConfig& cfg) {
  const auto cuts = split_points(mu0, mu1);
  return numerics::integrate_pieces(
      [&](double x) { return std::exp(log_cdf_gap(mu0, mu1, x)); }, cuts, cfg);
}

double wk_1d(const Measure1D& mu0, const Measure1D& mu1, double k,
             const QuadratureConfig& cfg) {
  if (!(k >= 1.0)) throw InvalidParameter("wk_1d: order k must be >= 1");
  const std::vector<double> cuts{0.0, 0.5, 1.0};
  const double total = numerics::integrate_pieces(
      [&](double u) {
        return std::pow(std::abs(mu0.quantile(u) - mu1.quantile(u)), k);
      },
      cuts, cfg);
  return std::pow(total, 1.0 / k);
}

void GaussianVec::validate() const {
  const auto d = mean.size();
  if (cov.rows() != d || cov.cols() != d) {
    throw DimensionMismatch("GaussianVec: covariance must be d x d");
  }
  if (!(cov - cov.transpose()).isZero(1e-12)) {
    throw InvalidParameter("GaussianVec: covariance is not symmetric");
  }
}

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& input) {
  const Eigen::Index n = input.rows();
  Eigen::MatrixXd a = input;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (off <= 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  SymmetricEigen out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]).normalized();
  }
  return out;
}

double w1_gaussian_upper(const GaussianVec& g0, const GaussianVec& g1) {
  g0.validate();
  g1.validate();
  if (g0.mean.size() != g1.mean.size()) {
    throw DimensionMismatch("w1_gaussian_upper: dimensions differ");
  }
  const Eigen::Index d = g0.mean.size();
  SymmetricEigen e0 = jacobi_eigen(g0.cov);
  SymmetricEigen e1 = jacobi_eigen(g1.cov);
  for (auto* e : {&e0, &e1}) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (e->values(i) < -1e-10) {
        throw NonPSD("w1_gaussian_upper: covariance has a negative eigenvalue");
      }
      e->values(i) = std::max(e->values(i), 0.0);
    }
  }

  // Greedy matching of eigenvectors inside each tie group of G1.
  const double tie_tol = 1e-12 * std::max(1.0, e1.values.cwiseAbs().maxCoeff());
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && e1.values(start) - e1.values(end) <= tie_tol) ++end;
    for (Eigen::Index i = start; i < end; ++i) {
      Eigen::Index best = i;
      double best_dot = -1.0;
      for (Eigen::Index j = i; j < end; ++j) {
        const double dot = std::abs(e0.vectors.col(i).dot(e1.vectors.col(j)));
        if (dot > best_dot) {
          best_dot = dot;
          best = j;
        }
      }
      e1.vectors.col(i).swap(e1.vectors.col(best));
    }
    start = end;
  }

  double sum = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    double dot = e0.vectors.col(i).dot(e1.vectors.col(i));
    if (dot < 0.0) dot = -dot;
    const double l0 = e0.values(i);
    const double l1 = e1.values(i);
    const double gap = std::sqrt(l1) - std::sqrt(l0);
    sum += gap * gap + 2.0 * std::sqrt(l1 * l0) * (1.0 - std::min(dot, 1.0));
  }
  return (g1.mean - g0.mean).norm() + std::sqrt(sum);
}

SquarePairConstants square_pair_constants(const SquarePairScenario& s) {
  if (!(s.p > 0.0 && s.p < 1.0)) {
    throw InvalidParameter("square pair: p must lie in (0, 1)");
  }
  const double m = std::min(s.p, 1.0 - s.p);
  if (s.which == SquareOverlap::horizontal) return {1.0, 1.0 / m, 1.0 / m};
  return {8.0 / 3.0, 4.0 / m, 32.0 / (3.0 * m)};
}

SquarePairCheck verify_square_pair(const SquarePairScenario& s, int grid) {
  if (!(s.p > 0.0 && s.p < 1.0)) {
    throw InvalidParameter("square pair: p must lie in (0, 1)");
  }
  if (grid < 2) throw InvalidParameter("square pair: grid must be >= 2");
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-12;

  // Energy: E_{x ~ U([0,2]^2)} int_0^1 |gamma_x'(s)|^2 ds.
  const std::vector<double> s_cuts{0.0, 0.5, 1.0};
  auto energy_at = [&](double x, double y) {
    return numerics::integrate_pieces(
        [&](double t) { return speed_sq(s.which, x, y, t); },
        s_cuts, cfg);
  };
  SquarePairCheck out;
  out.path_energy = numerics::integrate(
      [&](double x) {
        return numerics::integrate([&](double y) { return energy_at(x, y); },
                                   {0.0, 2.0}, cfg);
      },
      {0.0, 2.0}, cfg) / 4.0;

  // Density of mu_bar at a point, integrating the pushforward densities.
  const double p = s.p;
  const double q = 1.0 - p;
  const double dx1 = 1.0;
  const double dy1 = s.which == SquareOverlap::horizontal ? 0.0 : 1.0;
  QuadratureConfig loose;
  loose.abs_tol = 1e-10;
  loose.rel_tol = 1e-10;
  loose.max_subdivisions = 20000;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double x = 3.0 * (i + 0.5) / grid;
      const double y = 3.0 * (j + 0.5) / grid;
      const double bar = numerics::integrate_pieces(
          [&](double t) {
            const AffineStep a = path_at(s.which, t);
            const double u = (x - a.shift_x) / a.scale;
            const double v = (y - a.shift_y) / a.scale;
            return in_square(u, v, 0.0, 2.0) ? 1.0 / (4.0 * a.scale * a.scale) : 0.0;
          },
          s_cuts, loose);
      const double mix = (q * (in_square(x, y, 0.0, 2.0) ? 1.0 : 0.0) +
                          p * (in_square(x - dx1, y - dy1, 0.0, 2.0) ? 1.0 : 0.0)) /
                         4.0;
      if (bar <= 0.0) continue;
      const double ratio = mix > 0.0 ? bar / mix : numerics::kInf;
      out.density_ratio_sup = std::max(out.density_ratio_sup, ratio);
    }
  }
  return out;
}

}  // namespace mixbound
