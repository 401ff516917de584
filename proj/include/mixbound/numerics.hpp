#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace mixbound::numerics {

using RealFn = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval on the extended real line. The empty interval is encoded
/// by lo > hi and is distinct from a single point (lo == hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static constexpr Interval empty() { return {kInf, -kInf}; }
  static constexpr Interval real_line() { return {-kInf, kInf}; }

  bool is_empty() const { return !(lo <= hi); }
  bool is_point() const { return lo == hi; }
  bool is_finite() const;
  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return is_empty() ? 0.0 : hi - lo; }
};

/// Smallest interval containing both arguments.
Interval hull(const Interval& a, const Interval& b);

/// Sorted union of closed intervals; touching or overlapping pieces merge.
std::vector<Interval> merge_intervals(std::vector<Interval> pieces);

struct QuadratureConfig {
  double abs_tol = 1e-11;
  double rel_tol = 1e-11;
  std::size_t max_subdivisions = 5000;
  double tail_mass_cut = 1e-12;

  /// Throws InvalidParameter when a field is outside its admissible range.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t subdivisions = 0;
  // True when the integral was detected as divergent; value is then +/-inf.
  bool diverged = false;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature with global error control.
///
/// Infinite endpoints are mapped onto a finite parameter range through
/// x = c + t / (1 - t^2). Nodes are strictly interior to every panel, so
/// integrable endpoint singularities are never evaluated. An infinite
/// integrand value, or estimates that keep growing geometrically when the
/// subdivision budget runs out, are reported as divergence instead of an
/// error. Throws NonConvergence otherwise when the budget is exhausted.
QuadratureResult integrate_detailed(const RealFn& f, const Interval& domain,
                                    const QuadratureConfig& cfg = {});

/// Value of integrate_detailed; +/-inf on divergence.
double integrate(const RealFn& f, const Interval& domain,
                 const QuadratureConfig& cfg = {});

/// Integrates over consecutive pieces [b0,b1], [b1,b2], ... of a sorted
/// breakpoint list. Any divergent piece makes the sum infinite.
double integrate_pieces(const RealFn& f, std::span<const double> breakpoints,
                        const QuadratureConfig& cfg = {});

/// Clips an interval to [quantile(cut), quantile(1 - cut)] of a reference
/// measure given through its quantile function.
Interval clip_to_mass(const Interval& domain, const RealFn& quantile,
                      double cut);

struct Extremum {
  double arg = 0.0;
  double value = 0.0;
};

/// Derivative-free maximization (golden section with parabolic steps).
/// Throws InvalidBracket for an empty, degenerate or unbounded bracket.
Extremum maximize_1d(const RealFn& f, const Interval& bracket,
                     double tol = 1e-10);

/// Evaluates f on a uniform grid of n points, then refines around the best
/// grid point with maximize_1d.
Extremum maximize_scan(const RealFn& f, const Interval& bracket,
                       std::size_t n, double tol = 1e-10);

/// Bracketing root finder (Brent). f(lo) and f(hi) must have opposite signs
/// or one of them must vanish; throws InvalidBracket otherwise.
double find_root(const RealFn& f, double lo, double hi, double tol = 1e-14);

/// Least-squares line y = intercept + slope * x with coefficient of
/// determination.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace mixbound::numerics
