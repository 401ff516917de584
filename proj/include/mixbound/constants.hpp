#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixbound/dist1d.hpp"

namespace mixbound::constants {

enum class Certification { upper, lower, exact, empirical };
const char* to_string(Certification c);

// A functional-inequality constant in [0, +inf]; +inf means no finite
// constant exists.
struct ExtendedConstant {
  double value = 0.0;
  std::string provenance;
  Certification certified = Certification::upper;
};

struct MeanDiffReport {
  double p = 0.0;
  double I_p = 0.0;
  double I_half = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// I(p) = int (F1 - F0)^2 / (p f1 + q f0) over the convex hull of the
/// supports. At p = 0 or 1 the single remaining density is used.
double mean_diff_integral(const TwoMixture& mix,
                          const QuadratureConfig& cfg = {});

/// I(p), I(1/2) and the bracket I(1/2) / (2 max(p,q)) <= I(p) <=
/// I(1/2) / (2 min(p,q)).
MeanDiffReport mean_diff_I(const TwoMixture& mix,
                           const QuadratureConfig& cfg = {});

/// max(C0, C1) + pq I(p).
ExtendedConstant pi_upper_two_mixture(const TwoMixture& mix, double c_pi_0,
                                      double c_pi_1,
                                      const QuadratureConfig& cfg = {});

/// max(G0, G1) + r(p) (pq I(p) + max(C0, C1)) with
/// r(p) = (log q - log p) / (q - p).
ExtendedConstant lsi_upper_two_mixture(const TwoMixture& mix, double c_gi_0,
                                       double c_gi_1, double c_pi_0,
                                       double c_pi_1,
                                       const QuadratureConfig& cfg = {});

/// Optimal log-Sobolev constant pq r(p) of the Bernoulli law on {0, 1},
/// in the normalisation Ent(f^2) <= K (f(0) - f(1))^2.
double bernoulli_lsi_constant(double p);

/// (Phi(x+a) - Phi(x-a)) / (phi(x+a) + phi(x-a)).
double band_ratio(double a, double x);
/// tau_a = band_ratio(a, 0).
double band_constant(double a);
/// Numerical sup of band_ratio(a, .) over [-half_width, half_width].
numerics::Extremum band_ratio_sup(double a, double half_width = 10.0);

struct TwoGaussianPiBound {
  double general = 0.0;
  std::optional<double> half_sharp;
};
/// Closed-form bounds for p N(a,1) + q N(-a,1).
TwoGaussianPiBound two_gaussian_pi_bound(double a, double p);

struct HardyBounds {
  double b_plus = 0.0;
  double b_minus = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};
/// Median-anchored Hardy-type quantities and max(b-,b+) <= C_GI <=
/// 16 max(b-,b+). A supremum still increasing at tail mass tail_mass_cut
/// is reported as +inf.
HardyBounds hardy_lsi_bounds(const Measure1D& mu,
                             const QuadratureConfig& cfg = {});

/// (1/150) sup_{x <= m} Psi(F(x)) int_x^m 1/f, with Psi(u) = -u log u.
double crude_lsi_lower(const Measure1D& mu, const QuadratureConfig& cfg = {});
/// The quantity inside the sup at a single x <= median, without the 1/150.
double crude_witness(const Measure1D& mu, double x,
                     const QuadratureConfig& cfg = {});

struct VarianceSplit {
  double within = 0.0;
  double between = 0.0;
  double total = 0.0;
};
VarianceSplit variance_decomposition(const TwoMixture& mix, const RealFn& f,
                                     const QuadratureConfig& cfg = {});

/// sum_{i<j} p_i p_j (m_i - m_j)^2.
double finite_mixture_between_variance(const std::vector<double>& weights,
                                       const std::vector<double>& means);

struct EntropyBound {
  double terms[3] = {0.0, 0.0, 0.0};
  double bound = 0.0;
  double true_entropy = 0.0;
};
/// Three-term bound on Ent_{mu_p}(f^2):
///   max(G) E_p f'^2 + pq r(p) (E0 f - E1 f)^2 + max(C) r(p) E_p f'^2.
/// At p = 0 or 1 only the first term remains.
EntropyBound entropy_decomposition_bound(const TwoMixture& mix,
                                         const RealFn& f, const RealFn& fprime,
                                         std::pair<double, double> c_gi,
                                         std::pair<double, double> c_pi,
                                         const QuadratureConfig& cfg = {});

struct ComponentConstants {
  ExtendedConstant c_pi;
  ExtendedConstant c_gi;
};
/// Exact constants when known in closed form; otherwise the spectral
/// estimate for C_PI (marked empirical) and the Hardy upper bound for C_GI.
ComponentConstants component_constants(const Measure1D& mu,
                                       const QuadratureConfig& cfg = {});

}  // namespace mixbound::constants
