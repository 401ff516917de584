#pragma once

#include <functional>
#include <map>
#include <string>

#include "mixbound/numerics.hpp"

namespace mixbound {

using numerics::RealFn;

/// (log q - log p) / (q - p), extended continuously by 2 at p = 1/2.
/// Infinite at p in {0, 1}.
double log_ratio_over_gap(double p);

/// Two-point (Bernoulli) constants.
struct TwoPointConstants {
  double p = 0.0;
  double c_p = 0.0;       // (q - p) / (4 (log q - log p)); 1/8 at p = 1/2
  double x_p = 0.0;       // max(p, q) / (2 c_p); +inf at p in {0, 1}
  double argmax_x = 0.0;  // 2 (log q - log p)
};

/// Throws InvalidParameter for p outside [0, 1].
TwoPointConstants two_point_constants(double p);

/// x^-2 log(p e^{qx} + q e^{-px}), evaluated in log space.
double two_point_objective(double p, double x);

/// alpha_bar(lambda) + (1/8) min(8 w_bar lambda, w_bar^2 lambda^2).
double alpha_general(double lambda, const RealFn& alpha_bar, double w_bar);

/// alpha_max(lambda) plus the two-component penalty
///   c_p (lambda w1)^2                      if lambda w1 <= x_p,
///   max(p, q) (lambda w1 - x_p / 2)        otherwise.
double alpha_two_component(double lambda, const RealFn& alpha_max, double w1,
                           double p);

enum class EnvelopeProvenance { general_diameter, two_component, quadratic, user };

const char* to_string(EnvelopeProvenance p);

/// Upper bound lambda -> alpha_hat(lambda) on the log-Laplace transform of
/// Lipschitz functions.
struct LaplaceEnvelope {
  RealFn eval;
  EnvelopeProvenance provenance = EnvelopeProvenance::user;
  std::map<std::string, double> params;
};

/// lambda -> coeff * lambda^2.
LaplaceEnvelope quadratic_envelope(double coeff);
LaplaceEnvelope general_diameter_envelope(const LaplaceEnvelope& alpha_bar,
                                          double w_bar);
LaplaceEnvelope two_component_envelope(const LaplaceEnvelope& alpha_max,
                                       double w1, double p);
LaplaceEnvelope user_envelope(RealFn eval,
                              std::map<std::string, double> params = {});

/// r -> bound on sup_f mu(|f - E f| >= r), with values in [0, 2].
struct TailBound {
  RealFn eval;
  LaplaceEnvelope source;
};

/// 2 exp(-sup_{lambda > 0} (r lambda - alpha_hat(lambda))), clamped to 2.
/// The supremum is located on a geometric lambda grid up to 2^40 and then
/// refined; a supremum that still grows at the cap counts as infinite
/// (bound 0).
double tail_from_envelope(const LaplaceEnvelope& env, double r);
TailBound make_tail_bound(const LaplaceEnvelope& env);

/// Closed-form tail bound for two components whose log-Laplace transforms
/// are at most C lambda^2 / 2, at distance w_bar = W1(mu0, mu1).
double tail_two_component(double r, double c, double w_bar, double p);

/// Threshold radius separating the two regimes of tail_two_component.
double tail_two_component_threshold(double c, double w_bar, double p);

/// Minimum of the diameter bound and the cubic two-regime bound for the
/// mixture of N(0, theta0^2) and N(0, theta1^2) with weight p on theta1.
double alpha_scaled_two_regime(double lambda, double theta0, double theta1,
                               double p);

struct MelvarTerms {
  double moment_term = 0.0;   // (1/2) log int e^{theta^2 lambda^2} nu(dtheta)
  double witness_term = 0.0;  // (1/2) alpha_nu(2 lambda) on f = +-theta
  double total() const { return moment_term + witness_term; }
};

/// Cauchy-Schwarz bound on the log-Laplace transform of the scale mixture
/// of centered Gaussians N(0, theta^2) with mixing density proportional to
/// exp(-theta^gamma) on [0, inf), gamma >= 2. Throws Divergent when the
/// moment integral is infinite.
MelvarTerms melvar_terms(double lambda, double gamma,
                         const numerics::QuadratureConfig& cfg = {});
double melvar_chain(double lambda, double gamma,
                    const numerics::QuadratureConfig& cfg = {});

}  // namespace mixbound
