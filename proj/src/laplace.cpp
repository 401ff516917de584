#include "mixbound/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mixbound/errors.hpp"
#include "mixbound/special.hpp"

namespace mixbound {

namespace {

using numerics::kInf;

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidParameter("probability p must lie in [0, 1]");
  }
}

// log int_0^inf exp(a t^2 + b t - t^g) dt, where `peak` is the maximizer of
// the exponent and `width` its local scale. The exponent is evaluated as a
// difference from its peak value so that large exponents keep full relative
// precision. Returns +inf on divergence.
double log_integrate_exp_poly(double a, double b, double g, double peak,
                              double width,
                              const numerics::QuadratureConfig& cfg) {
  const double peak_pow = std::pow(peak, g);
  const double h_max = a * peak * peak + b * peak - peak_pow;
  auto delta = [&](double t) {
    const double u = t - peak;
    if (peak == 0.0) return a * u * u + b * u - std::pow(u, g);
    return a * u * (2.0 * peak + u) + b * u -
           peak_pow * std::expm1(g * std::log1p(u / peak));
  };
  std::vector<double> cuts{0.0};
  for (double k : {-64.0, -16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0, 64.0}) {
    const double x = peak + k * width;
    if (x > 0.0) cuts.push_back(x);
  }
  cuts.push_back(kInf);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double value = numerics::integrate_pieces(
      [&](double t) { return std::exp(delta(t)); }, cuts, cfg);
  if (std::isinf(value)) return kInf;
  return h_max + std::log(value);
}

}  // namespace

double log_ratio_over_gap(double p) {
  check_probability(p);
  if (p == 0.0 || p == 1.0) return kInf;
  const double d = 1.0 - 2.0 * p;
  if (d == 0.0) return 2.0;
  return 2.0 * std::atanh(d) / d;
}

TwoPointConstants two_point_constants(double p) {
  check_probability(p);
  TwoPointConstants t;
  t.p = p;
  const double q = 1.0 - p;
  if (p == 0.0 || p == 1.0) {
    t.c_p = 0.0;
    t.x_p = kInf;
    t.argmax_x = p == 0.0 ? kInf : -kInf;
    return t;
  }
  t.c_p = 1.0 / (4.0 * log_ratio_over_gap(p));
  t.x_p = std::max(p, q) / (2.0 * t.c_p);
  t.argmax_x = 2.0 * (std::log(q) - std::log(p));
  return t;
}

double two_point_objective(double p, double x) {
  const double q = 1.0 - p;
  const double lse = special::log_sum_exp(std::log(p) + q * x, std::log(q) - p * x);
  return lse / (x * x);
}

double alpha_general(double lambda, const RealFn& alpha_bar, double w_bar) {
  const double linear = 8.0 * w_bar * lambda;
  const double quadratic = w_bar * w_bar * lambda * lambda;
  return alpha_bar(lambda) + std::min(linear, quadratic) / 8.0;
}

double alpha_two_component(double lambda, const RealFn& alpha_max, double w1,
                           double p) {
  const TwoPointConstants t = two_point_constants(p);
  const double base = alpha_max(lambda);
  if (t.c_p == 0.0 || w1 == 0.0) return base;
  const double s = lambda * w1;
  if (s <= t.x_p) return base + t.c_p * s * s;
  return base + std::max(p, 1.0 - p) * (s - 0.5 * t.x_p);
}

const char* to_string(EnvelopeProvenance p) {
  switch (p) {
    case EnvelopeProvenance::general_diameter: return "general_diameter";
    case EnvelopeProvenance::two_component: return "two_component";
    case EnvelopeProvenance::quadratic: return "quadratic";
    case EnvelopeProvenance::user: return "user";
  }
  return "user";
}

LaplaceEnvelope quadratic_envelope(double coeff) {
  if (!(coeff >= 0.0)) throw InvalidParameter("quadratic envelope: coeff < 0");
  return {[coeff](double l) { return coeff * l * l; },
          EnvelopeProvenance::quadratic,
          {{"coeff", coeff}}};
}

LaplaceEnvelope general_diameter_envelope(const LaplaceEnvelope& alpha_bar,
                                          double w_bar) {
  if (!(w_bar >= 0.0) || std::isinf(w_bar)) {
    throw InvalidParameter("diameter envelope: w_bar must be finite and >= 0");
  }
  auto params = alpha_bar.params;
  params["w_bar"] = w_bar;
  return {[inner = alpha_bar.eval, w_bar](double l) {
            return alpha_general(l, inner, w_bar);
          },
          EnvelopeProvenance::general_diameter, params};
}

LaplaceEnvelope two_component_envelope(const LaplaceEnvelope& alpha_max,
                                       double w1, double p) {
  check_probability(p);
  if (!(w1 >= 0.0)) throw InvalidParameter("two-component envelope: w1 < 0");
  auto params = alpha_max.params;
  params["w1"] = w1;
  params["p"] = p;
  params["c_p"] = two_point_constants(p).c_p;
  return {[inner = alpha_max.eval, w1, p](double l) {
            return alpha_two_component(l, inner, w1, p);
          },
          EnvelopeProvenance::two_component, params};
}

LaplaceEnvelope user_envelope(RealFn eval, std::map<std::string, double> params) {
  return {std::move(eval), EnvelopeProvenance::user, std::move(params)};
}

double tail_from_envelope(const LaplaceEnvelope& env, double r) {
  if (!(r > 0.0)) throw InvalidParameter("tail bound: radius must be > 0");
  auto gain = [&](double l) {
    const double a = env.eval(l);
    return std::isnan(a) ? -kInf : r * l - a;
  };
  // Quarter-octave grid on [2^-30, 2^40]; envelopes need not be convex, so
  // the scan guards against stopping at a local maximum.
  constexpr int kFirst = -120;
  constexpr int kLast = 160;
  int best_k = kFirst - 1;
  double best = 0.0;
  for (int k = kFirst; k <= kLast; ++k) {
    const double v = gain(std::exp2(0.25 * k));
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  if (best_k == kLast && gain(std::exp2(0.25 * (kLast + 1))) > best) return 0.0;
  if (best_k >= kFirst) {
    const double lo = best_k == kFirst ? 0.0 : std::exp2(0.25 * (best_k - 1));
    const double hi = std::exp2(0.25 * (best_k + 1));
    const auto refined = numerics::maximize_1d(gain, {lo, hi}, 1e-12 * hi);
    best = std::max(best, refined.value);
  }
  return std::min(2.0, 2.0 * std::exp(-best));
}

TailBound make_tail_bound(const LaplaceEnvelope& env) {
  return {[env](double r) { return tail_from_envelope(env, r); }, env};
}

double tail_two_component_threshold(double c, double w_bar, double p) {
  const TwoPointConstants t = two_point_constants(p);
  if (t.c_p == 0.0 || w_bar == 0.0) return kInf;
  return std::max(p, 1.0 - p) * (c / (2.0 * t.c_p * w_bar) + w_bar);
}

double tail_two_component(double r, double c, double w_bar, double p) {
  if (!(c > 0.0)) throw InvalidParameter("tail_two_component: C must be > 0");
  if (!(w_bar >= 0.0)) throw InvalidParameter("tail_two_component: w_bar < 0");
  if (!(r >= 0.0)) throw InvalidParameter("tail_two_component: r < 0");
  const TwoPointConstants t = two_point_constants(p);
  double exponent;
  if (t.c_p == 0.0 || w_bar == 0.0) {
    exponent = r * r / (2.0 * c);
  } else if (r <= tail_two_component_threshold(c, w_bar, p)) {
    exponent = r * r / (2.0 * c + 4.0 * t.c_p * w_bar * w_bar);
  } else {
    const double m = std::max(p, 1.0 - p);
    const double excess = r - m * w_bar;
    exponent = excess * excess / (2.0 * c) + m * m / (4.0 * t.c_p);
  }
  return std::min(2.0, 2.0 * std::exp(-exponent));
}

double alpha_scaled_two_regime(double lambda, double theta0, double theta1,
                               double p) {
  check_probability(p);
  if (!(theta0 > 0.0) || theta1 < theta0) {
    throw InvalidParameter("alpha_scaled_two_regime: need theta1 >= theta0 > 0");
  }
  const double q = 1.0 - p;
  const double c = two_point_constants(p).c_p;
  const double t0 = theta0 * theta0;
  const double t1 = theta1 * theta1;
  const double diameter = 0.5 * t1 * lambda * lambda + (theta1 - theta0) * lambda;
  const double spread = 0.25 * (t1 - t0) * (t1 - t0) + (theta1 - theta0) * (theta1 - theta0);
  const double cubic = 0.5 * (p * t1 + q * t0) * lambda * lambda +
                       c * spread * lambda * lambda * lambda;
  return std::min(diameter, cubic);
}

MelvarTerms melvar_terms(double lambda, double gamma,
                         const numerics::QuadratureConfig& cfg) {
  if (!(lambda >= 0.0)) throw InvalidParameter("melvar: lambda must be >= 0");
  if (!(gamma >= 2.0)) throw InvalidParameter("melvar: gamma must be >= 2");
  const double log_norm = std::log(gamma) - std::lgamma(1.0 / gamma);

  MelvarTerms out;
  if (lambda == 0.0) return out;

  // Moment term: peak of theta^2 lambda^2 - theta^gamma.
  const double l2 = lambda * lambda;
  double peak = 0.0;
  double width = 1.0;
  if (gamma > 2.0) {
    peak = std::pow(2.0 * l2 / gamma, 1.0 / (gamma - 2.0));
    width = std::min(1.0, 1.0 / (lambda * std::sqrt(2.0 * (gamma - 2.0))));
  } else if (lambda < 1.0) {
    width = std::min(1.0, 1.0 / std::sqrt(2.0 * (1.0 - l2)));
  }
  const double log_moment =
      log_norm + log_integrate_exp_poly(l2, 0.0, gamma, peak, width, cfg);
  if (std::isinf(log_moment)) {
    throw Divergent("melvar: the moment integral diverges at this lambda");
  }
  out.moment_term = 0.5 * log_moment;

  // Witness term: alpha_nu(2 lambda) restricted to f(theta) = +-theta.
  const double mean = std::exp(std::lgamma(2.0 / gamma) - std::lgamma(1.0 / gamma));
  const double t = 2.0 * lambda;
  double alpha = -kInf;
  for (double sign : {1.0, -1.0}) {
    const double s = sign * t;
    double pk = 0.0;
    double wd = std::min(1.0, 1.0 / t);
    if (s > 0.0) {
      pk = std::pow(s / gamma, 1.0 / (gamma - 1.0));
      const double curv = gamma * (gamma - 1.0) * std::pow(pk, gamma - 2.0);
      wd = curv > 0.0 ? std::min(1.0, 1.0 / std::sqrt(curv)) : 1.0;
    }
    const double log_mgf =
        log_norm + log_integrate_exp_poly(0.0, s, gamma, pk, wd, cfg);
    alpha = std::max(alpha, log_mgf - s * mean);
  }
  out.witness_term = 0.5 * alpha;
  return out;
}

double melvar_chain(double lambda, double gamma,
                    const numerics::QuadratureConfig& cfg) {
  return melvar_terms(lambda, gamma, cfg).total();
}

}  // namespace mixbound
