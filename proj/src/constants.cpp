#include "mixbound/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mixbound/errors.hpp"
#include "mixbound/laplace.hpp"
#include "mixbound/oracle.hpp"
#include "mixbound/special.hpp"

namespace mixbound::constants {

using numerics::kInf;

const char* to_string(Certification c) {
  switch (c) {
    case Certification::upper: return "upper";
    case Certification::lower: return "lower";
    case Certification::exact: return "exact";
    case Certification::empirical: return "empirical";
  }
  return "?";
}

namespace {

void check_constant(double c, const char* what) {
  if (!(c >= 0.0)) {
    throw InvalidParameter(std::string(what) + " must be non-negative");
  }
}

std::vector<double> split_points(const Interval& hull,
                                  const std::vector<double>& a,
                                  const std::vector<double>& b) {
  std::vector<double> cuts{hull.lo, hull.hi};
  for (const auto* v : {&a, &b}) {
    for (double x : *v) {
      if (x > hull.lo && x < hull.hi) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

std::vector<double> segment_cuts(const Measure1D& mu, double a, double b) {
  std::vector<double> cuts{a, b};
  for (double x : mu.landmarks()) {
    if (x > a && x < b) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

// int_a^b 1 / f(y) dy for a <= b.
double inverse_density_integral(const Measure1D& mu, double a, double b,
                                const QuadratureConfig& cfg) {
  if (!(a < b)) return 0.0;
  const auto cuts = segment_cuts(mu, a, b);
  return numerics::integrate_pieces(
      [&](double y) { return std::exp(-mu.log_pdf(y)); }, cuts, cfg);
}

enum class Side { left, right };

// Supremum over x beyond the median, on one side, of
// weight(tail mass at x) * int_{median}^{x} 1/f. The search runs over the
// log tail mass s between 1/2 and cfg.tail_mass_cut, first on a grid and then
// with Brent's method around the best grid point.
struct TailSup {
  double value = 0.0;
  bool growing_at_cut = false;
};

template <class Weight>
TailSup median_tail_sup(const Measure1D& mu, Side side, Weight weight,
                        const QuadratureConfig& cfg) {
  const double m = mu.median();
  const double cut = cfg.tail_mass_cut;
  constexpr int kGrid = 161;
  const double log_hi = std::log(0.5);
  const double log_lo = std::log(cut);

  auto x_at = [&](double log_s) {
    const double s = std::exp(log_s);
    return side == Side::right ? mu.quantile(1.0 - s) : mu.quantile(s);
  };
  auto tail_at = [&](double x) {
    return side == Side::right ? mu.sf(x) : mu.cdf(x);
  };
  auto span = [&](double from, double to) {
    return side == Side::right
               ? inverse_density_integral(mu, from, to, cfg)
               : inverse_density_integral(mu, to, from, cfg);
  };

  std::vector<double> ls(kGrid), xs(kGrid), js(kGrid), vals(kGrid);
  for (int k = 0; k < kGrid; ++k) {
    ls[k] = log_hi + (log_lo - log_hi) * k / (kGrid - 1);
    xs[k] = k == 0 ? m : x_at(ls[k]);
    js[k] = k == 0 ? 0.0 : js[k - 1] + span(xs[k - 1], xs[k]);
    vals[k] = js[k] == 0.0 ? 0.0 : weight(tail_at(xs[k])) * js[k];
  }
  TailSup out;
  int kb = 0;
  for (int k = 1; k < kGrid; ++k) {
    if (!(vals[k] <= vals[kb])) kb = k;
    if (std::isnan(vals[k]) || std::isinf(vals[k])) {
      out.value = kInf;
      return out;
    }
  }
  out.value = vals[kb];

  // Objective at an arbitrary log tail mass, integrating from the nearest
  // grid point on the median side.
  auto objective = [&](double log_s) {
    int k = static_cast<int>(
        std::floor((log_s - log_hi) / (log_lo - log_hi) * (kGrid - 1)));
    k = std::clamp(k, 0, kGrid - 1);
    const double x = x_at(log_s);
    const double j = js[k] + span(xs[k], x);
    return j == 0.0 ? 0.0 : weight(tail_at(x)) * j;
  };

  if (kb == kGrid - 1) {
    const double earlier = objective(std::log(100.0 * cut));
    out.growing_at_cut = out.value > 1.01 * earlier;
    return out;
  }
  if (kb > 0) {
    const Interval br{ls[kb + 1], ls[kb - 1]};
    const auto ext = numerics::maximize_1d(objective, br, 1e-10);
    out.value = std::max(out.value, ext.value);
  }
  return out;
}

double hardy_weight(double s) {
  if (!(s > 0.0)) return 0.0;
  return s * std::log1p(1.0 / (2.0 * s));
}

double psi(double u) {
  if (!(u > 0.0) || u >= 1.0) return 0.0;
  return -u * std::log(u);
}

}  // namespace

double mean_diff_integral(const TwoMixture& mix, const QuadratureConfig& cfg) {
  mix.validate();
  cfg.validate();
  std::vector<Interval> pieces = mix.mu0.support_pieces();
  for (const auto& piece : mix.mu1.support_pieces()) pieces.push_back(piece);
  if (numerics::merge_intervals(pieces).size() > 1) return kInf;

  const Interval hull = numerics::hull(mix.mu0.support(), mix.mu1.support());
  const auto cuts =
      split_points(hull, mix.mu0.landmarks(), mix.mu1.landmarks());
  const double p = mix.p;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  auto integrand = [&](double x) {
    const double num = 2.0 * log_cdf_gap(mix.mu0, mix.mu1, x);
    if (num == -kInf) return 0.0;
    double den;
    if (p == 0.0) {
      den = mix.mu0.log_pdf(x);
    } else if (p == 1.0) {
      den = mix.mu1.log_pdf(x);
    } else {
      den = special::log_sum_exp(log_p + mix.mu1.log_pdf(x),
                                 log_q + mix.mu0.log_pdf(x));
    }
    if (den == -kInf) return kInf;
    return std::exp(num - den);
  };
  return numerics::integrate_pieces(integrand, cuts, cfg);
}

MeanDiffReport mean_diff_I(const TwoMixture& mix, const QuadratureConfig& cfg) {
  MeanDiffReport r;
  r.p = mix.p;
  r.I_p = mean_diff_integral(mix, cfg);
  if (mix.p == 0.5) {
    r.I_half = r.I_p;
  } else {
    TwoMixture half = mix;
    half.p = 0.5;
    r.I_half = mean_diff_integral(half, cfg);
  }
  const double lo_w = std::min(mix.p, mix.q());
  const double hi_w = std::max(mix.p, mix.q());
  r.bracket_lo = r.I_half / (2.0 * hi_w);
  r.bracket_hi = lo_w > 0.0 ? r.I_half / (2.0 * lo_w) : kInf;
  return r;
}

ExtendedConstant pi_upper_two_mixture(const TwoMixture& mix, double c_pi_0,
                                      double c_pi_1,
                                      const QuadratureConfig& cfg) {
  mix.validate();
  check_constant(c_pi_0, "c_pi_0");
  check_constant(c_pi_1, "c_pi_1");
  ExtendedConstant out;
  out.provenance = "mixture Poincare bound: max(C_PI) + pq I(p)";
  out.certified = Certification::upper;
  const double c = std::max(c_pi_0, c_pi_1);
  const double pq = mix.p * mix.q();
  if (pq == 0.0) {
    out.value = c;
    return out;
  }
  out.value = c + pq * mean_diff_integral(mix, cfg);
  return out;
}

ExtendedConstant lsi_upper_two_mixture(const TwoMixture& mix, double c_gi_0,
                                       double c_gi_1, double c_pi_0,
                                       double c_pi_1,
                                       const QuadratureConfig& cfg) {
  mix.validate();
  check_constant(c_gi_0, "c_gi_0");
  check_constant(c_gi_1, "c_gi_1");
  check_constant(c_pi_0, "c_pi_0");
  check_constant(c_pi_1, "c_pi_1");
  ExtendedConstant out;
  out.provenance =
      "mixture log-Sobolev bound: max(C_GI) + r(p) (pq I(p) + max(C_PI))";
  out.certified = Certification::upper;
  const double g = std::max(c_gi_0, c_gi_1);
  const double pq = mix.p * mix.q();
  if (pq == 0.0) {
    out.value = g;
    return out;
  }
  const double c = std::max(c_pi_0, c_pi_1);
  out.value = g + log_ratio_over_gap(mix.p) *
                      (pq * mean_diff_integral(mix, cfg) + c);
  return out;
}

double bernoulli_lsi_constant(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidParameter("Bernoulli log-Sobolev constant needs p in (0, 1)");
  }
  return p * (1.0 - p) * log_ratio_over_gap(p);
}

double band_ratio(double a, double x) {
  if (!(a > 0.0)) throw InvalidParameter("band width a must be positive");
  const double t = std::abs(x);
  const double num = special::log_diff_exp(special::normal_log_sf(t - a),
                                           special::normal_log_sf(t + a));
  const double den = special::log_sum_exp(special::normal_log_pdf(t + a),
                                          special::normal_log_pdf(t - a));
  return std::exp(num - den);
}

double band_constant(double a) {
  if (!(a > 0.0)) throw InvalidParameter("band width a must be positive");
  return std::erf(a / std::numbers::sqrt2) / (2.0 * special::normal_pdf(a));
}

numerics::Extremum band_ratio_sup(double a, double half_width) {
  if (!(half_width > 0.0)) {
    throw InvalidParameter("scan half width must be positive");
  }
  return numerics::maximize_scan([a](double x) { return band_ratio(a, x); },
                                 {-half_width, half_width}, 2001, 1e-12);
}

TwoGaussianPiBound two_gaussian_pi_bound(double a, double p) {
  if (!(a > 0.0)) throw InvalidParameter("two-Gaussian bound needs a > 0");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidParameter("two-Gaussian bound needs p in [0, 1]");
  }
  const double a2 = a * a;
  const double inner = special::normal_cdf(2.0 * a) * std::exp(4.0 * a2) +
                       2.0 * a / std::sqrt(2.0 * std::numbers::pi) *
                           std::exp(2.0 * a2) +
                       0.5;
  TwoGaussianPiBound out;
  out.general = 1.0 + p * (1.0 - p) * 4.0 * a2 * inner;
  if (p == 0.5) out.half_sharp = 1.0 + a * band_constant(a);
  return out;
}

HardyBounds hardy_lsi_bounds(const Measure1D& mu, const QuadratureConfig& cfg) {
  cfg.validate();
  HardyBounds h;
  if (!mu.connected()) {
    h.b_plus = h.b_minus = h.lower = h.upper = kInf;
    return h;
  }
  const TailSup plus = median_tail_sup(mu, Side::right, hardy_weight, cfg);
  const TailSup minus = median_tail_sup(mu, Side::left, hardy_weight, cfg);
  h.b_plus = plus.growing_at_cut ? kInf : plus.value;
  h.b_minus = minus.growing_at_cut ? kInf : minus.value;
  h.lower = std::max(h.b_plus, h.b_minus);
  h.upper = 16.0 * h.lower;
  return h;
}

double crude_witness(const Measure1D& mu, double x,
                     const QuadratureConfig& cfg) {
  const double m = mu.median();
  if (!(x <= m)) throw InvalidParameter("crude witness needs x <= median");
  return psi(mu.cdf(x)) * inverse_density_integral(mu, x, m, cfg);
}

double crude_lsi_lower(const Measure1D& mu, const QuadratureConfig& cfg) {
  cfg.validate();
  const TailSup s = median_tail_sup(mu, Side::left, psi, cfg);
  return s.value / 150.0;
}

VarianceSplit variance_decomposition(const TwoMixture& mix, const RealFn& f,
                                     const QuadratureConfig& cfg) {
  mix.validate();
  const double e0 = mix.mu0.expectation(f, cfg);
  const double e1 = mix.mu1.expectation(f, cfg);
  auto centred_sq = [&](double e) {
    return [&f, e](double x) {
      const double d = f(x) - e;
      return d * d;
    };
  };
  const double v0 = mix.mu0.expectation(centred_sq(e0), cfg);
  const double v1 = mix.mu1.expectation(centred_sq(e1), cfg);
  VarianceSplit out;
  out.within = mix.p * v1 + mix.q() * v0;
  out.between = mix.p * mix.q() * (e0 - e1) * (e0 - e1);
  out.total = out.within + out.between;
  return out;
}

double finite_mixture_between_variance(const std::vector<double>& weights,
                                       const std::vector<double>& means) {
  if (weights.size() != means.size()) {
    throw DimensionMismatch("weights and means differ in length");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw InvalidParameter("mixture weights must lie in [0, 1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw InvalidParameter("mixture weights must sum to 1");
  }
  double v = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    for (std::size_t j = i + 1; j < weights.size(); ++j) {
      const double d = means[i] - means[j];
      v += weights[i] * weights[j] * d * d;
    }
  }
  return v;
}

EntropyBound entropy_decomposition_bound(const TwoMixture& mix,
                                         const RealFn& f, const RealFn& fprime,
                                         std::pair<double, double> c_gi,
                                         std::pair<double, double> c_pi,
                                         const QuadratureConfig& cfg) {
  mix.validate();
  check_constant(c_gi.first, "c_gi");
  check_constant(c_gi.second, "c_gi");
  check_constant(c_pi.first, "c_pi");
  check_constant(c_pi.second, "c_pi");
  const Measure1D mixed = mixture_measure(mix);
  const auto ee = oracle::entropy_energy(mixed, f, fprime, {}, cfg);
  EntropyBound out;
  out.true_entropy = ee.entropy;
  const double energy = ee.energy;
  out.terms[0] = std::max(c_gi.first, c_gi.second) * energy;
  const double pq = mix.p * mix.q();
  if (pq > 0.0) {
    const double r = log_ratio_over_gap(mix.p);
    const double d = mix.mu0.expectation(f, cfg) - mix.mu1.expectation(f, cfg);
    out.terms[1] = pq * r * d * d;
    out.terms[2] = std::max(c_pi.first, c_pi.second) * r * energy;
  }
  out.bound = out.terms[0] + out.terms[1] + out.terms[2];
  return out;
}

ComponentConstants component_constants(const Measure1D& mu,
                                       const QuadratureConfig& cfg) {
  ComponentConstants out;
  const auto& an = mu.analytic();
  if (an && an->c_pi) {
    out.c_pi = {*an->c_pi, "closed form", Certification::exact};
  } else {
    try {
      out.c_pi = {oracle::spectral_pi(mu), "spectral oracle",
                  Certification::empirical};
    } catch (const DisconnectedSupport&) {
      out.c_pi = {kInf, "disconnected support", Certification::exact};
    }
  }
  if (an && an->c_gi) {
    out.c_gi = {*an->c_gi, "closed form", Certification::exact};
  } else {
    out.c_gi = {hardy_lsi_bounds(mu, cfg).upper, "Hardy upper bound",
                Certification::upper};
  }
  return out;
}

}  // namespace mixbound::constants
