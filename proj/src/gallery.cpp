#include "mixbound/gallery.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "mixbound/constants.hpp"
#include "mixbound/dist1d.hpp"
#include "mixbound/errors.hpp"
#include "mixbound/laplace.hpp"
#include "mixbound/oracle.hpp"
#include "mixbound/transport.hpp"

namespace mixbound::gallery {

using nlohmann::json;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::match: return "match";
    case Verdict::within_tolerance: return "within_tolerance";
    case Verdict::deviation: return "deviation";
    case Verdict::informational: return "informational";
  }
  return "?";
}

bool ScenarioResult::passed() const {
  return std::none_of(entries.begin(), entries.end(), [](const Entry& e) {
    return e.verdict == Verdict::deviation;
  });
}

const Entry& ScenarioResult::entry(const std::string& key) const {
  for (const Entry& e : entries) {
    if (e.key == key) return e;
  }
  throw InvalidParameter("no entry '" + key + "' in scenario " + name);
}

namespace {

constexpr double kFitR2 = 0.98;

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string at_p(const std::string& what, double p) {
  return what + "(p=" + fmt("%g", p) + ")";
}

std::vector<double> log_grid(int k_lo, int k_hi) {
  std::vector<double> g;
  for (int k = k_lo; k <= k_hi; ++k) g.push_back(std::pow(10.0, -k));
  return g;
}

// Parameter record with defaults; reading a key that the scenario does not
// declare is a programming error, passing one is a user error.
class Params {
 public:
  Params(const std::string& scenario, json defaults, const json& overrides)
      : values_(std::move(defaults)) {
    if (!overrides.is_null() && !overrides.is_object()) {
      throw InvalidParameter("parameters of " + scenario + " must be an object");
    }
    if (overrides.is_object()) {
      for (const auto& [k, v] : overrides.items()) {
        if (!values_.contains(k)) {
          throw InvalidParameter("unknown parameter '" + k + "' for scenario " +
                                 scenario);
        }
        if (values_[k].is_array() != v.is_array()) {
          throw InvalidParameter("parameter '" + k + "' has the wrong shape");
        }
        values_[k] = v;
      }
    }
  }

  double num(const std::string& k) const { return json_number(values_.at(k)); }

  std::vector<double> vec(const std::string& k) const {
    std::vector<double> out;
    for (const auto& v : values_.at(k)) out.push_back(json_number(v));
    return out;
  }

  const json& record() const { return values_; }

 private:
  json values_;
};

class Report {
 public:
  explicit Report(ScenarioResult& r) : r_(r) {}

  void info(const std::string& key, double v, const std::string& expr = "") {
    r_.entries.push_back({key, v, std::nullopt, expr, Verdict::informational});
  }

  // |computed - predicted| <= tol * max(1, |predicted|).
  void close(const std::string& key, double c, double pred,
             const std::string& expr, double tol) {
    const bool ok = (std::isinf(c) && c == pred) ||
                    std::abs(c - pred) <= tol * std::max(1.0, std::abs(pred));
    push(key, c, pred, expr, ok ? Verdict::match : Verdict::deviation);
  }

  // Relative agreement within tol.
  void close_rel(const std::string& key, double c, double pred,
                 const std::string& expr, double tol) {
    const bool ok = std::abs(c - pred) <= tol * std::abs(pred);
    push(key, c, pred, expr, ok ? Verdict::match : Verdict::deviation);
  }

  // computed <= bound, with a relative slack that downgrades to
  // within_tolerance.
  void le(const std::string& key, double c, double bound,
          const std::string& expr, double slack = 0.0) {
    Verdict v = Verdict::deviation;
    if (c <= bound) {
      v = Verdict::match;
    } else if (c <= bound + slack * std::abs(bound)) {
      v = Verdict::within_tolerance;
    }
    push(key, c, bound, expr, v);
  }

  void ge(const std::string& key, double c, double bound,
          const std::string& expr, double slack = 0.0) {
    Verdict v = Verdict::deviation;
    if (c >= bound) {
      v = Verdict::match;
    } else if (c >= bound - slack * std::abs(bound)) {
      v = Verdict::within_tolerance;
    }
    push(key, c, bound, expr, v);
  }

  // Least-squares slope compared with a prediction; a fit with R^2 below
  // kFitR2 never matches.
  numerics::LinearFit rate(const std::string& key, const std::vector<double>& x,
                           const std::vector<double>& y, double pred,
                           double abs_tol, const std::string& expr) {
    const auto fit = numerics::fit_line(x, y);
    const bool ok =
        fit.r_squared >= kFitR2 && std::abs(fit.slope - pred) <= abs_tol;
    push(key, fit.slope, pred, expr, ok ? Verdict::match : Verdict::deviation);
    info(key + ".r_squared", fit.r_squared);
    info(key + ".intercept", fit.intercept);
    return fit;
  }

  // One-sided version for claims of the form y <= C x^pred: the fitted
  // slope may fall short of pred but not exceed it by more than abs_tol.
  numerics::LinearFit rate_at_most(const std::string& key,
                                   const std::vector<double>& x,
                                   const std::vector<double>& y, double pred,
                                   double abs_tol, const std::string& expr) {
    const auto fit = numerics::fit_line(x, y);
    const bool ok = fit.r_squared >= kFitR2 && fit.slope <= pred + abs_tol;
    push(key, fit.slope, pred, expr, ok ? Verdict::match : Verdict::deviation);
    info(key + ".r_squared", fit.r_squared);
    info(key + ".intercept", fit.intercept);
    return fit;
  }

  void note(std::string s) { r_.notes.push_back(std::move(s)); }

  void columns(std::vector<std::string> c) { r_.table.columns = std::move(c); }
  void row(std::vector<double> v) { r_.table.rows.push_back(std::move(v)); }

 private:
  void push(const std::string& key, double c, double pred,
            const std::string& expr, Verdict v) {
    r_.entries.push_back({key, c, pred, expr, v});
  }

  ScenarioResult& r_;
};

double psi(double u) { return u > 0.0 ? -u * std::log(u) : 0.0; }

// ---------------------------------------------------------------------------

void gaussian_subgaussian(const Params& P, const RunOptions& o, Report& R) {
  const double sd0 = P.num("sd0");
  if (!(sd0 > 0.0 && sd0 <= 1.0)) {
    throw InvalidParameter("sd0 must lie in (0, 1] so that f0 <= kappa f1");
  }
  const auto& cfg = o.quadrature;
  const double c0 = sd0 * sd0;
  const double g0 = 2.0 * c0;
  auto mix_at = [&](double p) {
    return TwoMixture{make_gaussian(0, sd0), make_gaussian(0, 1), p};
  };

  const double D = 0.5 * constants::mean_diff_integral(mix_at(0.5), cfg);
  R.info("D", D, "I(1/2) / 2");
  R.columns({"p", "I", "D_over_p", "pi_upper", "lsi_upper"});

  std::vector<double> xs, lsi;
  for (double p : P.vec("p_grid")) {
    const TwoMixture mix = mix_at(p);
    const double I = constants::mean_diff_integral(mix, cfg);
    const double pi = constants::pi_upper_two_mixture(mix, c0, 1.0, cfg).value;
    const double gi =
        constants::lsi_upper_two_mixture(mix, g0, 2.0, c0, 1.0, cfg).value;
    R.le(at_p("I", p), I, D / p, "I(p) <= D / p (factor 1.1 allowed)", 0.1);
    R.le(at_p("pi_upper", p), pi, std::max(1.0, c0) + D * (1 - p),
         "max(1, C_PI(mu0)) + D q", 1e-9);
    R.row({p, I, D / p, pi, gi});
    if (p <= 0.1) {
      xs.push_back(-std::log(p));
      lsi.push_back(gi);
    }
  }
  const auto fit = numerics::fit_line(xs, lsi);
  R.ge("lsi_upper_vs_neg_log_p.r_squared", fit.r_squared, kFitR2,
       "C_GI bound affine in -log p");
  R.info("lsi_upper.beta", fit.slope, "slope against -log p");
  R.info("lsi_upper.alpha", fit.intercept);

  for (double p : P.vec("spectral_p")) {
    const TwoMixture mix = mix_at(p);
    const double c = oracle::spectral_pi(mixture_measure(mix));
    R.le(at_p("spectral_pi", p), c,
         constants::pi_upper_two_mixture(mix, c0, 1.0, cfg).value,
         "spectral C_PI <= max(C0, C1) + pq I(p) (2% slack)", 0.02);
  }
}

void two_gaussians_same_mean(const Params& P, const RunOptions& o, Report& R) {
  const double s2 = P.num("sigma2");
  if (!(s2 > 1.0)) throw InvalidParameter("sigma2 must exceed 1");
  const auto& cfg = o.quadrature;
  auto mix_at = [&](double p) {
    return TwoMixture{make_gaussian(0, 1), make_gaussian(0, std::sqrt(s2)), p};
  };
  const double I_half = constants::mean_diff_integral(mix_at(0.5), cfg);
  const double pi_half = s2 + 0.25 * I_half;
  const double rate = (s2 - 2.0) / (s2 - 1.0);
  R.info("pi_upper(p=0.5)", pi_half);
  R.columns({"p", "I", "pi_upper", "pqI_over_p_pow"});

  double sup = 0.0, c_fit = 0.0, sup_I = 0.0;
  std::vector<double> xs, ys;
  for (double p : P.vec("p_grid")) {
    const double q = 1.0 - p;
    const TwoMixture mix = mix_at(p);
    const double I = constants::mean_diff_integral(mix, cfg);
    const double pi = constants::pi_upper_two_mixture(mix, 1.0, s2, cfg).value;
    const double scaled = p * q * I / std::pow(p, 1.0 / (s2 - 1.0));
    sup = std::max(sup, pi);
    sup_I = std::max(sup_I, I);
    const double lo = I_half / (2 * std::max(p, q));
    const double hi = I_half / (2 * std::min(p, q));
    R.ge(at_p("I_minus_lower_bracket", p), I - lo, 0.0,
         "I(1/2) / (2 max(p,q)) <= I(p)", 1e-9);
    R.le(at_p("I_minus_upper_bracket", p), I - hi, 0.0,
         "I(p) <= I(1/2) / (2 min(p,q))", 1e-9);
    if (p < 0.5) c_fit = std::max(c_fit, scaled);
    if (p <= 1e-2) {
      xs.push_back(std::log(1.0 / p));
      ys.push_back(std::log(I));
    }
    R.row({p, I, pi, scaled});
  }
  R.info("pi_upper.sup", sup);
  R.info("I.sup", sup_I);
  R.info("pi_rate_constant", c_fit,
         "max over p < 1/2 of pq I(p) / p^(1/(sigma2-1))");
  if (s2 <= 2.0) {
    R.le("pi_upper.sup_over_half", sup / pi_half, 1.1,
         "sup_p bound within 10% of its value at p = 1/2");
  } else {
    R.info("pi_upper.sup_over_half", sup / pi_half);
    R.rate_at_most("log_I_vs_log_inv_p", xs, ys, rate, 0.25 * rate,
                   "slope <= (sigma2 - 2) / (sigma2 - 1)");
  }
}

void two_uniforms(const Params& P, const RunOptions& o, Report& R) {
  const double a = P.num("a");
  if (!(a > 0.0 && a < 1.0)) throw InvalidParameter("a must lie in (0, 1)");
  const auto& cfg = o.quadrature;
  const double pi2 = std::numbers::pi * std::numbers::pi;

  for (double p : P.vec("p_grid")) {
    const double q = 1.0 - p;
    const TwoMixture mix{make_uniform(0, 1), make_uniform(a, a + 1), p};
    const double I = constants::mean_diff_integral(mix, cfg);
    const double closed = a * a * (3 * p * q * (1 - a) + a) / (3 * p * q);
    R.close_rel(at_p("I", p), I, closed, "a^2 (3pq(1-a) + a) / (3pq)", 1e-6);
    const double pi = constants::pi_upper_two_mixture(mix, 1 / pi2, 1 / pi2, cfg).value;
    R.close_rel(at_p("pi_upper", p), pi,
                1 / pi2 + a * a / 3 * (3 * p * q * (1 - a) + a),
                "pi^-2 + (a^2/3)(3pq(1-a) + a)", 1e-6);
  }

  // Lower bound on C_GI from the crude witness at the edge of the region of
  // density p. The measure is reflected so that this region is on the left.
  R.columns({"p", "log_inv_p", "witness_display", "witness_exact"});
  std::vector<double> xs, ys;
  for (double p : P.vec("witness_p")) {
    const double display = psi(p * a / 2) * a / (2 * p) / 150.0;
    const TwoMixture reflected{make_uniform(a, a + 1), make_uniform(0, 1), p};
    const double exact =
        constants::crude_witness(mixture_measure(reflected), a / 2, cfg) / 150.0;
    R.ge(at_p("witness_exact", p), exact, display,
         "exact crude witness >= Psi(pa/2) a / (2p) / 150", 1e-9);
    xs.push_back(std::log(1 / p));
    ys.push_back(display);
    R.row({p, xs.back(), display, exact});
  }
  R.rate("witness_vs_log_inv_p", xs, ys, a * a / 600, 0.25 * a * a / 600,
         "a^2 / 600");
  const double at4 = psi(1e-4 * a / 2) * a / (2e-4) / 150.0;
  R.ge("witness(p=0.0001)", at4, 0.9 * a * a / 600 * std::log(1e4),
       "0.9 (a^2/600) log(1e4)");
}

void gaussian_uniform(const Params& P, const RunOptions& o, Report& R) {
  const double x = P.num("x");
  const auto& cfg = o.quadrature;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const Measure1D g = make_gaussian(0, 1);
  if (!(x < -1.0)) throw InvalidParameter("x must lie left of the uniform");
  const double factor =
      g.cdf(x) * numerics::integrate([&](double u) { return 1 / g.pdf(u); },
                                     {x, -1.0}, cfg);
  R.info("chain_factor", factor, "F1(x) int_x^-1 1/f1");
  R.columns({"p", "neg_log_p", "crude_witness", "chain", "lsi_upper"});

  std::vector<double> xs, lo, up;
  for (double p : P.vec("p_grid")) {
    const TwoMixture mix{make_uniform(-1, 1), g, p};
    const double w = constants::crude_witness(mixture_measure(mix), x, cfg);
    const double chain = -factor * std::log(p);
    R.ge(at_p("crude_witness", p), w, chain,
         "Psi(F(x)) int_x^m 1/f >= -F1(x) int_x^-1 1/f1 log p", 1e-9);
    const double gi = constants::lsi_upper_two_mixture(mix, 8 / pi2, 2.0,
                                                       4 / pi2, 1.0, cfg).value;
    xs.push_back(-std::log(p));
    lo.push_back(w / 150.0);
    up.push_back(gi);
    R.row({p, xs.back(), w, chain, gi});
  }
  const auto fl = numerics::fit_line(xs, lo);
  const auto fu = numerics::fit_line(xs, up);
  R.ge("lower_vs_neg_log_p.r_squared", fl.r_squared, kFitR2,
       "lower bound linear in -log p");
  R.ge("upper_vs_neg_log_p.r_squared", fu.r_squared, kFitR2,
       "upper bound affine in -log p");
  R.info("lower.slope", fl.slope);
  R.ge("upper.slope", fu.slope, fl.slope, "upper slope >= lower slope");
  R.info("w1", w1_1d(make_uniform(-1, 1), g, cfg), "W1(mu0, mu1)");
}

void surprising_blowup(const Params& P, const RunOptions& o, Report& R) {
  const double a = P.num("a");
  if (!(a > 2.0)) throw InvalidParameter("a must exceed 2");
  const auto& cfg = o.quadrature;
  const Measure1D f1 = make_gaussian(0, 1 / std::numbers::sqrt2);
  const double Z1 = std::sqrt(std::numbers::pi);
  const double Z0 = 2 * std::tgamma(1 / a) / a;
  R.columns({"p", "log_neg_log_p", "x_bar", "chain", "crude_witness"});

  std::vector<double> xs, ys, ye;
  for (double p : P.vec("p_grid")) {
    const double q = 1 - p;
    const double xb = std::pow(2 * std::log(q * Z1 / (p * Z0)), 1 / a);
    R.ge(at_p("x_bar_pow", p), std::pow(xb, a - 2), 2.0, "x_bar^(a-2) >= 2");
    const double integral = numerics::integrate(
        [&](double u) { return 1 / (2 * p * f1.pdf(u)); }, {-2 * xb, -xb}, cfg);
    const double chain =
        -p * f1.cdf(-2 * xb) * std::log(p) * integral / 150.0;
    const TwoMixture mix{make_exp_power(a), f1, p};
    const double exact =
        constants::crude_witness(mixture_measure(mix), -2 * xb, cfg) / 150.0;
    R.ge(at_p("crude_witness", p), exact, chain, "exact witness >= chain",
         1e-9);
    xs.push_back(std::log(-std::log(p)));
    ys.push_back(std::log(chain));
    ye.push_back(std::log(exact));
    R.row({p, xs.back(), xb, chain, exact});
  }
  R.note("p_grid stops at 1e-3 from above: the chain needs x_bar^(a-2) >= 2");
  R.rate("log_chain_vs_log_neg_log_p", xs, ys, 1 - 2 / a, 0.15, "1 - 2/a");
  R.info("log_witness_slope", numerics::fit_line(xs, ye).slope);
}

void two_gaussians_same_variance(const Params& P, const RunOptions& o,
                                 Report& R) {
  const double a = P.num("a");
  if (!(a > 0.0)) throw InvalidParameter("a must be positive");
  const auto& cfg = o.quadrature;
  const auto cells = static_cast<std::size_t>(P.num("spectral_cells"));
  auto mix_at = [&](double p) {
    return TwoMixture{make_gaussian(-a, 1), make_gaussian(a, 1), p};
  };
  const double I_half = constants::mean_diff_integral(mix_at(0.5), cfg);
  R.columns({"p", "spectral_pi", "pi_upper", "general", "variance"});

  double sup = 0.0;
  for (double p : P.vec("p_grid")) {
    const TwoMixture mix = mix_at(p);
    const Measure1D mu = mixture_measure(mix);
    const double c = oracle::spectral_pi(mu, cells);
    const double bound = constants::pi_upper_two_mixture(mix, 1, 1, cfg).value;
    const auto closed = constants::two_gaussian_pi_bound(a, p);
    const double var = mu.variance();
    sup = std::max(sup, c);
    R.le(at_p("spectral_vs_pi_upper", p), c, bound,
         "C_PI <= max(C0,C1) + pq I(p) (2% slack)", 0.02);
    R.le(at_p("spectral_vs_general", p), c, closed.general,
         "C_PI <= closed-form general bound (2% slack)", 0.02);
    if (closed.half_sharp) {
      R.le(at_p("spectral_vs_half_sharp", p), c, *closed.half_sharp,
           "C_PI <= 1 + a tau_a (2% slack)", 0.02);
    }
    R.close(at_p("variance", p), var, 1 + 4 * a * a * p * (1 - p),
            "1 + 4 a^2 p q", 1e-8);
    R.ge(at_p("spectral_vs_variance", p), c, var, "C_PI >= Var", 0.02);
    R.row({p, c, bound, closed.general, var});
  }
  R.le("spectral.sup", sup, 1 + 0.5 * I_half,
       "max(C0, C1) + I(1/2) / 2 (2% slack)", 0.02);

  const auto radii = P.vec("mc_radii");
  const auto n = static_cast<std::size_t>(P.num("mc_samples"));
  for (double p : P.vec("mc_p")) {
    const auto t = oracle::mc_tail(mixture_measure(mix_at(p)), radii, n,
                                   o.seed, o.threads);
    for (std::size_t j = 0; j < radii.size(); ++j) {
      const double bound = tail_two_component(radii[j], 1.0, 2 * a, p);
      const std::string key =
          at_p("mc_tail", p) + "(r=" + fmt("%g", radii[j]) + ")";
      R.le(key, t.empirical_prob[j] - 3 * t.stderr_[j], bound,
           "empirical tail - 3 stderr <= two-component tail bound");
    }
  }
}


void translated_gaussians(const Params& P, const RunOptions& o, Report& R) {
  const double s = P.num("sigma");
  const double tau = P.num("tau");
  if (!(s > 0.0 && tau > 0.0)) throw InvalidParameter("sigma and tau must be positive");
  const auto& cfg = o.quadrature;
  const double t0 = P.num("theta0");
  const double t1 = P.num("theta1");
  R.close("w1", w1_1d(make_gaussian(t0, s), make_gaussian(t1, s), cfg),
          std::abs(t1 - t0), "|theta - theta'|", 1e-6);

  // Mixing law N(0, tau^2); each component contributes s^2 lambda^2 / 2.
  const double v = s * s + tau * tau;
  const LaplaceEnvelope env = quadratic_envelope(v / 2);
  const Measure1D nu = make_gaussian(0, tau);
  R.columns({"lambda", "identity_log_mgf", "envelope"});
  for (double l : P.vec("lambda_grid")) {
    const double mgf = nu.expectation(
        [&](double th) { return std::exp(l * th + s * s * l * l / 2); }, cfg);
    const double log_mgf = std::log(mgf);
    R.close_rel("identity_log_mgf(lambda=" + fmt("%g", l) + ")", log_mgf,
                env.eval(l), "(sigma^2 + tau^2) lambda^2 / 2", 1e-8);
    R.row({l, log_mgf, env.eval(l)});
  }

  const auto radii = P.vec("mc_radii");
  const auto t = oracle::mc_tail(make_gaussian(0, std::sqrt(v)), radii,
                                 static_cast<std::size_t>(P.num("mc_samples")),
                                 o.seed, o.threads);
  for (std::size_t j = 0; j < radii.size(); ++j) {
    R.le("mc_tail(r=" + fmt("%g", radii[j]) + ")",
         t.empirical_prob[j] - 3 * t.stderr_[j], tail_from_envelope(env, radii[j]),
         "empirical tail - 3 stderr <= 2 exp(-r^2 / (2 (sigma^2 + tau^2)))");
  }
}

void scaled_gaussians(const Params& P, const RunOptions& o, Report& R) {
  const double g = P.num("gamma");
  if (!(g >= 2.0)) throw InvalidParameter("gamma must be at least 2");
  const auto& cfg = o.quadrature;
  const double t0 = P.num("theta0");
  const double t1 = P.num("theta1");
  const double p = P.num("p");
  R.close("w1", w1_1d(make_gaussian(0, t0), make_gaussian(0, t1), cfg),
          std::sqrt(2 / std::numbers::pi) * std::abs(t1 - t0),
          "sqrt(2/pi) |theta - theta'|", 1e-6);

  // Gaussian mixing law: the moment term is explicit below lambda = 1.
  for (double l : P.vec("gamma2_lambdas")) {
    R.close_rel("moment_term_gamma2(lambda=" + fmt("%g", l) + ")",
                melvar_terms(l, 2.0, cfg).moment_term,
                -0.25 * std::log(1 - l * l), "-(1/4) log(1 - lambda^2)", 1e-8);
  }
  bool diverged = false;
  try {
    melvar_chain(1.0, 2.0, cfg);
  } catch (const Divergent&) {
    diverged = true;
  }
  R.close("gamma2_diverges_at_1", diverged ? 1.0 : 0.0, 1.0,
          "moment integral infinite at lambda = 1", 0.0);

  R.columns({"lambda", "melvar_chain", "two_regime"});
  std::vector<double> xs, ys;
  for (double l : P.vec("lambda_grid")) {
    double chain = numerics::kInf;
    try {
      chain = melvar_chain(l, g, cfg);
    } catch (const Divergent&) {
    }
    const double two = alpha_scaled_two_regime(l, t0, t1, p);
    xs.push_back(std::log(l));
    ys.push_back(std::log(chain));
    R.row({l, chain, two});
  }
  if (g > 2.0) {
    const double pred = 2 * g / (g - 2);
    R.rate("log_melvar_vs_log_lambda", xs, ys, pred, 0.15 * pred,
           "2 gamma / (gamma - 2)");
  }
}

void two_squares(const Params& P, const RunOptions&, Report& R) {
  const double p = P.num("p");
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("p must lie in (0, 1)");
  const int grid = static_cast<int>(P.num("grid"));
  const double m = std::min(p, 1 - p);
  struct Case {
    const char* name;
    SquareOverlap which;
    double energy;
    double ratio;
  };
  for (const Case& c : {Case{"horizontal", SquareOverlap::horizontal, 1.0, 1 / m},
                        Case{"diagonal", SquareOverlap::diagonal, 8.0 / 3,
                             4 / m}}) {
    const std::string n = c.name;
    const auto k = square_pair_constants({c.which, p});
    const auto chk = verify_square_pair({c.which, p}, grid);
    R.close(n + ".path_energy", k.path_energy, c.energy,
            c.which == SquareOverlap::horizontal ? "1" : "8/3", 1e-15);
    R.close(n + ".mean_diff_constant", k.mean_diff_constant, c.energy * c.ratio,
            c.which == SquareOverlap::horizontal ? "1 / min(p,q)"
                                                 : "32 / (3 min(p,q))",
            1e-15);
    R.close(n + ".path_energy_quadrature", chk.path_energy, c.energy,
            "2-D quadrature of the path energy", 1e-6);
    R.le(n + ".density_ratio_grid_sup", chk.density_ratio_sup, k.density_ratio,
         "grid sup of the density ratio <= closed form", 1e-9);
  }
}

void bounded_gaussians(const Params& P, const RunOptions& o, Report& R) {
  const double p = P.num("p");
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("p must lie in (0, 1)");
  const auto e0 = P.vec("eigen0");
  const auto e1 = P.vec("eigen1");
  const auto m1v = P.vec("mean1");
  if (e0.size() != 2 || e1.size() != 2 || m1v.size() != 2) {
    throw DimensionMismatch("bounded_gaussians works in dimension 2");
  }
  const double th = P.num("rotation_deg") * std::numbers::pi / 180;
  Eigen::Matrix2d rot;
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  GaussianVec g0{Eigen::Vector2d::Zero(), Eigen::Vector2d(e0[0], e0[1]).asDiagonal()};
  Eigen::MatrixXd c1 = rot * Eigen::Vector2d(e1[0], e1[1]).asDiagonal() * rot.transpose();
  c1 = 0.5 * (c1 + c1.transpose());
  GaussianVec g1{Eigen::Vector2d(m1v[0], m1v[1]), c1};

  const double rho = std::max({e0[0], e0[1], e1[0], e1[1]});
  const double wbar = w1_gaussian_upper(g0, g1);
  const double dm = (g1.mean - g0.mean).norm();
  R.info("rho", rho, "largest covariance eigenvalue");
  R.info("w_bar", wbar, "W1 upper bound");
  R.ge("w_bar_vs_mean_gap", wbar, dm, "W1 >= |m1 - m0|");
  R.close("w1_upper_identical", w1_gaussian_upper(g0, g0), 0.0, "0", 1e-12);
  R.close("w1_upper_equal_cov", w1_gaussian_upper(g0, {g1.mean, g0.cov}), dm,
          "|m1 - m0|", 1e-12);

  const LaplaceEnvelope env =
      general_diameter_envelope(quadratic_envelope(rho / 2), wbar);
  // The first coordinate is 1-Lipschitz; its law is a 1-D two-component
  // Gaussian mixture.
  const double s0 = std::sqrt(g0.cov(0, 0));
  const double s1 = std::sqrt(g1.cov(0, 0));
  const double a0 = g0.mean(0);
  const double a1 = g1.mean(0);
  const double mean = p * a1 + (1 - p) * a0;
  R.columns({"lambda", "coordinate_log_mgf", "envelope"});
  for (double l : P.vec("lambda_grid")) {
    const double u1 = std::log(p) + l * (a1 - mean) + s1 * s1 * l * l / 2;
    const double u0 = std::log1p(-p) + l * (a0 - mean) + s0 * s0 * l * l / 2;
    const double hi = std::max(u0, u1);
    const double lmgf = hi + std::log(std::exp(u0 - hi) + std::exp(u1 - hi));
    R.le("coordinate_log_mgf(lambda=" + fmt("%g", l) + ")", lmgf, env.eval(l),
         "rho lambda^2 / 2 + min(8 W lambda, W^2 lambda^2) / 8");
    R.row({l, lmgf, env.eval(l)});
  }
  const auto radii = P.vec("mc_radii");
  const Measure1D proj =
      mixture_measure({make_gaussian(a0, s0), make_gaussian(a1, s1), p});
  const auto t = oracle::mc_tail(proj, radii,
                                 static_cast<std::size_t>(P.num("mc_samples")),
                                 o.seed, o.threads);
  for (std::size_t j = 0; j < radii.size(); ++j) {
    R.le("mc_tail(r=" + fmt("%g", radii[j]) + ")",
         t.empirical_prob[j] - 3 * t.stderr_[j], tail_from_envelope(env, radii[j]),
         "empirical tail - 3 stderr <= tail of the diameter envelope");
  }
}

// ---------------------------------------------------------------------------

using ScenarioFn = void (*)(const Params&, const RunOptions&, Report&);

struct Registered {
  std::string name;
  ScenarioFn fn;
  json defaults;
};

json grid_with(int k_lo, int k_hi, std::vector<double> extra) {
  auto g = log_grid(k_lo, k_hi);
  g.insert(g.end(), extra.begin(), extra.end());
  std::sort(g.begin(), g.end());
  return g;
}

const std::vector<Registered>& registry() {
  static const std::vector<Registered> r = [] {
    std::vector<double> melvar_grid;
    for (int i = 0; i <= 10; ++i) melvar_grid.push_back(10 * std::pow(10.0, i / 10.0));
    return std::vector<Registered>{
        {"gaussian_subgaussian", gaussian_subgaussian,
         {{"sd0", 0.5}, {"p_grid", grid_with(1, 8, {0.5})},
          {"spectral_p", {0.01, 0.1, 0.5}}}},
        {"two_gaussians_same_mean", two_gaussians_same_mean,
         {{"sigma2", 1.5},
          {"p_grid", grid_with(1, 8, {0.25, 0.5, 0.75, 0.9, 0.99})}}},
        {"two_uniforms", two_uniforms,
         {{"a", 0.5}, {"p_grid", {0.1, 0.3, 0.5}},
          {"witness_p", grid_with(2, 8, {})}}},
        {"gaussian_uniform", gaussian_uniform,
         {{"x", -2.0}, {"p_grid", grid_with(1, 8, {})}}},
        {"surprising_blowup", surprising_blowup,
         {{"a", 4.0}, {"p_grid", grid_with(3, 8, {})}}},
        {"two_gaussians_same_variance", two_gaussians_same_variance,
         {{"a", 1.0},
          {"p_grid", {0.01, 0.1, 0.5, 0.9, 0.99}},
          {"spectral_cells", 4000},
          {"mc_p", {0.1, 0.5}},
          {"mc_radii", {1.0, 2.0, 3.0}},
          {"mc_samples", 1000000}}},
        {"translated_gaussians", translated_gaussians,
         {{"sigma", 1.0}, {"tau", 1.0}, {"theta0", 0.0}, {"theta1", 3.0},
          {"lambda_grid", {0.25, 0.5, 1.0, 2.0, 4.0}},
          {"mc_radii", {1.0, 2.0, 3.0, 4.0}},
          {"mc_samples", 200000}}},
        {"scaled_gaussians", scaled_gaussians,
         {{"gamma", 4.0}, {"theta0", 1.0}, {"theta1", 2.5}, {"p", 0.5},
          {"gamma2_lambdas", {0.25, 0.5, 0.75}},
          {"lambda_grid", melvar_grid}}},
        {"two_squares", two_squares, {{"p", 0.3}, {"grid", 61}}},
        {"bounded_gaussians", bounded_gaussians,
         {{"p", 0.3}, {"eigen0", {1.0, 0.25}}, {"eigen1", {2.0, 0.5}},
          {"mean1", {1.0, 0.5}}, {"rotation_deg", 30.0},
          {"lambda_grid", {0.1, 0.5, 1.0, 2.0, 5.0}},
          {"mc_radii", {1.0, 2.0, 4.0}},
          {"mc_samples", 200000}}},
    };
  }();
  return r;
}

const Registered& find(const std::string& name) {
  for (const Registered& r : registry()) {
    if (r.name == name) return r;
  }
  throw UnknownScenario("unknown scenario '" + name + "'");
}

void write_json(std::ostringstream& os, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string end(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << json(k).dump() << (indent > 0 ? ": " : ":");
        write_json(os, v, indent, depth + 1);
      }
      os << nl << end << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(),
                                    [](const json& v) { return v.is_primitive(); });
      if (flat) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << (indent > 0 ? ", " : ",");
          write_json(os, j[i], indent, depth + 1);
        }
        os << ']';
        return;
      }
      os << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',' << nl;
        os << pad;
        write_json(os, j[i], indent, depth + 1);
      }
      os << nl << end << ']';
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x)) {
        os << format_double(x);
      } else {
        os << '"' << format_double(x) << '"';
      }
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const Registered& r : registry()) n.push_back(r.name);
    return n;
  }();
  return names;
}

json default_parameters(const std::string& name) { return find(name).defaults; }

ScenarioResult run_scenario(const std::string& name, const json& params,
                            const RunOptions& opts) {
  const Registered& reg = find(name);
  opts.quadrature.validate();
  const Params P(name, reg.defaults, params);
  ScenarioResult out;
  out.name = name;
  out.parameters = P.record();
  Report R(out);
  reg.fn(P, opts, R);
  return out;
}

std::vector<ScenarioResult> run_all(const RunOptions& opts) {
  const auto& names = scenario_names();
  std::vector<ScenarioResult> results(names.size());
  std::vector<std::exception_ptr> errors(names.size());
  unsigned n = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  n = std::clamp<unsigned>(n, 1, static_cast<unsigned>(names.size()));
  // Scenarios run side by side; each one's Monte-Carlo runs single-threaded
  // unless only one worker is used.
  RunOptions inner = opts;
  if (n > 1) inner.threads = 1;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < names.size(); i = next++) {
      try {
        results[i] = run_scenario(names[i], json::object(), inner);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

Table figure_explo_data(double p, double a) {
  if (!(a > 2.0)) throw InvalidParameter("a must exceed 2");
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("p must lie in (0, 1)");
  const Measure1D mu = mixture_measure(
      {make_exp_power(a), make_gaussian(0, 1 / std::numbers::sqrt2), p});
  auto v = [&](double x) { return -mu.log_pdf(x); };
  auto d2 = [&](double x, double h) {
    return (v(x + h) - 2 * v(x) + v(x - h)) / (h * h);
  };
  constexpr double h = 1e-4;
  constexpr int n = 2001;
  Table t{{"x", "density", "d2_neg_log_density"}, {}};
  for (int i = 0; i < n; ++i) {
    // Integer offsets keep the grid exactly symmetric about 0.
    const double x = 0.005 * (i - (n - 1) / 2);
    const double rich = (4 * d2(x, h / 2) - d2(x, h)) / 3;
    t.rows.push_back({x, mu.pdf(x), rich});
  }
  return t;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent, 0);
  return os.str();
}

double json_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return numerics::kInf;
    if (s == "-inf") return -numerics::kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InvalidParameter("expected a number, got " + j.dump());
}

json result_to_json(const ScenarioResult& r) {
  json entries = json::array();
  for (const Entry& e : r.entries) {
    entries.push_back({{"key", e.key},
                       {"computed", e.computed},
                       {"predicted", e.predicted ? json(*e.predicted) : json()},
                       {"expression", e.expression},
                       {"verdict", to_string(e.verdict)}});
  }
  return {{"name", r.name},
          {"parameters", r.parameters},
          {"passed", r.passed()},
          {"entries", entries},
          {"notes", r.notes},
          {"columns", r.table.columns}};
}

std::string table_to_csv(const Table& t, const std::vector<std::string>& header) {
  std::string out;
  for (const auto& h : header) out += "# " + h + "\n";
  out += "# columns: ";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    out += (i ? "," : "") + t.columns[i];
  }
  out += "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    out += (i ? "," : "") + t.columns[i];
  }
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += (i ? "," : "") + format_double(row[i]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace mixbound::gallery
