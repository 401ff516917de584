#include "mixbound/special.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "mixbound/errors.hpp"

namespace mixbound::special {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// Asymptotic expansion of log Phi(z) for z << 0.
double normal_log_cdf_asymptotic(double z) {
  const double w = 1.0 / (z * z);
  const double series =
      1.0 - w * (1.0 - 3.0 * w * (1.0 - 5.0 * w * (1.0 - 7.0 * w * (1.0 - 9.0 * w))));
  return normal_log_pdf(z) - std::log(-z) + std::log(series);
}

}  // namespace

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_log_pdf(double z) { return -0.5 * z * z - kLogSqrt2Pi; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_log_cdf(double z) {
  if (std::isinf(z)) return z > 0 ? 0.0 : -kInf;
  if (z < -25.0) return normal_log_cdf_asymptotic(z);
  if (z < 0.0) return std::log(normal_cdf(z));
  return std::log1p(-normal_sf(z));
}

double normal_log_sf(double z) { return normal_log_cdf(-z); }

double normal_quantile(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw InvalidParameter("normal_quantile: probability outside [0, 1]");
  }
  if (u == 0.0) return -kInf;
  if (u == 1.0) return kInf;
  if (u <= 0.5) return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - u));
}

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log1m_exp(double x) {
  if (x > -std::numbers::ln2) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

double log_diff_exp(double a, double b) {
  if (b == -kInf) return a;
  if (a == b) return -kInf;
  return a + log1m_exp(b - a);
}

double log_gamma_p(double s, double x) {
  if (!(s > 0.0)) throw InvalidParameter("incomplete gamma: shape must be > 0");
  if (x <= 0.0) return -kInf;
  if (std::isinf(x)) return 0.0;
  if (x >= s + 1.0) return log1m_exp(log_gamma_q(s, x));
  double ap = s;
  double term = 1.0 / s;
  double sum = term;
  for (int n = 0; n < 10000; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return s * std::log(x) - x - std::lgamma(s) + std::log(sum);
}

double log_gamma_q(double s, double x) {
  if (!(s > 0.0)) throw InvalidParameter("incomplete gamma: shape must be > 0");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return -kInf;
  if (x < s + 1.0) return log1m_exp(log_gamma_p(s, x));
  // Modified Lentz evaluation of the continued fraction for Q.
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return -x + s * std::log(x) - std::lgamma(s) + std::log(h);
}

}  // namespace mixbound::special
