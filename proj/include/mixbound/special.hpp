#pragma once

namespace mixbound::special {

// Standard normal distribution.
double normal_pdf(double z);
double normal_log_pdf(double z);
double normal_cdf(double z);
double normal_sf(double z);
double normal_log_cdf(double z);
double normal_log_sf(double z);
double normal_quantile(double u);

// log(e^a + e^b), exact when either argument is -inf.
double log_sum_exp(double a, double b);
// log(e^a - e^b) for a >= b; -inf when a == b.
double log_diff_exp(double a, double b);
// log(1 - e^x) for x <= 0.
double log1m_exp(double x);

// Logarithms of the regularized incomplete gamma functions P(s, x) and
// Q(s, x) = 1 - P(s, x), accurate deep into both tails.
double log_gamma_p(double s, double x);
double log_gamma_q(double s, double x);

}  // namespace mixbound::special
