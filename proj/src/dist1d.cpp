#include "mixbound/dist1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "mixbound/errors.hpp"
#include "mixbound/special.hpp"

namespace mixbound {

namespace {

using numerics::kInf;
namespace sp = special;

std::string format_number(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

class GaussianModel final : public DistributionModel {
 public:
  GaussianModel(double mean, double sd) : mean_(mean), sd_(sd) {}

  double pdf(double x) const override { return sp::normal_pdf(z(x)) / sd_; }
  double log_pdf(double x) const override {
    return sp::normal_log_pdf(z(x)) - std::log(sd_);
  }
  double cdf(double x) const override { return sp::normal_cdf(z(x)); }
  double sf(double x) const override { return sp::normal_sf(z(x)); }
  double log_cdf(double x) const override { return sp::normal_log_cdf(z(x)); }
  double log_sf(double x) const override { return sp::normal_log_sf(z(x)); }
  double quantile(double u) const override {
    return mean_ + sd_ * sp::normal_quantile(u);
  }
  std::vector<Interval> support_pieces() const override {
    return {Interval::real_line()};
  }
  std::vector<double> landmarks() const override {
    return {mean_ - 3.0 * sd_, mean_, mean_ + 3.0 * sd_};
  }
  std::optional<AnalyticSummary> analytic() const override {
    const double v = sd_ * sd_;
    return AnalyticSummary{mean_, v, v, 2.0 * v};
  }
  std::string label() const override {
    return "N(" + format_number(mean_) + "," + format_number(sd_) + "^2)";
  }
  nlohmann::json literal() const override {
    return {{"kind", "gaussian"}, {"mean", mean_}, {"sd", sd_}};
  }

 private:
  double z(double x) const { return (x - mean_) / sd_; }
  double mean_;
  double sd_;
};

class UniformModel final : public DistributionModel {
 public:
  UniformModel(double lo, double hi) : lo_(lo), hi_(hi) {}

  double pdf(double x) const override {
    return (x >= lo_ && x <= hi_) ? 1.0 / (hi_ - lo_) : 0.0;
  }
  double log_pdf(double x) const override {
    return (x >= lo_ && x <= hi_) ? -std::log(hi_ - lo_) : -kInf;
  }
  double cdf(double x) const override {
    return std::clamp((x - lo_) / (hi_ - lo_), 0.0, 1.0);
  }
  double sf(double x) const override {
    return std::clamp((hi_ - x) / (hi_ - lo_), 0.0, 1.0);
  }
  double log_cdf(double x) const override { return std::log(cdf(x)); }
  double log_sf(double x) const override { return std::log(sf(x)); }
  double quantile(double u) const override {
    return u <= 0.5 ? lo_ + u * (hi_ - lo_) : hi_ - (1.0 - u) * (hi_ - lo_);
  }
  std::vector<Interval> support_pieces() const override { return {{lo_, hi_}}; }
  std::vector<double> landmarks() const override {
    return {lo_, 0.5 * (lo_ + hi_), hi_};
  }
  std::optional<AnalyticSummary> analytic() const override {
    const double w = hi_ - lo_;
    const double c = w * w / (std::numbers::pi * std::numbers::pi);
    return AnalyticSummary{0.5 * (lo_ + hi_), w * w / 12.0, c, 2.0 * c};
  }
  std::string label() const override {
    return "U(" + format_number(lo_) + "," + format_number(hi_) + ")";
  }
  nlohmann::json literal() const override {
    return {{"kind", "uniform"}, {"lo", lo_}, {"hi", hi_}};
  }

 private:
  double lo_;
  double hi_;
};

class ExpPowerModel final : public DistributionModel {
 public:
  explicit ExpPowerModel(double a)
      : a_(a), log_z_(std::log(2.0) + std::lgamma(1.0 / a) - std::log(a)) {}

  double pdf(double x) const override { return std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    return -std::pow(std::abs(x), a_) - log_z_;
  }
  double cdf(double x) const override { return std::exp(log_cdf(x)); }
  double sf(double x) const override { return std::exp(log_sf(x)); }
  double log_cdf(double x) const override { return log_sf(-x); }
  double log_sf(double x) const override {
    if (x < 0.0) return sp::log1m_exp(log_sf(-x));
    return -std::numbers::ln2 + sp::log_gamma_q(1.0 / a_, std::pow(x, a_));
  }
  double quantile(double u) const override {
    if (u == 0.5) return 0.0;
    // Symmetric: solve on the left half and mirror.
    if (u > 0.5) return -quantile(1.0 - u);
    double lo = -1.0;
    while (log_cdf(lo) > std::log(u)) lo *= 2.0;
    return invert_cdf(*this, u, lo, 0.0);
  }
  std::vector<Interval> support_pieces() const override {
    return {Interval::real_line()};
  }
  std::vector<double> landmarks() const override {
    const double s = std::pow(3.0, 1.0 / a_);
    return {-s, 0.0, s};
  }
  std::optional<AnalyticSummary> analytic() const override {
    AnalyticSummary s;
    s.mean = 0.0;
    s.variance = std::exp(std::lgamma(3.0 / a_) - std::lgamma(1.0 / a_));
    if (a_ == 2.0) {
      s.c_pi = 0.5;
      s.c_gi = 1.0;
    }
    return s;
  }
  std::string label() const override {
    return "ExpPower(" + format_number(a_) + ")";
  }
  nlohmann::json literal() const override {
    return {{"kind", "exp_power"}, {"a", a_}};
  }

 private:
  double a_;
  double log_z_;
};

class MixtureModel final : public DistributionModel {
 public:
  explicit MixtureModel(const TwoMixture& mix)
      : mix_(mix), log_p_(std::log(mix.p)), log_q_(std::log(mix.q())) {}

  double pdf(double x) const override {
    return mix_.p * mix_.mu1.pdf(x) + mix_.q() * mix_.mu0.pdf(x);
  }
  double log_pdf(double x) const override {
    return sp::log_sum_exp(log_p_ + mix_.mu1.log_pdf(x),
                           log_q_ + mix_.mu0.log_pdf(x));
  }
  double cdf(double x) const override {
    return mix_.p * mix_.mu1.cdf(x) + mix_.q() * mix_.mu0.cdf(x);
  }
  double sf(double x) const override {
    return mix_.p * mix_.mu1.sf(x) + mix_.q() * mix_.mu0.sf(x);
  }
  double log_cdf(double x) const override {
    return sp::log_sum_exp(log_p_ + mix_.mu1.log_cdf(x),
                           log_q_ + mix_.mu0.log_cdf(x));
  }
  double log_sf(double x) const override {
    return sp::log_sum_exp(log_p_ + mix_.mu1.log_sf(x),
                           log_q_ + mix_.mu0.log_sf(x));
  }
  double quantile(double u) const override {
    const double a = mix_.mu0.quantile(u);
    const double b = mix_.mu1.quantile(u);
    if (a == b) return a;
    return invert_cdf(*this, u, std::min(a, b), std::max(a, b));
  }
  std::vector<Interval> support_pieces() const override {
    std::vector<Interval> all = mix_.mu0.support_pieces();
    const auto& more = mix_.mu1.support_pieces();
    all.insert(all.end(), more.begin(), more.end());
    return numerics::merge_intervals(std::move(all));
  }
  std::vector<double> landmarks() const override {
    std::vector<double> all = mix_.mu0.landmarks();
    const auto more = mix_.mu1.landmarks();
    all.insert(all.end(), more.begin(), more.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
  }
  std::optional<AnalyticSummary> analytic() const override {
    const auto& a0 = mix_.mu0.analytic();
    const auto& a1 = mix_.mu1.analytic();
    if (!a0 || !a1) return std::nullopt;
    const double p = mix_.p;
    const double q = mix_.q();
    const double d = a1->mean - a0->mean;
    AnalyticSummary s;
    s.mean = p * a1->mean + q * a0->mean;
    s.variance = p * a1->variance + q * a0->variance + p * q * d * d;
    return s;
  }
  std::string label() const override {
    return "Mix(p=" + format_number(mix_.p) + "; " + mix_.mu0.label() + ", " +
           mix_.mu1.label() + ")";
  }
  nlohmann::json literal() const override {
    nlohmann::json j = mixture_to_json(mix_);
    j["kind"] = "mixture";
    return j;
  }

 private:
  TwoMixture mix_;
  double log_p_;
  double log_q_;
};

double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw InvalidParameter(std::string("distribution literal needs numeric '") +
                           key + "'");
  }
  return j.at(key).get<double>();
}

void require_keys(const nlohmann::json& j,
                  std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) {
      throw InvalidParameter("unknown key '" + item.key() +
                             "' in distribution literal");
    }
  }
}

}  // namespace

Measure1D::Measure1D(std::shared_ptr<const DistributionModel> model)
    : model_(std::move(model)),
      pieces_(model_->support_pieces()),
      analytic_(model_->analytic()),
      label_(model_->label()) {}

double Measure1D::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw InvalidParameter("quantile: probability outside [0, 1]");
  }
  if (u == 0.0) return support().lo;
  if (u == 1.0) return support().hi;
  return model_->quantile(u);
}

Interval Measure1D::support() const {
  if (pieces_.empty()) return Interval::empty();
  return {pieces_.front().lo, pieces_.back().hi};
}

double Measure1D::mean() const {
  if (!analytic_) throw InvalidParameter(label_ + ": no analytic mean");
  return analytic_->mean;
}

double Measure1D::variance() const {
  if (!analytic_) throw InvalidParameter(label_ + ": no analytic variance");
  return analytic_->variance;
}

double Measure1D::expectation(const RealFn& f,
                              const QuadratureConfig& cfg) const {
  return expectation(f, {}, cfg);
}

double Measure1D::expectation(const RealFn& f,
                              const std::vector<double>& extra_cuts,
                              const QuadratureConfig& cfg) const {
  const Interval hull = support();
  std::vector<double> cuts{hull.lo};
  for (double x : landmarks()) {
    if (x > hull.lo && x < hull.hi) cuts.push_back(x);
  }
  for (double x : extra_cuts) {
    if (x > hull.lo && x < hull.hi) cuts.push_back(x);
  }
  cuts.push_back(hull.hi);
  std::sort(cuts.begin(), cuts.end());
  auto integrand = [&](double x) {
    const double d = pdf(x);
    return d == 0.0 ? 0.0 : d * f(x);
  };
  return numerics::integrate_pieces(integrand, cuts, cfg);
}

void TwoMixture::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidParameter("mixture weight p must lie in [0, 1]");
  }
}

Measure1D make_gaussian(double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(mean)) {
    throw InvalidParameter("gaussian: sd must be positive and finite");
  }
  return Measure1D(std::make_shared<GaussianModel>(mean, sd));
}

Measure1D make_uniform(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidParameter("uniform: need finite lo < hi");
  }
  return Measure1D(std::make_shared<UniformModel>(lo, hi));
}

Measure1D make_exp_power(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw InvalidParameter("exp_power: exponent a must be positive");
  }
  return Measure1D(std::make_shared<ExpPowerModel>(a));
}

Measure1D mixture_measure(const TwoMixture& mix) {
  mix.validate();
  if (mix.p == 0.0) return mix.mu0;
  if (mix.p == 1.0) return mix.mu1;
  return Measure1D(std::make_shared<MixtureModel>(mix));
}

Measure1D measure_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw InvalidParameter("distribution literal needs a string 'kind'");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") {
    require_keys(j, {"kind", "mean", "sd"});
    return make_gaussian(number_field(j, "mean"), number_field(j, "sd"));
  }
  if (kind == "uniform") {
    require_keys(j, {"kind", "lo", "hi"});
    return make_uniform(number_field(j, "lo"), number_field(j, "hi"));
  }
  if (kind == "exp_power") {
    require_keys(j, {"kind", "a"});
    return make_exp_power(number_field(j, "a"));
  }
  if (kind == "mixture") {
    return mixture_measure(mixture_from_json(j));
  }
  throw InvalidParameter("unknown distribution kind '" + kind + "'");
}

TwoMixture mixture_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidParameter("mixture literal must be an object");
  require_keys(j, {"kind", "p", "mu0", "mu1"});
  if (!j.contains("mu0") || !j.contains("mu1")) {
    throw InvalidParameter("mixture literal needs 'mu0' and 'mu1'");
  }
  TwoMixture mix{measure_from_json(j.at("mu0")), measure_from_json(j.at("mu1")),
                 number_field(j, "p")};
  mix.validate();
  return mix;
}

nlohmann::json mixture_to_json(const TwoMixture& mix) {
  return {{"p", mix.p}, {"mu0", mix.mu0.literal()}, {"mu1", mix.mu1.literal()}};
}

double log_cdf_gap(const Measure1D& a, const Measure1D& b, double x) {
  constexpr double kLogHalf = -std::numbers::ln2;
  const double la = a.log_cdf(x);
  const double lb = b.log_cdf(x);
  if (std::max(la, lb) < kLogHalf) {
    return sp::log_diff_exp(std::max(la, lb), std::min(la, lb));
  }
  const double ra = a.log_sf(x);
  const double rb = b.log_sf(x);
  if (std::max(ra, rb) < kLogHalf) {
    return sp::log_diff_exp(std::max(ra, rb), std::min(ra, rb));
  }
  return std::log(std::abs(a.cdf(x) - b.cdf(x)));
}

double invert_cdf(const DistributionModel& model, double u, double lo,
                  double hi) {
  double x;
  if (u <= 0.5) {
    const double target = std::log(u);
    x = numerics::find_root(
        [&](double t) { return model.log_cdf(t) - target; }, lo, hi, 1e-15);
  } else {
    const double target = std::log1p(-u);
    x = numerics::find_root(
        [&](double t) { return target - model.log_sf(t); }, lo, hi, 1e-15);
  }
  for (int i = 0; i < 3; ++i) {
    const double d = model.pdf(x);
    if (!(d > 0.0)) break;
    const double step =
        u <= 0.5 ? (model.cdf(x) - u) / d : ((1.0 - u) - model.sf(x)) / d;
    const double next = x - step;
    if (!(next >= lo && next <= hi) || step == 0.0) break;
    x = next;
  }
  return x;
}

}  // namespace mixbound
