#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixbound/numerics.hpp"

namespace mixbound {

using numerics::Interval;
using numerics::QuadratureConfig;
using numerics::RealFn;

/// Closed-form facts about a distribution. The functional-inequality
/// constants are only present when they are known exactly.
struct AnalyticSummary {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> c_pi;
  std::optional<double> c_gi;
};

/// Interface implemented by every concrete family. Tail functions come in
/// log form so that far tails keep full relative precision.
class DistributionModel {
 public:
  virtual ~DistributionModel() = default;

  virtual double pdf(double x) const = 0;
  virtual double log_pdf(double x) const = 0;
  virtual double cdf(double x) const = 0;
  virtual double sf(double x) const = 0;
  virtual double log_cdf(double x) const = 0;
  virtual double log_sf(double x) const = 0;
  virtual double quantile(double u) const = 0;

  /// Disjoint closed intervals whose union is the support.
  virtual std::vector<Interval> support_pieces() const = 0;
  /// Finite points where quadrature should split: support endpoints and a
  /// few quantiles locating the bulk of the mass.
  virtual std::vector<double> landmarks() const = 0;
  virtual std::optional<AnalyticSummary> analytic() const = 0;
  virtual std::string label() const = 0;
  /// Distribution literal in the scenario-file format.
  virtual nlohmann::json literal() const = 0;
};

/// Immutable handle on a univariate distribution; cheap to copy and safe to
/// share across threads.
class Measure1D {
 public:
  explicit Measure1D(std::shared_ptr<const DistributionModel> model);

  double pdf(double x) const { return model_->pdf(x); }
  double log_pdf(double x) const { return model_->log_pdf(x); }
  double cdf(double x) const { return model_->cdf(x); }
  double sf(double x) const { return model_->sf(x); }
  double log_cdf(double x) const { return model_->log_cdf(x); }
  double log_sf(double x) const { return model_->log_sf(x); }
  /// Throws InvalidParameter for u outside [0, 1].
  double quantile(double u) const;
  double median() const { return quantile(0.5); }

  /// Convex hull of the support.
  Interval support() const;
  const std::vector<Interval>& support_pieces() const { return pieces_; }
  bool connected() const { return pieces_.size() <= 1; }
  std::vector<double> landmarks() const { return model_->landmarks(); }

  const std::optional<AnalyticSummary>& analytic() const { return analytic_; }
  /// Analytic mean and variance; throws InvalidParameter when unavailable.
  double mean() const;
  double variance() const;
  const std::string& label() const { return label_; }
  nlohmann::json literal() const { return model_->literal(); }

  /// E f(X) by quadrature over the support.
  double expectation(const RealFn& f, const QuadratureConfig& cfg = {}) const;
  /// Same, with additional split points for integrands with sharp features.
  double expectation(const RealFn& f, const std::vector<double>& extra_cuts,
                     const QuadratureConfig& cfg = {}) const;

  const DistributionModel& model() const { return *model_; }

 private:
  std::shared_ptr<const DistributionModel> model_;
  std::vector<Interval> pieces_;
  std::optional<AnalyticSummary> analytic_;
  std::string label_;
};

/// Two-component mixture p * mu1 + q * mu0.
struct TwoMixture {
  Measure1D mu0;
  Measure1D mu1;
  double p = 0.5;

  double q() const { return 1.0 - p; }
  /// Throws InvalidParameter unless p is in [0, 1].
  void validate() const;
};

Measure1D make_gaussian(double mean, double sd);
Measure1D make_uniform(double lo, double hi);
/// Density exp(-|x|^a) / Z with Z = 2 Gamma(1/a) / a.
Measure1D make_exp_power(double a);
/// The mixture as a measure. p = 0 and p = 1 return the relevant component.
Measure1D mixture_measure(const TwoMixture& mix);

/// Parses a distribution literal such as {"kind":"gaussian","mean":0,"sd":1}.
/// Unknown kinds or keys raise InvalidParameter.
Measure1D measure_from_json(const nlohmann::json& j);
/// Parses {"p":..,"mu0":..,"mu1":..}.
TwoMixture mixture_from_json(const nlohmann::json& j);
nlohmann::json mixture_to_json(const TwoMixture& mix);

/// log |F_a(x) - F_b(x)|, evaluated from whichever tail keeps relative
/// precision.
double log_cdf_gap(const Measure1D& a, const Measure1D& b, double x);

/// Inverts a continuous cdf on [lo, hi] by root finding in log space,
/// followed by Newton polishing.
double invert_cdf(const DistributionModel& model, double u, double lo,
                  double hi);

}  // namespace mixbound
