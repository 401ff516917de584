#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixbound/dist1d.hpp"

namespace mixbound::oracle {

/// Cell-centred discretisation of a measure on its truncated support.
/// weights[i] is the normalised mass of cell i; edge_density[i] is the
/// normalised density at the interface between cells i and i+1.
struct GridMeasure {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> edge_density;
  double step = 0.0;
  std::string source;
};

/// Truncation mass per unbounded side used by the spectral oracle.
inline constexpr double kSpectralTailMass = 1e-10;
inline constexpr double kSpectralSensitivityMass = 1e-8;

/// Uniform grid of n cells on [quantile(eps), quantile(1 - eps)], with
/// finite support ends used as they are. Throws DisconnectedSupport when the
/// density vanishes inside the truncated range.
GridMeasure make_grid(const Measure1D& mu, std::size_t n,
                      double eps = kSpectralTailMass);

/// Second-smallest eigenvalue of the Neumann finite-volume operator
/// -(f h')' = lambda f h on the grid, by Sturm-sequence bisection.
double grid_spectral_gap(const GridMeasure& g);

/// Poincare constant 1 / lambda_1 of mu, discretised with n cells.
double spectral_pi(const Measure1D& mu, std::size_t n = 4000);

struct SpectralReport {
  double c_pi = 0.0;
  // Relative change when the truncation mass goes from 1e-10 to 1e-8.
  double truncation_sensitivity = 0.0;
  Interval domain;
  std::size_t cells = 0;
};
SpectralReport spectral_pi_report(const Measure1D& mu, std::size_t n = 4000);

/// splitmix64 finaliser, used to derive per-shard seeds.
std::uint64_t splitmix64(std::uint64_t x);

struct TailSample {
  std::vector<double> radii;
  std::vector<double> empirical_prob;
  std::vector<double> stderr_;
  std::size_t n_samples = 0;
  std::string lipschitz_witness;
};

inline constexpr std::size_t kTailShards = 64;

/// Empirical P(|X - E X| >= r) for the identity witness, from n_samples
/// inverse-cdf draws. Samples are split over 64 shards, each driven by a
/// mt19937_64 seeded with splitmix64(splitmix64(seed) ^ shard); counts are
/// summed in shard order, so the result does not depend on the thread
/// count.
/// threads = 0 selects the hardware concurrency.
TailSample mc_tail(const Measure1D& mu, const std::vector<double>& radii,
                   std::size_t n_samples, std::uint64_t seed,
                   unsigned threads = 0);

enum class WitnessKind { exponential_tilt, shifted_bump, two_level };

/// Parametric family of test functions h for the entropy ratio
/// Ent(h^2) / E(h'^2).
///   exponential_tilt: h = exp(t (x - m) / 2) for t in `slopes`.
///   shifted_bump:     h = 1 + A exp(-(x - c)^2 / (2 w^2)).
///   two_level:        h = 1 + A Phi(s (x - c) / w) with s = +-1, a smoothed
///                     step that is high on one side of c.
/// Bump and step centres c are quantiles of mu at `center_quantiles`;
/// widths are multiples of `scale` (the standard deviation by default).
struct WitnessFamily {
  WitnessKind kind = WitnessKind::exponential_tilt;
  std::vector<double> slopes;
  std::vector<double> center_quantiles;
  // Absolute centre positions; used instead of quantiles when non-empty.
  std::vector<double> centers_abs;
  std::vector<double> widths;
  std::vector<double> amplitudes;
  double scale = 0.0;

  static WitnessFamily exponential_tilts();
  static WitnessFamily shifted_bumps();
  static WitnessFamily two_level(std::vector<double> centers_abs = {});
};

struct ProbeResult {
  double value = 0.0;
  std::string witness;
  // Witnesses dropped because their integrals did not converge.
  std::size_t skipped = 0;
};

/// Max over the family of Ent_mu(h^2) / E_mu(h'^2); a lower estimate of the
/// log-Sobolev constant.
ProbeResult entropy_ratio_probe(const Measure1D& mu,
                                const WitnessFamily& family,
                                const QuadratureConfig& cfg = {});

/// Ent_mu(h^2) and E_mu(h'^2) for a single witness.
struct EntropyEnergy {
  double entropy = 0.0;
  double energy = 0.0;
};
EntropyEnergy entropy_energy(const Measure1D& mu, const RealFn& h,
                             const RealFn& dh,
                             const std::vector<double>& cuts,
                             const QuadratureConfig& cfg = {});

}  // namespace mixbound::oracle
