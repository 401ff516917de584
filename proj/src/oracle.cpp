#include "mixbound/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "mixbound/errors.hpp"
#include "mixbound/special.hpp"

namespace mixbound::oracle {

namespace {

double std_dev(const Measure1D& mu, const QuadratureConfig& cfg) {
  if (mu.analytic()) return std::sqrt(mu.variance());
  const double m = mu.expectation([](double x) { return x; }, cfg);
  return std::sqrt(
      mu.expectation([m](double x) { return (x - m) * (x - m); }, cfg));
}

double mean_of(const Measure1D& mu, const QuadratureConfig& cfg) {
  if (mu.analytic()) return mu.mean();
  return mu.expectation([](double x) { return x; }, cfg);
}

// Number of eigenvalues of the symmetric tridiagonal (a, b) below x.
std::size_t sturm_count(const std::vector<double>& a,
                        const std::vector<double>& b, double x) {
  constexpr double kTiny = 1e-300;
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double off = i == 0 ? 0.0 : b[i - 1] * b[i - 1] / d;
    d = a[i] - x - off;
    if (d == 0.0) d = -kTiny;
    if (d < 0.0) ++count;
  }
  return count;
}

}  // namespace

GridMeasure make_grid(const Measure1D& mu, std::size_t n, double eps) {
  if (n < 3) throw InvalidParameter("spectral grid needs at least 3 cells");
  if (!(eps > 0.0 && eps < 0.5)) {
    throw InvalidParameter("truncation mass must lie in (0, 1/2)");
  }
  if (!mu.connected()) {
    throw DisconnectedSupport("support of " + mu.label() +
                              " is not connected; the Poincare constant is "
                              "infinite");
  }
  const Interval hull = mu.support();
  const double lo = std::isfinite(hull.lo) ? hull.lo : mu.quantile(eps);
  const double hi = std::isfinite(hull.hi) ? hull.hi : mu.quantile(1.0 - eps);
  GridMeasure g;
  g.source = mu.label();
  g.step = (hi - lo) / static_cast<double>(n);
  g.nodes.resize(n);
  g.weights.resize(n);
  g.edge_density.resize(n - 1);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    g.nodes[i] = lo + (static_cast<double>(i) + 0.5) * g.step;
    g.weights[i] = mu.pdf(g.nodes[i]) * g.step;
    total += g.weights[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g.edge_density[i] = mu.pdf(lo + static_cast<double>(i + 1) * g.step);
  }
  const bool gap =
      std::any_of(g.weights.begin(), g.weights.end(),
                  [](double w) { return !(w > 0.0); }) ||
      std::any_of(g.edge_density.begin(), g.edge_density.end(),
                  [](double e) { return !(e > 0.0); });
  if (gap) {
    throw DisconnectedSupport("density of " + mu.label() +
                              " vanishes inside its support");
  }
  for (double& w : g.weights) w /= total;
  for (double& e : g.edge_density) e /= total;
  return g;
}

double grid_spectral_gap(const GridMeasure& g) {
  const std::size_t n = g.weights.size();
  if (n < 3 || g.edge_density.size() + 1 != n || !(g.step > 0.0)) {
    throw DimensionMismatch("malformed grid measure");
  }
  // Conductances k = f / h between cells; the similarity transform
  // W^{-1/2} K W^{-1/2} makes the pencil a symmetric tridiagonal matrix.
  std::vector<double> a(n, 0.0);
  std::vector<double> b(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double k = g.edge_density[i] / g.step;
    a[i] += k / g.weights[i];
    a[i + 1] += k / g.weights[i + 1];
    b[i] = -k / std::sqrt(g.weights[i] * g.weights[i + 1]);
  }
  double upper = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = a[i];
    if (i > 0) r += std::abs(b[i - 1]);
    if (i + 1 < n) r += std::abs(b[i]);
    upper = std::max(upper, r);
  }
  double lo = 0.0;
  double hi = upper;
  if (sturm_count(a, b, hi) < 2) throw EigenFailure("Sturm count failed");
  for (int it = 0; it < 300 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(a, b, mid) >= 2) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double gap = 0.5 * (lo + hi);
  if (!(gap > 0.0) || !std::isfinite(gap)) {
    throw EigenFailure("spectral gap is not positive");
  }
  return gap;
}

double spectral_pi(const Measure1D& mu, std::size_t n) {
  return 1.0 / grid_spectral_gap(make_grid(mu, n));
}

SpectralReport spectral_pi_report(const Measure1D& mu, std::size_t n) {
  SpectralReport r;
  const GridMeasure g = make_grid(mu, n, kSpectralTailMass);
  r.c_pi = 1.0 / grid_spectral_gap(g);
  r.domain = {g.nodes.front() - 0.5 * g.step, g.nodes.back() + 0.5 * g.step};
  r.cells = n;
  const Interval hull = mu.support();
  if (!hull.is_finite()) {
    const double wide =
        1.0 / grid_spectral_gap(make_grid(mu, n, kSpectralSensitivityMass));
    r.truncation_sensitivity = std::abs(wide - r.c_pi) / r.c_pi;
  }
  return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

TailSample mc_tail(const Measure1D& mu, const std::vector<double>& radii,
                   std::size_t n_samples, std::uint64_t seed,
                   unsigned threads) {
  if (n_samples == 0) throw InvalidParameter("mc_tail needs samples");
  for (double r : radii) {
    if (!(r >= 0.0) || std::isinf(r)) {
      throw InvalidParameter("tail radii must be finite and non-negative");
    }
  }
  const double center = mean_of(mu, {});
  const std::size_t nr = radii.size();
  std::vector<std::vector<std::size_t>> counts(
      kTailShards, std::vector<std::size_t>(nr, 0));

  auto run_shard = [&](std::size_t shard) {
    const std::size_t base = n_samples / kTailShards;
    const std::size_t size = base + (shard < n_samples % kTailShards ? 1 : 0);
    std::mt19937_64 gen(
        splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(shard)));
    auto& c = counts[shard];
    for (std::size_t k = 0; k < size; ++k) {
      const double u =
          (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
      const double dev = std::abs(mu.quantile(u) - center);
      for (std::size_t j = 0; j < nr; ++j) {
        if (dev >= radii[j]) ++c[j];
      }
    }
  };

  unsigned workers = threads == 0 ? std::thread::hardware_concurrency()
                                  : threads;
  workers = std::clamp<unsigned>(workers, 1,
                                 static_cast<unsigned>(kTailShards));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t s = next++; s < kTailShards; s = next++) {
      try {
        run_shard(s);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  TailSample out;
  out.radii = radii;
  out.n_samples = n_samples;
  out.lipschitz_witness = "identity";
  const double n = static_cast<double>(n_samples);
  for (std::size_t j = 0; j < nr; ++j) {
    std::size_t hits = 0;
    for (const auto& c : counts) hits += c[j];
    const double ph = static_cast<double>(hits) / n;
    out.empirical_prob.push_back(ph);
    out.stderr_.push_back(std::sqrt(ph * (1.0 - ph) / n));
  }
  return out;
}

WitnessFamily WitnessFamily::exponential_tilts() {
  WitnessFamily f;
  f.kind = WitnessKind::exponential_tilt;
  f.slopes = {-3.0, -2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0, 3.0};
  return f;
}

WitnessFamily WitnessFamily::shifted_bumps() {
  WitnessFamily f;
  f.kind = WitnessKind::shifted_bump;
  f.center_quantiles = {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99};
  f.widths = {0.1, 0.25, 0.5, 1.0};
  f.amplitudes = {0.5, 2.0, 10.0, 100.0};
  return f;
}

WitnessFamily WitnessFamily::two_level(std::vector<double> centers_abs) {
  WitnessFamily f;
  f.kind = WitnessKind::two_level;
  f.center_quantiles = {1e-8, 1e-6, 1e-4, 1e-3, 0.01, 0.1, 0.5,
                        0.9,  0.99, 0.999, 1 - 1e-4, 1 - 1e-6, 1 - 1e-8};
  f.centers_abs = std::move(centers_abs);
  f.widths = {0.05, 0.1, 0.25, 0.5};
  f.amplitudes = {1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
  return f;
}

EntropyEnergy entropy_energy(const Measure1D& mu, const RealFn& h,
                             const RealFn& dh,
                             const std::vector<double>& cuts,
                             const QuadratureConfig& cfg) {
  EntropyEnergy r;
  const double m2 =
      mu.expectation([&](double x) { const double v = h(x); return v * v; },
                     cuts, cfg);
  if (!(m2 > 0.0) || !std::isfinite(m2)) {
    throw NonConvergence("witness has no finite positive second moment");
  }
  // M ((1+d) log(1+d) - d) with d = h^2/M - 1 is pointwise non-negative and
  // loses no digits where h^2 is close to M.
  r.entropy = mu.expectation(
      [&](double x) {
        const double v = h(x);
        const double d = (v * v - m2) / m2;
        if (d == -1.0) return m2;
        return m2 * ((1.0 + d) * std::log1p(d) - d);
      },
      cuts, cfg);
  r.energy = mu.expectation(
      [&](double x) { const double d = dh(x); return d * d; }, cuts, cfg);
  return r;
}

ProbeResult entropy_ratio_probe(const Measure1D& mu,
                                const WitnessFamily& family,
                                const QuadratureConfig& user_cfg) {
  user_cfg.validate();
  // Steep witnesses put most of E h^2 on a tiny mass; a ratio accurate to
  // 1e-8 is ample for a lower estimate.
  QuadratureConfig cfg = user_cfg;
  cfg.rel_tol = std::max(cfg.rel_tol, 1e-8);
  const double scale = family.scale > 0.0 ? family.scale : std_dev(mu, cfg);
  const double m = mean_of(mu, cfg);
  ProbeResult best;
  char label[160];

  auto consider = [&](const RealFn& h, const RealFn& dh,
                      const std::vector<double>& cuts, const char* text) {
    // A witness whose integrals cannot be certified is skipped: the maximum
    // over the remaining witnesses is still a lower estimate.
    EntropyEnergy ee;
    try {
      ee = entropy_energy(mu, h, dh, cuts, cfg);
    } catch (const NonConvergence&) {
      ++best.skipped;
      return;
    }
    if (!(ee.energy > 0.0)) return;
    const double ratio = ee.entropy / ee.energy;
    if (std::isfinite(ratio) && ratio > best.value) {
      best.value = ratio;
      best.witness = text;
    }
  };

  std::vector<double> centers = family.centers_abs;
  if (centers.empty()) {
    for (double u : family.center_quantiles) centers.push_back(mu.quantile(u));
  }

  switch (family.kind) {
    case WitnessKind::exponential_tilt:
      for (double s : family.slopes) {
        const double t = s / scale;
        std::snprintf(label, sizeof label, "tilt t=%.6g", t);
        consider([=](double x) { return std::exp(0.5 * t * (x - m)); },
                 [=](double x) { return 0.5 * t * std::exp(0.5 * t * (x - m)); },
                 {}, label);
      }
      break;
    case WitnessKind::shifted_bump:
      for (double c : centers) {
        for (double wf : family.widths) {
          const double w = wf * scale;
          const std::vector<double> cuts{c - 3 * w, c, c + 3 * w};
          for (double amp : family.amplitudes) {
            std::snprintf(label, sizeof label, "bump c=%.6g w=%.6g A=%.6g", c,
                          w, amp);
            consider(
                [=](double x) {
                  const double z = (x - c) / w;
                  return 1.0 + amp * std::exp(-0.5 * z * z);
                },
                [=](double x) {
                  const double z = (x - c) / w;
                  return -amp * z / w * std::exp(-0.5 * z * z);
                },
                cuts, label);
          }
        }
      }
      break;
    case WitnessKind::two_level:
      for (double c : centers) {
        for (double wf : family.widths) {
          const double w = wf * scale;
          const std::vector<double> cuts{c - 4 * w, c, c + 4 * w};
          for (double amp : family.amplitudes) {
            for (double side : {-1.0, 1.0}) {
              std::snprintf(label, sizeof label,
                            "step c=%.6g w=%.6g A=%.6g side=%+g", c, w, amp,
                            side);
              consider(
                  [=](double x) {
                    return 1.0 + amp * special::normal_cdf(side * (x - c) / w);
                  },
                  [=](double x) {
                    return amp * side / w *
                           special::normal_pdf(side * (x - c) / w);
                  },
                  cuts, label);
            }
          }
        }
      }
      break;
  }
  return best;
}

}  // namespace mixbound::oracle
