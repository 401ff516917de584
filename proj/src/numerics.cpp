#include "mixbound/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <queue>
#include <string>

#include "mixbound/errors.hpp"

namespace mixbound::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod 15-point abscissae (non-negative half) and weights; every second
// abscissa starting at index 1 is a Gauss 7-point node.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kInsetFraction = 1e-12;

// Integrand in the quadrature parameter t, after removing infinite ends.
class MappedIntegrand {
 public:
  MappedIntegrand(const RealFn& f, const Interval& domain) : f_(f) {
    const bool lo_inf = std::isinf(domain.lo);
    const bool hi_inf = std::isinf(domain.hi);
    if (!lo_inf && !hi_inf) {
      t_lo_ = domain.lo;
      t_hi_ = domain.hi;
    } else {
      mapped_ = true;
      if (lo_inf && hi_inf) {
        t_lo_ = -1.0;
        t_hi_ = 1.0;
      } else if (lo_inf) {
        center_ = domain.hi;
        t_lo_ = -1.0;
        t_hi_ = 0.0;
      } else {
        center_ = domain.lo;
        t_lo_ = 0.0;
        t_hi_ = 1.0;
      }
    }
  }

  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }

  double operator()(double t) const {
    if (!mapped_) return f_(t);
    const double s = (1.0 - t) * (1.0 + t);
    if (s <= 0.0) return 0.0;
    const double x = center_ + t / s;
    if (!std::isfinite(x)) return 0.0;
    const double jac = (1.0 + t * t) / (s * s);
    const double fx = f_(x);
    if (fx == 0.0) return 0.0;
    return fx * jac;
  }

 private:
  const RealFn& f_;
  bool mapped_ = false;
  double center_ = 0.0;
  double t_lo_ = 0.0;
  double t_hi_ = 0.0;
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool refinable = true;
};

struct PanelOrder {
  bool operator()(const Panel& x, const Panel& y) const {
    return x.error < y.error;
  }
};

struct InfiniteValue {
  double sign;
};

// Throws InfiniteValue when the integrand is infinite at a node.
Panel gauss_kronrod(const MappedIntegrand& g, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double inset = kInsetFraction * (b - a);
  auto eval = [&](double t) {
    t = std::clamp(t, a + inset, b - inset);
    const double v = g(t);
    if (std::isnan(v)) throw NonConvergence("integrand returned NaN");
    if (std::isinf(v)) throw InfiniteValue{v > 0 ? 1.0 : -1.0};
    return v;
  };

  const double fc = eval(center);
  double res_k = fc * kWgk[7];
  double res_g = fc * kWg[3];
  double res_abs = std::abs(res_k);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = eval(center - dx);
    f2[j] = eval(center + dx);
    res_k += kWgk[j] * (f1[j] + f2[j]);
    res_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  res_k *= half;
  res_g *= half;
  res_abs *= std::abs(half);
  res_asc *= std::abs(half);

  double err = std::abs(res_k - res_g);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * res_abs, err);
  }
  Panel p{a, b, res_k, err, true};
  const double scale = std::max(std::abs(a), std::abs(b));
  if (b - a <= 1e3 * kEps * scale || b - a < 1e-280) p.refinable = false;
  return p;
}

bool grows_geometrically(const std::vector<double>& snapshots) {
  if (snapshots.size() < 4) return false;
  const std::size_t n = snapshots.size();
  for (std::size_t i = n - 3; i < n; ++i) {
    if (!(snapshots[i] > 1.5 * snapshots[i - 1])) return false;
  }
  return snapshots[n - 1] > 10.0 * snapshots[n - 4];
}

}  // namespace

bool Interval::is_finite() const {
  return !is_empty() && std::isfinite(lo) && std::isfinite(hi);
}

Interval hull(const Interval& a, const Interval& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

std::vector<Interval> merge_intervals(std::vector<Interval> pieces) {
  std::erase_if(pieces, [](const Interval& i) { return i.is_empty(); });
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  std::vector<Interval> merged;
  for (const auto& piece : pieces) {
    if (!merged.empty() && piece.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, piece.hi);
    } else {
      merged.push_back(piece);
    }
  }
  return merged;
}

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw InvalidParameter("quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw InvalidParameter("max_subdivisions must be at least 1");
  }
  if (!(tail_mass_cut > 0.0 && tail_mass_cut <= 1e-6)) {
    throw InvalidParameter("tail_mass_cut must lie in (0, 1e-6]");
  }
}

QuadratureResult integrate_detailed(const RealFn& f, const Interval& domain,
                                    const QuadratureConfig& cfg) {
  cfg.validate();
  if (domain.is_empty() || domain.is_point()) return {};

  const MappedIntegrand g(f, domain);
  constexpr std::size_t kInitialPanels = 8;

  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
  double total = 0.0;
  double total_err = 0.0;
  std::vector<double> snapshots;
  std::size_t next_snapshot = 2 * kInitialPanels;
  std::size_t last_snapshot_size = kInitialPanels;

  auto diverged = [](double sign) {
    return QuadratureResult{sign * kInf, kInf, 0, true};
  };

  try {
    const double width = (g.t_hi() - g.t_lo()) / kInitialPanels;
    for (std::size_t i = 0; i < kInitialPanels; ++i) {
      const double a = g.t_lo() + width * static_cast<double>(i);
      const double b = i + 1 == kInitialPanels ? g.t_hi() : a + width;
      Panel p = gauss_kronrod(g, a, b);
      total += p.value;
      total_err += p.error;
      heap.push(p);
    }
    snapshots.push_back(std::abs(total));

    while (true) {
      const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
      if (total_err <= tol) break;
      if (heap.size() >= cfg.max_subdivisions || !heap.top().refinable) {
        if (2 * heap.size() >= 3 * last_snapshot_size) snapshots.push_back(std::abs(total));
        if (grows_geometrically(snapshots)) {
          QuadratureResult r = diverged(total >= 0 ? 1.0 : -1.0);
          r.subdivisions = heap.size();
          return r;
        }
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "quadrature did not reach tolerance on [%.6g, %.6g] "
                      "(estimate %.6g, error %.3g, %zu panels)",
                      domain.lo, domain.hi, total, total_err, heap.size());
        throw NonConvergence(msg);
      }
      const Panel worst = heap.top();
      heap.pop();
      const double mid = 0.5 * (worst.a + worst.b);
      Panel left = gauss_kronrod(g, worst.a, mid);
      Panel right = gauss_kronrod(g, mid, worst.b);
      total += left.value + right.value - worst.value;
      total_err += left.error + right.error - worst.error;
      heap.push(left);
      heap.push(right);
      if (heap.size() >= next_snapshot) {
        snapshots.push_back(std::abs(total));
        last_snapshot_size = heap.size();
        next_snapshot *= 2;
      }
    }
  } catch (const InfiniteValue& inf) {
    return diverged(inf.sign);
  }

  // Re-sum to remove drift from incremental updates.
  QuadratureResult result;
  result.subdivisions = heap.size();
  while (!heap.empty()) {
    result.value += heap.top().value;
    result.error += heap.top().error;
    heap.pop();
  }
  return result;
}

double integrate(const RealFn& f, const Interval& domain,
                 const QuadratureConfig& cfg) {
  return integrate_detailed(f, domain, cfg).value;
}

double integrate_pieces(const RealFn& f, std::span<const double> breakpoints,
                        const QuadratureConfig& cfg) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) continue;
    // Each piece gets a share of the absolute tolerance.
    QuadratureConfig piece_cfg = cfg;
    piece_cfg.abs_tol = cfg.abs_tol / static_cast<double>(breakpoints.size());
    sum += integrate(f, {breakpoints[i], breakpoints[i + 1]}, piece_cfg);
  }
  return sum;
}

Interval clip_to_mass(const Interval& domain, const RealFn& quantile,
                      double cut) {
  if (domain.is_empty()) return domain;
  return {std::max(domain.lo, quantile(cut)),
          std::min(domain.hi, quantile(1.0 - cut))};
}

Extremum maximize_1d(const RealFn& f, const Interval& bracket, double tol) {
  if (bracket.is_empty() || !(bracket.lo < bracket.hi) ||
      !bracket.is_finite()) {
    throw InvalidBracket("maximize_1d needs a finite bracket with lo < hi");
  }
  constexpr double kGolden = 0.3819660112501051;
  constexpr double kRelEps = 1e-11;
  auto neg = [&](double x) { return -f(x); };

  double a = bracket.lo;
  double b = bracket.hi;
  double x = a + kGolden * (b - a);
  double w = x;
  double v = x;
  double fx = neg(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;

  for (int iter = 0; iter < 500; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = kRelEps * std::abs(x) + tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;

    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x < m ? b : a) - x;
      d = kGolden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = neg(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }

  Extremum best{x, -fx};
  for (double end : {bracket.lo, bracket.hi}) {
    const double fe = f(end);
    if (fe > best.value) best = {end, fe};
  }
  return best;
}

Extremum maximize_scan(const RealFn& f, const Interval& bracket,
                       std::size_t n, double tol) {
  if (bracket.is_empty() || !(bracket.lo < bracket.hi) ||
      !bracket.is_finite()) {
    throw InvalidBracket("maximize_scan needs a finite bracket with lo < hi");
  }
  n = std::max<std::size_t>(n, 3);
  const double h = (bracket.hi - bracket.lo) / static_cast<double>(n - 1);
  std::size_t best_i = 0;
  double best_v = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = f(bracket.lo + h * static_cast<double>(i));
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  const double lo = bracket.lo + h * static_cast<double>(best_i > 0 ? best_i - 1 : 0);
  const double hi = std::min(bracket.hi,
                             bracket.lo + h * static_cast<double>(best_i + 1));
  Extremum refined = maximize_1d(f, {lo, hi}, tol);
  const double grid_x = bracket.lo + h * static_cast<double>(best_i);
  if (best_v > refined.value) return {grid_x, best_v};
  return refined;
}

double find_root(const RealFn& f, double lo, double hi, double tol) {
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw InvalidBracket("find_root: f does not change sign on the bracket");
  }
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < 300; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (m > 0 ? tol1 : -tol1);
    fb = f(b);
  }
  return b;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidParameter("fit_line needs two equally sized samples (n >= 2)");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidParameter("fit_line: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace mixbound::numerics
