#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mixbound/constants.hpp"
#include "mixbound/dist1d.hpp"
#include "mixbound/errors.hpp"
#include "mixbound/gallery.hpp"
#include "mixbound/laplace.hpp"
#include "mixbound/oracle.hpp"
#include "mixbound/transport.hpp"

namespace mixbound::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json quadrature_json(const numerics::QuadratureConfig& q) {
  return {{"abs_tol", q.abs_tol},
          {"rel_tol", q.rel_tol},
          {"max_subdivisions", q.max_subdivisions},
          {"tail_mass_cut", q.tail_mass_cut}};
}

numerics::QuadratureConfig quadrature_from_json(const json& j) {
  if (!j.is_object()) throw InvalidParameter("quadrature must be an object");
  numerics::QuadratureConfig q;
  for (const auto& [k, v] : j.items()) {
    if (k == "abs_tol") {
      q.abs_tol = gallery::json_number(v);
    } else if (k == "rel_tol") {
      q.rel_tol = gallery::json_number(v);
    } else if (k == "tail_mass_cut") {
      q.tail_mass_cut = gallery::json_number(v);
    } else if (k == "max_subdivisions") {
      if (!v.is_number_unsigned()) {
        throw InvalidParameter("quadrature.max_subdivisions must be a positive integer");
      }
      q.max_subdivisions = v.get<std::size_t>();
    } else {
      throw InvalidParameter("unknown key 'quadrature." + k + "'");
    }
  }
  q.validate();
  return q;
}

json parse_flag(const std::string& flag, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidParameter(flag + ": not valid JSON (" + e.what() + ")");
  }
}

template <class T, class F>
T with_flag(const std::string& flag, F&& f) {
  try {
    return f();
  } catch (const InvalidParameter& e) {
    throw InvalidParameter(flag + ": " + e.what());
  }
}

std::vector<double> parse_list(const std::string& flag, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
      throw InvalidParameter(flag + ": '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  if (out.empty()) throw InvalidParameter(flag + ": empty list");
  return out;
}

// Sub-Gaussian constant C with log-Laplace transform at most C lambda^2 / 2
// for every 1-Lipschitz function.
std::optional<double> subgaussian_constant(const Measure1D& mu) {
  const json lit = mu.literal();
  const std::string kind = lit.at("kind");
  if (kind == "gaussian") {
    const double sd = lit.at("sd");
    return sd * sd;
  }
  if (kind == "uniform") {
    const double w = double(lit.at("hi")) - double(lit.at("lo"));
    return w * w / 4;
  }
  return std::nullopt;
}

struct Options {
  std::string out = "mixbound_out";
  std::uint64_t seed = 42;
  std::optional<unsigned> threads;
  std::optional<double> abs_tol, rel_tol, tail_cut;
  std::string mix, mu0, mu1, mu, params, file, grid, radii;
  std::string scenario;
  double k = 1.0;
  std::optional<double> a, c0, c1;
  double p = 0.01;
  std::size_t cells = 4000;
  std::size_t samples = 1000000;
};

struct Context {
  std::string out;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  numerics::QuadratureConfig quad;
};

Context make_context(const Options& o) {
  Context c;
  c.out = o.out;
  c.seed = o.seed;
  if (o.threads) {
    c.threads = *o.threads;
  } else if (const char* env = std::getenv("MIXBOUND_THREADS"); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0') {
      throw InvalidParameter(std::string("MIXBOUND_THREADS: '") + env +
                             "' is not a thread count");
    }
    c.threads = static_cast<unsigned>(v);
  }
  auto set = [&](const char* flag, const std::optional<double>& v, double& dst) {
    if (!v) return;
    dst = *v;
    with_flag<int>(flag, [&] {
      c.quad.validate();
      return 0;
    });
  };
  set("--abs-tol", o.abs_tol, c.quad.abs_tol);
  set("--rel-tol", o.rel_tol, c.quad.rel_tol);
  set("--tail-cut", o.tail_cut, c.quad.tail_mass_cut);
  return c;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidParameter("cannot write " + path.string());
  f << text;
}

// Writes <stem>.json (and <stem>.csv when a table is given) under ctx.out.
void emit(const Context& ctx, const std::string& stem, const std::string& scenario,
          const json& params, const json& result, const gallery::Table* table,
          const std::vector<std::string>& header = {}) {
  const fs::path dir(ctx.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidParameter("--out: cannot create " + ctx.out + ": " + ec.message());
  ScenarioFile f{scenario, params, ctx.out, ctx.seed, ctx.quad, result};
  write_file(dir / (stem + ".json"), gallery::dump_json(scenario_file_json(f)) + "\n");
  if (table) {
    std::vector<std::string> h{"scenario " + scenario,
                               "seed " + std::to_string(ctx.seed),
                               "params " + gallery::dump_json(params, 0)};
    h.insert(h.end(), header.begin(), header.end());
    write_file(dir / (stem + ".csv"), gallery::table_to_csv(*table, h));
  }
}

std::string num(double x) { return gallery::format_double(x); }

TwoMixture read_mix(const std::string& text) {
  if (text.empty()) throw InvalidParameter("--mix is required");
  const json j = parse_flag("--mix", text);
  return with_flag<TwoMixture>("--mix", [&] { return mixture_from_json(j); });
}

Measure1D read_measure(const std::string& flag, const std::string& text) {
  if (text.empty()) throw InvalidParameter(flag + " is required");
  const json j = parse_flag(flag, text);
  return with_flag<Measure1D>(flag, [&] { return measure_from_json(j); });
}

// ---------------------------------------------------------------------------

int cmd_bounds(const Options& o, const Context& ctx, bool alpha, std::ostream& out) {
  const TwoMixture mix = read_mix(o.mix);
  auto component = [&](const char* flag, const std::optional<double>& given,
                       const Measure1D& mu) {
    if (given) {
      if (!(*given > 0.0)) throw InvalidParameter(std::string(flag) + " must be positive");
      return *given;
    }
    const auto c = subgaussian_constant(mu);
    if (!c) {
      throw InvalidParameter(std::string(flag) + " is required for a " +
                             std::string(mu.literal().at("kind")) + " component");
    }
    return *c;
  };
  const double c = std::max(component("--c0", o.c0, mix.mu0),
                            component("--c1", o.c1, mix.mu1));
  const double w1 = w1_1d(mix.mu0, mix.mu1, ctx.quad);
  const LaplaceEnvelope base = quadratic_envelope(c / 2);
  const LaplaceEnvelope two = two_component_envelope(base, w1, mix.p);
  const LaplaceEnvelope diam = general_diameter_envelope(base, w1);

  const json params = {{"mix", mixture_to_json(mix)}, {"C", c}};
  gallery::Table t;
  if (alpha) {
    const auto grid = o.grid.empty() ? std::vector<double>{0.1, 0.25, 0.5, 1, 2, 4, 8}
                                     : parse_list("--grid", o.grid);
    t.columns = {"lambda", "two_component", "general_diameter"};
    for (double l : grid) {
      if (!(l >= 0.0)) throw InvalidParameter("--grid: lambda must be >= 0");
      t.rows.push_back({l, two.eval(l), diam.eval(l)});
    }
  } else {
    const auto grid = o.grid.empty() ? std::vector<double>{0.5, 1, 2, 3, 4, 6}
                                     : parse_list("--grid", o.grid);
    t.columns = {"r", "tail_envelope", "tail_closed_form", "tail_diameter"};
    for (double r : grid) {
      if (!(r >= 0.0)) throw InvalidParameter("--grid: r must be >= 0");
      t.rows.push_back({r, tail_from_envelope(two, r),
                        tail_two_component(r, c, w1, mix.p),
                        tail_from_envelope(diam, r)});
    }
  }
  const std::string stem = alpha ? "bounds_alpha" : "bounds_beta";
  const json result = {{"C", c}, {"w1", w1}, {"p", mix.p}, {"columns", t.columns},
                       {"rows", t.rows}};
  emit(ctx, stem, alpha ? "bounds alpha" : "bounds beta", params, result, &t);
  out << stem << ": " << t.rows.size() << " points, C = " << num(c)
      << ", W1 = " << num(w1) << "\n";
  return kExitOk;
}

int cmd_wasserstein(const Options& o, const Context& ctx, std::ostream& out) {
  const Measure1D mu0 = read_measure("--mu0", o.mu0);
  const Measure1D mu1 = read_measure("--mu1", o.mu1);
  if (!(o.k >= 1.0)) throw InvalidParameter("--k must be >= 1");
  const double w = o.k == 1.0 ? w1_1d(mu0, mu1, ctx.quad)
                              : wk_1d(mu0, mu1, o.k, ctx.quad);
  const json params = {{"mu0", mu0.literal()}, {"mu1", mu1.literal()}, {"k", o.k}};
  emit(ctx, "wasserstein", "wasserstein", params, {{"distance", w}}, nullptr);
  out << "W" << num(o.k) << " = " << num(w) << "\n";
  return kExitOk;
}

int cmd_meandiff(const Options& o, const Context& ctx, std::ostream& out) {
  const TwoMixture mix = read_mix(o.mix);
  const auto r = constants::mean_diff_I(mix, ctx.quad);
  const json result = {{"p", r.p}, {"I_p", r.I_p}, {"I_half", r.I_half},
                       {"bracket_lo", r.bracket_lo}, {"bracket_hi", r.bracket_hi}};
  emit(ctx, "meandiff", "meandiff", {{"mix", mixture_to_json(mix)}}, result, nullptr);
  out << "I(" << num(r.p) << ") = " << num(r.I_p) << " in [" << num(r.bracket_lo)
      << ", " << num(r.bracket_hi) << "]\n";
  return kExitOk;
}

json constant_json(const constants::ExtendedConstant& c) {
  return {{"value", c.value},
          {"provenance", c.provenance},
          {"certified", constants::to_string(c.certified)}};
}

int cmd_constants(const Options& o, const Context& ctx, bool pi, std::ostream& out) {
  const TwoMixture mix = read_mix(o.mix);
  const auto k0 = constants::component_constants(mix.mu0, ctx.quad);
  const auto k1 = constants::component_constants(mix.mu1, ctx.quad);
  const Measure1D mu = mixture_measure(mix);
  json result = {{"components",
                  {{"mu0", {{"c_pi", constant_json(k0.c_pi)}, {"c_gi", constant_json(k0.c_gi)}}},
                   {"mu1", {{"c_pi", constant_json(k1.c_pi)}, {"c_gi", constant_json(k1.c_gi)}}}}}};
  std::ostringstream line;
  if (pi) {
    const auto b = constants::pi_upper_two_mixture(mix, k0.c_pi.value, k1.c_pi.value, ctx.quad);
    double oracle_value = numerics::kInf;
    try {
      oracle_value = oracle::spectral_pi(mu, o.cells);
    } catch (const DisconnectedSupport&) {
    }
    result["bound"] = constant_json(b);
    result["oracle"] = {{"value", oracle_value}, {"method", "spectral"},
                        {"certified", "empirical"}};
    line << "constants pi: bound = " << num(b.value) << ", oracle = " << num(oracle_value);
  } else {
    const auto b = constants::lsi_upper_two_mixture(mix, k0.c_gi.value, k1.c_gi.value,
                                                    k0.c_pi.value, k1.c_pi.value, ctx.quad);
    const auto h = constants::hardy_lsi_bounds(mu, ctx.quad);
    double probe = 0.0;
    for (const auto& fam : {oracle::WitnessFamily::exponential_tilts(),
                            oracle::WitnessFamily::shifted_bumps()}) {
      probe = std::max(probe, oracle::entropy_ratio_probe(mu, fam, ctx.quad).value);
    }
    result["bound"] = constant_json(b);
    result["hardy"] = {{"b_minus", h.b_minus}, {"b_plus", h.b_plus},
                       {"lower", h.lower}, {"upper", h.upper}};
    result["oracle"] = {{"value", probe}, {"method", "entropy_ratio_probe"},
                        {"certified", "lower"}};
    line << "constants lsi: bound = " << num(b.value) << ", hardy = [" << num(h.lower)
         << ", " << num(h.upper) << "], probe = " << num(probe);
  }
  emit(ctx, pi ? "constants_pi" : "constants_lsi", pi ? "constants pi" : "constants lsi",
       {{"mix", mixture_to_json(mix)}}, result, nullptr);
  out << line.str() << "\n";
  return kExitOk;
}

int cmd_oracle(const Options& o, const Context& ctx, bool pi, std::ostream& out) {
  const Measure1D mu = read_measure("--mu", o.mu);
  const json params = {{"mu", mu.literal()}};
  if (pi) {
    oracle::SpectralReport r;
    try {
      r = oracle::spectral_pi_report(mu, o.cells);
    } catch (const DisconnectedSupport&) {
      r.c_pi = numerics::kInf;
      r.domain = mu.support();
    }
    const json result = {{"c_pi", r.c_pi},
                         {"truncation_sensitivity", r.truncation_sensitivity},
                         {"domain", {r.domain.lo, r.domain.hi}},
                         {"cells", r.cells}};
    emit(ctx, "oracle_pi", "oracle pi", params, result, nullptr);
    out << "oracle pi: C_PI ~ " << num(r.c_pi) << " (" << r.cells << " cells)\n";
    return kExitOk;
  }
  const auto radii = o.radii.empty() ? std::vector<double>{1, 2, 3}
                                     : parse_list("--radii", o.radii);
  const auto t = oracle::mc_tail(mu, radii, o.samples, ctx.seed, ctx.threads);
  gallery::Table table{{"r", "empirical_prob", "stderr"}, {}};
  for (std::size_t j = 0; j < radii.size(); ++j) {
    table.rows.push_back({radii[j], t.empirical_prob[j], t.stderr_[j]});
  }
  const json result = {{"samples", t.n_samples}, {"witness", t.lipschitz_witness},
                       {"radii", t.radii}, {"empirical_prob", t.empirical_prob},
                       {"stderr", t.stderr_}};
  emit(ctx, "oracle_tail", "oracle tail", params, result, &table);
  out << "oracle tail: " << radii.size() << " radii, " << t.n_samples
      << " samples, seed " << ctx.seed << "\n";
  return kExitOk;
}

std::vector<std::string> entry_lines(const gallery::ScenarioResult& r) {
  std::vector<std::string> lines;
  for (const auto& e : r.entries) {
    std::string s = e.key + " = " + num(e.computed);
    if (e.predicted) s += " vs " + num(*e.predicted);
    s += std::string(" [") + gallery::to_string(e.verdict) + "]";
    if (!e.expression.empty()) s += " " + e.expression;
    lines.push_back(s);
  }
  for (const auto& n : r.notes) lines.push_back("note: " + n);
  return lines;
}

std::size_t deviations(const gallery::ScenarioResult& r) {
  return static_cast<std::size_t>(
      std::count_if(r.entries.begin(), r.entries.end(), [](const auto& e) {
        return e.verdict == gallery::Verdict::deviation;
      }));
}

void emit_scenario(const Context& ctx, const gallery::ScenarioResult& r) {
  emit(ctx, r.name, r.name, r.parameters, gallery::result_to_json(r), &r.table,
       entry_lines(r));
}

int cmd_gallery_run(const Options& o, Context ctx, bool out_given, std::ostream& out) {
  std::string name = o.scenario;
  json params = json::object();
  if (!o.file.empty()) {
    std::ifstream in(o.file);
    if (!in) throw InvalidParameter("--file: cannot open " + o.file);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw InvalidParameter("--file: not valid JSON (" + std::string(e.what()) + ")");
    }
    const ScenarioFile f = with_flag<ScenarioFile>("--file", [&] { return parse_scenario_file(j); });
    if (!name.empty() && name != f.scenario) {
      throw InvalidParameter("--file names scenario " + f.scenario + ", not " + name);
    }
    name = f.scenario;
    params = f.params;
    ctx.seed = f.seed;
    ctx.quad = f.quadrature;
    if (!out_given) ctx.out = f.output_dir;
  }
  if (name.empty()) throw InvalidParameter("gallery run: scenario name is required");
  if (!o.params.empty()) {
    const json extra = parse_flag("--params", o.params);
    if (!extra.is_object()) throw InvalidParameter("--params must be a JSON object");
    for (const auto& [k, v] : extra.items()) params[k] = v;
  }
  if (o.a) params["a"] = *o.a;
  const auto r = gallery::run_scenario(name, params, {ctx.seed, ctx.threads, ctx.quad});
  emit_scenario(ctx, r);
  out << name << ": " << r.entries.size() << " entries, " << deviations(r)
      << " deviations, " << (r.passed() ? "pass" : "fail") << "\n";
  return kExitOk;
}

int cmd_gallery_all(const Context& ctx, std::ostream& out) {
  const auto all = gallery::run_all({ctx.seed, ctx.threads, ctx.quad});
  std::size_t passed = 0;
  for (const auto& r : all) {
    emit_scenario(ctx, r);
    passed += r.passed() ? 1 : 0;
  }
  out << "gallery all: " << all.size() << " scenarios, " << passed
      << " without deviation\n";
  return kExitOk;
}

int cmd_figure(const Options& o, const Context& ctx, std::ostream& out) {
  const double a = o.a.value_or(4.0);
  const auto t = gallery::figure_explo_data(o.p, a);
  int changes = 0;
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    if ((t.rows[i][2] > 0) != (t.rows[i - 1][2] > 0)) ++changes;
  }
  emit(ctx, "figure_explo", "figure explo", {{"p", o.p}, {"a", a}},
       {{"rows", t.rows.size()}, {"sign_changes", changes}}, &t);
  out << "figure explo: " << t.rows.size() << " rows, " << changes
      << " sign changes of the second derivative\n";
  return kExitOk;
}

}  // namespace

ScenarioFile parse_scenario_file(const json& j) {
  if (!j.is_object()) throw InvalidParameter("scenario file must be a JSON object");
  ScenarioFile f;
  bool has_scenario = false;
  for (const auto& [k, v] : j.items()) {
    if (k == "scenario") {
      if (!v.is_string()) throw InvalidParameter("scenario must be a string");
      f.scenario = v.get<std::string>();
      has_scenario = true;
    } else if (k == "params") {
      if (!v.is_object()) throw InvalidParameter("params must be an object");
      f.params = v;
    } else if (k == "output_dir") {
      if (!v.is_string()) throw InvalidParameter("output_dir must be a string");
      f.output_dir = v.get<std::string>();
    } else if (k == "seed") {
      if (!v.is_number_unsigned()) throw InvalidParameter("seed must be a non-negative integer");
      f.seed = v.get<std::uint64_t>();
    } else if (k == "quadrature") {
      f.quadrature = quadrature_from_json(v);
    } else if (k == "result") {
      f.result = v;
    } else {
      throw InvalidParameter("unknown key '" + k + "' in scenario file");
    }
  }
  if (!has_scenario) throw InvalidParameter("scenario file lacks 'scenario'");
  return f;
}

json scenario_file_json(const ScenarioFile& f) {
  json j = {{"scenario", f.scenario},
            {"params", f.params},
            {"output_dir", f.output_dir},
            {"seed", f.seed},
            {"quadrature", quadrature_json(f.quadrature)}};
  if (!f.result.is_null()) j["result"] = f.result;
  return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Concentration and functional-inequality bounds for mixtures", "mixbound"};
  app.require_subcommand(1);
  Options o;
  std::vector<CLI::Option*> out_flags;

  auto common = [&](CLI::App* s) {
    out_flags.push_back(s->add_option("--out", o.out, "Output directory"));
    s->add_option("--seed", o.seed, "Random seed");
    s->add_option("--threads", o.threads, "Worker threads (default: MIXBOUND_THREADS or all cores)");
    s->add_option("--abs-tol", o.abs_tol, "Quadrature absolute tolerance");
    s->add_option("--rel-tol", o.rel_tol, "Quadrature relative tolerance");
    s->add_option("--tail-cut", o.tail_cut, "Tail mass cut for infinite domains");
    return s;
  };
  auto leaf = [&](CLI::App* parent, const char* name, const char* help) {
    return common(parent->add_subcommand(name, help));
  };

  auto* bounds = app.add_subcommand("bounds", "Laplace envelopes and tail bounds");
  bounds->require_subcommand(1);
  auto* b_alpha = leaf(bounds, "alpha", "Log-Laplace envelopes over a lambda grid");
  auto* b_beta = leaf(bounds, "beta", "Tail bounds over an r grid");
  for (auto* s : {b_alpha, b_beta}) {
    s->add_option("--mix", o.mix, "Two-component mixture literal")->required();
    s->add_option("--grid", o.grid, "Comma-separated grid");
    s->add_option("--c0", o.c0, "Sub-Gaussian constant of mu0");
    s->add_option("--c1", o.c1, "Sub-Gaussian constant of mu1");
  }

  auto* wass = leaf(&app, "wasserstein", "Wasserstein distance between two laws");
  wass->add_option("--mu0", o.mu0, "Distribution literal")->required();
  wass->add_option("--mu1", o.mu1, "Distribution literal")->required();
  wass->add_option("--k", o.k, "Order k >= 1");

  auto* mdiff = leaf(&app, "meandiff", "Mean-difference functional I(p)");
  mdiff->add_option("--mix", o.mix, "Two-component mixture literal")->required();

  auto* consts = app.add_subcommand("constants", "Poincare and log-Sobolev bounds");
  consts->require_subcommand(1);
  auto* c_pi = leaf(consts, "pi", "Poincare bound and spectral oracle");
  auto* c_lsi = leaf(consts, "lsi", "Log-Sobolev bound, Hardy bounds and entropy probe");
  for (auto* s : {c_pi, c_lsi}) {
    s->add_option("--mix", o.mix, "Two-component mixture literal")->required();
  }
  c_pi->add_option("--cells", o.cells, "Grid cells of the spectral oracle");

  auto* orc = app.add_subcommand("oracle", "Direct oracle runs");
  orc->require_subcommand(1);
  auto* o_pi = leaf(orc, "pi", "Spectral estimate of the Poincare constant");
  auto* o_tail = leaf(orc, "tail", "Monte-Carlo tail of the identity");
  for (auto* s : {o_pi, o_tail}) {
    s->add_option("--mu", o.mu, "Distribution literal")->required();
  }
  o_pi->add_option("--cells", o.cells, "Grid cells");
  o_tail->add_option("--radii", o.radii, "Comma-separated radii");
  o_tail->add_option("--samples", o.samples, "Number of samples");

  auto* gal = app.add_subcommand("gallery", "Worked examples");
  gal->require_subcommand(1);
  auto* g_run = leaf(gal, "run", "Run one scenario");
  g_run->add_option("name", o.scenario, "Scenario name");
  g_run->add_option("--file", o.file, "Scenario file (JSON)");
  g_run->add_option("--params", o.params, "Parameter overrides (JSON object)");
  g_run->add_option("--a", o.a, "Shorthand for the parameter 'a'");
  auto* g_all = leaf(gal, "all", "Run every scenario");

  auto* fig = app.add_subcommand("figure", "Figure data");
  fig->require_subcommand(1);
  auto* f_explo = leaf(fig, "explo", "Density and curvature of the multiple-well mixture");
  f_explo->add_option("--p", o.p, "Weight of the Gaussian component");
  f_explo->add_option("--a", o.a, "Exponent a > 2");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const Context ctx = make_context(o);
    if (*b_alpha) return cmd_bounds(o, ctx, true, out);
    if (*b_beta) return cmd_bounds(o, ctx, false, out);
    if (*wass) return cmd_wasserstein(o, ctx, out);
    if (*mdiff) return cmd_meandiff(o, ctx, out);
    if (*c_pi) return cmd_constants(o, ctx, true, out);
    if (*c_lsi) return cmd_constants(o, ctx, false, out);
    if (*o_pi) return cmd_oracle(o, ctx, true, out);
    if (*o_tail) return cmd_oracle(o, ctx, false, out);
    if (*g_run) {
      const bool out_given = std::any_of(out_flags.begin(), out_flags.end(),
                                         [](const CLI::Option* f) { return f->count() > 0; });
      return cmd_gallery_run(o, ctx, out_given, out);
    }
    if (*g_all) return cmd_gallery_all(ctx, out);
    if (*f_explo) return cmd_figure(o, ctx, out);
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  err << "error: no command\n";
  return kExitInput;
}

}  // namespace mixbound::cli
