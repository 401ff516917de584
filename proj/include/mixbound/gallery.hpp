#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixbound/numerics.hpp"

namespace mixbound::gallery {

enum class Verdict { match, within_tolerance, deviation, informational };
const char* to_string(Verdict v);

/// One computed quantity next to the value or bound it is compared with.
/// `predicted` is empty for informational entries.
struct Entry {
  std::string key;
  double computed = 0.0;
  std::optional<double> predicted;
  std::string expression;
  Verdict verdict = Verdict::informational;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ScenarioResult {
  std::string name;
  nlohmann::json parameters;
  std::vector<Entry> entries;
  Table table;
  std::vector<std::string> notes;

  /// True when no entry is a deviation.
  bool passed() const;
  const Entry& entry(const std::string& key) const;
};

struct RunOptions {
  std::uint64_t seed = 42;
  unsigned threads = 0;  // 0: hardware concurrency
  numerics::QuadratureConfig quadrature;
};

const std::vector<std::string>& scenario_names();

/// Default parameter record of a scenario. Throws UnknownScenario.
nlohmann::json default_parameters(const std::string& name);

/// Runs a registered scenario. params overrides the defaults key by key;
/// unknown keys raise InvalidParameter and unknown names UnknownScenario.
ScenarioResult run_scenario(const std::string& name,
                            const nlohmann::json& params = nlohmann::json::object(),
                            const RunOptions& opts = {});

/// Runs every scenario with default parameters, up to opts.threads at once.
/// Results come back in scenario_names() order.
std::vector<ScenarioResult> run_all(const RunOptions& opts = {});

/// (x, density, second derivative of -log density) on 2001 points of
/// [-5, 5] for the mixture q ExpPower(a) + p N(0, 1/2). Requires a > 2 and
/// 0 < p < 1.
Table figure_explo_data(double p, double a);

// Output helpers. Numbers are written with 17 significant digits;
// non-finite values become the strings "inf", "-inf" and "nan" in JSON.
std::string format_double(double x);
std::string dump_json(const nlohmann::json& j, int indent = 2);
nlohmann::json result_to_json(const ScenarioResult& r);
/// CSV with '#' comment lines: the given header lines, then the columns.
std::string table_to_csv(const Table& t,
                         const std::vector<std::string>& header = {});
/// Reads back a number written by dump_json.
double json_number(const nlohmann::json& j);

}  // namespace mixbound::gallery
