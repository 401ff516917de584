#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixbound/numerics.hpp"

namespace mixbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Run description read by `gallery run --file` and written next to every
/// result. `result` is filled on output and ignored on input.
struct ScenarioFile {
  std::string scenario;
  nlohmann::json params = nlohmann::json::object();
  std::string output_dir = ".";
  std::uint64_t seed = 42;
  numerics::QuadratureConfig quadrature;
  nlohmann::json result;
};

/// Throws InvalidParameter on unknown keys or ill-typed fields.
ScenarioFile parse_scenario_file(const nlohmann::json& j);
nlohmann::json scenario_file_json(const ScenarioFile& f);

/// Entry point shared by the executable and the tests. args excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace mixbound::cli
