#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wvn/generators.hpp"
#include "wvn/partition.hpp"

namespace wvn {

struct UniformConfig {
  FamilySpec ambient = GridGraph{12, 12, 0.25};
  double target_diam = 2.0;
  std::vector<double> eps{0.5, 1.0};
  std::vector<double> R{2.0, 4.0};
  std::vector<double> L{0.5, 1.0};
  std::size_t samples = 100;
  std::size_t locality_samples = 2;
};

struct RunConfig {
  FamilySpec family = GridBalls{4, 2, 5, 0.0625};
  std::size_t depth = 3;
  double lipschitz_scale = 1.0;
  double eps_scale = 1.0;
  std::vector<std::size_t> truncation;  // empty: {depth}
  std::size_t samples = 200;
  std::size_t exact_trials = 50;
  std::uint64_t seed = 0;
  std::string out = "out";
  ValueMode mode = ValueMode::real;
  NetMethod net_method = NetMethod::greedy;
  std::optional<std::size_t> rho_max_multiplicity;  // unset: depth
  std::vector<double> nets_eps{0.5, 1.0, 2.0};
  NetMethod nets_method = NetMethod::greedy;
  UniformConfig uniform;
  bool inject_defect = false;

  std::size_t rho_multiplicity_bound() const { return rho_max_multiplicity.value_or(depth); }
  std::vector<std::size_t> truncation_levels() const {
    return truncation.empty() ? std::vector<std::size_t>{depth} : truncation;
  }
};

/// Overlays the keys present in `j` onto `base`. Unknown keys are errors.
RunConfig merge_config(RunConfig base, const nlohmann::json& j);
RunConfig load_config_file(const std::string& path, RunConfig base = {});
/// Fully resolved form, every default explicit.
nlohmann::json to_json(const RunConfig& config);
/// Throws invalid_input on any inconsistent value.
void validate(const RunConfig& config);

enum class Command { gen, nets, hierarchy, certify, uniform };

const char* to_string(Command command) noexcept;
Command command_from_string(const std::string& name);

struct RunResult {
  bool violation = false;
  std::vector<std::string> files;
  nlohmann::json summary;
};

/// Runs one pipeline stage and writes its outputs under config.out.
RunResult run(const RunConfig& config, Command command);

}  // namespace wvn
