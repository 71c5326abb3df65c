#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hosf/scenarios.hpp"

namespace hosf {

struct OutputConfig {
  std::string directory = "out";
  int diagnostics_every = 10;
  int snapshot_every = 0;
};

struct CompareConfig {
  std::vector<int> j_list{1, 2};
  bool include_exact = true;
};

struct RunConfig {
  std::string scenario_name;  // empty for fully explicit configs
  ScenarioSpec scenario;
  OutputConfig output;
  CompareConfig compare;
  std::uint64_t seed = 0;  // reserved for randomized recipes; echoed to the manifest

  // Canonical fully resolved form; sufficient to reproduce the run exactly.
  nlohmann::json resolved() const;
};

// Strict parsing: unknown keys are rejected with the offending key named in
// the error. A "scenario" key selects a preset whose fields the remaining
// keys override.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const ScenarioSpec& spec);

}  // namespace hosf
