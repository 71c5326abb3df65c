#pragma once

#include <iosfwd>

#include "hosf/config.hpp"

namespace hosf {

// Executes a configured run: builds the scenario, writes diagnostics.csv,
// snapshots and manifest.json into the output directory. Warnings go to
// `log`. On numerical failure the last good state is flushed as
// last_good_orb<k>.bin before the numerical_error propagates.
void execute_run(const RunConfig& config, std::ostream& log);

// Builds the scenario without running it; throws config_error on problems.
void execute_validate(const RunConfig& config);

void execute_compare_orders(const RunConfig& config, std::ostream& out);

}  // namespace hosf
