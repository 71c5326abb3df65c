#include "hosf/runner.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hosf/diagnostics.hpp"
#include "hosf/errors.hpp"
#include "hosf/snapshot.hpp"

namespace hosf {

namespace {

namespace fs = std::filesystem;

std::string snapshot_name(int step, int orbital) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snap_%08d_orb%02d.bin", step, orbital);
  return buf;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const fs::path& dir, const RunConfig& config, const std::string& status,
                    double wall_seconds, const std::string& started) {
  nlohmann::json manifest;
  manifest["status"] = status;
  manifest["version"] = "0.1.0";
  manifest["compiler"] = __VERSION__;
  manifest["started_at_utc"] = started;
  manifest["wall_clock_seconds"] = wall_seconds;
  manifest["config"] = config.resolved();
  std::ofstream os(dir / "manifest.json");
  os << manifest.dump(2) << '\n';
}

}  // namespace

void execute_validate(const RunConfig& config) { build_scenario(config.scenario); }

void execute_run(const RunConfig& config, std::ostream& log) {
  const BuiltScenario built = build_scenario(config.scenario);

  for (int k = 0; k < built.orbitals.count(); ++k) {
    const double top = top_octave_fraction(built.orbitals[k]);
    if (top >= 1e-6) {
      log << "warning: orbital " << k + 1 << " has " << format_float(top)
          << " of its spectral mass in the top frequency octave; refine the grid\n";
    }
  }
  const double dt_hint = suggested_max_dt(built.op, built.constants);
  if (built.integrator.dt > dt_hint) {
    log << "note: dt=" << format_float(built.integrator.dt)
        << " exceeds the phase-rotation guideline 0.5*hbar/max|h| = " << format_float(dt_hint)
        << " (all substeps remain unitary)\n";
  }

  const fs::path dir(config.output.directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw config_error("cannot create output directory: " + dir.string());
  {
    std::ofstream probe(dir / ".write_probe");
    if (!probe) throw config_error("output directory is not writable: " + dir.string());
  }
  fs::remove(dir / ".write_probe", ec);

  if (built.potential.kind != PotentialKind::none) {
    write_snapshot(dir / "potential.bin", built.potential.sampled);
  }

  std::ofstream csv(dir / "diagnostics.csv");
  if (!csv) throw config_error("cannot open diagnostics.csv in " + dir.string());
  write_diagnostics_header(csv, built.orbitals.count());

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();

  OrbitalSet last_good = built.orbitals;
  RunCallbacks callbacks;
  callbacks.diagnostics_every = config.output.diagnostics_every;
  callbacks.snapshot_every = config.output.snapshot_every;
  callbacks.on_record = [&](int, double, const OrbitalSet& state, const DiagnosticsRecord& rec) {
    write_diagnostics_row(csv, rec);
    csv.flush();
    last_good = state;
  };
  callbacks.on_snapshot = [&](int step, double, const OrbitalSet& state) {
    for (int k = 0; k < state.count(); ++k) {
      write_snapshot(dir / snapshot_name(step, k + 1), state[k]);
    }
  };

  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  try {
    run_simulation(built.orbitals, built.horizon, built.integrator, built.op, built.potential,
                   built.constants.kappa, built.kernel, built.constants, callbacks);
  } catch (const numerical_error&) {
    for (int k = 0; k < last_good.count(); ++k) {
      char buf[48];
      std::snprintf(buf, sizeof buf, "last_good_orb%02d.bin", k + 1);
      write_snapshot(dir / buf, last_good[k]);
    }
    write_manifest(dir, config, "numerical_failure", elapsed(), started);
    throw;
  }
  write_manifest(dir, config, "ok", elapsed(), started);
}

void execute_compare_orders(const RunConfig& config, std::ostream& out) {
  const CompareOrdersResult result =
      compare_orders(config.scenario, config.compare.j_list, config.compare.include_exact,
                     config.output.diagnostics_every);
  write_compare_orders_csv(out, result);
}

}  // namespace hosf
