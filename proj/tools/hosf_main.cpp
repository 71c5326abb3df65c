#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hosf/config.hpp"
#include "hosf/diagnostics.hpp"
#include "hosf/errors.hpp"
#include "hosf/runner.hpp"
#include "hosf/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

std::vector<double> parse_speed_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw hosf::config_error("invalid speed value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw hosf::config_error("--speeds must list at least one value");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hosf: pseudospectral evolution of higher-order Schrodinger and "
               "Hartree-Fock systems on periodic grids"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "execute a configured simulation");
  run_cmd->add_option("config", config_path, "JSON config file")->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate-config", "check a config without running");
  validate_cmd->add_option("config", validate_path, "JSON config file")->required();

  int jmax = 10;
  auto* coeffs_cmd = app.add_subcommand("coeffs", "print the kinetic expansion coefficients");
  coeffs_cmd->add_option("--jmax", jmax, "largest order, at most 30");

  int trunc_jmax = 4;
  std::string speeds_csv = "0.1";
  auto* trunc_cmd =
      app.add_subcommand("truncation", "relative dispersion error of E_J vs the exact symbol");
  trunc_cmd->add_option("--jmax", trunc_jmax, "largest order");
  trunc_cmd->add_option("--speeds", speeds_csv, "comma-separated speeds in units of c");

  int decay_J = 1, decay_dim = 1, decay_samples = 10, decay_n = 0;
  double decay_box = 0.0, decay_t0 = 0.0, decay_t1 = 0.0, decay_band = 0.0;
  auto* decay_cmd =
      app.add_subcommand("decay", "fit the sup-norm decay exponent of the monomial symbol");
  decay_cmd->add_option("--J", decay_J, "operator order");
  decay_cmd->add_option("--dimension", decay_dim, "spatial dimension (1 is the validated mode)");
  decay_cmd->add_option("--samples", decay_samples, "number of sample times");
  decay_cmd->add_option("--n", decay_n, "grid points per axis (0 = default)");
  decay_cmd->add_option("--box", decay_box, "box length (0 = default)");
  decay_cmd->add_option("--t-start", decay_t0, "first sample time (0 = default)");
  decay_cmd->add_option("--t-stop", decay_t1, "last sample time (0 = default)");
  decay_cmd->add_option("--band", decay_band, "spectral bandwidth of the packet (0 = default)");

  std::string compare_path;
  auto* compare_cmd = app.add_subcommand(
      "compare-orders", "run one scenario at several orders and report pairwise deviations");
  compare_cmd->add_option("config", compare_path, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*run_cmd) {
      hosf::execute_run(hosf::load_run_config(config_path), std::cerr);
      return kExitOk;
    }
    if (*validate_cmd) {
      hosf::execute_validate(hosf::load_run_config(validate_path));
      std::cout << "config OK\n";
      return kExitOk;
    }
    if (*coeffs_cmd) {
      if (jmax < 0) throw hosf::config_error("--jmax must be >= 0");
      if (jmax > 30) throw hosf::config_error("--jmax must be <= 30");
      std::cout << "j,numerator,denominator,value\n";
      for (int j = 0; j <= jmax; ++j) {
        const hosf::Rational a = hosf::alpha_coeff(j);
        std::cout << j << ',' << a.num.str() << ',' << a.den.str() << ','
                  << hosf::format_float(a.to_double()) << '\n';
      }
      return kExitOk;
    }
    if (*trunc_cmd) {
      hosf::PhysicalConstants consts;  // natural units
      std::vector<double> speeds = parse_speed_list(speeds_csv);
      for (double& v : speeds) v *= consts.c;
      const auto rows = hosf::ej_truncation_report(trunc_jmax, speeds, consts);
      hosf::write_truncation_csv(std::cout, rows);
      return kExitOk;
    }
    if (*decay_cmd) {
      hosf::DecayConfig cfg = hosf::default_decay_config(decay_J, decay_dim);
      cfg.samples = decay_samples;
      if (decay_n > 0) cfg.n = decay_n;
      if (decay_box > 0.0) cfg.box = decay_box;
      if (decay_t0 > 0.0) cfg.t_start = decay_t0;
      if (decay_t1 > 0.0) cfg.t_stop = decay_t1;
      if (decay_band > 0.0) cfg.band = decay_band;
      const hosf::DecayResult result =
          hosf::run_decay_experiment(cfg, hosf::PhysicalConstants{});
      hosf::write_decay_csv(std::cout, result);
      return kExitOk;
    }
    if (*compare_cmd) {
      hosf::execute_compare_orders(hosf::load_run_config(compare_path), std::cout);
      return kExitOk;
    }
  } catch (const hosf::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const hosf::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
