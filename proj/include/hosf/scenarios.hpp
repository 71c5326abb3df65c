#pragma once

#include <array>
#include <string>
#include <vector>

#include "hosf/coefficients.hpp"
#include "hosf/grid.hpp"
#include "hosf/meanfield.hpp"
#include "hosf/potentials.hpp"
#include "hosf/propagation.hpp"

namespace hosf {

enum class OrbitalRecipeKind {
  gaussian,               // single packet exp(-|x-x0|^2/(4 w^2) + i p.x/hbar)
  orthonormal_gaussians,  // N displaced packets, Gram-Schmidt orthonormalized
  plane_wave,             // single exact grid mode
  spectral_gaussian,      // packet with Gaussian spectrum exp(-|k|^2/(2 B^2))
};

struct OrbitalRecipe {
  OrbitalRecipeKind kind = OrbitalRecipeKind::gaussian;
  int count = 1;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double width = 1.0;
  std::array<double, 3> momentum{0.0, 0.0, 0.0};
  double spacing = 4.0;              // center offset along axis 0 between orbitals
  std::array<int, 3> mode{1, 0, 0};  // plane-wave mode numbers
  double band = 2.0;                 // spectral-gaussian bandwidth
};

struct PotentialParams {
  PotentialKind kind = PotentialKind::none;
  double depth = 0.0;
  double radius = 0.0;
  std::array<double, 3> gradient{0.0, 0.0, 0.0};
  double alpha = -1.0;    // < 0: fall back to constants.alpha_coulomb
  double epsilon = -1.0;  // < 0: one grid cell
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double split_radius = 1.0;
};

struct KernelParams {
  ZeroModePolicy policy = ZeroModePolicy::zero;
  double r_cut = 0.0;  // <= 0: auto
  double screening_mu = 1.0;
};

struct OperatorParams {
  int J = 1;
  SymbolKind kind = SymbolKind::polynomial;
  bool subtract_rest_energy = true;
};

struct ScenarioSpec {
  std::string name = "custom";
  GridSpec grid;
  PhysicalConstants constants;
  OperatorParams op;
  PotentialParams potential;
  KernelParams kernel;
  OrbitalRecipe orbitals;
  IntegratorConfig integrator;
  double horizon = 1.0;
};

struct BuiltScenario {
  GridSpec grid;
  PhysicalConstants constants;
  OperatorSpec op;
  PotentialSpec potential;
  CoulombKernel kernel;
  OrbitalSet orbitals;
  IntegratorConfig integrator;
  double horizon = 1.0;
};

// Deterministic single-packet builders.
Field gaussian_packet(const GridSpec& grid, const std::array<double, 3>& center,
                      double width, const std::array<double, 3>& momentum,
                      const PhysicalConstants& consts);
Field plane_wave(const GridSpec& grid, const std::array<int, 3>& mode);
Field spectral_gaussian_packet(const GridSpec& grid, double band);

OrbitalSet build_orbitals(const OrbitalRecipe& recipe, const GridSpec& grid,
                          const PhysicalConstants& consts);

// Deterministic construction: identical specs give bit-identical states.
// Localized recipes are rejected when their boundary mass exceeds 1e-8.
BuiltScenario build_scenario(const ScenarioSpec& spec);

// Named presets; throws config_error for unknown names.
ScenarioSpec scenario_preset(const std::string& name);
std::vector<std::string> scenario_preset_names();

// Runs the same scenario once per J (plus the exact semi-relativistic
// propagator when include_exact is set; linear runs only), reporting pairwise
// L2 deviations at the diagnostics cadence.
struct CompareOrdersResult {
  std::vector<std::string> labels;       // run labels, e.g. "J=1", "exact"
  std::vector<std::string> pair_labels;  // deviation column labels
  std::vector<double> times;
  std::vector<std::vector<double>> deviations;  // [time][pair]
};

CompareOrdersResult compare_orders(const ScenarioSpec& spec, const std::vector<int>& j_list,
                                   bool include_exact, int diagnostics_every = 10);

// Dispersive-decay experiment with the monomial symbol: free evolution of a
// spectral-Gaussian packet, sup-norm sampled at geometrically spaced times
// before wrap-around (samples with boundary mass above the limit are refused).
struct DecayConfig {
  int J = 1;
  int dim = 1;
  int n = 16384;
  double box = 2400.0;
  double band = 2.0;
  double t_start = 2.0;
  double t_stop = 40.0;
  int samples = 10;
  double boundary_limit = 1e-6;
};

DecayConfig default_decay_config(int J, int dim);

struct DecaySample {
  double t = 0.0;
  double sup = 0.0;
  double boundary = 0.0;
};

struct DecayResult {
  std::vector<DecaySample> samples;  // the clean samples used for the fit
  double exponent = 0.0;
  double residual = 0.0;
  bool contaminated = false;  // true if later samples were dropped
};

DecayResult run_decay_experiment(const DecayConfig& cfg, const PhysicalConstants& consts);

void write_compare_orders_csv(std::ostream& os, const CompareOrdersResult& result);
void write_decay_csv(std::ostream& os, const DecayResult& result);

}  // namespace hosf
