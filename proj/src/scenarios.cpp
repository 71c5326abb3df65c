#include "hosf/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "hosf/diagnostics.hpp"
#include "hosf/errors.hpp"

namespace hosf {

namespace {

// 2 Z alpha_fs for a residual nucleus of charge Z = 82, in natural units
// hbar = m = c = 1 (alpha_fs = e^2 / (4 pi eps0 hbar c)).
constexpr double kFineStructure = 7.2973525693e-3;
constexpr double kAlphaCoulombStrength = 2.0 * 82.0 * kFineStructure;

void normalize(Field& f) {
  const double n = l2_norm(f);
  if (n == 0.0) throw config_error("orbital construction produced a zero field");
  for (auto& v : f.values) v /= n;
}

void axpy(Field& y, cxd a, const Field& x) {
  for (std::size_t i = 0; i < y.values.size(); ++i) y.values[i] += a * x.values[i];
}

}  // namespace

Field gaussian_packet(const GridSpec& grid, const std::array<double, 3>& center,
                      double width, const std::array<double, 3>& momentum,
                      const PhysicalConstants& consts) {
  grid.validate();
  double max_dx = 0.0;
  for (int a = 0; a < grid.dim; ++a) max_dx = std::max(max_dx, grid.spacing(a));
  if (width < 2.0 * max_dx) {
    throw config_error("orbitals.width is under-resolved: need width >= 2 grid cells");
  }
  const std::vector<double> r2 = min_image_radius_sq(grid, center);
  Field f = Field::zeros(grid);
  const double inv_4w2 = 1.0 / (4.0 * width * width);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double phase = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      phase += momentum[a] * grid.coordinate(a, grid.axis_index(i, a));
    }
    f.values[i] = std::polar(std::exp(-r2[i] * inv_4w2), phase / consts.hbar);
  }
  normalize(f);
  return f;
}

Field plane_wave(const GridSpec& grid, const std::array<int, 3>& mode) {
  grid.validate();
  for (int a = 0; a < grid.dim; ++a) {
    if (mode[a] < -grid.n / 2 || mode[a] >= grid.n / 2) {
      throw config_error("orbitals.mode outside the resolved frequency range");
    }
  }
  Field f = Field::zeros(grid);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double phase = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      const double k = 2.0 * std::numbers::pi * mode[a] / grid.length[a];
      phase += k * grid.coordinate(a, grid.axis_index(i, a));
    }
    f.values[i] = std::polar(1.0, phase);
  }
  normalize(f);
  return f;
}

Field spectral_gaussian_packet(const GridSpec& grid, double band) {
  grid.validate();
  if (!(band > 0.0)) throw config_error("orbitals.band must be > 0");
  SpectralField s{grid, std::vector<cxd>(grid.total())};
  const std::vector<double> k2 = squared_wavenumbers(grid);
  const double inv_2b2 = 1.0 / (2.0 * band * band);
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    // the mode-parity sign centers the packet at x = 0 (mid box) instead of
    // the index-0 corner
    int parity = 0;
    for (int a = 0; a < grid.dim; ++a) parity += grid.axis_index(i, a);
    const double sign = parity % 2 == 0 ? 1.0 : -1.0;
    s.values[i] = sign * std::exp(-k2[i] * inv_2b2);
  }
  Field f = to_physical(s);
  normalize(f);
  return f;
}

OrbitalSet build_orbitals(const OrbitalRecipe& recipe, const GridSpec& grid,
                          const PhysicalConstants& consts) {
  OrbitalSet set;
  switch (recipe.kind) {
    case OrbitalRecipeKind::gaussian:
      set.push_back(gaussian_packet(grid, recipe.center, recipe.width, recipe.momentum, consts));
      break;
    case OrbitalRecipeKind::plane_wave:
      set.push_back(plane_wave(grid, recipe.mode));
      break;
    case OrbitalRecipeKind::spectral_gaussian:
      set.push_back(spectral_gaussian_packet(grid, recipe.band));
      break;
    case OrbitalRecipeKind::orthonormal_gaussians: {
      if (recipe.count < 1) throw config_error("orbitals.count must be >= 1");
      std::vector<Field> raw;
      for (int j = 0; j < recipe.count; ++j) {
        std::array<double, 3> c = recipe.center;
        c[0] += (j - 0.5 * (recipe.count - 1)) * recipe.spacing;
        raw.push_back(gaussian_packet(grid, c, recipe.width, recipe.momentum, consts));
      }
      // Two rounds of modified Gram-Schmidt.
      for (int round = 0; round < 2; ++round) {
        for (std::size_t i = 0; i < raw.size(); ++i) {
          for (std::size_t j = 0; j < i; ++j) {
            axpy(raw[i], -inner_product(raw[j], raw[i]), raw[j]);
          }
          normalize(raw[i]);
        }
      }
      set = OrbitalSet(std::move(raw));
      for (int l = 0; l < set.count(); ++l) {
        for (int k = 0; k < set.count(); ++k) {
          const cxd o = inner_product(set[l], set[k]);
          if (std::abs(o - (l == k ? 1.0 : 0.0)) > 1e-12) {
            throw config_error(
                "orthonormalization failed; the packets are nearly dependent, "
                "increase orbitals.spacing or shrink orbitals.width");
          }
        }
      }
      break;
    }
  }
  return set;
}

BuiltScenario build_scenario(const ScenarioSpec& spec) {
  spec.grid.validate();
  spec.constants.validate();
  spec.integrator.validate();
  if (!(spec.horizon > 0.0)) throw config_error("horizon must be > 0");

  BuiltScenario built;
  built.grid = spec.grid;
  built.constants = spec.constants;
  built.integrator = spec.integrator;
  built.horizon = spec.horizon;

  switch (spec.potential.kind) {
    case PotentialKind::none:
      built.potential = make_potential_none(spec.grid);
      break;
    case PotentialKind::well:
      built.potential =
          make_potential_well(spec.grid, spec.potential.depth, spec.potential.radius,
                              spec.potential.center);
      break;
    case PotentialKind::linear:
      built.potential = make_potential_linear(spec.grid, spec.potential.gradient);
      break;
    case PotentialKind::coulomb: {
      const double alpha = spec.potential.alpha >= 0.0 ? spec.potential.alpha
                                                       : spec.constants.alpha_coulomb;
      const double eps =
          spec.potential.epsilon >= 0.0 ? spec.potential.epsilon : spec.grid.spacing(0);
      built.potential = make_potential_coulomb(spec.grid, alpha, eps, spec.potential.center,
                                               spec.potential.split_radius);
      break;
    }
  }

  built.kernel = make_coulomb_kernel(spec.grid, spec.kernel.policy, spec.kernel.r_cut,
                                     spec.kernel.screening_mu);

  switch (spec.op.kind) {
    case SymbolKind::polynomial:
      built.op = make_operator(spec.grid, spec.op.J, spec.constants, spec.op.subtract_rest_energy);
      break;
    case SymbolKind::relativistic:
      built.op = make_relativistic_operator(spec.grid, spec.constants, spec.op.subtract_rest_energy);
      break;
    case SymbolKind::monomial:
      built.op = make_monomial_operator(spec.grid, spec.op.J, spec.constants);
      break;
  }

  built.orbitals = build_orbitals(spec.orbitals, spec.grid, spec.constants);

  if (spec.orbitals.kind != OrbitalRecipeKind::plane_wave) {
    for (const Field& f : built.orbitals) {
      const double edge = boundary_mass_fraction(f);
      if (edge >= 1e-8) {
        throw config_error("initial boundary mass " + format_float(edge) +
                           " exceeds 1e-8; enlarge the box or move the packet inward");
      }
    }
  }
  return built;
}

ScenarioSpec scenario_preset(const std::string& name) {
  ScenarioSpec s;
  s.name = name;
  // Natural units hbar = m = c = 1 throughout the presets.
  if (name == "free_gaussian") {
    s.grid = make_grid(1, 512, 40.0);
    s.op.J = 1;
    s.orbitals.kind = OrbitalRecipeKind::gaussian;
    s.orbitals.width = 1.0;
    s.orbitals.momentum = {0.5, 0.0, 0.0};
    s.integrator.dt = 0.005;
    s.horizon = 2.0;
  } else if (name == "well") {
    s.grid = make_grid(1, 512, 40.0);
    s.op.J = 1;
    s.potential.kind = PotentialKind::well;
    s.potential.depth = 2.0;
    s.potential.radius = 4.0;
    s.orbitals.kind = OrbitalRecipeKind::gaussian;
    s.orbitals.width = 1.0;
    s.integrator.dt = 0.005;
    s.horizon = 2.0;
  } else if (name == "linear_ramp") {
    s.grid = make_grid(1, 512, 60.0);
    s.op.J = 1;
    s.potential.kind = PotentialKind::linear;
    s.potential.gradient = {0.25, 0.0, 0.0};
    s.orbitals.kind = OrbitalRecipeKind::gaussian;
    s.orbitals.center = {-10.0, 0.0, 0.0};
    s.orbitals.width = 1.5;
    s.integrator.dt = 0.005;
    s.horizon = 3.0;
  } else if (name == "coulomb1d") {
    s.grid = make_grid(1, 512, 80.0);
    s.op.J = 1;
    s.potential.kind = PotentialKind::coulomb;
    s.potential.alpha = 1.0;
    s.orbitals.kind = OrbitalRecipeKind::gaussian;
    s.orbitals.center = {-15.0, 0.0, 0.0};
    s.orbitals.width = 2.0;
    s.orbitals.momentum = {1.0, 0.0, 0.0};
    s.integrator.dt = 0.002;
    s.horizon = 2.0;
  } else if (name == "alpha") {
    // Alpha particle escaping the residual nucleus (Z = 82): order-2 kinetic
    // symbol, Coulomb tail, outward kick of 0.1 c. Lengths are in units of
    // the alpha Compton wavelength hbar/(m_alpha c) ~ 5.3e-2 fm, so the
    // launch radius 170 corresponds to ~9 fm; energies in units of
    // m_alpha c^2 ~ 3.727 GeV.
    s.grid = make_grid(3, 128, 640.0);
    s.op.J = 2;
    s.constants.alpha_coulomb = kAlphaCoulombStrength;
    s.potential.kind = PotentialKind::coulomb;
    s.orbitals.kind = OrbitalRecipeKind::gaussian;
    s.orbitals.center = {170.0, 0.0, 0.0};
    s.orbitals.width = 20.0;
    s.orbitals.momentum = {0.1, 0.0, 0.0};
    s.integrator.dt = 0.5;
    s.horizon = 50.0;
  } else if (name == "alpha_1d") {
    // 1D analogue of the alpha scenario for fast runs.
    s.grid = make_grid(1, 2048, 1280.0);
    s.op.J = 2;
    s.constants.alpha_coulomb = kAlphaCoulombStrength;
    s.potential.kind = PotentialKind::coulomb;
    s.orbitals.kind = OrbitalRecipeKind::gaussian;
    s.orbitals.center = {170.0, 0.0, 0.0};
    s.orbitals.width = 20.0;
    s.orbitals.momentum = {0.1, 0.0, 0.0};
    s.integrator.dt = 0.25;
    s.horizon = 100.0;
  } else if (name == "hf_gaussians") {
    s.grid = make_grid(1, 256, 40.0);
    s.op.J = 1;
    s.constants.kappa = 1.0;
    s.orbitals.kind = OrbitalRecipeKind::orthonormal_gaussians;
    s.orbitals.count = 2;
    s.orbitals.width = 1.5;
    s.orbitals.spacing = 4.0;
    s.integrator.dt = 0.005;
    s.horizon = 0.5;
  } else if (name == "relativistic_packet") {
    s.grid = make_grid(1, 2048, 320.0);
    s.op.J = 1;
    s.orbitals.kind = OrbitalRecipeKind::gaussian;
    s.orbitals.width = 20.0;
    s.orbitals.momentum = {0.1, 0.0, 0.0};
    s.integrator.dt = 0.5;
    s.horizon = 100.0;
  } else {
    throw config_error("unknown scenario preset '" + name + "'");
  }
  return s;
}

std::vector<std::string> scenario_preset_names() {
  return {"free_gaussian", "well",      "linear_ramp",  "coulomb1d",
          "alpha",         "alpha_1d",  "hf_gaussians", "relativistic_packet"};
}

CompareOrdersResult compare_orders(const ScenarioSpec& spec, const std::vector<int>& j_list,
                                   bool include_exact, int diagnostics_every) {
  if (j_list.empty()) throw config_error("compare.j_list must not be empty");
  for (int J : j_list) {
    if (J < 1) throw config_error("compare.j_list entries must be >= 1");
  }
  if (include_exact && spec.constants.kappa != 0.0) {
    throw config_error(
        "compare-orders: the exact semi-relativistic reference applies to linear "
        "runs only (kappa = 0)");
  }
  const BuiltScenario base = build_scenario(spec);

  CompareOrdersResult result;
  std::vector<OperatorSpec> ops;
  for (int J : j_list) {
    ops.push_back(make_operator(base.grid, J, base.constants, spec.op.subtract_rest_energy));
    result.labels.push_back("J" + std::to_string(J));
  }
  if (include_exact) {
    ops.push_back(make_relativistic_operator(base.grid, base.constants, spec.op.subtract_rest_energy));
    result.labels.push_back("exact");
  }
  for (std::size_t a = 0; a < result.labels.size(); ++a) {
    for (std::size_t b = a + 1; b < result.labels.size(); ++b) {
      result.pair_labels.push_back("dev_" + result.labels[a] + "_" + result.labels[b]);
    }
  }

  std::vector<OrbitalSet> states(ops.size(), base.orbitals);
  const int nsteps =
      std::max(1, static_cast<int>(std::llround(base.horizon / base.integrator.dt)));

  auto record = [&](double t) {
    result.times.push_back(t);
    std::vector<double> devs;
    for (std::size_t a = 0; a < states.size(); ++a) {
      for (std::size_t b = a + 1; b < states.size(); ++b) {
        double acc = 0.0;
        for (int k = 0; k < states[a].count(); ++k) {
          Field diff = states[a][k];
          for (std::size_t i = 0; i < diff.values.size(); ++i) {
            diff.values[i] -= states[b][k].values[i];
          }
          const double d = l2_norm(diff);
          acc += d * d;
        }
        devs.push_back(std::sqrt(acc));
      }
    }
    result.deviations.push_back(std::move(devs));
  };

  record(0.0);
  for (int step = 1; step <= nsteps; ++step) {
    for (std::size_t r = 0; r < ops.size(); ++r) {
      states[r] = strang_step(states[r], base.integrator.dt, ops[r], base.potential,
                              base.constants.kappa, base.kernel, base.integrator,
                              base.constants);
    }
    if (step % std::max(1, diagnostics_every) == 0 || step == nsteps) {
      record(step * base.integrator.dt);
    }
  }
  return result;
}

DecayConfig default_decay_config(int J, int dim) {
  if (J < 1) throw config_error("decay: J must be >= 1");
  if (dim < 1 || dim > 3) throw config_error("decay: dimension must be 1, 2 or 3");
  DecayConfig cfg;
  cfg.J = J;
  cfg.dim = dim;
  cfg.band = 2.0;
  if (dim == 1) {
    if (J == 1) {
      cfg.n = 16384;
      cfg.box = 2400.0;
      cfg.t_start = 3.0;
      cfg.t_stop = 60.0;
    } else if (J == 2) {
      cfg.n = 131072;
      cfg.box = 19200.0;
      cfg.t_start = 3.0;
      cfg.t_stop = 30.0;
    } else {
      // Generic window: asymptotics set in once the band-center phase is a
      // few radians; wrap-around bounds the far end via the top band speed.
      const double aj = alpha_coeff_double(J);
      const double h_band = aj * std::pow(cfg.band, 2 * J);
      const double v_top = 2.0 * J * aj * std::pow(3.2 * cfg.band, 2 * J - 1);
      cfg.n = 131072;
      cfg.box = 19200.0;
      cfg.t_start = 6.0 / h_band;
      cfg.t_stop = std::max(0.42 * (cfg.box / 2.0) / v_top, 4.0 * cfg.t_start);
    }
  } else {
    cfg.n = dim == 2 ? 512 : 64;
    cfg.box = dim == 2 ? 600.0 : 120.0;
    cfg.t_start = 3.0;
    cfg.t_stop = dim == 2 ? 20.0 : 8.0;
  }
  return cfg;
}

DecayResult run_decay_experiment(const DecayConfig& cfg, const PhysicalConstants& consts) {
  if (cfg.samples < 5) throw config_error("decay: need at least 5 samples");
  if (!(cfg.t_stop > cfg.t_start) || !(cfg.t_start > 0.0)) {
    throw config_error("decay: need 0 < t_start < t_stop");
  }
  const GridSpec grid = make_grid(cfg.dim, cfg.n, cfg.box);
  const OperatorSpec op = make_monomial_operator(grid, cfg.J, consts);
  const Field psi0 = spectral_gaussian_packet(grid, cfg.band);

  DecayResult result;
  const double ratio = cfg.t_stop / cfg.t_start;
  for (int i = 0; i < cfg.samples; ++i) {
    const double t =
        cfg.t_start * std::pow(ratio, static_cast<double>(i) / (cfg.samples - 1));
    const Field psi = free_propagate(psi0, t, op, consts);
    DecaySample sample;
    sample.t = t;
    sample.boundary = boundary_mass_fraction(psi);
    if (sample.boundary >= cfg.boundary_limit) {
      result.contaminated = true;  // wrap-around reached; later samples refused
      break;
    }
    double sup = 0.0;
    for (const cxd& v : psi.values) sup = std::max(sup, std::abs(v));
    sample.sup = sup;
    result.samples.push_back(sample);
  }
  if (result.samples.size() < 5) {
    throw numerical_error(
        "decay: wrap-around contamination left fewer than 5 clean samples; "
        "enlarge the box or shorten the time window");
  }
  std::vector<std::pair<double, double>> pts;
  pts.reserve(result.samples.size());
  for (const DecaySample& s : result.samples) pts.emplace_back(s.t, s.sup);
  const auto [exponent, residual] = decay_exponent_fit(pts);
  result.exponent = exponent;
  result.residual = residual;
  return result;
}

void write_compare_orders_csv(std::ostream& os, const CompareOrdersResult& result) {
  os << "time";
  for (const std::string& label : result.pair_labels) os << ',' << label;
  os << '\n';
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    os << format_float(result.times[i]);
    for (double d : result.deviations[i]) os << ',' << format_float(d);
    os << '\n';
  }
}

void write_decay_csv(std::ostream& os, const DecayResult& result) {
  os << "t,sup_norm,boundary_mass\n";
  for (const DecaySample& s : result.samples) {
    os << format_float(s.t) << ',' << format_float(s.sup) << ',' << format_float(s.boundary)
       << '\n';
  }
  os << "# exponent=" << format_float(result.exponent)
     << " residual=" << format_float(result.residual)
     << " contaminated=" << (result.contaminated ? 1 : 0) << '\n';
}

}  // namespace hosf
