#include "hosf/config.hpp"

#include <fstream>
#include <set>

#include "hosf/errors.hpp"

namespace hosf {

namespace {

using nlohmann::json;

void expect_keys(const json& j, const std::string& context,
                 std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw config_error("config: '" + context + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) {
      throw config_error("config: unknown key '" + key + "' in " + context);
    }
  }
}

double get_number(const json& j, const std::string& context, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw config_error("config: '" + context + "." + key + "' must be a number");
  return j[key].get<double>();
}

int get_int(const json& j, const std::string& context, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) {
    throw config_error("config: '" + context + "." + key + "' must be an integer");
  }
  return j[key].get<int>();
}

bool get_bool(const json& j, const std::string& context, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) throw config_error("config: '" + context + "." + key + "' must be a boolean");
  return j[key].get<bool>();
}

std::string get_string(const json& j, const std::string& context, const char* key,
                       const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) throw config_error("config: '" + context + "." + key + "' must be a string");
  return j[key].get<std::string>();
}

template <typename T, std::size_t N>
std::array<T, N> get_vector(const json& j, const std::string& context, const char* key,
                            std::array<T, N> fallback, int dim) {
  if (!j.contains(key)) return fallback;
  const json& v = j[key];
  std::array<T, N> out = fallback;
  if (std::is_integral_v<T> ? v.is_number_integer() : v.is_number()) {
    out[0] = v.get<T>();
    return out;
  }
  if (!v.is_array() || v.size() > N || static_cast<int>(v.size()) < dim) {
    throw config_error("config: '" + context + "." + key + "' must be an array of " +
                       std::to_string(dim) + " numbers");
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool ok = std::is_integral_v<T> ? v[i].is_number_integer() : v[i].is_number();
    if (!ok) {
      throw config_error("config: '" + context + "." + key + "' entries must be " +
                         (std::is_integral_v<T> ? "integers" : "numbers"));
    }
    out[i] = v[i].get<T>();
  }
  return out;
}

GridSpec parse_grid(const json& j, const GridSpec& base) {
  expect_keys(j, "grid", {"dim", "n", "box_length"});
  GridSpec g = base;
  g.dim = get_int(j, "grid", "dim", base.dim);
  g.n = get_int(j, "grid", "n", base.n);
  g.length = get_vector<double, 3>(j, "grid", "box_length", base.length, g.dim);
  if (j.contains("box_length") && j["box_length"].is_number()) {
    for (int a = 1; a < 3; ++a) g.length[a] = g.length[0];
  }
  g.validate();
  return g;
}

PhysicalConstants parse_constants(const json& j, const PhysicalConstants& base) {
  expect_keys(j, "constants", {"hbar", "mass", "c", "kappa", "alpha_coulomb"});
  PhysicalConstants c = base;
  c.hbar = get_number(j, "constants", "hbar", base.hbar);
  c.mass = get_number(j, "constants", "mass", base.mass);
  c.c = get_number(j, "constants", "c", base.c);
  c.kappa = get_number(j, "constants", "kappa", base.kappa);
  c.alpha_coulomb = get_number(j, "constants", "alpha_coulomb", base.alpha_coulomb);
  c.validate();
  return c;
}

OperatorParams parse_operator(const json& j, const OperatorParams& base) {
  expect_keys(j, "operator", {"J", "kind", "subtract_rest_energy"});
  OperatorParams op = base;
  op.J = get_int(j, "operator", "J", base.J);
  if (op.J < 1) throw config_error("config: 'operator.J' must be >= 1");
  const std::string kind = get_string(j, "operator", "kind",
                                      base.kind == SymbolKind::polynomial     ? "polynomial"
                                      : base.kind == SymbolKind::relativistic ? "relativistic"
                                                                              : "monomial");
  if (kind == "polynomial") {
    op.kind = SymbolKind::polynomial;
  } else if (kind == "relativistic") {
    op.kind = SymbolKind::relativistic;
  } else if (kind == "monomial") {
    op.kind = SymbolKind::monomial;
  } else {
    throw config_error("config: 'operator.kind' must be polynomial, relativistic or monomial");
  }
  op.subtract_rest_energy = get_bool(j, "operator", "subtract_rest_energy", base.subtract_rest_energy);
  return op;
}

PotentialParams parse_potential(const json& j, const PotentialParams& base, int dim) {
  expect_keys(j, "potential",
              {"kind", "depth", "radius", "gradient", "alpha", "epsilon", "center", "split_radius"});
  PotentialParams p = base;
  const std::string kind = get_string(j, "potential", "kind",
                                      base.kind == PotentialKind::none      ? "none"
                                      : base.kind == PotentialKind::well    ? "well"
                                      : base.kind == PotentialKind::linear  ? "linear"
                                                                            : "coulomb");
  if (kind == "none") {
    p.kind = PotentialKind::none;
  } else if (kind == "well") {
    p.kind = PotentialKind::well;
  } else if (kind == "linear") {
    p.kind = PotentialKind::linear;
  } else if (kind == "coulomb") {
    p.kind = PotentialKind::coulomb;
  } else {
    throw config_error("config: 'potential.kind' must be none, well, linear or coulomb");
  }
  p.depth = get_number(j, "potential", "depth", base.depth);
  p.radius = get_number(j, "potential", "radius", base.radius);
  p.gradient = get_vector<double, 3>(j, "potential", "gradient", base.gradient, dim);
  p.alpha = get_number(j, "potential", "alpha", base.alpha);
  p.epsilon = get_number(j, "potential", "epsilon", base.epsilon);
  p.center = get_vector<double, 3>(j, "potential", "center", base.center, dim);
  p.split_radius = get_number(j, "potential", "split_radius", base.split_radius);
  return p;
}

KernelParams parse_kernel(const json& j, const KernelParams& base) {
  expect_keys(j, "kernel", {"policy", "r_cut", "screening_mu"});
  KernelParams k = base;
  const std::string policy = get_string(j, "kernel", "policy",
                                        base.policy == ZeroModePolicy::zero ? "zero" : "truncated");
  if (policy == "zero") {
    k.policy = ZeroModePolicy::zero;
  } else if (policy == "truncated") {
    k.policy = ZeroModePolicy::truncated;
  } else {
    throw config_error("config: 'kernel.policy' must be zero or truncated");
  }
  k.r_cut = get_number(j, "kernel", "r_cut", base.r_cut);
  k.screening_mu = get_number(j, "kernel", "screening_mu", base.screening_mu);
  return k;
}

OrbitalRecipe parse_orbitals(const json& j, const OrbitalRecipe& base, int dim) {
  expect_keys(j, "orbitals",
              {"recipe", "count", "center", "width", "momentum", "spacing", "mode", "band"});
  OrbitalRecipe r = base;
  const std::string recipe =
      get_string(j, "orbitals", "recipe",
                 base.kind == OrbitalRecipeKind::gaussian                ? "gaussian"
                 : base.kind == OrbitalRecipeKind::orthonormal_gaussians ? "orthonormal_gaussians"
                 : base.kind == OrbitalRecipeKind::plane_wave            ? "plane_wave"
                                                                         : "spectral_gaussian");
  if (recipe == "gaussian") {
    r.kind = OrbitalRecipeKind::gaussian;
  } else if (recipe == "orthonormal_gaussians") {
    r.kind = OrbitalRecipeKind::orthonormal_gaussians;
  } else if (recipe == "plane_wave") {
    r.kind = OrbitalRecipeKind::plane_wave;
  } else if (recipe == "spectral_gaussian") {
    r.kind = OrbitalRecipeKind::spectral_gaussian;
  } else {
    throw config_error(
        "config: 'orbitals.recipe' must be gaussian, orthonormal_gaussians, plane_wave "
        "or spectral_gaussian");
  }
  r.count = get_int(j, "orbitals", "count", base.count);
  if (r.count < 1) throw config_error("config: 'orbitals.count' must be >= 1");
  if (r.kind != OrbitalRecipeKind::orthonormal_gaussians && r.count != 1) {
    throw config_error("config: 'orbitals.count' > 1 requires recipe orthonormal_gaussians");
  }
  r.center = get_vector<double, 3>(j, "orbitals", "center", base.center, dim);
  r.width = get_number(j, "orbitals", "width", base.width);
  r.momentum = get_vector<double, 3>(j, "orbitals", "momentum", base.momentum, dim);
  r.spacing = get_number(j, "orbitals", "spacing", base.spacing);
  r.mode = get_vector<int, 3>(j, "orbitals", "mode", base.mode, dim);
  r.band = get_number(j, "orbitals", "band", base.band);
  return r;
}

IntegratorConfig parse_integrator(const json& j, const IntegratorConfig& base) {
  expect_keys(j, "integrator",
              {"method", "dt", "picard_tol", "picard_max_iter", "nonlinear_update"});
  IntegratorConfig c = base;
  const std::string method = get_string(j, "integrator", "method",
                                        base.method == IntegrationMethod::strang
                                            ? "strang"
                                            : "duhamel_picard");
  if (method == "strang") {
    c.method = IntegrationMethod::strang;
  } else if (method == "duhamel_picard") {
    c.method = IntegrationMethod::duhamel_picard;
  } else {
    throw config_error("config: 'integrator.method' must be strang or duhamel_picard");
  }
  c.dt = get_number(j, "integrator", "dt", base.dt);
  c.picard_tol = get_number(j, "integrator", "picard_tol", base.picard_tol);
  c.picard_max_iter = get_int(j, "integrator", "picard_max_iter", base.picard_max_iter);
  const std::string update = get_string(j, "integrator", "nonlinear_update",
                                        base.nonlinear_update == NonlinearUpdate::frozen
                                            ? "frozen"
                                            : "midpoint");
  if (update == "frozen") {
    c.nonlinear_update = NonlinearUpdate::frozen;
  } else if (update == "midpoint") {
    c.nonlinear_update = NonlinearUpdate::midpoint;
  } else {
    throw config_error("config: 'integrator.nonlinear_update' must be frozen or midpoint");
  }
  c.validate();
  return c;
}

}  // namespace

nlohmann::json scenario_to_json(const ScenarioSpec& s) {
  json j;
  j["grid"] = {{"dim", s.grid.dim}, {"n", s.grid.n}};
  json lens = json::array();
  for (int a = 0; a < s.grid.dim; ++a) lens.push_back(s.grid.length[a]);
  j["grid"]["box_length"] = lens;
  j["constants"] = {{"hbar", s.constants.hbar},
                    {"mass", s.constants.mass},
                    {"c", s.constants.c},
                    {"kappa", s.constants.kappa},
                    {"alpha_coulomb", s.constants.alpha_coulomb}};
  j["operator"] = {{"J", s.op.J},
                   {"kind", s.op.kind == SymbolKind::polynomial     ? "polynomial"
                            : s.op.kind == SymbolKind::relativistic ? "relativistic"
                                                                    : "monomial"},
                   {"subtract_rest_energy", s.op.subtract_rest_energy}};
  j["potential"] = {{"kind", s.potential.kind == PotentialKind::none     ? "none"
                             : s.potential.kind == PotentialKind::well   ? "well"
                             : s.potential.kind == PotentialKind::linear ? "linear"
                                                                         : "coulomb"},
                    {"depth", s.potential.depth},
                    {"radius", s.potential.radius},
                    {"alpha", s.potential.alpha},
                    {"epsilon", s.potential.epsilon},
                    {"split_radius", s.potential.split_radius}};
  json grad = json::array(), pcenter = json::array();
  for (int a = 0; a < s.grid.dim; ++a) {
    grad.push_back(s.potential.gradient[a]);
    pcenter.push_back(s.potential.center[a]);
  }
  j["potential"]["gradient"] = grad;
  j["potential"]["center"] = pcenter;
  j["kernel"] = {{"policy", s.kernel.policy == ZeroModePolicy::zero ? "zero" : "truncated"},
                 {"r_cut", s.kernel.r_cut},
                 {"screening_mu", s.kernel.screening_mu}};
  j["orbitals"] = {
      {"recipe", s.orbitals.kind == OrbitalRecipeKind::gaussian ? "gaussian"
                 : s.orbitals.kind == OrbitalRecipeKind::orthonormal_gaussians
                     ? "orthonormal_gaussians"
                 : s.orbitals.kind == OrbitalRecipeKind::plane_wave ? "plane_wave"
                                                                    : "spectral_gaussian"},
      {"count", s.orbitals.count},
      {"width", s.orbitals.width},
      {"spacing", s.orbitals.spacing},
      {"band", s.orbitals.band}};
  json ocenter = json::array(), omom = json::array(), omode = json::array();
  for (int a = 0; a < s.grid.dim; ++a) {
    ocenter.push_back(s.orbitals.center[a]);
    omom.push_back(s.orbitals.momentum[a]);
    omode.push_back(s.orbitals.mode[a]);
  }
  j["orbitals"]["center"] = ocenter;
  j["orbitals"]["momentum"] = omom;
  j["orbitals"]["mode"] = omode;
  j["integrator"] = {
      {"method", s.integrator.method == IntegrationMethod::strang ? "strang" : "duhamel_picard"},
      {"dt", s.integrator.dt},
      {"picard_tol", s.integrator.picard_tol},
      {"picard_max_iter", s.integrator.picard_max_iter},
      {"nonlinear_update",
       s.integrator.nonlinear_update == NonlinearUpdate::frozen ? "frozen" : "midpoint"}};
  j["horizon"] = s.horizon;
  return j;
}

nlohmann::json RunConfig::resolved() const {
  json j = scenario_to_json(scenario);
  if (!scenario_name.empty()) j["scenario"] = scenario_name;
  j["output"] = {{"directory", output.directory},
                 {"diagnostics_every", output.diagnostics_every},
                 {"snapshot_every", output.snapshot_every}};
  json jl = json::array();
  for (int v : compare.j_list) jl.push_back(v);
  j["compare"] = {{"j_list", jl}, {"include_exact", compare.include_exact}};
  j["seed"] = seed;
  return j;
}

RunConfig parse_run_config(const nlohmann::json& j) {
  expect_keys(j, "config root",
              {"scenario", "grid", "constants", "operator", "potential", "kernel", "orbitals",
               "integrator", "horizon", "output", "compare", "seed"});

  RunConfig rc;
  ScenarioSpec base;
  if (j.contains("scenario")) {
    if (!j["scenario"].is_string()) throw config_error("config: 'scenario' must be a string");
    rc.scenario_name = j["scenario"].get<std::string>();
    base = scenario_preset(rc.scenario_name);
  }

  ScenarioSpec s = base;
  if (j.contains("grid")) s.grid = parse_grid(j["grid"], base.grid);
  if (j.contains("constants")) s.constants = parse_constants(j["constants"], base.constants);
  if (j.contains("operator")) s.op = parse_operator(j["operator"], base.op);
  if (j.contains("potential")) s.potential = parse_potential(j["potential"], base.potential, s.grid.dim);
  if (j.contains("kernel")) s.kernel = parse_kernel(j["kernel"], base.kernel);
  if (j.contains("orbitals")) s.orbitals = parse_orbitals(j["orbitals"], base.orbitals, s.grid.dim);
  if (j.contains("integrator")) s.integrator = parse_integrator(j["integrator"], base.integrator);
  if (j.contains("horizon")) {
    if (!j["horizon"].is_number()) throw config_error("config: 'horizon' must be a number");
    s.horizon = j["horizon"].get<double>();
  }
  if (!(s.horizon > 0.0)) throw config_error("config: 'horizon' must be > 0");
  s.grid.validate();
  s.constants.validate();
  s.integrator.validate();
  rc.scenario = std::move(s);

  if (j.contains("output")) {
    expect_keys(j["output"], "output", {"directory", "diagnostics_every", "snapshot_every"});
    rc.output.directory = get_string(j["output"], "output", "directory", rc.output.directory);
    rc.output.diagnostics_every =
        get_int(j["output"], "output", "diagnostics_every", rc.output.diagnostics_every);
    rc.output.snapshot_every =
        get_int(j["output"], "output", "snapshot_every", rc.output.snapshot_every);
    if (rc.output.diagnostics_every < 0 || rc.output.snapshot_every < 0) {
      throw config_error("config: output cadences must be >= 0");
    }
  }
  if (j.contains("compare")) {
    expect_keys(j["compare"], "compare", {"j_list", "include_exact"});
    if (j["compare"].contains("j_list")) {
      if (!j["compare"]["j_list"].is_array()) {
        throw config_error("config: 'compare.j_list' must be an array of integers");
      }
      rc.compare.j_list.clear();
      for (const auto& v : j["compare"]["j_list"]) {
        if (!v.is_number_integer()) {
          throw config_error("config: 'compare.j_list' must be an array of integers");
        }
        rc.compare.j_list.push_back(v.get<int>());
      }
    }
    rc.compare.include_exact =
        get_bool(j["compare"], "compare", "include_exact", rc.compare.include_exact);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      throw config_error("config: 'seed' must be a non-negative integer");
    }
    const auto v = j["seed"].get<std::int64_t>();
    if (v < 0) throw config_error("config: 'seed' must be a non-negative integer");
    rc.seed = static_cast<std::uint64_t>(v);
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

}  // namespace hosf
