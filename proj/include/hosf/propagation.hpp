#pragma once

#include <functional>
#include <vector>

#include "hosf/coefficients.hpp"
#include "hosf/diagnostics.hpp"
#include "hosf/grid.hpp"
#include "hosf/meanfield.hpp"
#include "hosf/potentials.hpp"

namespace hosf {

enum class IntegrationMethod { strang, duhamel_picard };
enum class NonlinearUpdate { frozen, midpoint };

struct IntegratorConfig {
  IntegrationMethod method = IntegrationMethod::strang;
  double dt = 1e-2;
  double picard_tol = 1e-12;  // >= 1e-14
  int picard_max_iter = 60;
  // frozen: the mean field of a half-step is evaluated at its start.
  // midpoint: one fixed-point correction (start/end average of the field).
  NonlinearUpdate nonlinear_update = NonlinearUpdate::midpoint;

  void validate() const;
};

// Exact free flow: spectral multiplication by exp(-i t h(k) / hbar).
// Unitary; U(t+s) = U(t) U(s) to round-off.
Field free_propagate(const Field& psi, double t, const OperatorSpec& op,
                     const PhysicalConstants& consts);

// Exact semi-relativistic flow under sqrt(p^2 c^2 + m^2 c^4).
Field semirelativistic_propagate(const Field& psi, double t, const PhysicalConstants& consts,
                                 bool subtract_rest_energy = true);

// One Strang step for the mean-field system: half nonlinear phase/coupling,
// full kinetic step, half nonlinear again. The Hartree + external part is an
// exact phase; the Hermitian exchange coupling acts through a Cayley
// (Pade 1,1) factor, exactly unitary per node with O(dt^3) local error.
OrbitalSet strang_step(const OrbitalSet& orbitals, double dt, const OperatorSpec& op,
                       const PotentialSpec& V, double kappa, const CoulombKernel& kernel,
                       const IntegratorConfig& cfg, const PhysicalConstants& consts);

struct PicardReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals;
};

// One step of fixed-point iteration on the integral form of the flow, with
// trapezoid quadrature over [0, dt] using the two endpoint evaluations.
// Throws numerical_error if the iteration does not contract within
// picard_max_iter; a smaller dt restores contraction.
OrbitalSet duhamel_picard_step(const OrbitalSet& orbitals, double dt, const OperatorSpec& op,
                               const PotentialSpec& V, double kappa,
                               const CoulombKernel& kernel, const IntegratorConfig& cfg,
                               const PhysicalConstants& consts,
                               PicardReport* report = nullptr);

OrbitalSet integrator_step(const OrbitalSet& orbitals, double dt, const OperatorSpec& op,
                           const PotentialSpec& V, double kappa, const CoulombKernel& kernel,
                           const IntegratorConfig& cfg, const PhysicalConstants& consts);

struct RunCallbacks {
  int diagnostics_every = 1;  // in steps; 0 disables intermediate records
  int snapshot_every = 0;     // in steps; 0 disables snapshots
  std::function<void(int step, double t, const OrbitalSet&)> on_snapshot;
  std::function<void(int step, double t, const OrbitalSet&, const DiagnosticsRecord&)> on_record;
};

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  OrbitalSet final_state;
  int steps = 0;
};

// Steps until the horizon (nsteps = round(horizon/dt), at least 1), emitting
// diagnostics at the configured cadence plus the initial and final states.
// Deterministic for a fixed configuration. NaN detection aborts with
// numerical_error.
Trajectory run_simulation(OrbitalSet initial, double horizon, const IntegratorConfig& cfg,
                          const OperatorSpec& op, const PotentialSpec& V, double kappa,
                          const CoulombKernel& kernel, const PhysicalConstants& consts,
                          const RunCallbacks& callbacks = {});

// Advisory step-size heuristic: dt <= 0.5 hbar / max|h(k)|. All substeps are
// unconditionally stable (unitary); this only bounds phase rotation per step.
double suggested_max_dt(const OperatorSpec& op, const PhysicalConstants& consts);

}  // namespace hosf
