#include "hosf/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hosf/errors.hpp"
#include "hosf/parallel.hpp"

namespace hosf {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw config_error("integrator.dt must be > 0");
  if (!(picard_tol >= 1e-14)) throw config_error("integrator.picard_tol must be >= 1e-14");
  if (picard_max_iter < 1) throw config_error("integrator.picard_max_iter must be >= 1");
}

Field free_propagate(const Field& psi, double t, const OperatorSpec& op,
                     const PhysicalConstants& consts) {
  if (!(psi.grid == op.grid)) throw std::invalid_argument("free_propagate: grid mismatch");
  SpectralField s = to_spectral(psi);
  const double scale = -t / consts.hbar;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    s.values[i] *= std::polar(1.0, scale * op.symbol[i]);
  }
  return to_physical(s);
}

Field semirelativistic_propagate(const Field& psi, double t, const PhysicalConstants& consts,
                                 bool subtract_rest_energy) {
  const OperatorSpec op = make_relativistic_operator(psi.grid, consts, subtract_rest_energy);
  return free_propagate(psi, t, op, consts);
}

namespace {

// Mean-field data frozen for one nonlinear substep: the diagonal (external +
// Hartree) potential plus the Hermitian exchange coupling matrix.
struct MeanField {
  std::vector<double> diag;       // V + H per node
  std::vector<Field> coupling;    // N x N fields, empty when exchange is off
  int n = 0;
};

// The diagonal carries V plus the full-sum Hartree potential; the coupling
// matrix carries the full-sum exchange including its l = k diagonal, so the
// self-interaction cancels exactly and every overlap <psi_l, psi_k> is a
// conserved quantity of the frozen-field sub-flow.
MeanField eval_mean_field(const OrbitalSet& psi, const PotentialSpec& V, double kappa,
                          const CoulombKernel& kernel) {
  MeanField mf;
  mf.n = psi.count();
  mf.diag = V.sampled.values;
  if (kappa != 0.0) {
    const RealField h = hartree_potential(psi, kappa, kernel);
    for (std::size_t i = 0; i < mf.diag.size(); ++i) mf.diag[i] += h.values[i];
    mf.coupling = exchange_coupling(psi, kappa, kernel, /*include_self=*/true);
  }
  return mf;
}

MeanField average(const MeanField& a, const MeanField& b) {
  MeanField mf;
  mf.n = a.n;
  mf.diag.resize(a.diag.size());
  for (std::size_t i = 0; i < mf.diag.size(); ++i) mf.diag[i] = 0.5 * (a.diag[i] + b.diag[i]);
  if (!a.coupling.empty()) {
    mf.coupling.resize(a.coupling.size());
    for (std::size_t p = 0; p < mf.coupling.size(); ++p) {
      mf.coupling[p] = a.coupling[p];
      for (std::size_t i = 0; i < mf.coupling[p].values.size(); ++i) {
        mf.coupling[p].values[i] = 0.5 * (a.coupling[p].values[i] + b.coupling[p].values[i]);
      }
    }
  }
  return mf;
}

// Solves (I - A/2) z = (I + A/2) psi in place via Gaussian elimination with
// partial pivoting; n is small (the orbital count).
void cayley_solve(std::vector<cxd>& a, std::vector<cxd>& rhs, int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(a[static_cast<std::size_t>(col) * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const double mag = std::abs(a[static_cast<std::size_t>(r) * n + col]);
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a[static_cast<std::size_t>(pivot) * n + c], a[static_cast<std::size_t>(col) * n + c]);
      }
      std::swap(rhs[pivot], rhs[col]);
    }
    const cxd d = a[static_cast<std::size_t>(col) * n + col];
    for (int r = col + 1; r < n; ++r) {
      const cxd f = a[static_cast<std::size_t>(r) * n + col] / d;
      if (f == cxd(0.0)) continue;
      for (int c = col; c < n; ++c) {
        a[static_cast<std::size_t>(r) * n + c] -= f * a[static_cast<std::size_t>(col) * n + c];
      }
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    cxd acc = rhs[r];
    for (int c = r + 1; c < n; ++c) acc -= a[static_cast<std::size_t>(r) * n + c] * rhs[c];
    rhs[r] = acc / a[static_cast<std::size_t>(r) * n + r];
  }
}

// Applies exp(-i tau (diag - K)/hbar) per node: an exact phase for the scalar
// part times the Cayley factor (I - A/2)^{-1}(I + A/2), A = i tau K / hbar,
// for the exchange coupling. The Cayley factor is exactly unitary, so the
// pointwise density and total norm are preserved to round-off.
void apply_nonlinear_phase(OrbitalSet& psi, double tau, const MeanField& mf,
                           double hbar) {
  const int n = psi.count();
  const std::size_t total = psi.grid().total();
  const double scale = -tau / hbar;
  if (mf.coupling.empty()) {
    for (int k = 0; k < n; ++k) {
      Field& f = psi[k];
      for (std::size_t i = 0; i < total; ++i) {
        f.values[i] *= std::polar(1.0, scale * mf.diag[i]);
      }
    }
    return;
  }
  std::vector<cxd> a(static_cast<std::size_t>(n) * n);
  std::vector<cxd> rhs(n);
  const cxd half_i_tau(0.0, 0.5 * tau / hbar);
  for (std::size_t i = 0; i < total; ++i) {
    // A/2 with A = (i tau/hbar) K, K[k][l] = coupling[k*n+l](x_i).
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        const cxd half_a = half_i_tau * mf.coupling[static_cast<std::size_t>(k) * n + l].values[i];
        a[static_cast<std::size_t>(k) * n + l] = (k == l ? cxd(1.0) : cxd(0.0)) - half_a;
      }
    }
    for (int k = 0; k < n; ++k) {
      cxd acc = psi[k].values[i];
      for (int l = 0; l < n; ++l) {
        acc += half_i_tau * mf.coupling[static_cast<std::size_t>(k) * n + l].values[i] *
               psi[l].values[i];
      }
      rhs[k] = acc;
    }
    cayley_solve(a, rhs, n);
    const cxd phase = std::polar(1.0, scale * mf.diag[i]);
    for (int k = 0; k < n; ++k) psi[k].values[i] = phase * rhs[k];
  }
}

void nonlinear_halfstep(OrbitalSet& psi, double tau, const PotentialSpec& V, double kappa,
                        const CoulombKernel& kernel, NonlinearUpdate update, double hbar) {
  const MeanField mf0 = eval_mean_field(psi, V, kappa, kernel);
  const bool field_moves = kappa != 0.0 && psi.count() > 1;
  if (update == NonlinearUpdate::frozen || !field_moves) {
    apply_nonlinear_phase(psi, tau, mf0, hbar);
    return;
  }
  OrbitalSet probe = psi;
  apply_nonlinear_phase(probe, tau, mf0, hbar);
  const MeanField mf1 = eval_mean_field(probe, V, kappa, kernel);
  apply_nonlinear_phase(psi, tau, average(mf0, mf1), hbar);
}

void kinetic_step(OrbitalSet& psi, double dt, const OperatorSpec& op,
                  const PhysicalConstants& consts) {
  const double scale = -dt / consts.hbar;
  parallel_for(static_cast<std::size_t>(psi.count()), [&](std::size_t k) {
    SpectralField s = to_spectral(psi[static_cast<int>(k)]);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      s.values[i] *= std::polar(1.0, scale * op.symbol[i]);
    }
    psi[static_cast<int>(k)] = to_physical(s);
  });
}

void check_finite(const OrbitalSet& psi, const char* who) {
  for (const Field& f : psi) {
    double acc = 0.0;
    for (const cxd& v : f.values) acc += std::norm(v);
    if (!std::isfinite(acc)) {
      throw numerical_error(std::string(who) + ": non-finite amplitudes detected");
    }
  }
}

void require_consistent(const OrbitalSet& psi, const OperatorSpec& op, const PotentialSpec& V,
                        double kappa, const CoulombKernel& kernel, const char* who) {
  if (psi.empty()) throw std::invalid_argument(std::string(who) + ": empty orbital set");
  if (!(psi.grid() == op.grid)) throw std::invalid_argument(std::string(who) + ": operator grid mismatch");
  if (!(psi.grid() == V.sampled.grid)) throw std::invalid_argument(std::string(who) + ": potential grid mismatch");
  if (kappa != 0.0 && !(psi.grid() == kernel.grid)) {
    throw std::invalid_argument(std::string(who) + ": kernel grid mismatch");
  }
}

}  // namespace

OrbitalSet strang_step(const OrbitalSet& orbitals, double dt, const OperatorSpec& op,
                       const PotentialSpec& V, double kappa, const CoulombKernel& kernel,
                       const IntegratorConfig& cfg, const PhysicalConstants& consts) {
  require_consistent(orbitals, op, V, kappa, kernel, "strang_step");
  OrbitalSet psi = orbitals;
  nonlinear_halfstep(psi, 0.5 * dt, V, kappa, kernel, cfg.nonlinear_update, consts.hbar);
  kinetic_step(psi, dt, op, consts);
  nonlinear_halfstep(psi, 0.5 * dt, V, kappa, kernel, cfg.nonlinear_update, consts.hbar);
  check_finite(psi, "strang_step");
  return psi;
}

namespace {

// Right-hand side of the integral form: G(Psi)_k = (-i/hbar)((V + H) psi_k - F(psi_k)),
// so that psi(t) = U(t) psi0 + int_0^t U(t-s) G(Psi(s)) ds.
OrbitalSet duhamel_rhs(const OrbitalSet& psi, const PotentialSpec& V, double kappa,
                       const CoulombKernel& kernel, double hbar) {
  const MeanField mf = eval_mean_field(psi, V, kappa, kernel);
  const int n = psi.count();
  const std::size_t total = psi.grid().total();
  OrbitalSet out = psi;
  const cxd minus_i_over_hbar(0.0, -1.0 / hbar);
  for (int k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < total; ++i) {
      cxd acc = mf.diag[i] * psi[k].values[i];
      if (!mf.coupling.empty()) {
        for (int l = 0; l < n; ++l) {
          acc -= mf.coupling[static_cast<std::size_t>(k) * n + l].values[i] * psi[l].values[i];
        }
      }
      out[k].values[i] = minus_i_over_hbar * acc;
    }
  }
  return out;
}

}  // namespace

OrbitalSet duhamel_picard_step(const OrbitalSet& orbitals, double dt, const OperatorSpec& op,
                               const PotentialSpec& V, double kappa,
                               const CoulombKernel& kernel, const IntegratorConfig& cfg,
                               const PhysicalConstants& consts, PicardReport* report) {
  require_consistent(orbitals, op, V, kappa, kernel, "duhamel_picard_step");
  const int n = orbitals.count();

  OrbitalSet u0 = orbitals;
  for (int k = 0; k < n; ++k) u0[k] = free_propagate(orbitals[k], dt, op, consts);

  OrbitalSet ug0 = duhamel_rhs(orbitals, V, kappa, kernel, consts.hbar);
  for (int k = 0; k < n; ++k) ug0[k] = free_propagate(ug0[k], dt, op, consts);

  PicardReport rep;
  OrbitalSet guess = u0;
  const double half_dt = 0.5 * dt;
  for (int iter = 1; iter <= cfg.picard_max_iter; ++iter) {
    const OrbitalSet gm = duhamel_rhs(guess, V, kappa, kernel, consts.hbar);
    OrbitalSet next = u0;
    double residual = 0.0;
    for (int k = 0; k < n; ++k) {
      Field& f = next[k];
      for (std::size_t i = 0; i < f.values.size(); ++i) {
        f.values[i] += half_dt * (ug0[k].values[i] + gm[k].values[i]);
      }
      Field diff = f;
      for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= guess[k].values[i];
      residual = std::max(residual, l2_norm(diff));
    }
    rep.iterations = iter;
    rep.residuals.push_back(residual);
    guess = std::move(next);
    if (residual < cfg.picard_tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged) {
    if (report) *report = rep;
    throw numerical_error(
        "duhamel_picard_step: fixed-point iteration did not converge within " +
        std::to_string(cfg.picard_max_iter) + " iterations (last residual " +
        std::to_string(rep.residuals.empty() ? 0.0 : rep.residuals.back()) +
        "); reduce dt");
  }
  check_finite(guess, "duhamel_picard_step");
  if (report) *report = rep;
  return guess;
}

OrbitalSet integrator_step(const OrbitalSet& orbitals, double dt, const OperatorSpec& op,
                           const PotentialSpec& V, double kappa, const CoulombKernel& kernel,
                           const IntegratorConfig& cfg, const PhysicalConstants& consts) {
  if (cfg.method == IntegrationMethod::strang) {
    return strang_step(orbitals, dt, op, V, kappa, kernel, cfg, consts);
  }
  return duhamel_picard_step(orbitals, dt, op, V, kappa, kernel, cfg, consts);
}

Trajectory run_simulation(OrbitalSet initial, double horizon, const IntegratorConfig& cfg,
                          const OperatorSpec& op, const PotentialSpec& V, double kappa,
                          const CoulombKernel& kernel, const PhysicalConstants& consts,
                          const RunCallbacks& callbacks) {
  cfg.validate();
  if (!(horizon > 0.0)) throw config_error("horizon must be > 0");
  require_consistent(initial, op, V, kappa, kernel, "run_simulation");

  const int nsteps = std::max(1, static_cast<int>(std::llround(horizon / cfg.dt)));
  Trajectory traj;
  traj.records.reserve(static_cast<std::size_t>(nsteps) / std::max(1, callbacks.diagnostics_every) + 2);

  auto record = [&](int step, double t, const OrbitalSet& state) {
    DiagnosticsRecord rec = evaluate_diagnostics(t, state, op, V, kappa, kernel);
    if (callbacks.on_record) callbacks.on_record(step, t, state, rec);
    traj.records.push_back(std::move(rec));
  };

  record(0, 0.0, initial);
  if (callbacks.snapshot_every > 0 && callbacks.on_snapshot) {
    callbacks.on_snapshot(0, 0.0, initial);
  }

  OrbitalSet state = std::move(initial);
  for (int step = 1; step <= nsteps; ++step) {
    state = integrator_step(state, cfg.dt, op, V, kappa, kernel, cfg, consts);
    const double t = step * cfg.dt;
    const bool last = step == nsteps;
    if (last || (callbacks.diagnostics_every > 0 && step % callbacks.diagnostics_every == 0)) {
      record(step, t, state);
    }
    if (callbacks.snapshot_every > 0 && callbacks.on_snapshot &&
        (step % callbacks.snapshot_every == 0 || last)) {
      callbacks.on_snapshot(step, t, state);
    }
  }
  traj.final_state = std::move(state);
  traj.steps = nsteps;
  return traj;
}

double suggested_max_dt(const OperatorSpec& op, const PhysicalConstants& consts) {
  double hmax = 0.0;
  for (double h : op.symbol) hmax = std::max(hmax, std::abs(h));
  return hmax > 0.0 ? 0.5 * consts.hbar / hmax : std::numeric_limits<double>::infinity();
}

}  // namespace hosf
