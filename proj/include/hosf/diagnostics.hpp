#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "hosf/coefficients.hpp"
#include "hosf/grid.hpp"
#include "hosf/meanfield.hpp"
#include "hosf/potentials.hpp"

namespace hosf {

// Energy functional split:
//   total = kinetic + external + direct - exchange,
// kinetic = sum_k <psi_k, H0J psi_k> (spectral), external = int V rho,
// direct = (kappa/2) iint rho(x) rho(y)/|x-y|,
// exchange = (kappa/2) iint |rho(x,y)|^2/|x-y| (stored as the non-negative
// magnitude that enters with a minus sign).
struct EnergyBreakdown {
  double kinetic = 0.0;
  double external = 0.0;
  double direct = 0.0;
  double exchange = 0.0;
  double total = 0.0;
};

struct DiagnosticsRecord {
  double time = 0.0;
  std::vector<double> norms;  // per orbital
  std::vector<cxd> overlap;   // N x N, row-major <psi_l, psi_k>
  EnergyBreakdown energy;
  double sup_norm = 0.0;  // max_x sum_k |psi_k(x)|
};

EnergyBreakdown total_energy(const OrbitalSet& orbitals, const OperatorSpec& op,
                             const PotentialSpec& V, double kappa,
                             const CoulombKernel& kernel);

DiagnosticsRecord evaluate_diagnostics(double time, const OrbitalSet& orbitals,
                                       const OperatorSpec& op, const PotentialSpec& V,
                                       double kappa, const CoulombKernel& kernel);

// Max drift relative to the t=0 magnitude, with an absolute fallback when the
// initial value is below 1e-14.
struct DriftReport {
  std::vector<double> norm_drift;     // per orbital
  std::vector<double> overlap_drift;  // per matrix entry
  double energy_drift = 0.0;
  double max_norm_drift = 0.0;
  double max_overlap_drift = 0.0;
};

DriftReport conservation_report(const std::vector<DiagnosticsRecord>& trajectory);

// Least-squares slope of log(sup) vs log(t); returns (exponent, rms residual).
// Needs >= 5 samples at strictly increasing t > 0.
std::pair<double, double> decay_exponent_fit(
    const std::vector<std::pair<double, double>>& samples);

struct TruncationRow {
  int J = 0;
  double v = 0.0;          // speed
  double p = 0.0;          // gamma m v
  double rel_error = 0.0;  // |E_J(p) - E(p)| / E(p)
};

// Relative dispersion error of E_J against the exact symbol, evaluated in
// extended precision at p = gamma m v for each J <= j_max and each speed.
std::vector<TruncationRow> ej_truncation_report(int j_max, const std::vector<double>& speeds,
                                                const PhysicalConstants& consts);

// CSV emission, 17 significant digits, fixed column order.
void write_diagnostics_header(std::ostream& os, int orbital_count);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& rec);
void write_truncation_csv(std::ostream& os, const std::vector<TruncationRow>& rows);

std::string format_float(double v);  // shortest 17-significant-digit form

}  // namespace hosf
