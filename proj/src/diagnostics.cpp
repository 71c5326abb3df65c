#include "hosf/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hosf/errors.hpp"

namespace hosf {

namespace {

double spectral_quadratic_form(const SpectralField& s, const std::vector<double>& weight) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    acc += weight[i] * std::norm(s.values[i]);
  }
  return acc;
}

Field complex_of(const RealField& f) {
  Field out = Field::zeros(f.grid);
  for (std::size_t i = 0; i < f.values.size(); ++i) out.values[i] = f.values[i];
  return out;
}

}  // namespace

EnergyBreakdown total_energy(const OrbitalSet& orbitals, const OperatorSpec& op,
                             const PotentialSpec& V, double kappa,
                             const CoulombKernel& kernel) {
  EnergyBreakdown e;
  if (orbitals.empty()) return e;
  const GridSpec& grid = orbitals.grid();
  if (!(grid == op.grid)) throw std::invalid_argument("total_energy: operator grid mismatch");
  if (!(grid == V.sampled.grid)) throw std::invalid_argument("total_energy: potential grid mismatch");

  for (const Field& psi : orbitals) {
    e.kinetic += spectral_quadratic_form(to_spectral(psi), op.symbol);
  }

  const RealField rho = density_matrix_diagonal(orbitals);
  if (V.kind != PotentialKind::none) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rho.values.size(); ++i) {
      acc += V.sampled.values[i] * rho.values[i];
    }
    e.external = acc * grid.cell_volume();
  }

  if (kappa != 0.0) {
    if (!(grid == kernel.grid)) throw std::invalid_argument("total_energy: kernel grid mismatch");
    e.direct = 0.5 * kappa * spectral_quadratic_form(to_spectral(complex_of(rho)), kernel.multiplier);
    // |rho(x,y)|^2 = sum_{a,b} g_ab(x) conj(g_ab(y)) with g_ab = conj(psi_a) psi_b;
    // the (a,b) and (b,a) terms contribute equally under a radial multiplier.
    const int n = orbitals.count();
    double ex = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        Field g = Field::zeros(grid);
        for (std::size_t i = 0; i < g.values.size(); ++i) {
          g.values[i] = std::conj(orbitals[a].values[i]) * orbitals[b].values[i];
        }
        const double term = spectral_quadratic_form(to_spectral(g), kernel.multiplier);
        ex += a == b ? term : 2.0 * term;
      }
    }
    e.exchange = 0.5 * kappa * ex;
  }

  e.total = e.kinetic + e.external + e.direct - e.exchange;
  return e;
}

DiagnosticsRecord evaluate_diagnostics(double time, const OrbitalSet& orbitals,
                                       const OperatorSpec& op, const PotentialSpec& V,
                                       double kappa, const CoulombKernel& kernel) {
  DiagnosticsRecord rec;
  rec.time = time;
  const int n = orbitals.count();
  rec.norms.resize(n);
  rec.overlap.resize(static_cast<std::size_t>(n) * n);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      rec.overlap[static_cast<std::size_t>(l) * n + k] = inner_product(orbitals[l], orbitals[k]);
    }
    rec.norms[l] = std::sqrt(std::abs(rec.overlap[static_cast<std::size_t>(l) * n + l].real()));
  }
  rec.energy = total_energy(orbitals, op, V, kappa, kernel);
  if (n > 0) {
    const std::size_t total = orbitals.grid().total();
    double sup = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += std::abs(orbitals[k].values[i]);
      sup = std::max(sup, s);
    }
    rec.sup_norm = sup;
  }
  return rec;
}

namespace {

double relative_drift(double now, double initial) {
  const double diff = std::abs(now - initial);
  const double scale = std::abs(initial);
  return scale > 1e-14 ? diff / scale : diff;
}

double relative_drift(cxd now, cxd initial) {
  const double diff = std::abs(now - initial);
  const double scale = std::abs(initial);
  return scale > 1e-14 ? diff / scale : diff;
}

}  // namespace

DriftReport conservation_report(const std::vector<DiagnosticsRecord>& trajectory) {
  if (trajectory.size() < 2) {
    throw std::invalid_argument("conservation_report: need at least two records");
  }
  const DiagnosticsRecord& first = trajectory.front();
  DriftReport rep;
  rep.norm_drift.assign(first.norms.size(), 0.0);
  rep.overlap_drift.assign(first.overlap.size(), 0.0);
  for (const DiagnosticsRecord& rec : trajectory) {
    for (std::size_t i = 0; i < first.norms.size(); ++i) {
      rep.norm_drift[i] = std::max(rep.norm_drift[i], relative_drift(rec.norms[i], first.norms[i]));
    }
    for (std::size_t i = 0; i < first.overlap.size(); ++i) {
      rep.overlap_drift[i] =
          std::max(rep.overlap_drift[i], relative_drift(rec.overlap[i], first.overlap[i]));
    }
    rep.energy_drift =
        std::max(rep.energy_drift, relative_drift(rec.energy.total, first.energy.total));
  }
  for (double d : rep.norm_drift) rep.max_norm_drift = std::max(rep.max_norm_drift, d);
  for (double d : rep.overlap_drift) rep.max_overlap_drift = std::max(rep.max_overlap_drift, d);
  return rep;
}

std::pair<double, double> decay_exponent_fit(
    const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 5) {
    throw std::invalid_argument("decay_exponent_fit: need at least 5 samples");
  }
  double prev = 0.0;
  for (const auto& [t, sup] : samples) {
    if (!(t > prev)) throw std::invalid_argument("decay_exponent_fit: t must be strictly increasing and > 0");
    if (!(sup > 0.0)) throw std::invalid_argument("decay_exponent_fit: sup values must be > 0");
    prev = t;
  }
  const std::size_t n = samples.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [t, sup] : samples) {
    const double x = std::log(t);
    const double y = std::log(sup);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double rss = 0.0;
  for (const auto& [t, sup] : samples) {
    const double r = std::log(sup) - (slope * std::log(t) + intercept);
    rss += r * r;
  }
  return {slope, std::sqrt(rss / n)};
}

std::vector<TruncationRow> ej_truncation_report(int j_max, const std::vector<double>& speeds,
                                                const PhysicalConstants& consts) {
  if (j_max < 1) throw std::invalid_argument("ej_truncation_report: j_max must be >= 1");
  for (double v : speeds) {
    if (!(v >= 0.0) || v >= consts.c) {
      throw std::invalid_argument("ej_truncation_report: speeds must satisfy 0 <= v < c");
    }
  }
  std::vector<TruncationRow> rows;
  rows.reserve(speeds.size() * static_cast<std::size_t>(j_max));
  const long double m = consts.mass;
  const long double c = consts.c;
  for (int J = 1; J <= j_max; ++J) {
    for (double v : speeds) {
      const long double beta = static_cast<long double>(v) / c;
      const long double gamma = 1.0L / std::sqrt(1.0L - beta * beta);
      const long double p = gamma * m * static_cast<long double>(v);
      const long double exact = symbol_relativistic<long double>(p, m, c);
      const long double approx = symbol_polynomial<long double>(J, p, m, c);
      TruncationRow row;
      row.J = J;
      row.v = v;
      row.p = static_cast<double>(p);
      row.rel_error = static_cast<double>(std::fabs(approx - exact) / exact);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_diagnostics_header(std::ostream& os, int orbital_count) {
  os << "time";
  for (int k = 1; k <= orbital_count; ++k) os << ",norm_" << k;
  for (int l = 1; l <= orbital_count; ++l) {
    for (int k = 1; k <= orbital_count; ++k) {
      os << ",overlap_re_" << l << "_" << k << ",overlap_im_" << l << "_" << k;
    }
  }
  os << ",kinetic,external,direct,exchange,total,sup_norm\n";
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& rec) {
  os << format_float(rec.time);
  for (double n : rec.norms) os << ',' << format_float(n);
  for (cxd o : rec.overlap) {
    os << ',' << format_float(o.real()) << ',' << format_float(o.imag());
  }
  os << ',' << format_float(rec.energy.kinetic) << ',' << format_float(rec.energy.external)
     << ',' << format_float(rec.energy.direct) << ',' << format_float(rec.energy.exchange)
     << ',' << format_float(rec.energy.total) << ',' << format_float(rec.sup_norm) << '\n';
}

void write_truncation_csv(std::ostream& os, const std::vector<TruncationRow>& rows) {
  os << "J,v,p,rel_error\n";
  for (const TruncationRow& r : rows) {
    os << r.J << ',' << format_float(r.v) << ',' << format_float(r.p) << ','
       << format_float(r.rel_error) << '\n';
  }
}

}  // namespace hosf
