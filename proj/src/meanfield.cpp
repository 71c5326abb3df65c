#include "hosf/meanfield.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hosf/errors.hpp"
#include "hosf/parallel.hpp"

namespace hosf {

namespace {

void require_kernel_grid(const GridSpec& g, const CoulombKernel& kernel, const char* who) {
  if (!(g == kernel.grid)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

}  // namespace

CoulombKernel make_coulomb_kernel(const GridSpec& grid, ZeroModePolicy policy,
                                  double r_cut, double screening_mu) {
  grid.validate();
  CoulombKernel kernel;
  kernel.grid = grid;
  kernel.policy = policy;
  if (r_cut <= 0.0) {
    double min_len = grid.length[0];
    for (int a = 0; a < grid.dim; ++a) min_len = std::min(min_len, grid.length[a]);
    r_cut = 0.45 * min_len;
  }
  kernel.r_cut = r_cut;
  kernel.screening_mu = screening_mu;

  const std::vector<double> k2 = squared_wavenumbers(grid);
  kernel.multiplier.resize(k2.size());
  constexpr double four_pi = 4.0 * std::numbers::pi;
  if (grid.dim == 3) {
    for (std::size_t i = 0; i < k2.size(); ++i) {
      if (k2[i] == 0.0) {
        kernel.multiplier[i] = policy == ZeroModePolicy::zero
                                   ? 0.0
                                   : 2.0 * std::numbers::pi * r_cut * r_cut;
      } else if (policy == ZeroModePolicy::zero) {
        kernel.multiplier[i] = four_pi / k2[i];
      } else {
        kernel.multiplier[i] = four_pi * (1.0 - std::cos(std::sqrt(k2[i]) * r_cut)) / k2[i];
      }
    }
  } else {
    if (!(screening_mu > 0.0)) {
      throw config_error("kernel.screening_mu must be > 0 in dimensions 1 and 2");
    }
    const double mu2 = screening_mu * screening_mu;
    for (std::size_t i = 0; i < k2.size(); ++i) {
      kernel.multiplier[i] = 1.0 / (k2[i] + mu2);
    }
  }
  return kernel;
}

Field coulomb_convolve(const Field& f, const CoulombKernel& kernel) {
  require_kernel_grid(f.grid, kernel, "coulomb_convolve");
  SpectralField s = to_spectral(f);
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] *= kernel.multiplier[i];
  return to_physical(s);
}

RealField coulomb_convolve(const RealField& f, const CoulombKernel& kernel) {
  require_kernel_grid(f.grid, kernel, "coulomb_convolve");
  Field tmp = Field::zeros(f.grid);
  for (std::size_t i = 0; i < f.values.size(); ++i) tmp.values[i] = f.values[i];
  const Field conv = coulomb_convolve(tmp, kernel);
  RealField out = RealField::zeros(f.grid);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = conv.values[i].real();
  return out;
}

Field trilinear_T(const Field& phi1, const Field& phi2, const Field& phi3,
                  const CoulombKernel& kernel) {
  if (!(phi1.grid == phi2.grid) || !(phi1.grid == phi3.grid)) {
    throw std::invalid_argument("trilinear_T: grid mismatch");
  }
  Field prod = Field::zeros(phi1.grid);
  for (std::size_t i = 0; i < prod.values.size(); ++i) {
    prod.values[i] = phi1.values[i] * phi2.values[i];
  }
  Field conv = coulomb_convolve(prod, kernel);
  for (std::size_t i = 0; i < conv.values.size(); ++i) conv.values[i] *= phi3.values[i];
  return conv;
}

RealField density_matrix_diagonal(const OrbitalSet& orbitals) {
  if (orbitals.empty()) throw std::invalid_argument("density_matrix_diagonal: empty orbital set");
  RealField rho = RealField::zeros(orbitals.grid());
  for (const Field& psi : orbitals) {
    for (std::size_t i = 0; i < rho.values.size(); ++i) {
      rho.values[i] += std::norm(psi.values[i]);
    }
  }
  return rho;
}

RealField hartree_potential(const OrbitalSet& orbitals, double kappa,
                            const CoulombKernel& kernel) {
  if (orbitals.empty()) throw std::invalid_argument("hartree_potential: empty orbital set");
  require_kernel_grid(orbitals.grid(), kernel, "hartree_potential");
  RealField h = coulomb_convolve(density_matrix_diagonal(orbitals), kernel);
  for (auto& v : h.values) v *= kappa;
  return h;
}

Field fock_apply(int k, const OrbitalSet& orbitals, double kappa,
                 const CoulombKernel& kernel) {
  if (k < 0 || k >= orbitals.count()) {
    throw std::invalid_argument("fock_apply: orbital index out of range");
  }
  require_kernel_grid(orbitals.grid(), kernel, "fock_apply");
  Field out = Field::zeros(orbitals.grid());
  for (int l = 0; l < orbitals.count(); ++l) {
    if (l == k) continue;  // empty sum for N = 1
    Field g = Field::zeros(orbitals.grid());
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      g.values[i] = std::conj(orbitals[l].values[i]) * orbitals[k].values[i];
    }
    const Field w = coulomb_convolve(g, kernel);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      out.values[i] += kappa * w.values[i] * orbitals[l].values[i];
    }
  }
  return out;
}

std::vector<Field> exchange_coupling(const OrbitalSet& orbitals, double kappa,
                                     const CoulombKernel& kernel, bool include_self) {
  require_kernel_grid(orbitals.grid(), kernel, "exchange_coupling");
  const int n = orbitals.count();
  std::vector<Field> coupling(static_cast<std::size_t>(n) * n);
  for (auto& f : coupling) f = Field::zeros(orbitals.grid());

  // Pairs (a <= b when the diagonal is requested); the convolutions are
  // independent.
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a) {
    for (int b = include_self ? a : a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }
  parallel_for(pairs.size(), [&](std::size_t idx) {
    const auto [a, b] = pairs[idx];
    Field g = Field::zeros(orbitals.grid());
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      g.values[i] = std::conj(orbitals[a].values[i]) * orbitals[b].values[i];
    }
    Field w = coulomb_convolve(g, kernel);
    for (auto& v : w.values) v *= kappa;
    // C[b][a] = kappa conv(conj(psi_a) psi_b), C[a][b] its conjugate.
    Field& cba = coupling[static_cast<std::size_t>(b) * n + a];
    if (a == b) {
      for (std::size_t i = 0; i < w.values.size(); ++i) {
        cba.values[i] = w.values[i].real();  // exactly hermitian diagonal
      }
      return;
    }
    Field& cab = coupling[static_cast<std::size_t>(a) * n + b];
    for (std::size_t i = 0; i < w.values.size(); ++i) {
      cba.values[i] = w.values[i];
      cab.values[i] = std::conj(w.values[i]);
    }
  });
  return coupling;
}

}  // namespace hosf
