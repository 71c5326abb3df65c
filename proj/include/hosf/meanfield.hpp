#pragma once

#include <vector>

#include "hosf/grid.hpp"

namespace hosf {

enum class ZeroModePolicy { zero, truncated };

// Spectral multiplier realizing convolution with 1/|x| on the periodic box.
// In 3D: 4*pi/|k|^2, zero mode per policy (`zero` gauges the mean value away;
// `truncated` uses the sphere-truncated kernel, zero mode 2*pi*r_cut^2, which
// removes periodic-image interaction for localized states).
// In 1D/2D the multiplier is the screened surrogate 1/(|k|^2 + mu^2) -- a test
// kernel, not a low-dimensional Coulomb analogue; every algebraic identity in
// this module is kernel-independent.
struct CoulombKernel {
  GridSpec grid;
  ZeroModePolicy policy = ZeroModePolicy::zero;
  double r_cut = 0.0;
  double screening_mu = 1.0;
  std::vector<double> multiplier;
};

// r_cut <= 0 selects 0.45 * min box length.
CoulombKernel make_coulomb_kernel(const GridSpec& grid,
                                  ZeroModePolicy policy = ZeroModePolicy::zero,
                                  double r_cut = 0.0, double screening_mu = 1.0);

// (1/|x|) * f evaluated spectrally; linear in f.
Field coulomb_convolve(const Field& f, const CoulombKernel& kernel);
RealField coulomb_convolve(const RealField& f, const CoulombKernel& kernel);

// T(phi1, phi2, phi3) = ((1/|x|) * (phi1 phi2)) phi3; trilinear, symmetric in
// the first two arguments.
Field trilinear_T(const Field& phi1, const Field& phi2, const Field& phi3,
                  const CoulombKernel& kernel);

// rho(x) = sum_k |psi_k(x)|^2.
RealField density_matrix_diagonal(const OrbitalSet& orbitals);

// H = kappa (1/|x|) * rho, identical for every orbital.
RealField hartree_potential(const OrbitalSet& orbitals, double kappa,
                            const CoulombKernel& kernel);

// Exchange term F(psi_k) = sum_{l != k} kappa ((1/|x|) * (conj(psi_l) psi_k)) psi_l.
// The l = k convention difference cancels against the Hartree self-term.
Field fock_apply(int k, const OrbitalSet& orbitals, double kappa,
                 const CoulombKernel& kernel);

// Dense coupling matrix C[k*N + l] = kappa (1/|x|) * (conj(psi_l) psi_k),
// Hermitian per node: C[k][l] = conj(C[l][k]). With include_self the (real)
// diagonal l = k entries are filled too; paired with the full-sum Hartree
// potential this realizes the self-interaction-free dynamics in which the
// l = k Hartree and exchange terms cancel. Without it the diagonal is zero,
// matching the fock_apply convention.
std::vector<Field> exchange_coupling(const OrbitalSet& orbitals, double kappa,
                                     const CoulombKernel& kernel, bool include_self = false);

}  // namespace hosf
