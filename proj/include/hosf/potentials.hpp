#pragma once

#include <array>
#include <utility>

#include "hosf/grid.hpp"

namespace hosf {

enum class PotentialKind { none, well, linear, coulomb };

// External potential: construction parameters plus the sampled real field
// (energy units). Sampled values are finite everywhere by construction.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::none;
  // well
  double depth = 0.0;
  double radius = 0.0;
  // linear
  std::array<double, 3> gradient{0.0, 0.0, 0.0};
  // coulomb
  double alpha = 0.0;
  double epsilon = 0.0;
  double split_radius = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};

  RealField sampled;
};

// Soft-core Coulomb alpha / sqrt(|x-center|^2 + eps^2) with minimum-image
// distances. eps = 0 gives the exact singular sampling and requires that no
// grid node coincides with the center.
RealField sample_coulomb(double alpha, double epsilon, const GridSpec& grid,
                         const std::array<double, 3>& center = {0.0, 0.0, 0.0});

// Spherical well: -depth for |x-center| < radius (minimum image), 0 outside.
// radius must stay below half the box.
RealField sample_well(double depth, double radius, const GridSpec& grid,
                      const std::array<double, 3>& center = {0.0, 0.0, 0.0});

// Linear ramp g.x on the centered fundamental domain. The periodic jump at
// the box edge is an accepted artifact; keep mass away from the boundary.
RealField sample_linear(const std::array<double, 3>& gradient, const GridSpec& grid);

PotentialSpec make_potential_none(const GridSpec& grid);
PotentialSpec make_potential_well(const GridSpec& grid, double depth, double radius,
                                  const std::array<double, 3>& center = {0.0, 0.0, 0.0});
PotentialSpec make_potential_linear(const GridSpec& grid,
                                    const std::array<double, 3>& gradient);
PotentialSpec make_potential_coulomb(const GridSpec& grid, double alpha, double epsilon,
                                     const std::array<double, 3>& center = {0.0, 0.0, 0.0},
                                     double split_radius = 1.0);

// Splits a sampled Coulomb potential into the compactly supported singular
// part V1 = V * 1_{|x-center| < cut} and the bounded remainder V2 = V - V1,
// so V1 + V2 == V pointwise exactly and sup|V2| <= alpha/cut.
std::pair<RealField, RealField> split_coulomb(const PotentialSpec& spec);

}  // namespace hosf
