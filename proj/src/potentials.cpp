#include "hosf/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hosf/errors.hpp"

namespace hosf {

RealField sample_coulomb(double alpha, double epsilon, const GridSpec& grid,
                         const std::array<double, 3>& center) {
  grid.validate();
  if (alpha < 0.0) throw config_error("coulomb potential: alpha must be >= 0");
  if (epsilon < 0.0) throw config_error("coulomb potential: epsilon must be >= 0");
  const std::vector<double> r2 = min_image_radius_sq(grid, center);
  if (epsilon == 0.0) {
    const double tol = 1e-12 * grid.spacing(0);
    for (double v : r2) {
      if (v < tol * tol) {
        throw config_error(
            "coulomb potential: a grid node coincides with the center; "
            "use epsilon > 0 or offset the center");
      }
    }
  }
  RealField f = RealField::zeros(grid);
  const double e2 = epsilon * epsilon;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    f.values[i] = alpha / std::sqrt(r2[i] + e2);
  }
  return f;
}

RealField sample_well(double depth, double radius, const GridSpec& grid,
                      const std::array<double, 3>& center) {
  grid.validate();
  double half_box = grid.length[0];
  for (int a = 0; a < grid.dim; ++a) half_box = std::min(half_box, grid.length[a]);
  half_box *= 0.5;
  if (!(radius < half_box)) {
    throw config_error("well potential: radius must be below half the box");
  }
  if (radius < 0.0) throw config_error("well potential: radius must be >= 0");
  const std::vector<double> r2 = min_image_radius_sq(grid, center);
  RealField f = RealField::zeros(grid);
  const double rad2 = radius * radius;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    f.values[i] = r2[i] < rad2 ? -depth : 0.0;
  }
  return f;
}

RealField sample_linear(const std::array<double, 3>& gradient, const GridSpec& grid) {
  grid.validate();
  RealField f = RealField::zeros(grid);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double v = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      v += gradient[a] * grid.coordinate(a, grid.axis_index(i, a));
    }
    f.values[i] = v;
  }
  return f;
}

PotentialSpec make_potential_none(const GridSpec& grid) {
  PotentialSpec p;
  p.kind = PotentialKind::none;
  p.sampled = RealField::zeros(grid);
  return p;
}

PotentialSpec make_potential_well(const GridSpec& grid, double depth, double radius,
                                  const std::array<double, 3>& center) {
  PotentialSpec p;
  p.kind = PotentialKind::well;
  p.depth = depth;
  p.radius = radius;
  p.center = center;
  p.sampled = sample_well(depth, radius, grid, center);
  return p;
}

PotentialSpec make_potential_linear(const GridSpec& grid,
                                    const std::array<double, 3>& gradient) {
  PotentialSpec p;
  p.kind = PotentialKind::linear;
  p.gradient = gradient;
  p.sampled = sample_linear(gradient, grid);
  return p;
}

PotentialSpec make_potential_coulomb(const GridSpec& grid, double alpha, double epsilon,
                                     const std::array<double, 3>& center,
                                     double split_radius) {
  if (!(split_radius > 0.0)) {
    throw config_error("coulomb potential: split_radius must be > 0");
  }
  PotentialSpec p;
  p.kind = PotentialKind::coulomb;
  p.alpha = alpha;
  p.epsilon = epsilon;
  p.center = center;
  p.split_radius = split_radius;
  p.sampled = sample_coulomb(alpha, epsilon, grid, center);
  return p;
}

std::pair<RealField, RealField> split_coulomb(const PotentialSpec& spec) {
  if (spec.kind != PotentialKind::coulomb) {
    throw std::invalid_argument("split_coulomb: potential is not coulomb");
  }
  const GridSpec& grid = spec.sampled.grid;
  const std::vector<double> r2 = min_image_radius_sq(grid, spec.center);
  RealField v1 = RealField::zeros(grid);
  RealField v2 = RealField::zeros(grid);
  const double cut2 = spec.split_radius * spec.split_radius;
  for (std::size_t i = 0; i < r2.size(); ++i) {
    if (r2[i] < cut2) {
      v1.values[i] = spec.sampled.values[i];
    } else {
      v2.values[i] = spec.sampled.values[i];
    }
  }
  return {std::move(v1), std::move(v2)};
}

}  // namespace hosf
