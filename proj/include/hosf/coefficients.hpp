#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <string>
#include <vector>

#include "hosf/grid.hpp"

namespace hosf {

using bigint = boost::multiprecision::cpp_int;

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
  double c = 1.0;
  double kappa = 0.0;          // mean-field coupling, >= 0 (0 switches it off)
  double alpha_coulomb = 0.0;  // external Coulomb strength, >= 0

  void validate() const;  // throws config_error
};

// Exact fraction, reduced, denominator > 0.
struct Rational {
  bigint num = 0;
  bigint den = 1;

  double to_double() const;
  std::string str() const;  // "num/den"
  bool operator==(const Rational&) const = default;
};

// Kinetic expansion coefficient: alpha(0) = -1 by definition, and for j >= 1
//   alpha(j) = (2j-2)! / (j! (j-1)! 2^(2j-1)),
// computed in exact integer arithmetic and reduced.
Rational alpha_coeff(int j);
double alpha_coeff_double(int j);

// Order-J kinetic energy as a function of momentum magnitude p:
//   E_J(p) = m c^2 (1 + sum_{j=1..J} (-1)^(j+1) alpha(j) (p/(m c))^(2j)).
template <typename Real>
Real symbol_polynomial(int J, Real p, Real mass, Real c) {
  const Real u2 = (p / (mass * c)) * (p / (mass * c));
  Real sum = 1;
  Real u2j = 1;
  for (int j = 1; j <= J; ++j) {
    u2j *= u2;
    const Real term = static_cast<Real>(alpha_coeff_double(j)) * u2j;
    sum += (j % 2 == 1) ? term : -term;
  }
  return mass * c * c * sum;
}
double symbol_polynomial(int J, double p, const PhysicalConstants& consts);

// Exact relativistic energy E(p) = sqrt(p^2 c^2 + m^2 c^4).
template <typename Real>
Real symbol_relativistic(Real p, Real mass, Real c) {
  using std::sqrt;
  return sqrt(p * p * c * c + mass * mass * c * c * c * c);
}
double symbol_relativistic(double p, const PhysicalConstants& consts);

// True iff v lies strictly inside the series-validity region v < c/sqrt(2).
// Pure predicate; nothing is enforced.
bool validity_speed_check(double v, const PhysicalConstants& consts);

// Solves 2/q = n (1/2 - 1/r) with effective dimension n = 3/J.
// r in [2, inf] (r = infinity allowed); returns q, infinite for r = 2.
double admissible_pair_q(double r, int J);

enum class SymbolKind { polynomial, relativistic, monomial };

// A kinetic operator diagonal in Fourier space: h(k) per flat mode of `grid`.
// The stored symbol already reflects `rest_energy_subtracted` (subtracting
// m c^2 removes a global phase and nothing else, but keeps step phases small).
struct OperatorSpec {
  int J = 1;
  SymbolKind kind = SymbolKind::polynomial;
  bool rest_energy_subtracted = true;
  GridSpec grid;
  std::vector<double> symbol;
};

OperatorSpec make_operator(const GridSpec& grid, int J, const PhysicalConstants& consts,
                           bool subtract_rest_energy = true);
OperatorSpec make_relativistic_operator(const GridSpec& grid, const PhysicalConstants& consts,
                                        bool subtract_rest_energy = true);
// Single-term symbol alpha(J) hbar^(2J) |k|^(2J) / (m^(2J-1) c^(2J-2)); the
// verification instrument for dispersive-decay measurements, not a physical model.
OperatorSpec make_monomial_operator(const GridSpec& grid, int J,
                                    const PhysicalConstants& consts);

}  // namespace hosf
