#include "hosf/coefficients.hpp"

#include <limits>
#include <stdexcept>

#include "hosf/errors.hpp"

namespace hosf {

namespace {

bigint factorial(int n) {
  bigint f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Rational reduced(bigint num, bigint den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const bigint g = boost::multiprecision::gcd(num < 0 ? bigint(-num) : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

}  // namespace

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0)) throw config_error("constants.hbar must be > 0");
  if (!(mass > 0.0)) throw config_error("constants.mass must be > 0");
  if (!(c > 0.0)) throw config_error("constants.c must be > 0");
  if (!(kappa >= 0.0)) throw config_error("constants.kappa must be >= 0");
  if (!(alpha_coulomb >= 0.0)) throw config_error("constants.alpha_coulomb must be >= 0");
}

double Rational::to_double() const {
  return num.convert_to<double>() / den.convert_to<double>();
}

std::string Rational::str() const { return num.str() + "/" + den.str(); }

Rational alpha_coeff(int j) {
  if (j < 0) throw std::invalid_argument("alpha_coeff: j must be >= 0");
  if (j == 0) return Rational{-1, 1};  // special-cased: the factorial formula is undefined here
  const bigint num = factorial(2 * j - 2);
  const bigint den = factorial(j) * factorial(j - 1) * (bigint(1) << (2 * j - 1));
  return reduced(num, den);
}

double alpha_coeff_double(int j) { return alpha_coeff(j).to_double(); }

double symbol_polynomial(int J, double p, const PhysicalConstants& consts) {
  return symbol_polynomial<double>(J, p, consts.mass, consts.c);
}

double symbol_relativistic(double p, const PhysicalConstants& consts) {
  return symbol_relativistic<double>(p, consts.mass, consts.c);
}

bool validity_speed_check(double v, const PhysicalConstants& consts) {
  if (v < 0.0) throw std::invalid_argument("validity_speed_check: v must be >= 0");
  return v < consts.c / std::sqrt(2.0);
}

double admissible_pair_q(double r, int J) {
  if (J < 2) throw std::invalid_argument("admissible_pair_q: J must be >= 2");
  if (!(r >= 2.0)) throw std::invalid_argument("admissible_pair_q: r must be in [2, inf]");
  const double n = 3.0 / J;
  if (std::isinf(r)) return 4.0 * J / 3.0;
  if (r == 2.0) return std::numeric_limits<double>::infinity();
  return 2.0 / (n * (0.5 - 1.0 / r));
}

namespace {

OperatorSpec build_operator(const GridSpec& grid, int J, SymbolKind kind,
                            const PhysicalConstants& consts, bool subtract_rest) {
  grid.validate();
  consts.validate();
  if (kind != SymbolKind::relativistic && J < 1) {
    throw config_error("operator.J must be >= 1");
  }
  OperatorSpec op;
  op.J = J;
  op.kind = kind;
  op.rest_energy_subtracted = subtract_rest;
  op.grid = grid;
  const std::vector<double> k2 = squared_wavenumbers(grid);
  op.symbol.resize(k2.size());
  const double rest = consts.mass * consts.c * consts.c;
  switch (kind) {
    case SymbolKind::polynomial: {
      // Exact rationals converted to double once, here, then Horner in p^2.
      std::vector<double> coeff(static_cast<std::size_t>(J) + 1);
      for (int j = 1; j <= J; ++j) {
        const double a = alpha_coeff_double(j);
        coeff[j] = (j % 2 == 1) ? a : -a;
      }
      const double inv_mc2 = 1.0 / (consts.mass * consts.c * consts.mass * consts.c);
      for (std::size_t i = 0; i < k2.size(); ++i) {
        const double u2 = consts.hbar * consts.hbar * k2[i] * inv_mc2;
        double s = 0.0;
        for (int j = J; j >= 1; --j) s = (s + coeff[j]) * u2;
        op.symbol[i] = rest * s + (subtract_rest ? 0.0 : rest);
      }
      break;
    }
    case SymbolKind::relativistic: {
      for (std::size_t i = 0; i < k2.size(); ++i) {
        const double p = consts.hbar * std::sqrt(k2[i]);
        op.symbol[i] =
            symbol_relativistic(p, consts) - (subtract_rest ? rest : 0.0);
      }
      break;
    }
    case SymbolKind::monomial: {
      const double scale = alpha_coeff_double(J) * std::pow(consts.hbar, 2 * J) /
                           (std::pow(consts.mass, 2 * J - 1) * std::pow(consts.c, 2 * J - 2));
      for (std::size_t i = 0; i < k2.size(); ++i) {
        op.symbol[i] = scale * std::pow(k2[i], J);
      }
      break;
    }
  }
  return op;
}

}  // namespace

OperatorSpec make_operator(const GridSpec& grid, int J, const PhysicalConstants& consts,
                           bool subtract_rest_energy) {
  return build_operator(grid, J, SymbolKind::polynomial, consts, subtract_rest_energy);
}

OperatorSpec make_relativistic_operator(const GridSpec& grid, const PhysicalConstants& consts,
                                        bool subtract_rest_energy) {
  return build_operator(grid, 1, SymbolKind::relativistic, consts, subtract_rest_energy);
}

OperatorSpec make_monomial_operator(const GridSpec& grid, int J,
                                    const PhysicalConstants& consts) {
  return build_operator(grid, J, SymbolKind::monomial, consts, true);
}

}  // namespace hosf
