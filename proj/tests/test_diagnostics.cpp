#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <sstream>

#include "hosf/diagnostics.hpp"
#include "hosf/scenarios.hpp"
#include "oracles.hpp"

using namespace hosf;

namespace {

Field random_field(const GridSpec& g, std::uint32_t seed) {
  Field f = Field::zeros(g);
  f.values = oracles::random_complex(g.total(), seed);
  return f;
}

OrbitalSet random_orbitals(const GridSpec& g, int count, std::uint32_t seed) {
  OrbitalSet set;
  for (int k = 0; k < count; ++k) set.push_back(random_field(g, seed + 1000u * k));
  return set;
}

}  // namespace

TEST_CASE("energy of zero orbitals vanishes componentwise") {
  const GridSpec g = make_grid(1, 64, 10.0);
  PhysicalConstants consts;
  const OperatorSpec op = make_operator(g, 1, consts);
  const PotentialSpec v = make_potential_well(g, 1.0, 2.0);
  const CoulombKernel kernel = make_coulomb_kernel(g);
  OrbitalSet zeros;
  zeros.push_back(Field::zeros(g));
  const EnergyBreakdown e = total_energy(zeros, op, v, 1.0, kernel);
  CHECK(e.kinetic == 0.0);
  CHECK(e.external == 0.0);
  CHECK(e.direct == 0.0);
  CHECK(e.exchange == 0.0);
  CHECK(e.total == 0.0);
}

TEST_CASE("single orbital: exchange equals direct exactly") {
  const GridSpec g = make_grid(1, 64, 10.0);
  PhysicalConstants consts;
  const OperatorSpec op = make_operator(g, 1, consts);
  const PotentialSpec none = make_potential_none(g);
  const CoulombKernel kernel = make_coulomb_kernel(g);
  OrbitalSet one;
  one.push_back(random_field(g, 3));
  const EnergyBreakdown e = total_energy(one, op, none, 0.8, kernel);
  CHECK(e.direct > 0.0);
  CHECK(e.exchange == doctest::Approx(e.direct).epsilon(1e-14));
  CHECK(e.total == doctest::Approx(e.kinetic).epsilon(1e-12));
}

TEST_CASE("plane wave is a kinetic eigenfunction") {
  const GridSpec g = make_grid(1, 64, 10.0);
  PhysicalConstants consts;
  const OperatorSpec op = make_operator(g, 3, consts, /*subtract=*/false);
  const PotentialSpec none = make_potential_none(g);
  const CoulombKernel kernel = make_coulomb_kernel(g);
  OrbitalSet set;
  set.push_back(plane_wave(g, {5, 0, 0}));
  const EnergyBreakdown e = total_energy(set, op, none, 0.0, kernel);
  CHECK(e.total == doctest::Approx(op.symbol[5]).epsilon(1e-12));
}

TEST_CASE("J = 1 kinetic energy equals the spectral-gradient form") {
  const GridSpec g = make_grid(1, 128, 17.0);
  PhysicalConstants consts;
  consts.hbar = 0.9;
  consts.mass = 1.7;
  const OperatorSpec op = make_operator(g, 1, consts);  // rest energy subtracted
  const PotentialSpec none = make_potential_none(g);
  const CoulombKernel kernel = make_coulomb_kernel(g);
  OrbitalSet set;
  set.push_back(random_field(g, 5));
  const EnergyBreakdown e = total_energy(set, op, none, 0.0, kernel);

  // hbar^2/(2m) ||grad psi||^2 with the gradient applied spectrally
  SpectralField s = to_spectral(set[0]);
  double grad2 = 0.0;
  for (int m = 0; m < g.n; ++m) {
    const double k = g.wavenumber(0, m);
    grad2 += k * k * std::norm(s.values[m]);
  }
  const double expect = consts.hbar * consts.hbar / (2.0 * consts.mass) * grad2;
  CHECK(e.kinetic == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("exchange never exceeds direct under the truncated kernel") {
  std::mt19937 rng(17);
  const GridSpec g = make_grid(1, 64, 10.0);
  const CoulombKernel kernel = make_coulomb_kernel(g, ZeroModePolicy::truncated);
  PhysicalConstants consts;
  const OperatorSpec op = make_operator(g, 1, consts);
  const PotentialSpec none = make_potential_none(g);
  for (int trial = 0; trial < 50; ++trial) {
    const int count = 1 + static_cast<int>(rng() % 3);
    const OrbitalSet set = random_orbitals(g, count, rng());
    const EnergyBreakdown e = total_energy(set, op, none, 1.0, kernel);
    CHECK(e.exchange <= e.direct + 1e-10 * std::abs(e.direct));
    CHECK(e.exchange >= 0.0);
    CHECK(e.direct >= 0.0);
  }
}

TEST_CASE("pair energies match a brute-force real-space double sum on a tiny grid") {
  const GridSpec g = make_grid(1, 16, 4.0);
  const double mu = 1.0, kappa = 1.3;
  const CoulombKernel kernel = make_coulomb_kernel(g, ZeroModePolicy::zero, 0.0, mu);
  PhysicalConstants consts;
  const OperatorSpec op = make_operator(g, 1, consts);
  const PotentialSpec none = make_potential_none(g);
  const OrbitalSet set = random_orbitals(g, 2, 23);
  const EnergyBreakdown e = total_energy(set, op, none, kappa, kernel);

  // synthesize the periodized kernel by an explicit mode sum
  std::vector<double> kper(g.total());
  for (int d = 0; d < g.n; ++d) {
    double acc = 0.0;
    for (int m = 0; m < g.n; ++m) {
      const double k = g.wavenumber(0, m);
      acc += std::cos(k * d * g.spacing(0)) / (k * k + mu * mu);
    }
    kper[d] = acc / g.volume();
  }
  const double dv = g.cell_volume();

  const RealField rho = density_matrix_diagonal(set);
  double direct = 0.0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      direct += rho.values[i] * kper[(i - j + g.n) % g.n] * rho.values[j];
    }
  }
  direct *= 0.5 * kappa * dv * dv;
  CHECK(std::abs(direct - e.direct) < 1e-8 * std::abs(direct));

  double exchange = 0.0;
  for (int a = 0; a < set.count(); ++a) {
    for (int b = 0; b < set.count(); ++b) {
      for (int i = 0; i < g.n; ++i) {
        const cxd gi = std::conj(set[a].values[i]) * set[b].values[i];
        for (int j = 0; j < g.n; ++j) {
          const cxd gj = std::conj(set[a].values[j]) * set[b].values[j];
          exchange += (gi * std::conj(gj)).real() * kper[(i - j + g.n) % g.n];
        }
      }
    }
  }
  exchange *= 0.5 * kappa * dv * dv;
  CHECK(std::abs(exchange - e.exchange) < 1e-8 * std::abs(exchange));
}

TEST_CASE("pair energies match the brute-force double sum in 2d as well") {
  const GridSpec g = make_grid(2, 8, 4.0);
  const double mu = 1.3, kappa = 0.7;
  const CoulombKernel kernel = make_coulomb_kernel(g, ZeroModePolicy::zero, 0.0, mu);
  PhysicalConstants consts;
  const OperatorSpec op = make_operator(g, 1, consts);
  const PotentialSpec none = make_potential_none(g);
  const OrbitalSet set = random_orbitals(g, 2, 29);
  const EnergyBreakdown e = total_energy(set, op, none, kappa, kernel);

  // periodized kernel over displacement indices (d0, d1)
  std::vector<double> kper(g.total());
  for (int d0 = 0; d0 < g.n; ++d0) {
    for (int d1 = 0; d1 < g.n; ++d1) {
      double acc = 0.0;
      for (int m0 = 0; m0 < g.n; ++m0) {
        for (int m1 = 0; m1 < g.n; ++m1) {
          const double k0 = g.wavenumber(0, m0);
          const double k1 = g.wavenumber(1, m1);
          acc += std::cos(k0 * d0 * g.spacing(0) + k1 * d1 * g.spacing(1)) /
                 (k0 * k0 + k1 * k1 + mu * mu);
        }
      }
      kper[static_cast<std::size_t>(d0) * g.n + d1] = acc / g.volume();
    }
  }
  auto kper_at = [&](std::size_t i, std::size_t j) {
    const int d0 = (g.axis_index(i, 0) - g.axis_index(j, 0) + g.n) % g.n;
    const int d1 = (g.axis_index(i, 1) - g.axis_index(j, 1) + g.n) % g.n;
    return kper[static_cast<std::size_t>(d0) * g.n + d1];
  };

  const double dv = g.cell_volume();
  const RealField rho = density_matrix_diagonal(set);
  double direct = 0.0;
  for (std::size_t i = 0; i < g.total(); ++i) {
    for (std::size_t j = 0; j < g.total(); ++j) {
      direct += rho.values[i] * kper_at(i, j) * rho.values[j];
    }
  }
  direct *= 0.5 * kappa * dv * dv;
  CHECK(std::abs(direct - e.direct) < 1e-8 * std::abs(direct));

  double exchange = 0.0;
  for (int a = 0; a < set.count(); ++a) {
    for (int b = 0; b < set.count(); ++b) {
      for (std::size_t i = 0; i < g.total(); ++i) {
        const cxd gi = std::conj(set[a].values[i]) * set[b].values[i];
        for (std::size_t j = 0; j < g.total(); ++j) {
          const cxd gj = std::conj(set[a].values[j]) * set[b].values[j];
          exchange += (gi * std::conj(gj)).real() * kper_at(i, j);
        }
      }
    }
  }
  exchange *= 0.5 * kappa * dv * dv;
  CHECK(std::abs(exchange - e.exchange) < 1e-8 * std::abs(exchange));
}

TEST_CASE("diagnostics record: hermitian overlap matrix and sup norm") {
  const GridSpec g = make_grid(1, 64, 10.0);
  PhysicalConstants consts;
  const OperatorSpec op = make_operator(g, 1, consts);
  const PotentialSpec none = make_potential_none(g);
  const CoulombKernel kernel = make_coulomb_kernel(g);
  const OrbitalSet set = random_orbitals(g, 3, 31);
  const DiagnosticsRecord rec = evaluate_diagnostics(0.5, set, op, none, 1.0, kernel);
  const int n = set.count();
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      CHECK(std::abs(rec.overlap[l * n + k] - std::conj(rec.overlap[k * n + l])) < 1e-12);
    }
    CHECK(rec.norms[l] == doctest::Approx(l2_norm(set[l])).epsilon(1e-13));
  }
  double sup = 0.0;
  for (std::size_t i = 0; i < g.total(); ++i) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += std::abs(set[k].values[i]);
    sup = std::max(sup, s);
  }
  CHECK(rec.sup_norm == doctest::Approx(sup));
}

TEST_CASE("conservation report") {
  DiagnosticsRecord a;
  a.time = 0.0;
  a.norms = {1.0, 2.0};
  a.overlap = {cxd(1.0, 0.0), cxd(0.0, 0.0), cxd(0.0, 0.0), cxd(4.0, 0.0)};
  a.energy.total = 5.0;
  DiagnosticsRecord b = a;
  b.time = 1.0;

  SUBCASE("constant trajectory has zero drift") {
    const DriftReport rep = conservation_report({a, b});
    CHECK(rep.max_norm_drift == 0.0);
    CHECK(rep.max_overlap_drift == 0.0);
    CHECK(rep.energy_drift == 0.0);
  }

  SUBCASE("relative drift with absolute fallback near zero") {
    b.norms[0] = 1.1;                // relative 0.1
    b.overlap[1] = cxd(1e-13, 0.0);  // initial is 0: absolute fallback
    const DriftReport rep = conservation_report({a, b});
    CHECK(rep.norm_drift[0] == doctest::Approx(0.1));
    CHECK(rep.overlap_drift[1] == doctest::Approx(1e-13));
  }

  SUBCASE("needs two records") {
    CHECK_THROWS_AS(conservation_report({a}), std::invalid_argument);
  }
}

TEST_CASE("decay exponent fit") {
  SUBCASE("exact power law is recovered to round-off") {
    std::vector<std::pair<double, double>> samples;
    for (double t = 1.0; t <= 32.0; t *= 2.0) {
      samples.emplace_back(t, 3.7 * std::pow(t, -0.5));
    }
    const auto [slope, residual] = decay_exponent_fit(samples);
    CHECK(std::abs(slope + 0.5) < 1e-12);
    CHECK(residual < 1e-12);
  }

  SUBCASE("input validation") {
    std::vector<std::pair<double, double>> too_few = {
        {1.0, 1.0}, {2.0, 0.5}, {3.0, 0.3}, {4.0, 0.2}};
    CHECK_THROWS_AS(decay_exponent_fit(too_few), std::invalid_argument);
    std::vector<std::pair<double, double>> not_increasing = {
        {1.0, 1.0}, {2.0, 0.5}, {2.0, 0.3}, {4.0, 0.2}, {5.0, 0.1}};
    CHECK_THROWS_AS(decay_exponent_fit(not_increasing), std::invalid_argument);
    std::vector<std::pair<double, double>> nonpositive = {
        {1.0, 1.0}, {2.0, 0.5}, {3.0, 0.0}, {4.0, 0.2}, {5.0, 0.1}};
    CHECK_THROWS_AS(decay_exponent_fit(nonpositive), std::invalid_argument);
  }
}

TEST_CASE("truncation error table") {
  PhysicalConstants consts;
  SUBCASE("zero speed rows are exactly zero") {
    const auto rows = ej_truncation_report(3, {0.0}, consts);
    REQUIRE(rows.size() == 3);
    for (const TruncationRow& r : rows) CHECK(r.rel_error == 0.0);
  }

  SUBCASE("0.1c anchor: two orders of magnitude between J = 1 and J = 2") {
    const auto rows = ej_truncation_report(2, {0.1 * consts.c}, consts);
    REQUIRE(rows.size() == 2);
    const double ratio = rows[0].rel_error / rows[1].rel_error;
    CHECK(ratio > 100.0);
    CHECK(ratio < 400.0);
  }

  SUBCASE("errors decrease strictly in J below the validity speed") {
    for (double v : {0.1, 0.3, 0.5}) {
      const auto rows = ej_truncation_report(4, {v * consts.c}, consts);
      for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].rel_error < rows[i - 1].rel_error);
      }
    }
  }

  SUBCASE("speeds at or above c are rejected") {
    CHECK_THROWS_AS(ej_truncation_report(2, {consts.c}, consts), std::invalid_argument);
    CHECK_THROWS_AS(ej_truncation_report(2, {1.5 * consts.c}, consts), std::invalid_argument);
    CHECK_THROWS_AS(ej_truncation_report(2, {-0.1}, consts), std::invalid_argument);
  }
}

TEST_CASE("csv output: column order and 17-digit round trip") {
  DiagnosticsRecord rec;
  rec.time = 0.1;
  rec.norms = {1.0 / 3.0, 0.77};
  rec.overlap = {cxd(1.0, 0.0), cxd(0.1, -0.2), cxd(0.1, 0.2), cxd(1.0, 0.0)};
  rec.energy = {1.23456789012345678, -0.5, 0.25, 0.125, 1.1};
  rec.sup_norm = 2.5;

  std::ostringstream os;
  write_diagnostics_header(os, 2);
  write_diagnostics_row(os, rec);
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  CHECK(header ==
        "time,norm_1,norm_2,overlap_re_1_1,overlap_im_1_1,overlap_re_1_2,overlap_im_1_2,"
        "overlap_re_2_1,overlap_im_2_1,overlap_re_2_2,overlap_im_2_2,kinetic,external,direct,"
        "exchange,total,sup_norm");

  // 17 significant digits reproduce the doubles bit-exactly
  std::stringstream cells(row);
  std::string cell;
  std::vector<double> parsed;
  while (std::getline(cells, cell, ',')) parsed.push_back(std::strtod(cell.c_str(), nullptr));
  REQUIRE(parsed.size() == 17);
  CHECK(parsed[0] == rec.time);
  CHECK(parsed[1] == rec.norms[0]);
  CHECK(parsed[11] == rec.energy.kinetic);
  CHECK(parsed[16] == rec.sup_norm);
}
