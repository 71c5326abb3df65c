#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "hosf/errors.hpp"
#include "hosf/grid.hpp"
#include "hosf/snapshot.hpp"
#include "oracles.hpp"

using namespace hosf;

namespace {

Field random_field(const GridSpec& g, std::uint32_t seed) {
  Field f = Field::zeros(g);
  f.values = oracles::random_complex(g.total(), seed);
  return f;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(make_grid(0, 64, 1.0), config_error);
  CHECK_THROWS_AS(make_grid(4, 64, 1.0), config_error);
  CHECK_THROWS_AS(make_grid(1, 48, 1.0), config_error);  // not a power of two
  CHECK_THROWS_AS(make_grid(1, 4, 1.0), config_error);
  CHECK_THROWS_AS(make_grid(1, 64, -1.0), config_error);
  const GridSpec g = make_grid(2, 16, 5.0);
  CHECK(g.total() == 256);
  CHECK(g.cell_volume() == doctest::Approx(5.0 / 16 * 5.0 / 16));
  CHECK(g.coordinate(0, 8) == doctest::Approx(0.0));
  CHECK(g.wavenumber(0, 1) == doctest::Approx(2.0 * std::numbers::pi / 5.0));
  CHECK(g.wavenumber(0, 15) == doctest::Approx(-2.0 * std::numbers::pi / 5.0));
}

TEST_CASE("transform round trip to 1e-12") {
  for (const GridSpec& g : {make_grid(1, 64, 10.0), make_grid(2, 16, 3.0), make_grid(3, 8, 2.0)}) {
    const Field f = random_field(g, 7u + g.dim);
    const Field back = to_physical(to_spectral(f));
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      err = std::max(err, std::abs(back.values[i] - f.values[i]));
      scale = std::max(scale, std::abs(f.values[i]));
    }
    CHECK(err / scale < 1e-12);
  }
}

TEST_CASE("plane wave maps to a single spectral coefficient") {
  const GridSpec g = make_grid(1, 32, 7.0);
  const int m0 = 5;
  Field f = Field::zeros(g);
  for (int i = 0; i < g.n; ++i) {
    f.values[i] = std::polar(1.0, g.wavenumber(0, m0) * g.coordinate(0, i));
  }
  const SpectralField s = to_spectral(f);
  for (int m = 0; m < g.n; ++m) {
    if (m == m0) {
      CHECK(std::abs(s.values[m]) == doctest::Approx(std::sqrt(g.volume())).epsilon(1e-13));
    } else {
      CHECK(std::abs(s.values[m]) < 1e-13);
    }
  }
}

TEST_CASE("gaussian transforms to a gaussian of reciprocal width") {
  const GridSpec g = make_grid(1, 256, 40.0);
  const double sigma = 1.0;
  Field f = Field::zeros(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.coordinate(0, i);
    f.values[i] = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) *
                  std::exp(-x * x / (4.0 * sigma * sigma));
  }
  const SpectralField s = to_spectral(f);
  // continuum transform F(k) = (2 pi s^2)^{-1/4} sqrt(4 pi s^2) exp(-s^2 k^2);
  // the centered node labeling contributes the (-1)^m factor.
  for (int m = 0; m < g.n; ++m) {
    const double k = g.wavenumber(0, m);
    const double fk = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) *
                      std::sqrt(4.0 * std::numbers::pi * sigma * sigma) *
                      std::exp(-sigma * sigma * k * k);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    CHECK(std::abs(s.values[m] - sign * fk / std::sqrt(g.volume())) < 1e-8);
  }
}

TEST_CASE("inner product and Parseval") {
  const GridSpec g = make_grid(1, 128, 11.0);
  const Field f = random_field(g, 11);
  const Field h = random_field(g, 12);

  SUBCASE("conjugate-linear in the first argument") {
    const cxd a(0.3, -1.2);
    Field af = f;
    for (auto& v : af.values) v *= a;
    CHECK(std::abs(inner_product(af, h) - std::conj(a) * inner_product(f, h)) < 1e-12);
    CHECK(std::abs(inner_product(h, af) - a * inner_product(h, f)) < 1e-12);
  }

  SUBCASE("self inner product is the squared norm") {
    const cxd self = inner_product(f, f);
    CHECK(self.real() >= 0.0);
    CHECK(std::abs(self.imag()) < 1e-14 * self.real());
    CHECK(l2_norm(f) == doctest::Approx(std::sqrt(self.real())));
  }

  SUBCASE("orthogonal plane-wave modes") {
    Field p1 = Field::zeros(g), p2 = Field::zeros(g);
    for (int i = 0; i < g.n; ++i) {
      p1.values[i] = std::polar(1.0, g.wavenumber(0, 3) * g.coordinate(0, i));
      p2.values[i] = std::polar(1.0, g.wavenumber(0, 4) * g.coordinate(0, i));
    }
    CHECK(std::abs(inner_product(p1, p2)) < 1e-14 * g.volume());
  }

  SUBCASE("physical side equals spectral side") {
    const cxd phys = inner_product(f, h);
    const cxd spec = inner_product(to_spectral(f), to_spectral(h));
    CHECK(std::abs(phys - spec) < 1e-12 * std::abs(phys));
    CHECK(l2_norm(to_spectral(f)) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
  }

  SUBCASE("grid mismatch is rejected") {
    const Field other = random_field(make_grid(1, 64, 11.0), 3);
    CHECK_THROWS_AS(inner_product(f, other), std::invalid_argument);
  }
}

TEST_CASE("transform linearity and real-field conjugation symmetry") {
  const GridSpec g = make_grid(1, 64, 6.0);
  const Field f = random_field(g, 21);
  const Field h = random_field(g, 22);
  const cxd a(1.1, -0.4), b(-0.2, 0.9);

  Field combo = Field::zeros(g);
  for (std::size_t i = 0; i < combo.values.size(); ++i) {
    combo.values[i] = a * f.values[i] + b * h.values[i];
  }
  const SpectralField sc = to_spectral(combo);
  const SpectralField sf = to_spectral(f);
  const SpectralField sh = to_spectral(h);
  for (std::size_t i = 0; i < sc.values.size(); ++i) {
    CHECK(std::abs(sc.values[i] - (a * sf.values[i] + b * sh.values[i])) < 1e-12);
  }

  Field real = Field::zeros(g);
  for (std::size_t i = 0; i < real.values.size(); ++i) real.values[i] = f.values[i].real();
  const SpectralField sr = to_spectral(real);
  for (int m = 1; m < g.n; ++m) {
    CHECK(std::abs(sr.values[m] - std::conj(sr.values[(g.n - m) % g.n])) < 1e-12);
  }
}

TEST_CASE("zero field has zero norm; resolved gaussian is normalized") {
  const GridSpec g = make_grid(1, 256, 16.0);  // box = 16 standard deviations
  CHECK(l2_norm(Field::zeros(g)) == 0.0);
  Field f = Field::zeros(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.coordinate(0, i);
    f.values[i] = std::pow(2.0 * std::numbers::pi, -0.25) * std::exp(-x * x / 4.0);
  }
  CHECK(l2_norm(f) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("orbital sets require a shared grid") {
  const GridSpec g = make_grid(1, 64, 6.0);
  OrbitalSet set;
  set.push_back(random_field(g, 1));
  CHECK_THROWS_AS(set.push_back(random_field(make_grid(1, 128, 6.0), 2)), std::invalid_argument);
  CHECK_THROWS_AS(OrbitalSet{}.grid(), std::invalid_argument);
}

TEST_CASE("boundary mass and top-octave fractions") {
  const GridSpec g = make_grid(1, 256, 40.0);
  Field centered = Field::zeros(g);
  Field shifted = Field::zeros(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.coordinate(0, i);
    centered.values[i] = std::exp(-x * x);
    const double y = x - 19.0;
    shifted.values[i] = std::exp(-y * y);
  }
  CHECK(boundary_mass_fraction(centered) < 1e-10);
  CHECK(boundary_mass_fraction(shifted) > 0.1);
  CHECK(top_octave_fraction(centered) < 1e-12);

  Field spiky = Field::zeros(g);
  for (int i = 0; i < g.n; ++i) {
    spiky.values[i] = std::polar(1.0, g.wavenumber(0, g.n / 2 - 3) * g.coordinate(0, i));
  }
  CHECK(top_octave_fraction(spiky) > 0.99);
}

TEST_CASE("snapshot round trip is bit exact") {
  const GridSpec g = make_grid(2, 16, 3.5);
  const Field f = random_field(g, 33);
  const auto path = std::filesystem::temp_directory_path() / "hosf_snap_test.bin";
  write_snapshot(path, f);
  const Field back = read_snapshot(path);
  CHECK(back.grid == f.grid);
  REQUIRE(back.values.size() == f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    CHECK(back.values[i] == f.values[i]);
  }

  // header layout: magic, version u32, dim u32, n u32 per axis, lengths f64
  std::ifstream is(path, std::ios::binary);
  char magic[4];
  is.read(magic, 4);
  CHECK(std::string(magic, 4) == "HOSF");
  std::uint32_t version = 0, dim = 0, n0 = 0, n1 = 0;
  is.read(reinterpret_cast<char*>(&version), 4);
  is.read(reinterpret_cast<char*>(&dim), 4);
  is.read(reinterpret_cast<char*>(&n0), 4);
  is.read(reinterpret_cast<char*>(&n1), 4);
  CHECK(version == 1);
  CHECK(dim == 2);
  CHECK(n0 == 16);
  CHECK(n1 == 16);
  double len = 0.0;
  is.read(reinterpret_cast<char*>(&len), 8);
  CHECK(len == 3.5);
  is.close();
  std::filesystem::remove(path);
}
