#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace hosf {

using cxd = std::complex<double>;

// Periodic uniform grid on the centered box [-L/2, L/2)^dim.
// Node coordinates: x_i = -L/2 + i*dx per axis; row-major storage, axis 0
// slowest. Wavenumbers follow FFT order 2*pi/L * {0..n/2-1, -n/2..-1}.
struct GridSpec {
  int dim = 1;
  int n = 8;  // points per axis, power of two, >= 8
  std::array<double, 3> length{1.0, 1.0, 1.0};

  std::size_t total() const;
  double spacing(int axis = 0) const { return length[axis] / n; }
  double cell_volume() const;
  double volume() const;
  double coordinate(int axis, int index) const {
    return -0.5 * length[axis] + index * spacing(axis);
  }
  double wavenumber(int axis, int index) const;
  int axis_index(std::size_t flat, int axis) const;

  void validate() const;  // throws config_error on an unsupported grid
  // Grids are equal when they agree on the axes they actually use.
  bool operator==(const GridSpec& other) const {
    if (dim != other.dim || n != other.n) return false;
    for (int a = 0; a < dim; ++a) {
      if (length[a] != other.length[a]) return false;
    }
    return true;
  }
};

// Convenience for square boxes.
GridSpec make_grid(int dim, int n, double box_length);

struct Field {
  GridSpec grid;
  std::vector<cxd> values;

  static Field zeros(const GridSpec& g);
};

struct SpectralField {
  GridSpec grid;
  std::vector<cxd> values;
};

struct RealField {
  GridSpec grid;
  std::vector<double> values;

  static RealField zeros(const GridSpec& g);
};

// N wave functions sharing one grid.
class OrbitalSet {
 public:
  OrbitalSet() = default;
  explicit OrbitalSet(std::vector<Field> orbitals);

  void push_back(Field f);
  int count() const { return static_cast<int>(orbitals_.size()); }
  bool empty() const { return orbitals_.empty(); }
  Field& operator[](int k) { return orbitals_[k]; }
  const Field& operator[](int k) const { return orbitals_[k]; }
  const GridSpec& grid() const;

  auto begin() { return orbitals_.begin(); }
  auto end() { return orbitals_.end(); }
  auto begin() const { return orbitals_.begin(); }
  auto end() const { return orbitals_.end(); }

 private:
  std::vector<Field> orbitals_;
};

// Unitary DFT pair: to_physical(to_spectral(f)) == f to round-off and
// Parseval holds without extra factors, i.e.
//   cell_volume * sum_x conj(f)g == sum_k conj(fhat)ghat.
SpectralField to_spectral(const Field& f);
Field to_physical(const SpectralField& g);

// Quadrature inner product, conjugate-linear in the first argument.
cxd inner_product(const Field& f, const Field& g);
cxd inner_product(const SpectralField& f, const SpectralField& g);
double l2_norm(const Field& f);
double l2_norm(const SpectralField& f);

// |k|^2 per flat mode index.
std::vector<double> squared_wavenumbers(const GridSpec& g);
// Minimum-image |x - center|^2 per flat node index.
std::vector<double> min_image_radius_sq(const GridSpec& g,
                                        const std::array<double, 3>& center);

// Fraction of |psi|^2 mass within `band`*L of the box edge on any axis.
double boundary_mass_fraction(const Field& f, double band = 0.05);
// Fraction of spectral mass with |m| >= n/4 on any axis (top frequency octave).
double top_octave_fraction(const Field& f);

}  // namespace hosf
