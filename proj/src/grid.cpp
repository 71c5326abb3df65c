#include "hosf/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "hosf/errors.hpp"

namespace hosf {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* who) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(who) + ": grid mismatch");
  }
}

// One reusable plan pair per (dim, n). Plans are created with FFTW_UNALIGNED
// and executed through the new-array interface, so any buffer works and
// fftw_execute_dft stays re-entrant. Creation is serialized; FFTW_ESTIMATE
// keeps planning deterministic across runs.
struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

const Plans& cached_plans(const GridSpec& g) {
  static std::map<std::pair<int, int>, Plans> cache;
  static std::mutex mutex;
  std::scoped_lock lock(mutex);
  const auto key = std::make_pair(g.dim, g.n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<cxd> a(g.total()), b(g.total());
  int ns[3] = {g.n, g.n, g.n};
  Plans p;
  p.forward = fftw_plan_dft(g.dim, ns, reinterpret_cast<fftw_complex*>(a.data()),
                            reinterpret_cast<fftw_complex*>(b.data()),
                            FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.backward = fftw_plan_dft(g.dim, ns, reinterpret_cast<fftw_complex*>(a.data()),
                             reinterpret_cast<fftw_complex*>(b.data()),
                             FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p.forward || !p.backward) {
    throw std::runtime_error("fftw planning failed");
  }
  return cache.emplace(key, p).first->second;
}

void execute(fftw_plan plan, const std::vector<cxd>& in, std::vector<cxd>& out) {
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<cxd*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

std::size_t GridSpec::total() const {
  std::size_t t = 1;
  for (int a = 0; a < dim; ++a) t *= static_cast<std::size_t>(n);
  return t;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing(a);
  return v;
}

double GridSpec::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= length[a];
  return v;
}

double GridSpec::wavenumber(int axis, int index) const {
  const int m = index < n / 2 ? index : index - n;
  return 2.0 * std::numbers::pi * m / length[axis];
}

int GridSpec::axis_index(std::size_t flat, int axis) const {
  std::size_t stride = 1;
  for (int a = dim - 1; a > axis; --a) stride *= static_cast<std::size_t>(n);
  return static_cast<int>((flat / stride) % static_cast<std::size_t>(n));
}

void GridSpec::validate() const {
  if (dim < 1 || dim > 3) {
    throw config_error("grid.dim must be 1, 2 or 3, got " + std::to_string(dim));
  }
  if (n < 8 || !is_power_of_two(n)) {
    throw config_error("grid.n must be a power of two >= 8, got " +
                       std::to_string(n));
  }
  for (int a = 0; a < dim; ++a) {
    if (!(length[a] > 0.0)) {
      throw config_error("grid.box_length must be positive");
    }
  }
}

GridSpec make_grid(int dim, int n, double box_length) {
  GridSpec g;
  g.dim = dim;
  g.n = n;
  g.length = {box_length, box_length, box_length};
  g.validate();
  return g;
}

Field Field::zeros(const GridSpec& g) { return Field{g, std::vector<cxd>(g.total())}; }

RealField RealField::zeros(const GridSpec& g) {
  return RealField{g, std::vector<double>(g.total())};
}

OrbitalSet::OrbitalSet(std::vector<Field> orbitals) : orbitals_(std::move(orbitals)) {
  for (const auto& f : orbitals_) {
    require_same_grid(f.grid, orbitals_.front().grid, "OrbitalSet");
  }
}

void OrbitalSet::push_back(Field f) {
  if (!orbitals_.empty()) require_same_grid(f.grid, orbitals_.front().grid, "OrbitalSet");
  orbitals_.push_back(std::move(f));
}

const GridSpec& OrbitalSet::grid() const {
  if (orbitals_.empty()) throw std::invalid_argument("OrbitalSet: empty set has no grid");
  return orbitals_.front().grid;
}

SpectralField to_spectral(const Field& f) {
  if (f.values.size() != f.grid.total()) {
    throw std::invalid_argument("to_spectral: value count does not match grid");
  }
  SpectralField out{f.grid, std::vector<cxd>(f.grid.total())};
  execute(cached_plans(f.grid).forward, f.values, out.values);
  const double scale = std::sqrt(f.grid.cell_volume() / static_cast<double>(f.grid.total()));
  for (auto& v : out.values) v *= scale;
  return out;
}

Field to_physical(const SpectralField& g) {
  if (g.values.size() != g.grid.total()) {
    throw std::invalid_argument("to_physical: value count does not match grid");
  }
  Field out{g.grid, std::vector<cxd>(g.grid.total())};
  execute(cached_plans(g.grid).backward, g.values, out.values);
  const double scale = 1.0 / std::sqrt(g.grid.volume());
  for (auto& v : out.values) v *= scale;
  return out;
}

cxd inner_product(const Field& f, const Field& g) {
  require_same_grid(f.grid, g.grid, "inner_product");
  cxd s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    s += std::conj(f.values[i]) * g.values[i];
  }
  return s * f.grid.cell_volume();
}

cxd inner_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid, g.grid, "inner_product");
  cxd s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    s += std::conj(f.values[i]) * g.values[i];
  }
  return s;
}

double l2_norm(const Field& f) { return std::sqrt(std::abs(inner_product(f, f).real())); }

double l2_norm(const SpectralField& f) {
  return std::sqrt(std::abs(inner_product(f, f).real()));
}

std::vector<double> squared_wavenumbers(const GridSpec& g) {
  std::array<std::vector<double>, 3> axis;
  for (int a = 0; a < g.dim; ++a) {
    axis[a].resize(g.n);
    for (int i = 0; i < g.n; ++i) {
      const double k = g.wavenumber(a, i);
      axis[a][i] = k * k;
    }
  }
  std::vector<double> out(g.total());
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    double k2 = 0.0;
    for (int a = 0; a < g.dim; ++a) k2 += axis[a][g.axis_index(flat, a)];
    out[flat] = k2;
  }
  return out;
}

std::vector<double> min_image_radius_sq(const GridSpec& g,
                                        const std::array<double, 3>& center) {
  std::array<std::vector<double>, 3> axis;
  for (int a = 0; a < g.dim; ++a) {
    axis[a].resize(g.n);
    const double L = g.length[a];
    for (int i = 0; i < g.n; ++i) {
      double d = g.coordinate(a, i) - center[a];
      d -= L * std::round(d / L);
      axis[a][i] = d * d;
    }
  }
  std::vector<double> out(g.total());
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) r2 += axis[a][g.axis_index(flat, a)];
    out[flat] = r2;
  }
  return out;
}

double boundary_mass_fraction(const Field& f, double band) {
  double total = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double m = std::norm(f.values[i]);
    total += m;
    for (int a = 0; a < f.grid.dim; ++a) {
      const double x = f.grid.coordinate(a, f.grid.axis_index(i, a));
      if (std::abs(x) >= (0.5 - band) * f.grid.length[a]) {
        edge += m;
        break;
      }
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

double top_octave_fraction(const Field& f) {
  const SpectralField s = to_spectral(f);
  const int quarter = f.grid.n / 4;
  double total = 0.0, top = 0.0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double m = std::norm(s.values[i]);
    total += m;
    for (int a = 0; a < f.grid.dim; ++a) {
      const int idx = f.grid.axis_index(i, a);
      const int mode = idx < f.grid.n / 2 ? idx : idx - f.grid.n;
      if (std::abs(mode) >= quarter) {
        top += m;
        break;
      }
    }
  }
  return total > 0.0 ? top / total : 0.0;
}

}  // namespace hosf
