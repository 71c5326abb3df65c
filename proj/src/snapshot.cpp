#include "hosf/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "hosf/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; big-endian hosts unsupported");

namespace hosf {

namespace {

constexpr char kMagic[4] = {'H', 'O', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

double read_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

void write_header(std::ostream& os, const GridSpec& g) {
  os.write(kMagic, sizeof kMagic);
  write_u32(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(g.dim));
  for (int a = 0; a < g.dim; ++a) write_u32(os, static_cast<std::uint32_t>(g.n));
  for (int a = 0; a < g.dim; ++a) write_f64(os, g.length[a]);
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Field& f) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw config_error("cannot open snapshot file for writing: " + path.string());
  write_header(os, f.grid);
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(cxd)));
  if (!os) throw config_error("short write on snapshot file: " + path.string());
}

void write_snapshot(const std::filesystem::path& path, const RealField& f) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw config_error("cannot open snapshot file for writing: " + path.string());
  write_header(os, f.grid);
  for (double v : f.values) {
    write_f64(os, v);
    write_f64(os, 0.0);
  }
  if (!os) throw config_error("short write on snapshot file: " + path.string());
}

Field read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw config_error("cannot open snapshot file: " + path.string());
  char magic[4] = {};
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw config_error("bad snapshot magic in " + path.string());
  }
  const std::uint32_t version = read_u32(is);
  if (version != kVersion) {
    throw config_error("unsupported snapshot version in " + path.string());
  }
  GridSpec g;
  g.dim = static_cast<int>(read_u32(is));
  if (g.dim < 1 || g.dim > 3) throw config_error("bad snapshot dim in " + path.string());
  std::uint32_t n = 0;
  for (int a = 0; a < g.dim; ++a) {
    const std::uint32_t na = read_u32(is);
    if (a == 0) n = na;
    if (na != n) throw config_error("anisotropic snapshot grids unsupported: " + path.string());
  }
  g.n = static_cast<int>(n);
  for (int a = 0; a < g.dim; ++a) g.length[a] = read_f64(is);
  g.validate();
  Field f = Field::zeros(g);
  is.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(cxd)));
  if (!is) throw config_error("truncated snapshot file: " + path.string());
  return f;
}

}  // namespace hosf
