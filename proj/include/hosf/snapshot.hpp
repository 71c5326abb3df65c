#pragma once

#include <filesystem>

#include "hosf/grid.hpp"

namespace hosf {

// Binary field snapshot. Layout, all little-endian:
//   magic "HOSF" (4 bytes), version u32, dim u32, n u32 per axis,
//   box length f64 per axis, then n^dim complex values as (re f64, im f64)
//   pairs in row-major order (axis 0 slowest).
void write_snapshot(const std::filesystem::path& path, const Field& f);
// Real fields are stored as complex values with zero imaginary part.
void write_snapshot(const std::filesystem::path& path, const RealField& f);
Field read_snapshot(const std::filesystem::path& path);

}  // namespace hosf
