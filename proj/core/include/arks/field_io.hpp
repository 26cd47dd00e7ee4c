#pragma once

#include <filesystem>
#include <iosfwd>

#include "arks/grid.hpp"

namespace arks {

// Binary snapshot layout (little-endian):
//   char[8]  magic "ARKSFLD1"
//   u32      geometry tag (Geometry enum value)
//   u32      storage axes (1 or 2)
//   u64      nx, ny
//   f64      extent_x, extent_y
//   f64[nx*ny] values, row-major with x fastest
void write_field_binary(std::ostream& os, const Field& f);
Field read_field_binary(std::istream& is);

void save_field(const std::filesystem::path& path, const Field& f);
Field load_field(const std::filesystem::path& path);

/// CSV with header `x,value` (1 axis) or `x,y,value` (2 axes), one row per cell.
void write_field_csv(std::ostream& os, const Field& f);

}  // namespace arks
