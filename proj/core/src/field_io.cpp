#include "arks/field_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "arks/error.hpp"

namespace arks {

static_assert(std::endian::native == std::endian::little, "snapshot format assumes little-endian hosts");

namespace {

constexpr std::array<char, 8> kMagic = {'A', 'R', 'K', 'S', 'F', 'L', 'D', '1'};

template <class T>
void put(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw InvalidParameter("truncated field snapshot");
  return value;
}

}  // namespace

void write_field_binary(std::ostream& os, const Field& f) {
  const Grid& g = *f.grid;
  os.write(kMagic.data(), kMagic.size());
  put(os, static_cast<std::uint32_t>(g.geometry()));
  put(os, static_cast<std::uint32_t>(g.axes()));
  put(os, static_cast<std::uint64_t>(g.nx()));
  put(os, static_cast<std::uint64_t>(g.ny()));
  put(os, g.extents()[0]);
  put(os, g.extents()[1]);
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

Field read_field_binary(std::istream& is) {
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw InvalidParameter("not a field snapshot (bad magic)");
  const auto tag = get<std::uint32_t>(is);
  get<std::uint32_t>(is);
  const auto nx = static_cast<int>(get<std::uint64_t>(is));
  const auto ny = static_cast<int>(get<std::uint64_t>(is));
  const auto ex = get<double>(is);
  const auto ey = get<double>(is);

  GridPtr grid;
  switch (static_cast<Geometry>(tag)) {
    case Geometry::Interval: grid = share(Grid::interval(ex, nx)); break;
    case Geometry::Rectangle: grid = share(Grid::rectangle(ex, ey, nx, ny)); break;
    case Geometry::RadialDisk: grid = share(Grid::radial_disk(ex, nx)); break;
    case Geometry::RadialBall: grid = share(Grid::radial_ball(ex, nx)); break;
    default: throw InvalidParameter(fmt::format("unknown geometry tag {}", tag));
  }
  std::vector<double> values(grid->size());
  is.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!is) throw InvalidParameter("truncated field snapshot");
  return Field(std::move(grid), std::move(values));
}

void save_field(const std::filesystem::path& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidParameter("cannot open " + path.string() + " for writing");
  write_field_binary(os, f);
}

Field load_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidParameter("cannot open " + path.string());
  return read_field_binary(is);
}

void write_field_csv(std::ostream& os, const Field& f) {
  const Grid& g = *f.grid;
  os << (g.axes() == 2 ? "x,y,value\n" : "x,value\n");
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto c = g.center(i);
    if (g.axes() == 2) {
      os << fmt::format("{:.17g},{:.17g},{:.17g}\n", c[0], c[1], f.values[i]);
    } else {
      os << fmt::format("{:.17g},{:.17g}\n", c[0], f.values[i]);
    }
  }
}

}  // namespace arks
