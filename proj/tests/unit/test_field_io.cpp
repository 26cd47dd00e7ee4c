#include <cstring>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"

#include "arks/error.hpp"
#include "arks/field_io.hpp"

using namespace arks;

TEST_CASE("binary snapshots round-trip bitwise") {
  testing::Gen gen(41);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = gen.grid();
    auto f = gen.field(g, -1e3, 1e3);
    std::stringstream ss;
    write_field_binary(ss, f);
    const auto back = read_field_binary(ss);
    CHECK(*back.grid == *g);
    REQUIRE(back.size() == f.size());
    CHECK(std::memcmp(back.values.data(), f.values.data(), f.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("snapshot header layout") {
  auto g = share(Grid::rectangle(2.0, 1.0, 4, 6));
  std::stringstream ss;
  write_field_binary(ss, Field(g, 1.0));
  const std::string bytes = ss.str();
  CHECK(bytes.size() == 8 + 4 + 4 + 8 + 8 + 8 + 8 + 24 * 8);
  CHECK(bytes.substr(0, 8) == "ARKSFLD1");
}

TEST_CASE("corrupt snapshots are rejected") {
  std::stringstream bad("NOTAFIELD-and-some-more-bytes-here");
  CHECK_THROWS_AS(read_field_binary(bad), InvalidParameter);

  auto g = share(Grid::interval(1.0, 8));
  std::stringstream ss;
  write_field_binary(ss, Field(g, 1.0));
  std::string truncated = ss.str();
  truncated.resize(truncated.size() - 9);
  std::stringstream tr(truncated);
  CHECK_THROWS_AS(read_field_binary(tr), InvalidParameter);
}

TEST_CASE("file round-trip") {
  const auto path = std::filesystem::temp_directory_path() / "arks_field_io_test.bin";
  auto g = share(Grid::radial_ball(1.0, 9));
  Field f = Field::sample(g, [](double r, double) { return 1.0 + r; });
  save_field(path, f);
  const auto back = load_field(path);
  CHECK(back.values == f.values);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_field(path), InvalidParameter);
}

TEST_CASE("csv export") {
  auto g = share(Grid::rectangle(1, 1, 4, 4));
  std::ostringstream os;
  write_field_csv(os, Field(g, 0.5));
  const auto text = os.str();
  CHECK(text.rfind("x,y,value\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 17);

  auto line = share(Grid::interval(1.0, 4));
  std::ostringstream o1;
  write_field_csv(o1, Field(line, 0.5));
  CHECK(o1.str().rfind("x,value\n", 0) == 0);
}
