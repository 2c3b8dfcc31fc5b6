#include <doctest.h>

#include <cstdio>

#include "wavegeom/field_io.hpp"
#include "wavegeom/report.hpp"
#include "wavegeom/rng.hpp"

using namespace wavegeom;

namespace {

std::string temp_path(const char* name) {
  return std::string("/tmp/wavegeom_test_") + name;
}

}  // namespace

TEST_CASE("optical field round trip preserves every array bit for bit") {
  const auto m = SpacetimeMetric::make(MetricSpec{});
  OpticalSolver solver(m);
  GridSpec grid;
  grid.nt = 3;
  grid.nx = 4;
  grid.ny = 2;
  grid.nz = 5;
  grid.lo = Vec3{-1, -0.5, -2};
  grid.hi = Vec3{1, 0.5, 2};
  const Vec3 w = normalized(Vec3{0.3, -0.5, 0.81});
  const auto field = sample_optical_field(solver, w, grid);

  const auto path = temp_path("optical.wgof");
  write_optical_field(path, field);
  const auto back = read_optical_field(path);

  CHECK(back.grid.nt == grid.nt);
  CHECK(back.grid.nz == grid.nz);
  CHECK(back.omega[0] == field.omega[0]);
  CHECK(back.chart == field.chart);
  REQUIRE(back.u.size() == field.u.size());
  for (std::size_t i = 0; i < field.u.size(); ++i) {
    CHECK(back.u[i] == field.u[i]);
    CHECK(back.b[i] == field.b[i]);
    CHECK(back.N2[i] == field.N2[i]);
    CHECK(back.domega_u1[i] == field.domega_u1[i]);
  }
  // metadata sidecar exists and parses
  const auto meta = load_json_file(path + ".json");
  CHECK(meta.at("format") == "WGOF");
  CHECK(meta.at("grid").at("nt") == 3);
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}

TEST_CASE("field sample round trip, all component counts") {
  const auto m = SpacetimeMetric::make(MetricSpec{});
  OpticalSolver solver(m);
  ParametrixEvaluator ev(solver, DyadicWindow{2}, FrequencyProfile::parse("one", "const"));
  GridSpec grid;
  grid.nt = 2;
  grid.nx = grid.ny = grid.nz = 3;
  grid.lo = Vec3{-1, -1, -1};
  grid.hi = Vec3{1, 1, 1};
  for (int order : {0, 1, 2}) {
    const auto field = sample_parametrix(ev, grid, order);
    const auto path = temp_path("sample.wgfs");
    write_field_sample(path, field);
    const auto back = read_field_sample(path);
    CHECK(back.j == field.j);
    CHECK(back.derivative_order == order);
    CHECK(back.ncomp == field.ncomp);
    REQUIRE(back.values.size() == field.values.size());
    for (std::size_t i = 0; i < field.values.size(); ++i)
      CHECK(back.values[i] == field.values[i]);
    std::remove(path.c_str());
    std::remove((path + ".json").c_str());
  }
}

TEST_CASE("reader rejects foreign files") {
  const auto path = temp_path("garbage.bin");
  write_text_file(path, "not a field file at all");
  CHECK_THROWS_AS(read_optical_field(path), SchemaMismatchError);
  CHECK_THROWS_AS(read_field_sample(path), SchemaMismatchError);
  std::remove(path.c_str());
}
