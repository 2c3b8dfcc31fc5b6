#include <doctest.h>

#include "wavegeom/config.hpp"

using namespace wavegeom;

TEST_CASE("default config round trips through its canonical json") {
  const auto c = default_config();
  const auto j = c.to_json();
  const auto c2 = parse_config(j);
  CHECK(c2.hash() == c.hash());
  CHECK(c2.seed == c.seed);
  CHECK(c2.metric.family == "minkowski");
}

TEST_CASE("unknown keys are rejected with their path") {
  Json j;
  j["schema_version"] = 1;
  j["tolerrance"] = 1e-6;  // typo
  try {
    parse_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("tolerrance") != std::string::npos);
  }

  Json k;
  k["schema_version"] = 1;
  k["metric"] = Json{{"familly", "bump"}};
  try {
    parse_config(k);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("metric.familly") != std::string::npos);
  }
}

TEST_CASE("schema version is required and checked") {
  Json j;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j["schema_version"] = 7;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("validation catches bad nested values before compute") {
  Json j;
  j["schema_version"] = 1;

  SUBCASE("inadmissible strichartz pair") {
    j["strichartz"] = Json{{"pairs", Json::array({Json::array({"2", "4"})})}};
    CHECK_THROWS_AS(parse_config(j), AdmissibilityError);
  }
  SUBCASE("bad metric scheme") {
    j["metric"] = Json{{"derivative_scheme", "spectral"}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SUBCASE("kernel level range") {
    j["kernel"] = Json{{"j", 12}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SUBCASE("unknown profile") {
    j["strichartz"] = Json{{"profile_radial", "cubic"}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
}

TEST_CASE("config hash is stable and sensitive") {
  auto a = default_config();
  auto b = default_config();
  CHECK(a.hash() == b.hash());
  b.metric.epsilon = 0.05;
  b.metric.family = "bump";
  CHECK(a.hash() != b.hash());
}
