#include <doctest.h>

#include <sstream>
#include <string>

#include "poincare/config.hpp"

using namespace poincare;

namespace {

ExperimentConfig load(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  c.load(in);
  return c;
}

std::string error_of(const std::string& text) {
  try {
    load(text);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConfigError);
    return e.what();
  }
  FAIL("expected a ConfigError");
  return {};
}

}  // namespace

TEST_CASE("defaults cover every key and parse as their kind") {
  const ExperimentConfig c;
  CHECK(c.values().size() == config_keys().size());
  CHECK(c.integer("m") == 4);
  CHECK(c.real("radius") == 10.0);
  CHECK(c.point("x") == Complex{0.0, 0.0});
  CHECK(c.reals("multipliers") == std::vector<double>{1.0, 1.25, 1.5, 2.0, 3.0});
  CHECK_FALSE(c.optional_real("epsilon").has_value());
  CHECK(c.group_source() == "preset:genus2");
  CHECK(c.group().generators.size() == 8);
}

TEST_CASE("file values, comments, and later assignments win") {
  const auto c = load("# experiment\nm = 6   # weight\n\nseed = poly 1 0 0.5\nz = 0.2 -0.1\nm = 5\nepsilon = 1.5\n");
  CHECK(c.integer("m") == 5);
  CHECK(c.text("seed") == "poly 1 0 0.5");
  CHECK(c.point("z") == Complex{0.2, -0.1});
  CHECK(*c.optional_real("epsilon") == 1.5);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(error_of("m = 4\nradius = ten\n").find("line 2") != std::string::npos);
  CHECK(error_of("\n\nm = 1\n").find("line 3") != std::string::npos);
  CHECK(error_of("m = 1\n").find("m must be >= 2") != std::string::npos);
  CHECK(error_of("nonsense\n").find("line 1") != std::string::npos);
  CHECK(error_of("m = 4\nwobble = 3\n").find("unknown key 'wobble'") != std::string::npos);
  CHECK(error_of("x = 1.5 0\n").find("inside the unit disc") != std::string::npos);
  CHECK(error_of("samples = 0\n").find("positive") != std::string::npos);
  CHECK(error_of("radius = -2\n").find("positive") != std::string::npos);
  CHECK(error_of("radii = 4 x 8\n").find("line 1") != std::string::npos);
  CHECK(error_of("z = 0.1\n").find("'<re> <im>'") != std::string::npos);
}

TEST_CASE("inline group keys build the group and keep line numbers") {
  const std::string group = format_group_config(preset_genus2_octagon());
  const auto c = load("m = 3\n" + group);
  CHECK(c.group_source() == "inline");
  const FuchsianGroup g = c.group();
  const FuchsianGroup ref = preset_genus2_octagon();
  REQUIRE(g.generators.size() == ref.generators.size());
  for (std::size_t k = 0; k < g.generators.size(); ++k)
    CHECK(psu_distance(g.generators[k].matrix, ref.generators[k].matrix) < 1e-14);
  CHECK(c.integer("m") == 3);

  // A broken generator on line 4 of the file is reported as line 4.
  const std::string broken = "m = 3\nname = bad\n# comment\ngenerator.0 = 1 0 zero 0\n";
  CHECK(error_of(broken).find("line 4") != std::string::npos);
}

TEST_CASE("flag-style overrides") {
  ExperimentConfig c;
  c.set("m", "7", "--m");
  c.set("C", "2", "--C");
  CHECK(c.integer("m") == 7);
  CHECK(*c.optional_real("C") == 2.0);
  try {
    c.set("d", "three", "--d");
    FAIL("expected a ConfigError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("--d") != std::string::npos);
  }
  CHECK(c.integer("d") == 6);  // unchanged after a rejected value
}

TEST_CASE("group file and missing files") {
  ExperimentConfig c;
  c.set("group_file", "/nonexistent/group.cfg", "--group_file");
  CHECK(c.group_source() == "file:/nonexistent/group.cfg");
  CHECK_THROWS_AS(c.group(), Error);
  CHECK_THROWS_AS(c.load_file("/nonexistent/experiment.cfg"), Error);
  ExperimentConfig p;
  p.set("group", "octahedron", "--group");
  CHECK_THROWS_AS(p.group(), Error);
}
