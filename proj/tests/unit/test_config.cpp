#include <cmath>
#include <string>

#include "doctest.h"
#include "tvlab/config.hpp"
#include "tvlab/errors.hpp"

using namespace tvlab;

namespace {

std::string error_of(const std::string& text) {
  try {
    Config::parse(text, "t.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse basics") {
  const Config c = Config::parse(
      "# header\n"
      "\n"
      "grid.cells = 128   # trailing comment\n"
      "coef.gamma=1, 0.5\n"
      "  name =  hello world \n",
      "t.cfg");
  CHECK(c.keys() == std::vector<std::string>{"grid.cells", "coef.gamma", "name"});
  CHECK(c.line("grid.cells") == 3);
  CHECK(c.line("missing") == 0);
  CHECK(c.get_int("grid.cells", 0) == 128);
  CHECK(c.get_list("coef.gamma") == std::vector<double>{1.0, 0.5});
  CHECK(c.get_string("name") == "hello world");
  CHECK(c.get_double("absent", 2.5) == 2.5);
  CHECK_FALSE(c.get_optional("absent"));
  CHECK(*c.get_optional("grid.cells") == 128.0);
  CHECK(c.get_string_list("coef.gamma") == std::vector<std::string>{"1", "0.5"});
}

TEST_CASE("syntax errors carry the line") {
  CHECK(error_of("a = 1\nthis line has no equals\n").rfind("t.cfg:2:", 0) == 0);
  CHECK(error_of("a = 1\na = 2\n").find("duplicate key 'a'") != std::string::npos);
  CHECK(error_of("a = 1\na = 2\n").rfind("t.cfg:2:", 0) == 0);
  CHECK(error_of("bad key = 1\n").find("invalid key") != std::string::npos);
  CHECK(error_of("a..b = 1\n").find("invalid key") != std::string::npos);
  CHECK(error_of("a =   # nothing\n").find("empty value") != std::string::npos);
  CHECK(error_of("a = 1\n").empty());
}

TEST_CASE("type errors carry the key and line") {
  const Config c = Config::parse("x = 1\ny = abc\nz = 1.5\nw = 1, q\n", "t.cfg");
  try {
    c.get_double("y");
    FAIL("expected throw");
  } catch (const ConfigError& e) {
    const std::string m = e.what();
    CHECK(m.rfind("t.cfg:2: y:", 0) == 0);
  }
  CHECK_THROWS_AS(c.get_int("z", 0), ConfigError);
  CHECK_THROWS_AS(c.get_list("w"), ConfigError);
  CHECK_THROWS_AS(c.get_string("nope"), ConfigError);
}

TEST_CASE("numbers") {
  CHECK(parse_number("1e-3") == 1e-3);
  CHECK(parse_number(" -2.5 ") == -2.5);
  CHECK_THROWS_AS(parse_number("1.0x"), ConfigError);
  CHECK_THROWS_AS(parse_number("inf"), ConfigError);
  CHECK_THROWS_AS(parse_number("nan"), ConfigError);
  CHECK_THROWS_AS(parse_number("1e999"), ConfigError);
  CHECK_THROWS_AS(parse_number(""), ConfigError);

  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.0, -2.5e17, 0.0}) {
    CHECK(parse_number(format_number(x)) == x);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(200.0) == "200");
}

TEST_CASE("set, erase and dump round trip") {
  Config c = Config::parse("a.x = 1\na.y = 2\nb = 3\n");
  c.set("b", "4");
  c.set("c.z", "5");
  CHECK(c.get_double("b") == 4.0);
  CHECK(c.line("c.z") == 0);
  c.erase_prefix("a.");
  CHECK(c.keys() == std::vector<std::string>{"b", "c.z"});
  const Config d = Config::parse(c.dump());
  CHECK(d.keys() == c.keys());
  CHECK(d.get_string("c.z") == "5");
  CHECK_THROWS_AS(c.set("bad key", "1"), ConfigError);
}

TEST_CASE("load") {
  CHECK_THROWS_AS(Config::load("/nonexistent/file.cfg"), ConfigError);
  const Config c = Config::load(std::string(TVLAB_CONFIG_DIR) + "/equilibrium.cfg");
  CHECK(c.get_double("model.a") == 0.1);
}
