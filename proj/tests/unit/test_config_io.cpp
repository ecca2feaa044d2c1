#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "supra/config_io.hpp"
#include "supra/output.hpp"

using namespace supra;

namespace {

ChainConfig apply_all(const std::string& text) {
  ChainConfig cfg;
  for (const Setting& s : parse_settings(text)) {
    if (!apply_setting(cfg, s)) throw ConfigError(s.key, "not a chain key");
  }
  return cfg;
}

}  // namespace

TEST_SUITE("config_io") {

TEST_CASE("settings parser: sections, comments, key spelling") {
  const auto settings = parse_settings(
      "# heading\n"
      "[chain]\n"
      "  Mass_Squared = 0.01   # trailing comment\n"
      "\n"
      "[drive]\n"
      "frequency=0.8\n");
  REQUIRE(settings.size() == 2);
  CHECK(settings[0].key == "mass-squared");
  CHECK(settings[0].value == "0.01");
  CHECK(settings[0].line == 3);
  CHECK(settings[1].key == "frequency");
  CHECK(settings[1].value == "0.8");
  CHECK_THROWS_AS(parse_settings("gamma 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_settings("[chain\n"), ConfigError);
  CHECK_THROWS_AS(parse_settings(" = 3\n"), ConfigError);
  CHECK(parse_settings("").empty());
}

TEST_CASE("applying settings") {
  const ChainConfig cfg = apply_all(
      "n = 120\nn0 = 90\ngamma = 0.03\npotential = klein-gordon\nscheme = rk4\n"
      "absorber = printed\nt_final = 50\nramp-time = 10\nsecond-order-start = yes\n");
  CHECK(cfg.n_sites == 120);
  CHECK(cfg.n_physical == 90);
  CHECK(cfg.gamma == 0.03);
  CHECK(cfg.potential == PotentialKind::KleinGordon);
  CHECK(cfg.scheme == Scheme::Rk4);
  CHECK(cfg.absorber == AbsorberForm::Printed);
  CHECK(cfg.t_final == 50.0);
  CHECK(cfg.drive.ramp_time == 10.0);
  CHECK(cfg.second_order_start);

  ChainConfig other;
  CHECK_FALSE(apply_setting(other, Setting{"probes", "60", 0}));
  try {
    apply_setting(other, Setting{"beta", "0.1x", 0});
    FAIL("expected a ConfigError");
  } catch (const ConfigError& err) {
    CHECK(err.field() == "beta");
  }
  CHECK_THROWS_AS(apply_setting(other, Setting{"n", "2.5", 0}), ConfigError);
  CHECK_THROWS_AS(apply_setting(other, Setting{"potential", "phi4", 0}), ConfigError);
  CHECK_THROWS_AS(apply_setting(other, Setting{"dt", "inf", 0}), ConfigError);
}

TEST_CASE("number and list parsing") {
  CHECK(parse_double("x", " 1e-3 ") == 0.001);
  CHECK(parse_double("x", "+2") == 2.0);
  CHECK_THROWS_AS(parse_double("x", ""), ConfigError);
  CHECK_THROWS_AS(parse_double("x", "1,5"), ConfigError);
  CHECK(parse_int("x", "-4") == -4);
  CHECK(parse_double_list("x", "0.5, 1,2") == std::vector<double>{0.5, 1.0, 2.0});
  const auto range = parse_double_list("x", "0.1:0.5:0.1");
  REQUIRE(range.size() == 5);
  CHECK(range.back() == doctest::Approx(0.5));
  CHECK(parse_double_list("x", "1:1:0.5") == std::vector<double>{1.0});
  CHECK_THROWS_AS(parse_double_list("x", "1:0:0.1"), ConfigError);
  CHECK_THROWS_AS(parse_double_list("x", "0:1"), ConfigError);
  CHECK(parse_int_list("x", "1,60,200") == std::vector<int>{1, 60, 200});
  CHECK(parse_bool("x", "On"));
  CHECK_FALSE(parse_bool("x", "0"));
  CHECK_THROWS_AS(parse_bool("x", "maybe"), ConfigError);
}

TEST_CASE("dump re-parses to the same configuration") {
  ChainConfig cfg;
  cfg.gamma = 0.01;
  cfg.beta = 0.1 + 0.2;  // not exactly 0.3
  cfg.mass_squared = 1.0 / 3.0;
  cfg.potential = PotentialKind::KleinGordon;
  cfg.n_sites = 4;
  cfg.n_physical = 3;
  cfg.initial_displacement = {0.1, -0.2, 1e-17, 3.0};
  const std::string text = dump_config(cfg);
  const ChainConfig back = apply_all(text);
  CHECK(back.beta == cfg.beta);
  CHECK(back.mass_squared == cfg.mass_squared);
  CHECK(back.initial_displacement == cfg.initial_displacement);
  CHECK(back.initial_velocity.empty());
  CHECK(dump_config(back) == text);

  RunManifest a, b;
  a.config = cfg;
  b.config = back;
  a.subcommand = b.subcommand = "sweep";
  a.parameters = b.parameters = {{"amplitudes", "0.1:3:0.1"}};
  CHECK(a.content_hash() == b.content_hash());
  b.parameters[0].second = "0.1:3:0.2";
  CHECK(a.content_hash() != b.content_hash());
  // the timestamp is provenance, not input
  b = a;
  b.timestamp = "2026-01-01T00:00:00Z";
  CHECK(a.content_hash() == b.content_hash());
}

TEST_CASE("number formatting") {
  CHECK(format_shortest(0.05) == "0.05");
  CHECK(format_shortest(200.0) == "200");
  CHECK(format_fixed17(0.1) == "0.10000000000000001");
  CHECK(format_fixed17(1.0) == "1");
  CHECK(format_fixed17(-2.5e-300) == "-2.5e-300");
  CHECK(format_fixed17(1e23) == "9.9999999999999992e+22");
  CHECK(format_fixed17(std::nan("")) == "nan");
  CHECK(parse_double("x", format_fixed17(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("FNV-1a reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(hex64(0xabcull) == "0000000000000abc");
}

TEST_CASE("CSV layout") {
  RunManifest m;
  m.subcommand = "simulate";
  m.parameters = {{"probes", "60"}};
  CsvTable table({"t", "u_60"});
  table.add_row({0.0, 0.25});
  table.add_row({0.05, -1.0 / 3.0});
  CHECK_THROWS_AS(table.add_row({1.0}), std::invalid_argument);
  std::ostringstream out;
  table.write(out, m);
  const std::string text = out.str();
  CHECK(text.rfind("# supra 0.1.0 simulate\n# content-hash = " + hex64(m.content_hash()) + "\n", 0) == 0);
  CHECK(text.find("# probes = 60\n") != std::string::npos);
  CHECK(text.find("# dt = 0.05\n") != std::string::npos);
  CHECK(text.find("\nt,u_60\n0,0.25\n0.050000000000000003,-0.33333333333333331\n") != std::string::npos);
  CHECK(text.find("created") == std::string::npos);
  // every header line is a comment
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line) && line != "t,u_60") CHECK(line.rfind("# ", 0) == 0);
}

TEST_CASE("SVG output is a single well-formed panel") {
  const std::string svg = render_svg("title <x>", "A", "E",
                                     {{"one", {0, 1, 2}, {0, 1, 4}}, {"two", {0, 1}, {1, std::nan("")}}});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("title &lt;x&gt;") != std::string::npos);
  std::size_t paths = 0;
  for (auto pos = svg.find("<path"); pos != std::string::npos; pos = svg.find("<path", pos + 1)) ++paths;
  CHECK(paths == 2);
}

}  // TEST_SUITE
