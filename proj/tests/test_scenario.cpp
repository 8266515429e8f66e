#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "plateau/io.hpp"
#include "plateau/scenario.hpp"
#include "plateau/templates.hpp"

using namespace plateau;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string write_tmp(const std::string& name, const std::string& content) {
  std::string path = "scenario_tmp_" + name;
  write_text_file(path, content);
  return path;
}

const char* kMinimalScenario = R"({
  "name": "mini",
  "wire": {"obstacles": [[0,0],[1,0]], "delta": 0.05},
  "spanning": {"generators": [[1,0],[0,1]]},
  "templates": [{"name": "lens", "type": "lens", "lens": [0,1]}]
})";

}  // namespace

TEST_CASE("load_scenario: shipped fixtures parse and validate") {
  Scenario sc = load_scenario(std::string(SCENARIO_DIR) + "/two_points.json");
  CHECK(sc.name == "two_points");
  CHECK(sc.wire.count() == 2);
  CHECK(sc.wire.delta == doctest::Approx(0.05));
  REQUIRE(sc.spanning.generators.size() == 2);
  CHECK(sc.spanning.generators[0] == 0b01);
  CHECK(sc.spanning.generators[1] == 0b10);
  REQUIRE(sc.templates.size() == 1);
  CHECK(sc.templates[0].type == "lens");
  REQUIRE(sc.epsilons.size() == 9);
  CHECK(sc.epsilons.front() == doctest::Approx(1e-4));
  CHECK(sc.epsilons.back() == doctest::Approx(1e-2));

  for (const char* name : {"triangle", "four_points", "six_points"}) {
    Scenario s = load_scenario(std::string(SCENARIO_DIR) + "/" + name + ".json");
    CHECK(!s.templates.empty());
    CHECK(s.spanning.generators.size() == (size_t)s.wire.count());
    // Every template instantiates dry and wet without throwing.
    for (const auto& t : s.templates) {
      FilmNetwork dry = instantiate(t, s.wire, 0.0);
      CHECK(validate(dry, &s.wire).empty());
      if (wet_junction_count(t) > 0 || t.type == "lens") {
        FilmNetwork wet = instantiate(t, s.wire, 1e-3);
        CHECK(validate(wet, &s.wire).empty());
      }
    }
  }
}

TEST_CASE("parse_scenario: schema violations") {
  std::string base = kMinimalScenario;
  auto patched = [&](const std::string& from, const std::string& to) {
    std::string s = base;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  CHECK_THROWS_AS(parse_scenario("{nope"), ParseError);
  CHECK_THROWS_WITH_AS(parse_scenario(patched("0.05", "-0.05")),
                       doctest::Contains("delta"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_scenario(patched("[0,1]]", "[0,1],[0,0]]")),
                       doctest::Contains("generators"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_scenario(patched("\"name\": \"mini\"", "\"nam\": \"mini\"")),
                       doctest::Contains("unknown key"), SchemaError);
  CHECK_THROWS_AS(parse_scenario(patched("\"lens\", \"lens\"", "\"lens\", \"blob\"")),
                  SchemaError);
  CHECK_NOTHROW(parse_scenario(base));
}

TEST_CASE("parse_epsilon_range") {
  auto eps = parse_epsilon_range("1e-4:1e-2:3");
  REQUIRE(eps.size() == 3);
  CHECK(eps[0] == doctest::Approx(1e-4));
  CHECK(eps[1] == doctest::Approx(1e-3));
  CHECK(eps[2] == doctest::Approx(1e-2));
  CHECK_THROWS_AS(parse_epsilon_range("1:2"), SchemaError);
  CHECK_THROWS_AS(parse_epsilon_range("-1:2:3"), SchemaError);
}

TEST_CASE("sweep_csv: exact schema") {
  std::string header =
      "epsilon,energy_F,boundary_length,collapsed_length,lambda,iterations,spanning_ok,"
      "ell_reference\n";
  CHECK(sweep_csv({}) == header);
  SweepRow r;
  r.epsilon = 1e-3;
  r.energy_F = 1.8000041152263374;
  r.boundary_length = 1.8000041152263374;
  r.collapsed_length = 0;
  r.lambda = 0.0123;
  r.iterations = 42;
  r.spanning_ok = true;
  r.ell_reference = 0.9;
  std::string csv = sweep_csv({r});
  CHECK(csv.substr(0, header.size()) == header);
  CHECK(csv.find("0.001,1.8000041152263373,1.8000041152263373,0,0.0123,42,1,"
                 "0.90000000000000002\n") != std::string::npos);
}

TEST_CASE("render_svg: wire disks, liquid fill, bold collapsed strokes") {
  Scenario sc = load_scenario(std::string(SCENARIO_DIR) + "/four_points.json");
  const TemplateSpec* verticals = sc.find_template("verticals");
  REQUIRE(verticals);
  FilmNetwork net = instantiate(*verticals, sc.wire, 1e-3);
  std::string svg = render_svg(net, sc.wire);
  CHECK(svg.find("<svg") == 0);
  size_t circles = 0, pos = 0;
  while ((pos = svg.find("<circle", pos)) != std::string::npos) {
    ++circles;
    ++pos;
  }
  CHECK(circles == 4);
  CHECK(svg.find("fill=\"#9ecae9\"") != std::string::npos);   // liquid face
  CHECK(svg.find("stroke=\"#000000\"") != std::string::npos); // collapsed bold
  CHECK(svg.find("stroke=\"#1f4e79\"") != std::string::npos); // wet stroke
  // Witness loop renders dashed.
  std::vector<Point2> loop = {{0, 0}, {1, 0}, {1, 1}};
  std::string svg2 = render_svg(net, sc.wire, &loop);
  CHECK(svg2.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("network json dump round-trips") {
  Scenario sc = load_scenario(std::string(SCENARIO_DIR) + "/triangle.json");
  FilmNetwork net = instantiate(sc.templates[0], sc.wire, 1e-3);
  FilmNetwork back = network_from_json(network_to_json(net));
  REQUIRE(back.vertices.size() == net.vertices.size());
  REQUIRE(back.edges.size() == net.edges.size());
  REQUIRE(back.faces.size() == net.faces.size());
  for (size_t i = 0; i < net.vertices.size(); ++i) {
    CHECK(back.vertices[i].pos.x == net.vertices[i].pos.x);
    CHECK(back.vertices[i].anchor == net.vertices[i].anchor);
  }
  for (size_t e = 0; e < net.edges.size(); ++e) {
    CHECK(back.edges[e].interior.size() == net.edges[e].interior.size());
    CHECK(back.edges[e].left_face == net.edges[e].left_face);
  }
  CHECK(energy(back).energy_F == energy(net).energy_F);
  CHECK(validate(back).empty());
}

TEST_CASE("cli: solve matches the lens closed form, determinism, exit codes") {
  std::string scen = std::string(SCENARIO_DIR) + "/two_points.json";
  REQUIRE(run_cli("solve --scenario " + scen + " --epsilon 1e-3 --out cli_out_a") == 0);
  {
    std::string rec = slurp("cli_out_a/two_points_lens_solve_energy.json");
    // F = 2L + 3 eps^2 / L^3 with L = 0.9.
    double expect = 1.8 + 3e-6 / 0.729;
    size_t k = rec.find("\"energy_F\"");
    REQUIRE(k != std::string::npos);
    double got = std::atof(rec.c_str() + rec.find(':', k) + 1);
    CHECK(got == doctest::Approx(expect).epsilon(1e-5));
  }
  REQUIRE(run_cli("solve --scenario " + scen + " --epsilon 1e-3 --out cli_out_b") == 0);
  CHECK(slurp("cli_out_a/two_points_lens_solve.json") ==
        slurp("cli_out_b/two_points_lens_solve.json"));

  // Empty epsilon list: exit 0, header-only CSV.
  std::string empty = write_tmp("empty.json", kMinimalScenario);
  REQUIRE(run_cli("sweep --scenario " + empty + " --out cli_out_c --format csv") == 0);
  CHECK(slurp("cli_out_c/mini_lens_sweep.csv") ==
        "epsilon,energy_F,boundary_length,collapsed_length,lambda,iterations,spanning_ok,"
        "ell_reference\n");

  // Schema error: exit 2.
  std::string bad = write_tmp("bad.json", "{\"name\": 3}");
  CHECK(run_cli("sweep --scenario " + bad) == 2);
  CHECK(run_cli("solve --scenario does_not_exist.json") == 2);

  // render round trip from the solve dump.
  REQUIRE(run_cli("render --scenario " + scen +
                  " --dump cli_out_a/two_points_lens_solve.json --out cli_out_a") == 0);
  CHECK(slurp("cli_out_a/render.svg").find("<svg") == 0);
}
