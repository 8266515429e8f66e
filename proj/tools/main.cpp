// Command-line driver: solve / sweep / verify / select / render on scenario
// files. Exit codes: 0 ok, 2 parse/schema error, 3 solver failure,
// 4 verification violations.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "plateau/competitors.hpp"
#include "plateau/diagnostics.hpp"
#include "plateau/io.hpp"
#include "plateau/relax.hpp"
#include "plateau/scenario.hpp"

using namespace plateau;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerify = 4;

struct Args {
  std::string scenario_path;
  std::optional<double> epsilon;
  std::string epsilons_range;
  std::string template_name;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string checks = "competitors,el,junctions,density,hull";
  std::string format = "both";
  std::string dump_path;  // render input
};

void emit_error(const std::string& out_dir, const std::string& kind, const std::string& what) {
  nlohmann::json j{{"error", kind}, {"message", what}};
  std::cerr << j.dump() << "\n";
  if (!out_dir.empty()) {
    try {
      write_text_file(out_dir + "/error.json", j.dump(2) + "\n");
    } catch (...) {
    }
  }
}

const TemplateSpec& pick_template(const Scenario& sc, const std::string& name) {
  if (name.empty()) return sc.templates.front();
  const TemplateSpec* t = sc.find_template(name);
  if (!t) throw SchemaError("unknown template: " + name);
  return *t;
}

bool has_check(const std::string& list, const std::string& item) {
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (tok == item) return true;
  return false;
}

std::string status_name(RelaxStatus s) {
  switch (s) {
    case RelaxStatus::Converged: return "converged";
    case RelaxStatus::NotConverged: return "not-converged";
    case RelaxStatus::SpanningLost: return "spanning-lost";
    case RelaxStatus::InfeasibleVolume: return "infeasible-volume";
  }
  return "unknown";
}

nlohmann::json energy_record(double epsilon, const RelaxResult& res) {
  return {{"epsilon", epsilon},
          {"energy_F", res.breakdown.energy_F},
          {"boundary_length", res.breakdown.boundary_length},
          {"collapsed_length", res.breakdown.collapsed_length},
          {"area", res.breakdown.area},
          {"lambda", res.lambda},
          {"iterations", res.iterations},
          {"status", status_name(res.status)}};
}

int cmd_solve(const Scenario& sc, const Args& args) {
  const TemplateSpec& tmpl = pick_template(sc, args.template_name);
  double eps = args.epsilon ? *args.epsilon : (sc.epsilons.empty() ? 0.0 : sc.epsilons.front());
  FilmNetwork init = instantiate(tmpl, sc.wire, eps);
  RelaxResult res = relax(init, sc.wire, sc.spanning, eps, sc.solver);
  std::string base = args.out_dir + "/" + sc.name + "_" +
                     (tmpl.name.empty() ? tmpl.type : tmpl.name) + "_solve";
  if (res.status == RelaxStatus::SpanningLost || res.status == RelaxStatus::InfeasibleVolume ||
      res.status == RelaxStatus::NotConverged) {
    emit_error(args.out_dir, "solver", status_name(res.status) + ": " + res.message);
    return kExitSolver;
  }
  write_text_file(base + ".json", network_to_json(res.net));
  if (args.format != "csv") write_text_file(base + ".svg", render_svg(res.net, sc.wire));
  write_text_file(base + "_energy.json", energy_record(eps, res).dump(2) + "\n");
  std::cout << energy_record(eps, res).dump() << "\n";
  return kExitOk;
}

int cmd_sweep(const Scenario& sc, const Args& args) {
  const TemplateSpec& tmpl = pick_template(sc, args.template_name);
  std::vector<double> epsilons =
      args.epsilons_range.empty() ? sc.epsilons : parse_epsilon_range(args.epsilons_range);
  std::string base =
      args.out_dir + "/" + sc.name + "_" + (tmpl.name.empty() ? tmpl.type : tmpl.name);
  if (epsilons.empty()) {
    write_text_file(base + "_sweep.csv", sweep_csv({}));
    std::cout << "{\"rows\":0}\n";
    return kExitOk;
  }
  SweepResult sr = sweep(tmpl, sc.wire, sc.spanning, epsilons, sc.solver);
  if (!sr.all_ok) {
    emit_error(args.out_dir, "solver", "sweep contains non-converged rows");
    return kExitSolver;
  }
  write_text_file(base + "_sweep.csv", sweep_csv(sr.rows));
  nlohmann::json fit{{"model", sr.fit.model},
                     {"exponent", sr.fit.exponent},
                     {"coefficient", sr.fit.coefficient},
                     {"r2", sr.fit.r2},
                     {"ell_reference", sr.ell_reference}};
  write_text_file(base + "_fit.json", fit.dump(2) + "\n");
  if (args.format != "csv") {
    for (const auto& row : sr.rows) {
      FilmNetwork net = instantiate(tmpl, sc.wire, row.epsilon);
      RelaxResult res = relax(net, sc.wire, sc.spanning, row.epsilon, sc.solver);
      char tag[40];
      std::snprintf(tag, sizeof tag, "_eps_%.3e.svg", row.epsilon);
      write_text_file(base + tag, render_svg(res.net, sc.wire));
    }
  }
  std::cout << fit.dump() << "\n";
  return kExitOk;
}

int cmd_verify(const Scenario& sc, const Args& args) {
  const TemplateSpec& tmpl = pick_template(sc, args.template_name);
  double eps = args.epsilon ? *args.epsilon : (sc.epsilons.empty() ? 1e-3 : sc.epsilons.front());
  FilmNetwork init = instantiate(tmpl, sc.wire, eps);
  RelaxResult res = relax(init, sc.wire, sc.spanning, eps, sc.solver);
  if (res.status != RelaxStatus::Converged) {
    emit_error(args.out_dir, "solver", status_name(res.status) + ": " + res.message);
    return kExitSolver;
  }
  const FilmNetwork& net = res.net;
  std::mt19937_64 rng(args.seed ? *args.seed : sc.solver.seed);
  std::ostringstream rep;
  bool failed = false;
  auto section = [&](const std::string& name, bool ok, const std::string& detail) {
    rep << "[" << name << "] " << (ok ? "pass" : "FAIL") << "\n" << detail << "\n";
    if (!ok) failed = true;
  };

  auto le = estimate_lambda(net);
  double lam = le ? le->lambda : 0.0;

  if (has_check(args.checks, "competitors")) {
    auto balls = sample_balls(net, sc.wire, 20, rng);
    double C_star = 4 * (1 + std::abs(lam));
    MinimalityReport mr =
        verify_minimality(net, sc.wire, balls, C_star, 1e-4 * res.breakdown.energy_F);
    std::ostringstream d;
    d << "  balls=" << balls.size() << " records=" << mr.records.size()
      << " violations=" << mr.violations << " C_star=" << C_star << "\n";
    for (const auto& r : mr.records)
      if (r.violation)
        d << "  violation " << r.construction << " at (" << r.ball.center.x << ","
          << r.ball.center.y << ") r=" << r.ball.radius << "\n";
    section("competitors", mr.violations == 0, d.str());
  }
  if (has_check(args.checks, "el")) {
    std::vector<TestField> fields;
    Point2 lo{1e300, 1e300}, hi{-1e300, -1e300};
    for (const auto& poly : net.as_polylines())
      for (const auto& p : poly) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
      }
    Point2 cen = (lo + hi) * 0.5;
    double rad = 0.25 * std::max(hi.x - lo.x, hi.y - lo.y) + 1e-6;
    std::uniform_real_distribution<double> U(-0.3, 0.3);
    for (int k = 0; k < 10; ++k) {
      Disk2 support(cen + Vec2{U(rng) * rad, U(rng) * rad}, rad);
      bool clear = true;
      for (int i = 0; i < sc.wire.count(); ++i)
        clear = clear &&
                dist(support.center, sc.wire.obstacles[i]) > sc.wire.delta + support.radius + 1e-6;
      if (!clear) {
        --k;
        continue;
      }
      fields.push_back(TestField::random(support, 2, rng));
    }
    double resid = el_residual(net, lam, fields, &sc.wire);
    std::ostringstream d;
    d << "  lambda=" << lam << " residual=" << resid << "\n";
    section("el", resid < 1e-2, d.str());
  }
  if (has_check(args.checks, "junctions")) {
    auto jr = junction_report(net);
    double worst = 0;
    int y_count = 0, tangent_count = 0;
    for (const auto& j : jr) {
      if (j.tangential) {
        ++tangent_count;  // (2,1,1) tangential contact, no 120-degree law
        continue;
      }
      ++y_count;
      worst = std::max(worst, j.max_dev_deg);
    }
    std::ostringstream d;
    d << "  Y=" << y_count << " tangential=" << tangent_count << " worst_dev_deg=" << worst
      << "\n";
    section("junctions", worst < 0.5, d.str());
  }
  if (has_check(args.checks, "density")) {
    bool ok = true;
    std::ostringstream d;
    for (int e = 0; e < (int)net.edges.size(); ++e) {
      auto pts = net.edge_polyline(e);
      Point2 c = pts[pts.size() / 2];
      double r_max = 0.25 * net.edge_length(e);
      if (r_max < 1e-6) continue;
      auto prof = density_profile(net, c, {r_max / 4, r_max / 2, r_max});
      double floor = net.multiplicity(e) == 2 ? 2.0 : 1.0;
      bool row_ok = prof.monotone && prof.min_ratio >= floor - 1e-3;
      ok = ok && row_ok;
      d << "  edge " << e << " min_ratio=" << prof.min_ratio << " floor=" << floor
        << " monotone=" << prof.monotone << "\n";
    }
    section("density", ok, d.str());
  }
  if (has_check(args.checks, "hull")) {
    auto chk = convex_hull_check(net, sc.wire);
    std::ostringstream d;
    d << "  max_violation=" << chk.max_violation << "\n";
    section("hull", chk.ok, d.str());
  }

  std::string base = args.out_dir + "/" + sc.name + "_" +
                     (tmpl.name.empty() ? tmpl.type : tmpl.name) + "_verify.txt";
  write_text_file(base, rep.str());
  std::cout << rep.str();
  return failed ? kExitVerify : kExitOk;
}

int cmd_select(const Scenario& sc, const Args& args) {
  std::vector<double> epsilons =
      args.epsilons_range.empty() ? sc.epsilons : parse_epsilon_range(args.epsilons_range);
  if (epsilons.empty()) epsilons = {1e-3};
  nlohmann::json out = nlohmann::json::array();
  std::ostringstream txt;
  for (double eps : epsilons) {
    std::string best;
    double best_F = 1e300;
    nlohmann::json row{{"epsilon", eps}, {"candidates", nlohmann::json::array()}};
    for (const auto& tmpl : sc.templates) {
      FilmNetwork init = instantiate(tmpl, sc.wire, eps);
      RelaxResult res = relax(init, sc.wire, sc.spanning, eps, sc.solver);
      if (res.status != RelaxStatus::Converged) {
        emit_error(args.out_dir, "solver",
                   tmpl.name + ": " + status_name(res.status) + ": " + res.message);
        return kExitSolver;
      }
      row["candidates"].push_back({{"template", tmpl.name},
                                   {"energy_F", res.breakdown.energy_F},
                                   {"wet_junctions", wet_junction_count(tmpl)}});
      if (res.breakdown.energy_F < best_F) {
        best_F = res.breakdown.energy_F;
        best = tmpl.name;
      }
    }
    row["winner"] = best;
    out.push_back(row);
    txt << "epsilon=" << eps << " winner=" << best << " energy_F=" << best_F << "\n";
  }
  write_text_file(args.out_dir + "/" + sc.name + "_select.json", out.dump(2) + "\n");
  std::cout << txt.str();
  return kExitOk;
}

int cmd_render(const Scenario& sc, const Args& args) {
  if (args.dump_path.empty()) throw SchemaError("render: --dump PATH required");
  std::ifstream in(args.dump_path);
  if (!in) throw ParseError("cannot open dump: " + args.dump_path);
  std::stringstream ss;
  ss << in.rdbuf();
  FilmNetwork net = network_from_json(ss.str());
  std::string out = args.out_dir + "/render.svg";
  write_text_file(out, render_svg(net, sc.wire));
  std::cout << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar capillarity solver for spanning networks"};
  app.require_subcommand(1);
  Args args;
  std::string command;
  for (const char* name : {"solve", "sweep", "verify", "select", "render"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--scenario", args.scenario_path)->required();
    sub->add_option("--epsilon", args.epsilon);
    sub->add_option("--epsilons", args.epsilons_range);
    sub->add_option("--template", args.template_name);
    sub->add_option("--out", args.out_dir);
    sub->add_option("--seed", args.seed);
    sub->add_option("--checks", args.checks);
    sub->add_option("--format", args.format)->check(CLI::IsMember({"csv", "svg", "both"}));
    sub->add_option("--dump", args.dump_path);
    sub->callback([&command, name] { command = name; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    Scenario sc = load_scenario(args.scenario_path);
    if (args.out_dir.empty()) args.out_dir = sc.outputs;
    if (args.seed) sc.solver.seed = *args.seed;
    if (command == "solve") return cmd_solve(sc, args);
    if (command == "sweep") return cmd_sweep(sc, args);
    if (command == "verify") return cmd_verify(sc, args);
    if (command == "select") return cmd_select(sc, args);
    if (command == "render") return cmd_render(sc, args);
    return kExitSchema;
  } catch (const ParseError& e) {
    emit_error(args.out_dir, "parse", e.what());
    return kExitSchema;
  } catch (const SchemaError& e) {
    emit_error(args.out_dir, "schema", e.what());
    return kExitSchema;
  } catch (const std::exception& e) {
    emit_error(args.out_dir, "solver", e.what());
    return kExitSolver;
  }
}
