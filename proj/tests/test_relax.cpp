#include <cmath>
#include <random>

#include "doctest.h"
#include "plateau/relax.hpp"

using namespace plateau;

namespace {

const double kC1 = 3.0 * (std::sqrt(3.0) - M_PI / 2.0);   // ~0.4838
const double kC2 = 6.0 - std::sqrt(3.0) * M_PI;           // ~0.5586

WireFrame two_points_wire() {
  WireFrame w;
  w.obstacles = {{0, 0}, {1, 0}};
  w.delta = 0.05;
  return w;
}

SpanningClass two_points_cls() {
  SpanningClass c;
  c.generators = {0b01, 0b10};
  return c;
}

WireFrame triangle_wire() {
  WireFrame w;
  w.obstacles = {{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
  w.delta = 0.02;
  return w;
}

SpanningClass triangle_cls() {
  SpanningClass c;
  c.generators = {0b001, 0b010, 0b100};
  return c;
}

TemplateSpec lens_spec() {
  TemplateSpec s;
  s.type = "lens";
  return s;
}

TemplateSpec triangle_y_spec() {
  TemplateSpec s;
  s.type = "steiner";
  s.junctions = {{0.5, std::sqrt(3.0) / 6}};
  s.legs = {{0, 0, false}, {0, 1, false}, {0, 2, false}};
  s.wet_junctions = {0};
  return s;
}

SolverOptions fast_opts() {
  SolverOptions o;
  o.span_check_every = 500;  // arrangement checks are the dominant cost
  o.max_iters = 20000;
  return o;
}

FilmNetwork circle_net(double R, int n) {
  FilmNetwork net;
  net.faces.push_back({FaceLabel::Vacuum, {}, true});
  net.faces.push_back({FaceLabel::Liquid, {}, false});
  net.vertices.push_back({{R, 0}, -1});
  std::vector<Point2> interior;
  for (int k = 1; k < n; ++k) {
    double a = 2 * M_PI * k / n;
    interior.push_back({R * std::cos(a), R * std::sin(a)});
  }
  net.edges.push_back({0, 0, interior, 1, 0});
  net.faces[1].cycle = {{0, true}};
  return net;
}

}  // namespace

TEST_CASE("gradient: straight multiplicity-2 segment has zero interior force") {
  FilmNetwork net;
  net.faces.push_back({FaceLabel::Vacuum, {}, true});
  net.vertices = {{{0, 0}, -1}, {{2, 0}, -1}};
  net.edges.push_back({0, 1, {{0.7, 0.0}}, 0, 0});
  auto G = gradient(net);
  DofMap map(net);
  CHECK(G.force[map.edge_offset[0]].norm() < 1e-14);
}

TEST_CASE("gradient: symmetric Y junction has zero force") {
  FilmNetwork net;
  net.faces.push_back({FaceLabel::Vacuum, {}, true});
  net.vertices.push_back({{0, 0}, -1});
  for (int i = 0; i < 3; ++i) {
    double a = 0.4 + 2 * M_PI * i / 3;
    net.vertices.push_back({{std::cos(a), std::sin(a)}, -1});
    net.edges.push_back({0, i + 1, {}, 0, 0});
  }
  auto G = gradient(net);
  CHECK(G.force[0].norm() < 1e-14);
}

TEST_CASE("gradient matches central finite differences") {
  WireFrame w = two_points_wire();
  FilmNetwork net = instantiate(lens_spec(), w, 0.01, 6);
  // Jiggle so nothing is special.
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(-0.01, 0.01);
  DofMap map(net);
  for (int d = 0; d < map.total; ++d) map.set(net, d, map.get(net, d) + Vec2{U(rng), U(rng)});

  auto G = gradient(net);
  auto F_of = [&](FilmNetwork& n) {
    double F = 0.0;
    for (int e = 0; e < (int)n.edges.size(); ++e) F += n.multiplicity(e) * n.edge_length(e);
    return F;
  };
  auto A_of = [&](FilmNetwork& n) {
    double a = 0.0;
    for (int f = 0; f < (int)n.faces.size(); ++f)
      if (n.faces[f].label == FaceLabel::Liquid) a += n.face_area(f);
    return a;
  };
  double h = 1e-6;
  double max_rel = 0.0;
  for (int d = 0; d < map.total; ++d) {
    for (int axis = 0; axis < 2; ++axis) {
      Vec2 dir = axis == 0 ? Vec2{1, 0} : Vec2{0, 1};
      FilmNetwork plus = net, minus = net;
      map.set(plus, d, map.get(net, d) + dir * h);
      map.set(minus, d, map.get(net, d) - dir * h);
      double fd_F = (F_of(plus) - F_of(minus)) / (2 * h);
      double fd_A = (A_of(plus) - A_of(minus)) / (2 * h);
      double gF = axis == 0 ? G.force[d].x : G.force[d].y;
      double gA = axis == 0 ? G.area_grad[d].x : G.area_grad[d].y;
      max_rel = std::max(max_rel, std::abs(fd_F - gF) / (1.0 + std::abs(fd_F)));
      max_rel = std::max(max_rel, std::abs(fd_A - gA) / (1.0 + std::abs(fd_A)));
    }
  }
  CHECK(max_rel < 1e-5);
}

TEST_CASE("estimate_lambda: circle and straight boundary") {
  FilmNetwork circ = circle_net(0.7, 256);
  auto le = estimate_lambda(circ);
  REQUIRE(le.has_value());
  CHECK(le->lambda == doctest::Approx(1.0 / 0.7).epsilon(1e-3));
  CHECK(le->stddev < 1e-8 * std::abs(le->lambda) + 1e-12);

  // straight wet edges: square
  FilmNetwork sq;
  sq.faces.push_back({FaceLabel::Vacuum, {}, true});
  sq.faces.push_back({FaceLabel::Liquid, {}, false});
  sq.vertices = {{{0, 0}, -1}, {{1, 0}, -1}, {{1, 1}, -1}, {{0, 1}, -1}};
  for (int i = 0; i < 4; ++i)
    sq.edges.push_back({i, (i + 1) % 4, {{0, 0}}, 1, 0});
  for (int i = 0; i < 4; ++i) {
    auto& ed = sq.edges[i];
    ed.interior[0] = (sq.vertices[ed.a].pos + sq.vertices[ed.b].pos) * 0.5;
  }
  sq.faces[1].cycle = {{0, true}, {1, true}, {2, true}, {3, true}};
  auto ls = estimate_lambda(sq);
  REQUIRE(ls.has_value());
  CHECK(std::abs(ls->lambda) < 1e-12);

  FilmNetwork dry;
  dry.faces.push_back({FaceLabel::Vacuum, {}, true});
  dry.vertices = {{{0, 0}, -1}, {{1, 0}, -1}};
  dry.edges.push_back({0, 1, {{0.5, 0.0}}, 0, 0});
  CHECK_FALSE(estimate_lambda(dry).has_value());
}

TEST_CASE("relax: lens at eps = 1e-3 matches the closed form") {
  WireFrame w = two_points_wire();
  double eps = 1e-3, L = 0.9;
  FilmNetwork init = instantiate(lens_spec(), w, eps);
  auto r = relax(init, w, two_points_cls(), eps, fast_opts());
  CHECK(r.status != RelaxStatus::SpanningLost);
  CHECK(r.status != RelaxStatus::InfeasibleVolume);
  double expect = 2 * L + 3 * eps * eps / (L * L * L);
  CHECK(r.breakdown.energy_F == doctest::Approx(expect).epsilon(0.0).scale(0.0).epsilon(1e-9));
  CHECK(std::abs(r.breakdown.energy_F - expect) < 1e-5);
  CHECK(std::abs(r.breakdown.area - eps) <= 1e-8 * eps + 1e-15);
}

TEST_CASE("relax: triangle collapsed-Y at eps = 1e-3 matches tangent-arc form") {
  WireFrame w = triangle_wire();
  double eps = 1e-3;
  double delta = w.delta;
  double ell = std::sqrt(3.0) - 3 * delta;
  double deficit = kC2 * std::sqrt(eps / kC1);
  FilmNetwork init = instantiate(triangle_y_spec(), w, eps);
  auto r = relax(init, w, triangle_cls(), eps, fast_opts());
  CHECK(r.status != RelaxStatus::SpanningLost);
  double expect = 2 * ell - deficit;
  CHECK(std::abs(r.breakdown.energy_F - expect) < 0.01 * deficit);

  // lambda: both the projection multiplier and the curvature estimate.
  double lam_expect = -std::sqrt(kC1 / 3.0) / std::sqrt(eps);  // ~ -12.70
  REQUIRE(r.breakdown.lambda_estimate.has_value());
  CHECK(*r.breakdown.lambda_estimate == doctest::Approx(lam_expect).epsilon(0.02));
  CHECK(r.lambda == doctest::Approx(lam_expect).epsilon(0.05));
  CHECK(std::abs(r.lambda - *r.breakdown.lambda_estimate) <= 0.05 * std::abs(r.lambda));
}

TEST_CASE("relax: dry triangle converges to the Steiner Y") {
  WireFrame w = triangle_wire();
  TemplateSpec spec = triangle_y_spec();
  spec.junctions[0] = {0.55, 0.2};  // off the Fermat point on purpose
  FilmNetwork init = instantiate(spec, w, 0.0);
  auto r = relax(init, w, triangle_cls(), 0.0, fast_opts());
  double two_ell = 2 * (std::sqrt(3.0) - 3 * w.delta);
  CHECK(r.breakdown.energy_F == doctest::Approx(two_ell).epsilon(1e-6));
  // 120 degree angles at the junction (Plateau's law)
  int junction = -1;
  for (int v = 0; v < (int)r.net.vertices.size(); ++v) {
    int deg = 0;
    for (const auto& ed : r.net.edges) deg += (ed.a == v) + (ed.b == v);
    if (deg == 3) junction = v;
  }
  REQUIRE(junction >= 0);
  std::vector<double> angles;
  for (const auto& ed : r.net.edges) {
    if (ed.a != junction && ed.b != junction) continue;
    auto pts = r.net.edge_polyline(0);
    Point2 from = r.net.vertices[junction].pos;
    Point2 to = ed.a == junction
                    ? (ed.interior.empty() ? r.net.vertices[ed.b].pos : ed.interior.front())
                    : (ed.interior.empty() ? r.net.vertices[ed.a].pos : ed.interior.back());
    Vec2 d = (to - from).normalized();
    angles.push_back(std::atan2(d.y, d.x));
  }
  REQUIRE(angles.size() == 3);
  std::sort(angles.begin(), angles.end());
  for (int i = 0; i < 3; ++i) {
    double a = angles[(i + 1) % 3] - angles[i];
    if (a < 0) a += 2 * M_PI;
    CHECK(std::abs(a - 2 * M_PI / 3) < 0.5 * M_PI / 180);
  }
}

TEST_CASE("sweep: two-points quadratic excess law") {
  WireFrame w = two_points_wire();
  std::vector<double> eps;
  for (int k = 0; k < 5; ++k) eps.push_back(1e-4 * std::pow(100.0, k / 4.0));
  auto s = sweep(lens_spec(), w, two_points_cls(), eps, fast_opts());
  CHECK(s.ell_reference == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(s.fit.model == "quadratic-excess");
  CHECK(s.fit.exponent == doctest::Approx(2.0).epsilon(0.075));
  CHECK(s.fit.coefficient == doctest::Approx(3.0 / 0.729).epsilon(0.05));
  for (const auto& row : s.rows) {
    CHECK(row.spanning_ok);
    CHECK(row.energy_F > 2 * s.ell_reference);
  }
}

TEST_CASE("sweep: triangle sqrt deficit law, psi' ~ lambda") {
  WireFrame w = triangle_wire();
  std::vector<double> eps;
  for (int k = 0; k < 5; ++k) eps.push_back(1e-4 * std::pow(100.0, k / 4.0));
  auto s = sweep(triangle_y_spec(), w, triangle_cls(), eps, fast_opts());
  double ell = std::sqrt(3.0) - 3 * w.delta;
  CHECK(s.ell_reference == doctest::Approx(ell).epsilon(1e-7));
  CHECK(s.fit.model == "sqrt-deficit");
  CHECK(s.fit.exponent == doctest::Approx(0.5).epsilon(0.1));
  CHECK(s.fit.coefficient == doctest::Approx(kC2 / std::sqrt(kC1)).epsilon(0.05));
  for (const auto& row : s.rows) {
    CHECK(row.spanning_ok);
    CHECK(row.energy_F < 2 * s.ell_reference);  // sub-2ell approach
    CHECK(row.lambda < 0);
  }
  // secant slope of psi vs per-row lambda within 10%
  for (size_t i = 0; i + 1 < s.rows.size(); ++i) {
    double secant = (s.rows[i + 1].energy_F - s.rows[i].energy_F) /
                    (s.rows[i + 1].epsilon - s.rows[i].epsilon);
    double lam_mid = 0.5 * (s.rows[i + 1].lambda + s.rows[i].lambda);
    CHECK(secant == doctest::Approx(lam_mid).epsilon(0.15));
  }
}
