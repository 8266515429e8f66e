#include "plateau/templates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plateau {

namespace {

constexpr double kC1 = 3.0 * (1.7320508075688772 - M_PI / 2.0);  // 3(sqrt3 - pi/2)

Point2 anchor_point(const WireFrame& wire, int obstacle, Point2 toward) {
  Vec2 d = (toward - wire.obstacles[obstacle]).normalized();
  return wire.obstacles[obstacle] + d * wire.delta;
}

// Sample an arc from p to q about center c (minor arc), endpoints exact.
std::vector<Point2> arc_interior(Point2 c, Point2 p, Point2 q, int samples) {
  double r0 = dist(p, c), r1 = dist(q, c);
  double t0 = std::atan2(p.y - c.y, p.x - c.x);
  double t1 = std::atan2(q.y - c.y, q.x - c.x);
  double dt = t1 - t0;
  while (dt > M_PI) dt -= 2 * M_PI;
  while (dt <= -M_PI) dt += 2 * M_PI;
  std::vector<Point2> out;
  for (int k = 1; k < samples; ++k) {
    double s = (double)k / samples;
    double r = r0 + (r1 - r0) * s, a = t0 + dt * s;
    out.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return out;
}

}  // namespace

int wet_junction_count(const TemplateSpec& spec) {
  return spec.type == "lens" ? 0 : (int)spec.wet_junctions.size();
}

FilmNetwork instantiate(const TemplateSpec& spec, const WireFrame& wire, double epsilon,
                        int samples_per_arc) {
  if (epsilon < 0) throw std::invalid_argument("instantiate: epsilon must be >= 0");
  FilmNetwork net;
  net.faces.push_back({FaceLabel::Vacuum, {}, true});  // face 0: unbounded

  auto add_segments = [&] {
    for (auto [i, j] : spec.segments) {
      Point2 pi = anchor_point(wire, i, wire.obstacles.at(j));
      Point2 pj = anchor_point(wire, j, wire.obstacles.at(i));
      int va = (int)net.vertices.size();
      net.vertices.push_back({pi, i});
      int vb = (int)net.vertices.size();
      net.vertices.push_back({pj, j});
      net.edges.push_back({va, vb, {}, 0, 0});
    }
  };

  if (spec.type == "lens") {
    Point2 A = wire.obstacles.at(spec.lens_i), B = wire.obstacles.at(spec.lens_j);
    Point2 pa = anchor_point(wire, spec.lens_i, B);
    Point2 pb = anchor_point(wire, spec.lens_j, A);
    net.vertices.push_back({pa, spec.lens_i});
    net.vertices.push_back({pb, spec.lens_j});
    if (epsilon == 0) {
      net.edges.push_back({0, 1, {}, 0, 0});
      add_segments();
      return net;
    }
    double L = dist(pa, pb);
    // Exact two-arc lens enclosing area epsilon: circular segments of
    // half-angle phi over the chord, area = 2 rho^2 (phi - sin phi cos phi)
    // with rho = L / (2 sin phi). Monotone in phi; solve by bisection.
    auto seg_area = [&](double phi) {
      double rho = L / (2 * std::sin(phi));
      return 2 * rho * rho * (phi - std::sin(phi) * std::cos(phi));
    };
    double lo = 1e-9, hi_phi = M_PI / 2 - 1e-9;
    if (epsilon >= seg_area(hi_phi)) throw std::invalid_argument("instantiate: lens area too big");
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi_phi);
      (seg_area(mid) < epsilon ? lo : hi_phi) = mid;
    }
    double phi = 0.5 * (lo + hi_phi);
    double rho = L / (2 * std::sin(phi));
    Vec2 u = (pb - pa).normalized(), n = u.perp();
    Point2 mid = (pa + pb) * 0.5;
    Point2 c_top = mid - n * (rho * std::cos(phi));
    Point2 c_bot = mid + n * (rho * std::cos(phi));
    net.faces.push_back({FaceLabel::Liquid, {}, false});                          // face 1
    net.edges.push_back({0, 1, arc_interior(c_top, pa, pb, samples_per_arc), 0, 1});
    net.edges.push_back({0, 1, arc_interior(c_bot, pa, pb, samples_per_arc), 1, 0});
    net.faces[1].cycle = {{1, true}, {0, false}};
    add_segments();
    return net;
  }

  if (spec.type != "steiner") throw std::invalid_argument("instantiate: unknown template type");

  int nj = (int)spec.junctions.size();
  std::vector<std::vector<int>> incident(nj);  // leg indices per junction
  for (int l = 0; l < (int)spec.legs.size(); ++l) {
    const auto& leg = spec.legs[l];
    incident.at(leg.j).push_back(l);
    if (leg.to_junction) incident.at(leg.to).push_back(l);
  }
  std::vector<char> wet(nj, 0);
  if (epsilon > 0)
    for (int j : spec.wet_junctions) {
      wet.at(j) = 1;
      if (incident[j].size() != 3)
        throw std::invalid_argument("instantiate: wet junction must have degree 3");
    }
  int nwet = 0;
  for (char c : wet) nwet += c;
  double eps_j = nwet > 0 ? epsilon / nwet : 0.0;
  double t = nwet > 0 ? std::sqrt(eps_j / kC1) : 0.0;

  // Dry junction vertices.
  std::vector<int> jvert(nj, -1);
  for (int j = 0; j < nj; ++j)
    if (!wet[j]) {
      jvert[j] = (int)net.vertices.size();
      net.vertices.push_back({spec.junctions[j], -1});
    }

  // Wet junctions: three corner vertices + three inward-bulging arcs.
  // corner_of[j][l] = corner vertex sitting on leg l at junction j.
  std::vector<std::vector<std::pair<int, int>>> corner_of(nj);  // (leg, vertex)
  for (int j = 0; j < nj; ++j) {
    if (!wet[j]) continue;
    Point2 J = spec.junctions[j];
    struct Dir {
      int leg;
      Vec2 d;
      double ang;
    };
    std::vector<Dir> dirs;
    for (int l : incident[j]) {
      const auto& leg = spec.legs[l];
      Point2 other;
      if (leg.to_junction)
        other = spec.junctions[leg.j == j ? leg.to : leg.j];
      else
        other = anchor_point(wire, leg.to, J);
      Vec2 d = (other - J).normalized();
      dirs.push_back({l, d, std::atan2(d.y, d.x)});
    }
    std::sort(dirs.begin(), dirs.end(), [](const Dir& a, const Dir& b) { return a.ang < b.ang; });
    int cv[3];
    for (int i = 0; i < 3; ++i) {
      cv[i] = (int)net.vertices.size();
      net.vertices.push_back({J + dirs[i].d * t, -1});
      corner_of[j].push_back({dirs[i].leg, cv[i]});
    }
    int face = (int)net.faces.size();
    net.faces.push_back({FaceLabel::Liquid, {}, false});
    for (int i = 0; i < 3; ++i) {
      int k = (i + 1) % 3;
      Vec2 bis = (dirs[i].d + dirs[k].d).normalized();
      Point2 center = J + bis * (2 * t);
      int e = (int)net.edges.size();
      net.edges.push_back({cv[i], cv[k],
                           arc_interior(center, net.vertices[cv[i]].pos, net.vertices[cv[k]].pos,
                                        std::max(2, samples_per_arc / 2)),
                           face, 0});
      net.faces[face].cycle.push_back({e, true});
    }
  }

  auto leg_endpoint = [&](int l, int j) -> int {
    // Vertex where leg l attaches at junction j.
    if (!wet[j]) return jvert[j];
    for (auto& [leg, v] : corner_of[j])
      if (leg == l) return v;
    throw std::logic_error("instantiate: leg not found at junction");
  };

  for (int l = 0; l < (int)spec.legs.size(); ++l) {
    const auto& leg = spec.legs[l];
    int va = leg_endpoint(l, leg.j);
    int vb;
    if (leg.to_junction) {
      vb = leg_endpoint(l, leg.to);
    } else {
      vb = (int)net.vertices.size();
      net.vertices.push_back({anchor_point(wire, leg.to, spec.junctions[leg.j]), leg.to});
    }
    net.edges.push_back({va, vb, {}, 0, 0});
  }

  add_segments();
  return net;
}

}  // namespace plateau
