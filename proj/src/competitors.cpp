#include "plateau/competitors.hpp"

#include <algorithm>
#include <cmath>

namespace plateau {

namespace {

double point_seg_dist(const Point2& p, const Point2& a, const Point2& b) {
  Vec2 d = b - a;
  double len2 = d.norm2();
  if (len2 == 0.0) return dist(p, a);
  double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return dist(p, a + d * t);
}

// Paper's u_eta (unit ball), eta in (0,1): collapse B_{1-eta} by factor eta,
// stretch the remaining annulus to match the identity on the sphere.
double u_eta(double t, double eta) {
  if (t <= 1 - eta) return std::max(0.0, eta * t);
  if (t >= 1) return t;
  return eta * (1 - eta) + (t - (1 - eta)) / eta * (1 - eta * (1 - eta));
}

// Liquid polygons of a network, for point-in-E tests.
std::vector<std::vector<Point2>> liquid_polygons(const FilmNetwork& net) {
  std::vector<std::vector<Point2>> polys;
  for (int f = 0; f < (int)net.faces.size(); ++f) {
    if (net.faces[f].label != FaceLabel::Liquid) continue;
    std::vector<Point2> poly;
    for (const auto& [e, fwd] : net.faces[f].cycle) {
      auto pts = net.edge_polyline(e, fwd);
      poly.insert(poly.end(), pts.begin(), pts.end() - 1);
    }
    polys.push_back(std::move(poly));
  }
  return polys;
}

bool point_in_poly(const std::vector<Point2>& poly, const Point2& p) {
  bool in = false;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Point2 &a = poly[i], &b = poly[(i + 1) % poly.size()];
    if ((a.y > p.y) != (b.y > p.y) && p.x < a.x + (b.x - a.x) * (p.y - a.y) / (b.y - a.y))
      in = !in;
  }
  return in;
}

bool in_liquid(const std::vector<std::vector<Point2>>& polys, const Point2& p) {
  for (const auto& poly : polys)
    if (point_in_poly(poly, p)) return true;
  return false;
}

struct Crossing {
  int edge = -1;
  int sub = -1;       // index into the polyline: crossing on (pts[sub], pts[sub+1])
  double t = 0.0;     // parameter along the sub-segment
  Point2 p;           // exact point on the circle
  double angle = 0.0;
};

// Circle crossings of an edge polyline, ordered along the polyline.
std::vector<Crossing> edge_crossings(const std::vector<Point2>& pts, const Disk2& ball,
                                     double tol) {
  std::vector<Crossing> out;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double da = dist(pts[i], ball.center) - ball.radius;
    double db = dist(pts[i + 1], ball.center) - ball.radius;
    if (std::abs(da) < tol && std::abs(db) < tol)
      throw TangentialCrossing("edge segment tangent to the ball boundary");
    if ((da > 0) == (db > 0)) continue;
    // Solve |a + t d - c|^2 = r^2 for t in [0,1].
    Vec2 d = pts[i + 1] - pts[i];
    Vec2 f = pts[i] - ball.center;
    double A = d.norm2(), B = 2 * f.dot(d), C = f.norm2() - ball.radius * ball.radius;
    double disc = B * B - 4 * A * C;
    if (disc < 0) disc = 0;
    double sq = std::sqrt(disc);
    for (double t : {(-B - sq) / (2 * A), (-B + sq) / (2 * A)}) {
      if (t < -1e-12 || t > 1 + 1e-12) continue;
      Point2 p = pts[i] + d * t;
      double sign_in = da > 0 ? 1.0 : -1.0;  // only keep the sign-change root
      (void)sign_in;
      // Keep the root between the two samples with opposite signs.
      double dp = dist(p, pts[i]), dq = dist(p, pts[i + 1]);
      if (dp + dq > dist(pts[i], pts[i + 1]) + 1e-9) continue;
      Crossing c;
      c.sub = (int)i;
      c.t = t;
      c.p = p;
      c.angle = std::atan2(p.y - ball.center.y, p.x - ball.center.x);
      out.push_back(c);
      break;  // one sign change -> one crossing in this sub-segment
    }
  }
  return out;
}

std::vector<Point2> arc_points(const Disk2& ball, double rho, double a0, double da, int n) {
  std::vector<Point2> out;
  for (int k = 0; k <= n; ++k) {
    double a = a0 + da * k / n;
    out.push_back({ball.center.x + rho * std::cos(a), ball.center.y + rho * std::sin(a)});
  }
  return out;
}

}  // namespace

FilmNetwork cone_competitor(const FilmNetwork& net, const Disk2& ball, double eta) {
  if (!(eta > 0 && eta < 1)) throw std::invalid_argument("cone_competitor: eta in (0,1)");
  // Tangency guard on every sub-segment near the sphere.
  for (int e = 0; e < (int)net.edges.size(); ++e)
    (void)edge_crossings(net.edge_polyline(e), ball, kTolGeom);
  FilmNetwork out = net;
  auto map_pt = [&](Point2 p) {
    double t = dist(p, ball.center) / ball.radius;
    if (t >= 1 || t < 1e-300) return p;
    double u = u_eta(t, eta);
    Vec2 d = (p - ball.center) / (t * ball.radius);
    return ball.center + d * (u * ball.radius);
  };
  for (auto& v : out.vertices) v.pos = map_pt(v.pos);
  for (auto& ed : out.edges)
    for (auto& p : ed.interior) p = map_pt(p);
  return out;
}

FilmNetwork cup_competitor(const FilmNetwork& net, const Disk2& ball, ComponentChoice choice,
                           double eta) {
  if (!(eta >= 0 && eta < ball.radius / 2))
    throw std::invalid_argument("cup_competitor: eta in [0, r/2)");
  // Simple position: no vertex strictly inside, exactly one edge crossing twice.
  for (const auto& v : net.vertices)
    if (dist(v.pos, ball.center) < ball.radius - kTolGeom)
      throw NoComponent("cup_competitor: vertex inside the ball");
  int cross_edge = -1;
  std::vector<Crossing> cr;
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    auto c = edge_crossings(net.edge_polyline(e), ball, kTolGeom);
    if (c.empty()) continue;
    if (cross_edge >= 0) throw NoComponent("cup_competitor: multiple edges cross the ball");
    cross_edge = e;
    cr = c;
  }
  if (cross_edge < 0 || cr.size() != 2)
    throw NoComponent("cup_competitor: need exactly one edge crossing the ball twice");

  auto polys = liquid_polygons(net);
  double aP = cr[0].angle, aQ = cr[1].angle;
  double ccw = aQ - aP;  // sweep of arc P->Q counterclockwise
  while (ccw < 0) ccw += 2 * M_PI;
  // Two arc components of dB \ K: P->Q ccw and Q->P ccw.
  struct Arc {
    double a0, da, len;
    bool liquid;
  };
  Arc arcs[2];
  arcs[0] = {aP, ccw, ball.radius * ccw, false};
  arcs[1] = {aQ, 2 * M_PI - ccw, ball.radius * (2 * M_PI - ccw), false};
  for (auto& a : arcs) {
    Point2 midp{ball.center.x + ball.radius * std::cos(a.a0 + a.da / 2),
                ball.center.y + ball.radius * std::sin(a.a0 + a.da / 2)};
    a.liquid = in_liquid(polys, midp);
  }
  int A = -1;
  bool want_liquid = choice == ComponentChoice::InsideE;
  for (int i = 0; i < 2; ++i)
    if (arcs[i].liquid == want_liquid && (A < 0 || arcs[i].len > arcs[A].len)) A = i;
  if (A < 0) throw NoComponent("cup_competitor: no qualifying arc component");
  const Arc& re = arcs[1 - A];  // reroute along dB \ A

  // Rebuild the crossing edge's polyline: outside prefix, collar down to
  // radius r - eta, the reroute arc, collar back, outside suffix.
  auto pts = net.edge_polyline(cross_edge);
  std::vector<Point2> np(pts.begin(), pts.begin() + cr[0].sub + 1);
  np.push_back(cr[0].p);
  double rho = ball.radius - eta;
  bool re_starts_at_P = std::abs(std::remainder(re.a0 - cr[0].angle, 2 * M_PI)) < 1e-9;
  double a_begin = re_starts_at_P ? re.a0 : re.a0 + re.da;
  double sweep = re_starts_at_P ? re.da : -re.da;
  int n = std::max(16, (int)std::ceil(std::abs(sweep) * 32));
  auto arc = arc_points(ball, rho, a_begin, sweep, n);
  np.insert(np.end(), arc.begin(), arc.end());
  np.push_back(cr[1].p);
  np.insert(np.end(), pts.begin() + cr[1].sub + 1, pts.end());

  FilmNetwork out = net;
  out.edges[cross_edge].interior.assign(np.begin() + 1, np.end() - 1);
  return out;
}

FilmNetwork exterior_cup_competitor(const FilmNetwork& net, double R) {
  Disk2 ball{{0, 0}, R};
  int cross_edge = -1;
  std::vector<Crossing> cr;
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    auto c = edge_crossings(net.edge_polyline(e), ball, kTolGeom);
    if (c.empty()) continue;
    if (cross_edge >= 0) throw NoComponent("exterior_cup: multiple crossing edges");
    cross_edge = e;
    cr = c;
  }
  if (cross_edge < 0) return net;  // entirely inside: A = dB, nothing added
  if (cr.size() != 2) throw NoComponent("exterior_cup: need exactly two crossings");
  for (const auto& v : net.vertices)
    if (dist(v.pos, ball.center) > R + kTolGeom)
      throw NoComponent("exterior_cup: vertex outside the ball");

  auto pts = net.edge_polyline(cross_edge);
  double aP = cr[0].angle, aQ = cr[1].angle;
  double ccw = aQ - aP;
  while (ccw < 0) ccw += 2 * M_PI;
  // A = the larger exterior arc; reroute the stray along the smaller one.
  double sweep = ccw <= 2 * M_PI - ccw ? ccw : ccw - 2 * M_PI;
  int n = std::max(16, (int)std::ceil(std::abs(sweep) * 32));
  std::vector<Point2> np(pts.begin(), pts.begin() + cr[0].sub + 1);
  np.push_back(cr[0].p);
  auto arc = arc_points(ball, R, aP, sweep, n);
  np.insert(np.end(), arc.begin(), arc.end());
  np.push_back(cr[1].p);
  np.insert(np.end(), pts.begin() + cr[1].sub + 1, pts.end());

  FilmNetwork out = net;
  out.edges[cross_edge].interior.assign(np.begin() + 1, np.end() - 1);
  return out;
}

Point2 slab_phi(const SlabSpec& spec, Point2 y) {
  Vec2 d = y - spec.center;
  double n = d.norm();
  if (n < 1e-300) return y;
  double g = std::max(n, std::abs(d.dot(spec.normal)) / spec.tau);
  return spec.center + d * (g / n);
}

Point2 slab_phi_inv(const SlabSpec& spec, Point2 z) {
  Vec2 d = z - spec.center;
  double n = d.norm();
  if (n < 1e-300) return z;
  Vec2 dh = d / n;
  double gh = std::max(1.0, std::abs(dh.dot(spec.normal)) / spec.tau);  // g of the unit vector
  return spec.center + dh * (n / gh);
}

FilmNetwork slab_competitor(const FilmNetwork& net, const SlabSpec& spec, ComponentChoice choice) {
  FilmNetwork img = net;
  for (auto& v : img.vertices) v.pos = slab_phi(spec, v.pos);
  for (auto& ed : img.edges)
    for (auto& p : ed.interior) p = slab_phi(spec, p);
  FilmNetwork cup = cup_competitor(img, {spec.center, spec.radius / 2}, choice, spec.eta / 2);
  for (auto& v : cup.vertices) v.pos = slab_phi_inv(spec, v.pos);
  for (auto& ed : cup.edges)
    for (auto& p : ed.interior) p = slab_phi_inv(spec, p);
  return cup;
}

std::vector<Disk2> sample_balls(const FilmNetwork& net, const WireFrame& wire, int count,
                                std::mt19937_64& rng) {
  struct Sub {
    Point2 a, b;
    int edge;
  };
  std::vector<Sub> subs;
  std::vector<double> cum;
  double total = 0.0;
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    auto pts = net.edge_polyline(e);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      subs.push_back({pts[i], pts[i + 1], e});
      total += dist(pts[i], pts[i + 1]);
      cum.push_back(total);
    }
  }
  std::uniform_real_distribution<double> U01(0, 1);
  std::vector<Disk2> out;
  int guard = 0;
  while ((int)out.size() < count && ++guard < 100 * count) {
    double pick = U01(rng) * total;
    size_t k = std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin();
    const Sub& s = subs[k];
    Point2 c = s.a + (s.b - s.a) * U01(rng);
    // Largest radius keeping the ball in simple position and inside Omega.
    double rmax = 1e300;
    for (const auto& v : net.vertices) rmax = std::min(rmax, dist(c, v.pos));
    for (const auto& t : subs)
      if (t.edge != s.edge) rmax = std::min(rmax, point_seg_dist(c, t.a, t.b));
    for (int i = 0; i < wire.count(); ++i)
      rmax = std::min(rmax, dist(c, wire.obstacles[i]) - wire.delta);
    double r = 0.5 * rmax * (0.5 + 0.5 * U01(rng));
    if (r < 1e-5) continue;
    out.push_back({c, r});
  }
  return out;
}

double weighted_length_inside(const FilmNetwork& net, const Disk2& ball) {
  double sum = 0.0;
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    double m = net.multiplicity(e);
    auto pts = net.edge_polyline(e);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      // Clip segment to the disk by sampling (adequate for test tolerances).
      const int K = 8;
      for (int k = 0; k < K; ++k) {
        Point2 p = pts[i] + (pts[i + 1] - pts[i]) * ((k + 0.5) / K);
        if (dist(p, ball.center) < ball.radius) sum += m * dist(pts[i], pts[i + 1]) / K;
      }
    }
  }
  return sum;
}

MinimalityReport verify_minimality(const FilmNetwork& net, const WireFrame& wire,
                                   const std::vector<Disk2>& balls, double C_star,
                                   double slack_tol) {
  MinimalityReport rep;
  rep.C_star = C_star;
  rep.slack_tol = slack_tol;
  auto e0 = energy(net);
  auto check = [&](const Disk2& ball, const char* name, const FilmNetwork& comp) {
    BallRecord rec;
    rec.ball = ball;
    rec.construction = name;
    rec.F_before = e0.energy_F;
    auto ec = energy(comp);
    rec.F_after = ec.energy_F;
    rec.area_delta = std::abs(ec.area - e0.area);
    rec.violation = e0.energy_F > ec.energy_F + C_star * rec.area_delta + slack_tol;
    rep.records.push_back(rec);
    if (rec.violation) ++rep.violations;
  };
  for (const auto& ball : balls) {
    try {
      check(ball, "cone", cone_competitor(net, ball, 0.125));
    } catch (const std::exception& ex) {
      BallRecord rec;
      rec.ball = ball;
      rec.construction = "cone";
      rec.note = ex.what();
      rep.records.push_back(rec);
    }
    for (auto choice : {ComponentChoice::OutsideE, ComponentChoice::InsideE}) {
      const char* name = choice == ComponentChoice::OutsideE ? "cup-outside" : "cup-inside";
      try {
        check(ball, name, cup_competitor(net, ball, choice, ball.radius / 8));
      } catch (const NoComponent&) {
        // not applicable at this ball
      } catch (const std::exception& ex) {
        BallRecord rec;
        rec.ball = ball;
        rec.construction = name;
        rec.note = ex.what();
        rep.records.push_back(rec);
      }
    }
  }
  return rep;
}

}  // namespace plateau
