#include "plateau/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "plateau/relax.hpp"

namespace plateau {

namespace {

// Standard bump: 1 at the center, C^infty, 0 at |s| >= 1.
double bump(double s) {
  if (s >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double poly_eval(const std::vector<double>& c, int degree, double dx, double dy) {
  double v = 0.0;
  int k = 0;
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; i + j <= degree; ++j) v += c[k++] * std::pow(dx, i) * std::pow(dy, j);
  return v;
}

int coeff_count(int degree) { return (degree + 1) * (degree + 2) / 2; }

double clipped_length(const Point2& a, const Point2& b, const Disk2& ball) {
  Vec2 d = b - a;
  double A = d.norm2();
  if (A == 0) return 0.0;
  Vec2 f = a - ball.center;
  double B = 2 * f.dot(d), C = f.norm2() - ball.radius * ball.radius;
  double disc = B * B - 4 * A * C;
  if (disc <= 0) return 0.0;
  double sq = std::sqrt(disc);
  double t0 = std::clamp((-B - sq) / (2 * A), 0.0, 1.0);
  double t1 = std::clamp((-B + sq) / (2 * A), 0.0, 1.0);
  return (t1 - t0) * std::sqrt(A);
}

}  // namespace

Vec2 TestField::operator()(const Point2& p) const {
  double s = dist(p, support.center) / support.radius;
  double w = bump(s);
  if (w == 0.0) return {0, 0};
  double dx = (p.x - support.center.x) / support.radius;
  double dy = (p.y - support.center.y) / support.radius;
  return {w * poly_eval(cx, degree, dx, dy), w * poly_eval(cy, degree, dx, dy)};
}

TestField TestField::random(const Disk2& support, int degree, std::mt19937_64& rng) {
  TestField f;
  f.support = support;
  f.degree = degree;
  std::uniform_real_distribution<double> U(-1, 1);
  f.cx.resize(coeff_count(degree));
  f.cy.resize(coeff_count(degree));
  for (auto& c : f.cx) c = U(rng);
  for (auto& c : f.cy) c = U(rng);
  return f;
}

double el_residual(const FilmNetwork& net, double lambda, const std::vector<TestField>& fields,
                   const WireFrame* wire) {
  double worst = 0.0;
  for (const auto& X : fields) {
    if (wire) {
      for (int i = 0; i < wire->count(); ++i) {
        double gap = dist(X.support.center, wire->obstacles[i]) - wire->delta - X.support.radius;
        if (gap < -1e-8)
          throw FieldViolatesBoundaryCondition("test field support reaches a wire disk");
      }
    }
    double rhs = 0.0, lhs = 0.0;
    for (int e = 0; e < (int)net.edges.size(); ++e) {
      double m = net.multiplicity(e);
      bool wet = net.is_wet(e);
      bool liquid_left = wet && net.faces[net.edges[e].left_face].label == FaceLabel::Liquid;
      auto pts = net.edge_polyline(e);
      for (size_t i = 0; i + 1 < pts.size(); ++i) {
        Vec2 seg = pts[i + 1] - pts[i];
        double len = seg.norm();
        if (len == 0) continue;
        Vec2 tau = seg / len;
        rhs += m * (X(pts[i + 1]) - X(pts[i])).dot(tau);
        if (wet) {
          Vec2 nu = liquid_left ? Vec2{tau.y, -tau.x} : tau.perp();
          lhs += lambda * X(pts[i] + seg * 0.5).dot(nu) * len;
        }
      }
    }
    double resid = std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1.0);
    worst = std::max(worst, resid);
  }
  return worst;
}

std::vector<JunctionInfo> junction_report(const FilmNetwork& net) {
  std::map<int, std::vector<Vec2>> tangents;  // vertex -> outgoing unit tangents
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    auto pts = net.edge_polyline(e);
    if (pts.size() < 2) continue;
    tangents[net.edges[e].a].push_back((pts[1] - pts[0]).normalized());
    tangents[net.edges[e].b].push_back((pts[pts.size() - 2] - pts.back()).normalized());
  }
  std::vector<JunctionInfo> out;
  for (const auto& [v, ts] : tangents) {
    if (ts.size() != 3) continue;
    JunctionInfo info;
    info.vertex = v;
    info.pos = net.vertices[v].pos;
    double a[3];
    for (int i = 0; i < 3; ++i) a[i] = std::atan2(ts[i].y, ts[i].x);
    std::sort(a, a + 3);
    double deg[3] = {(a[1] - a[0]) * 180 / M_PI, (a[2] - a[1]) * 180 / M_PI,
                     (2 * M_PI - (a[2] - a[0])) * 180 / M_PI};
    for (int i = 0; i < 3; ++i) {
      info.angles_deg[i] = deg[i];
      info.max_dev_deg = std::max(info.max_dev_deg, std::abs(deg[i] - 120.0));
    }
    info.tangential = std::min({deg[0], deg[1], deg[2]}) < 30.0;
    out.push_back(info);
  }
  return out;
}

DensityProfile density_profile(const FilmNetwork& net, const Point2& center,
                               const std::vector<double>& radii, double mono_tol) {
  double d_min = 1e300;
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    auto pts = net.edge_polyline(e);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      Vec2 d = pts[i + 1] - pts[i];
      double t = d.norm2() > 0 ? std::clamp((center - pts[i]).dot(d) / d.norm2(), 0.0, 1.0) : 0.0;
      d_min = std::min(d_min, dist(center, pts[i] + d * t));
    }
  }
  if (d_min > 1e-7) throw CenterOffNetwork("density_profile center is not on the network");

  DensityProfile prof;
  auto le = estimate_lambda(net);
  prof.lambda_used = le ? std::abs(le->lambda) : 0.0;
  prof.min_ratio = 1e300;
  double prev = -1e300;
  for (double r : radii) {
    Disk2 ball(center, r);
    double mu = 0.0;
    for (int e = 0; e < (int)net.edges.size(); ++e) {
      double m = net.multiplicity(e);
      auto pts = net.edge_polyline(e);
      for (size_t i = 0; i + 1 < pts.size(); ++i)
        mu += m * clipped_length(pts[i], pts[i + 1], ball);
    }
    DensityRow row;
    row.r = r;
    row.mu = mu;
    row.ratio = std::exp(prof.lambda_used * r) * mu / (2 * r);
    prof.rows.push_back(row);
    prof.min_ratio = std::min(prof.min_ratio, row.ratio);
    if (row.ratio < prev * (1 - mono_tol)) prof.monotone = false;
    prev = std::max(prev, row.ratio);
  }
  return prof;
}

HullCheck convex_hull_check(const FilmNetwork& net, const WireFrame& wire, double hull_tol) {
  // Convex hull of the obstacle centers (monotone chain); a point is in the
  // hull of W iff its distance to that polygon is at most delta.
  std::vector<Point2> pts = wire.obstacles;
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  std::vector<Point2> hull;
  auto build = [&](bool upper) {
    size_t start = hull.size();
    auto scan = [&](const Point2& p) {
      while (hull.size() >= start + 2 &&
             (hull[hull.size() - 1] - hull[hull.size() - 2]).cross(p - hull.back()) <= 0)
        hull.pop_back();
      hull.push_back(p);
    };
    if (upper)
      for (auto it = pts.rbegin(); it != pts.rend(); ++it) scan(*it);
    else
      for (const auto& p : pts) scan(p);
    hull.pop_back();
  };
  build(false);
  build(true);
  if (hull.empty()) hull = pts;  // one or two obstacles

  auto dist_to_hull = [&](const Point2& p) {
    if (hull.size() == 1) return dist(p, hull[0]);
    bool inside = hull.size() >= 3;
    double d_edge = 1e300;
    for (size_t i = 0; i < hull.size(); ++i) {
      const Point2 &a = hull[i], &b = hull[(i + 1) % hull.size()];
      if (hull.size() >= 3 && (b - a).cross(p - a) < 0) inside = false;
      Vec2 d = b - a;
      double t = d.norm2() > 0 ? std::clamp((p - a).dot(d) / d.norm2(), 0.0, 1.0) : 0.0;
      d_edge = std::min(d_edge, dist(p, a + d * t));
    }
    return inside ? 0.0 : d_edge;
  };

  HullCheck chk;
  for (const auto& poly : net.as_polylines())
    for (const auto& p : poly)
      chk.max_violation = std::max(chk.max_violation, dist_to_hull(p) - wire.delta);
  chk.max_violation = std::max(chk.max_violation, 0.0);
  chk.ok = chk.max_violation <= hull_tol;
  return chk;
}

double plateau_distance(const FilmNetwork& net, const FilmNetwork& reference, double bandwidth) {
  struct Deposit {
    Point2 p;
    double w;
  };
  auto deposits = [&](const FilmNetwork& n) {
    std::vector<Deposit> out;
    for (int e = 0; e < (int)n.edges.size(); ++e) {
      double m = n.multiplicity(e);
      auto pts = n.edge_polyline(e);
      for (size_t i = 0; i + 1 < pts.size(); ++i) {
        double len = dist(pts[i], pts[i + 1]);
        int k = std::max(1, (int)std::ceil(len / (bandwidth / 4)));
        for (int j = 0; j < k; ++j)
          out.push_back({pts[i] + (pts[i + 1] - pts[i]) * ((j + 0.5) / k), m * len / k});
      }
    }
    return out;
  };
  auto d1 = deposits(net), d2 = deposits(reference);

  Point2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const auto& ds : {d1, d2})
    for (const auto& d : ds) {
      lo.x = std::min(lo.x, d.p.x);
      lo.y = std::min(lo.y, d.p.y);
      hi.x = std::max(hi.x, d.p.x);
      hi.y = std::max(hi.y, d.p.y);
    }
  double pad = 4 * bandwidth;
  lo -= Vec2{pad, pad};
  hi += Vec2{pad, pad};
  double cell = bandwidth / 2;
  int nx = std::min(1024, (int)std::ceil((hi.x - lo.x) / cell) + 1);
  int ny = std::min(1024, (int)std::ceil((hi.y - lo.y) / cell) + 1);
  cell = std::max((hi.x - lo.x) / nx, (hi.y - lo.y) / ny);

  double sig2 = bandwidth * bandwidth;
  int reach = (int)std::ceil(3 * bandwidth / cell);
  auto splat = [&](const std::vector<Deposit>& ds, std::vector<double>& grid, double sign) {
    for (const auto& d : ds) {
      int cx = (int)((d.p.x - lo.x) / cell), cy = (int)((d.p.y - lo.y) / cell);
      for (int ix = std::max(0, cx - reach); ix <= std::min(nx - 1, cx + reach); ++ix)
        for (int iy = std::max(0, cy - reach); iy <= std::min(ny - 1, cy + reach); ++iy) {
          Point2 g{lo.x + (ix + 0.5) * cell, lo.y + (iy + 0.5) * cell};
          double r2 = (g - d.p).norm2();
          grid[ix * ny + iy] += sign * d.w * std::exp(-r2 / (2 * sig2)) / (2 * M_PI * sig2);
        }
    }
  };
  std::vector<double> grid(nx * ny, 0.0);
  splat(d1, grid, 1.0);
  splat(d2, grid, -1.0);
  double total = 0.0;
  for (double v : grid) total += std::abs(v);
  return total * cell * cell;
}

}  // namespace plateau
