#include "plateau/geom.hpp"

#include <algorithm>

namespace plateau {

namespace {

// Distance from p to segment s.
double point_segment_dist(const Point2& p, const Segment2& s) {
  Vec2 d = s.b - s.a;
  double len2 = d.norm2();
  if (len2 == 0.0) return dist(p, s.a);
  double t = std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0);
  return dist(p, s.a + d * t);
}

bool on_segment(const Point2& p, const Segment2& s, double tol) {
  return point_segment_dist(p, s) <= tol;
}

}  // namespace

Intersection segment_intersect(const Segment2& s1, const Segment2& s2, double tol) {
  Vec2 d1 = s1.b - s1.a;
  Vec2 d2 = s2.b - s2.a;
  double denom = d1.cross(d2);
  double scale = std::max({d1.norm(), d2.norm(), 1.0});

  if (std::abs(denom) <= tol * scale * scale) {
    // Parallel or collinear.
    double off = (s2.a - s1.a).cross(d1);
    if (std::abs(off) > tol * scale * scale) return {};  // parallel, disjoint lines
    // Collinear: check 1-D overlap along d1.
    double len2 = d1.norm2();
    if (len2 == 0.0) {
      // s1 degenerate to a point
      if (on_segment(s1.a, s2, tol)) return {IntersectKind::EndpointTouch, s1.a};
      return {};
    }
    double t0 = (s2.a - s1.a).dot(d1) / len2;
    double t1 = (s2.b - s1.a).dot(d1) / len2;
    if (t0 > t1) std::swap(t0, t1);
    double ttol = tol / std::sqrt(len2);
    if (t1 < -ttol || t0 > 1.0 + ttol) return {};
    double lo = std::max(t0, 0.0), hi = std::min(t1, 1.0);
    if (hi - lo <= ttol) {
      // Touch at a single shared point.
      Point2 p = s1.a + d1 * (0.5 * (lo + hi));
      return {IntersectKind::EndpointTouch, p};
    }
    Point2 mid = s1.a + d1 * (0.5 * (lo + hi));
    return {IntersectKind::CollinearOverlap, mid};
  }

  double t = (s2.a - s1.a).cross(d2) / denom;
  double u = (s2.a - s1.a).cross(d1) / denom;
  double ttol = tol / std::max(d1.norm(), tol);
  double utol = tol / std::max(d2.norm(), tol);
  if (t < -ttol || t > 1.0 + ttol || u < -utol || u > 1.0 + utol) return {};
  Point2 p = s1.a + d1 * t;
  bool t_end = t <= ttol || t >= 1.0 - ttol;
  bool u_end = u <= utol || u >= 1.0 - utol;
  if (t_end || u_end) return {IntersectKind::EndpointTouch, p};
  return {IntersectKind::ProperCrossing, p};
}

double polygon_area(const std::vector<Point2>& loop) {
  if (loop.size() < 3) throw std::invalid_argument("polygon_area: need >= 3 vertices");
  double twice = 0.0;
  for (size_t i = 0; i < loop.size(); ++i) {
    const Point2& p = loop[i];
    const Point2& q = loop[(i + 1) % loop.size()];
    twice += p.cross(q);
  }
  return 0.5 * twice;
}

RayHit ray_segment_crossing(const Ray2& cut, const Segment2& s, double tol) {
  Vec2 d = cut.direction.normalized();
  Vec2 n = d.perp();
  double ha = (s.a - cut.origin).dot(n);
  double hb = (s.b - cut.origin).dot(n);
  RayHit hit;
  if (std::abs(ha) <= tol || std::abs(hb) <= tol) {
    hit.degenerate = true;
    return hit;
  }
  if ((ha > 0) == (hb > 0)) return hit;  // same side of the cut line
  double t = ha / (ha - hb);
  double along = ((s.a + (s.b - s.a) * t) - cut.origin).dot(d);
  if (std::abs(along) <= tol) {
    hit.degenerate = true;  // crossing at the ray origin
    return hit;
  }
  if (along > 0) hit.crossings = 1;
  return hit;
}

int ray_crossing_parity(const std::vector<Point2>& path, const Ray2& cut,
                        double tol, int max_perturb) {
  for (int k = 0; k <= max_perturb; ++k) {
    double ang = k * 1e-7;
    double c = std::cos(ang), sn = std::sin(ang);
    Ray2 r = cut;
    r.direction = {cut.direction.x * c - cut.direction.y * sn,
                   cut.direction.x * sn + cut.direction.y * c};
    int count = 0;
    bool degenerate = false;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      RayHit h = ray_segment_crossing(r, {path[i], path[i + 1]}, tol);
      if (h.degenerate) {
        degenerate = true;
        break;
      }
      count += h.crossings;
    }
    if (!degenerate) return count % 2;
  }
  throw DegenerateCrossing("ray_crossing_parity: degenerate after perturbation retries");
}

}  // namespace plateau
