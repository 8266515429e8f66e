#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace plateau {

// Coincidence tolerance for coordinates O(1) in scene units.
inline constexpr double kTolGeom = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
  Vec2 normalized() const {
    double n = norm();
    return {x / n, y / n};
  }
  // 90-degree counterclockwise rotation.
  Vec2 perp() const { return {-y, x}; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

using Point2 = Vec2;

inline double dist(const Point2& a, const Point2& b) { return (a - b).norm(); }

struct Segment2 {
  Point2 a;
  Point2 b;

  Segment2() = default;
  Segment2(Point2 a_, Point2 b_) : a(a_), b(b_) {}
  double length() const { return dist(a, b); }
  Vec2 dir() const { return (b - a).normalized(); }
};

struct Disk2 {
  Point2 center;
  double radius = 0.0;

  Disk2() = default;
  Disk2(Point2 c, double r) : center(c), radius(r) {
    if (!(r > 0.0)) throw std::invalid_argument("Disk2: radius must be positive");
  }
  bool contains(const Point2& p, double tol = 0.0) const {
    return dist(p, center) < radius + tol;
  }
};

enum class IntersectKind {
  None,
  ProperCrossing,   // interiors cross transversally
  EndpointTouch,    // an endpoint of one segment lies on the other
  CollinearOverlap  // segments overlap along a common line
};

struct Intersection {
  IntersectKind kind = IntersectKind::None;
  Point2 point;  // meaningful for ProperCrossing / EndpointTouch
};

// Robust segment-segment intersection with classification. Degenerate inputs
// yield a classification, never a failure. Symmetric in its arguments.
Intersection segment_intersect(const Segment2& s1, const Segment2& s2,
                               double tol = kTolGeom);

// Signed shoelace area of a closed loop (positive for CCW simple loops).
// Throws std::invalid_argument for loops with fewer than 3 vertices.
double polygon_area(const std::vector<Point2>& loop);

struct Ray2 {
  Point2 origin;
  Vec2 direction;  // need not be unit length
};

struct DegenerateCrossing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Number of transversal crossings (mod 2) of an open polyline with a ray.
// Vertices that land on the cut line within tol are resolved by rotating the
// cut by k*1e-7 rad, k = 1..max_perturb; throws DegenerateCrossing if every
// retry stays degenerate.
int ray_crossing_parity(const std::vector<Point2>& path, const Ray2& cut,
                        double tol = kTolGeom, int max_perturb = 8);

// Crossing count of one segment with a ray (0 or 1; tolerance-degenerate
// configurations reported via the bool flag).
struct RayHit {
  int crossings = 0;
  bool degenerate = false;
};
RayHit ray_segment_crossing(const Ray2& cut, const Segment2& s, double tol = kTolGeom);

inline double polyline_length(const std::vector<Point2>& pts) {
  double L = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) L += dist(pts[i], pts[i + 1]);
  return L;
}

}  // namespace plateau
