#include "plateau/wireframe.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace plateau {

void WireFrame::validate() const {
  if (obstacles.empty()) throw std::invalid_argument("WireFrame: need at least one obstacle");
  if (!(delta > 0)) throw std::invalid_argument("WireFrame: delta must be positive");
  for (const auto& p : obstacles)
    if (!p.finite()) throw std::invalid_argument("WireFrame: non-finite obstacle");
  for (size_t i = 0; i < obstacles.size(); ++i)
    for (size_t j = i + 1; j < obstacles.size(); ++j)
      if (dist(obstacles[i], obstacles[j]) <= 2 * delta)
        throw std::invalid_argument("WireFrame: obstacle disks must be disjoint");
}

Ray2 WireFrame::cut(int i, double extra_rot) const {
  // Base angles avoid axis alignment: fixtures commonly place collinear
  // horizontal/vertical network edges through obstacle centers.
  double a = 0.2399567 + 0.7310843 * i + extra_rot;
  return {obstacles[i], {std::cos(a), std::sin(a)}};
}

void SpanningClass::validate(int m) const {
  if (m >= 31) throw std::invalid_argument("SpanningClass: too many obstacles");
  for (size_t i = 0; i < generators.size(); ++i) {
    if (generators[i] == 0)
      throw std::invalid_argument("SpanningClass: zero generator is not blockable");
    if (generators[i] >> m)
      throw std::invalid_argument("SpanningClass: generator exceeds obstacle count");
    for (size_t j = i + 1; j < generators.size(); ++j)
      if (generators[i] == generators[j])
        throw std::invalid_argument("SpanningClass: duplicate generator");
  }
}

namespace {

struct SceneBounds {
  Point2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  void add(const Point2& p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  Point2 center() const { return (lo + hi) * 0.5; }
  double diameter() const { return std::max(hi.x - lo.x, hi.y - lo.y); }
};

SceneBounds scene_bounds(const std::vector<std::vector<Point2>>& network,
                         const WireFrame& wire) {
  SceneBounds b;
  for (const auto& poly : network)
    for (const auto& p : poly) b.add(p);
  for (const auto& c : wire.obstacles) {
    b.add(c + Vec2{wire.delta, wire.delta});
    b.add(c - Vec2{wire.delta, wire.delta});
  }
  return b;
}

// Circle polygonized through uniform samples plus every network point that
// sits on it (anchored vertices), so anchored edges connect exactly.
std::vector<Point2> disk_polygon(const Disk2& d,
                                 const std::vector<std::vector<Point2>>& network,
                                 double tol) {
  std::vector<double> angles;
  int n = 64;
  for (int k = 0; k < n; ++k) angles.push_back(2 * M_PI * k / n);
  for (const auto& poly : network)
    for (const auto& p : poly)
      if (std::abs(dist(p, d.center) - d.radius) <= tol * 100)
        angles.push_back(std::atan2(p.y - d.center.y, p.x - d.center.x));
  std::sort(angles.begin(), angles.end());
  std::vector<Point2> out;
  for (double a : angles) {
    Point2 p{d.center.x + d.radius * std::cos(a), d.center.y + d.radius * std::sin(a)};
    if (!out.empty() && dist(out.back(), p) <= tol) continue;
    out.push_back(p);
  }
  if (out.size() >= 2 && dist(out.front(), out.back()) <= tol) out.pop_back();
  // Anchored points must be exact vertices of the polygon.
  for (const auto& poly : network)
    for (const auto& p : poly)
      if (std::abs(dist(p, d.center) - d.radius) <= tol * 100)
        for (auto& q : out)
          if (dist(q, p) <= tol * 200) q = p;
  return out;
}

bool point_in_polygon(const std::vector<Point2>& poly, const Point2& p) {
  bool inside = false;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % poly.size()];
    if ((a.y > p.y) != (b.y > p.y)) {
      double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (xint > p.x) inside = !inside;
    }
  }
  return inside;
}

double point_seg_dist(const Point2& p, const Point2& a, const Point2& b) {
  Vec2 d = b - a;
  double len2 = d.norm2();
  if (len2 == 0.0) return dist(p, a);
  double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return dist(p, a + d * t);
}

}  // namespace

RegionGraph build_region_graph(const std::vector<std::vector<Point2>>& network,
                               const WireFrame& wire, double tol, int max_perturb) {
  wire.validate();
  SceneBounds b = scene_bounds(network, wire);
  double diam = std::max(b.diameter(), 1.0);
  double half = 5.0 * diam;  // box side = 10x scene diameter
  Point2 c = b.center();

  std::vector<ArrSegment> base;
  Point2 c0{c.x - half, c.y - half}, c1{c.x + half, c.y - half};
  Point2 c2{c.x + half, c.y + half}, c3{c.x - half, c.y + half};
  base.push_back({c0, c1, SegKind::Box, -1});
  base.push_back({c1, c2, SegKind::Box, -1});
  base.push_back({c2, c3, SegKind::Box, -1});
  base.push_back({c3, c0, SegKind::Box, -1});

  for (int e = 0; e < (int)network.size(); ++e)
    for (size_t i = 0; i + 1 < network[e].size(); ++i)
      if (dist(network[e][i], network[e][i + 1]) > tol)
        base.push_back({network[e][i], network[e][i + 1], SegKind::Network, e});

  std::vector<std::vector<Point2>> polys;
  for (int i = 0; i < wire.count(); ++i) {
    polys.push_back(disk_polygon(wire.disk(i), network, tol));
    const auto& poly = polys.back();
    for (size_t k = 0; k < poly.size(); ++k)
      base.push_back({poly[k], poly[(k + 1) % poly.size()], SegKind::Disk, i});
  }

  std::string last_error;
  for (int k = 0; k <= max_perturb; ++k) {
    // Large enough that one retry defeats segment_intersect's length-scaled
    // collinearity tolerance for the long cut segments.
    double rot = k * 1e-5;
    std::vector<ArrSegment> segs = base;
    for (int i = 0; i < wire.count(); ++i) {
      Ray2 r = wire.cut(i, rot);
      Vec2 d = r.direction.normalized();
      segs.push_back({r.origin, r.origin + d * (4.0 * half), SegKind::Cut, i});
    }
    try {
      RegionGraph g;
      g.arr = build_arrangement(segs, tol);
      g.obstacle_count = wire.count();
      g.cut_rotation = rot;
      g.disk_polygons = polys;

      g.node_of_face.assign(g.arr.faces.size(), -1);
      for (int f = 0; f < (int)g.arr.faces.size(); ++f) {
        if (!g.arr.faces[f].bounded) continue;
        bool in_wire = false;
        for (const auto& poly : polys)
          if (point_in_polygon(poly, g.arr.faces[f].rep)) {
            in_wire = true;
            break;
          }
        if (in_wire) continue;
        g.node_of_face[f] = (int)g.face_of_node.size();
        g.face_of_node.push_back(f);
      }
      for (int e = 0; e < (int)g.arr.edges.size(); ++e) {
        const auto& ed = g.arr.edges[e];
        if (ed.kind != SegKind::Cut) continue;
        int n1 = g.node_of_face[ed.face_left];
        int n2 = g.node_of_face[ed.face_right];
        if (n1 < 0 || n2 < 0) continue;
        g.adjacencies.push_back({n1, n2, ed.aux, e});
      }
      return g;
    } catch (const ArrangementDegenerate& ex) {
      last_error = ex.what();
    }
  }
  throw ArrangementDegenerate("build_region_graph: " + last_error);
}

std::vector<Parity> achievable_parities(const RegionGraph& g) {
  int n = (int)g.face_of_node.size();
  std::vector<Parity> label(n, 0);
  std::vector<int> state(n, 0);  // 0 unseen, 1 visited
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (other node, adjacency id)
  for (int a = 0; a < (int)g.adjacencies.size(); ++a) {
    adj[g.adjacencies[a].n1].push_back({g.adjacencies[a].n2, a});
    adj[g.adjacencies[a].n2].push_back({g.adjacencies[a].n1, a});
  }
  std::vector<char> tree_edge(g.adjacencies.size(), 0);
  std::vector<Parity> cycles;
  for (int root = 0; root < n; ++root) {
    if (state[root]) continue;
    state[root] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [v, a] : adj[u]) {
        Parity bit = Parity(1) << g.adjacencies[a].obstacle;
        if (!state[v]) {
          state[v] = 1;
          label[v] = label[u] ^ bit;
          tree_edge[a] = 1;
          q.push(v);
        }
      }
    }
  }
  for (int a = 0; a < (int)g.adjacencies.size(); ++a) {
    if (tree_edge[a]) continue;
    const auto& ad = g.adjacencies[a];
    Parity p = label[ad.n1] ^ label[ad.n2] ^ (Parity(1) << ad.obstacle);
    if (p) cycles.push_back(p);
  }
  // Reduce to an F2 basis.
  std::vector<Parity> basis;
  for (Parity p : cycles) {
    for (Parity b : basis) p = std::min(p, p ^ b);
    if (p) basis.push_back(p);
  }
  std::sort(basis.rbegin(), basis.rend());
  return basis;
}

bool parity_in_span(Parity p, const std::vector<Parity>& basis) {
  for (Parity b : basis) p = std::min(p, p ^ b);
  return p == 0;
}

namespace {

// Covering-space BFS witness: a closed grid loop of the requested parity that
// avoids the network and the wire. The spanning *decision* never uses this;
// it only materializes a loop the cycle-space computation proved to exist.
std::vector<Point2> grid_witness(const std::vector<std::vector<Point2>>& network,
                                 const WireFrame& wire, Parity target) {
  SceneBounds b = scene_bounds(network, wire);
  double diam = std::max(b.diameter(), 1.0);
  Point2 c = b.center();
  double half = 1.5 * diam;

  for (int res = 96; res <= 768; res *= 2) {
    double cell = 2 * half / res;
    double clearance = 0.8 * cell;
    auto center_of = [&](int ix, int iy) {
      return Point2{c.x - half + (ix + 0.5) * cell, c.y - half + (iy + 0.5) * cell};
    };
    std::vector<char> blocked(res * res, 0);
    for (int iy = 0; iy < res; ++iy)
      for (int ix = 0; ix < res; ++ix) {
        Point2 p = center_of(ix, iy);
        bool bad = false;
        for (int i = 0; i < wire.count() && !bad; ++i)
          if (dist(p, wire.obstacles[i]) < wire.delta + clearance) bad = true;
        for (const auto& poly : network)
          for (size_t k = 0; k + 1 < poly.size() && !bad; ++k)
            if (point_seg_dist(p, poly[k], poly[k + 1]) < clearance) bad = true;
        blocked[iy * res + ix] = bad;
      }
    int m = wire.count();
    int np = 1 << m;
    auto cross_parity = [&](const Point2& a, const Point2& bb) {
      Parity p = 0;
      for (int i = 0; i < m; ++i) {
        auto h = ray_segment_crossing(wire.cut(i, 3e-8), {a, bb}, 1e-12);
        if (h.crossings) p ^= Parity(1) << i;
      }
      return p;
    };
    // BFS in the covering space from a free start cell near the box corner.
    int start = -1;
    for (int k = 0; k < res * res && start < 0; ++k)
      if (!blocked[k]) start = k;
    if (start < 0) continue;
    std::vector<int> parent(res * res * np, -2);
    std::queue<int> q;
    parent[start * np] = -1;
    q.push(start * np);
    int goal = start * np + (int)target;
    const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
    while (!q.empty() && parent[goal] == -2) {
      int s = q.front();
      q.pop();
      int cellid = s / np, par = s % np;
      int ix = cellid % res, iy = cellid / res;
      for (int d = 0; d < 4; ++d) {
        int jx = ix + dx[d], jy = iy + dy[d];
        if (jx < 0 || jy < 0 || jx >= res || jy >= res) continue;
        int nid = jy * res + jx;
        if (blocked[nid]) continue;
        Parity step = cross_parity(center_of(ix, iy), center_of(jx, jy));
        int t = nid * np + (par ^ (int)step);
        if (parent[t] != -2) continue;
        parent[t] = s;
        q.push(t);
      }
    }
    if (parent[goal] == -2) continue;
    std::vector<Point2> loop;
    for (int s = goal; s != -1; s = parent[s]) {
      int cellid = s / np;
      loop.push_back(center_of(cellid % res, cellid / res));
    }
    return loop;  // closed: first and last cells coincide spatially
  }
  return {};
}

}  // namespace

SpanningResult is_spanning(const std::vector<std::vector<Point2>>& network,
                           const WireFrame& wire, const SpanningClass& cls) {
  cls.validate(wire.count());
  RegionGraph g = build_region_graph(network, wire);
  std::vector<Parity> basis = achievable_parities(g);
  SpanningResult res;
  for (Parity gen : cls.generators) {
    if (parity_in_span(gen, basis)) {
      res.spanning = false;
      res.violated_generator = gen;
      res.witness = grid_witness(network, wire, gen);
      return res;
    }
  }
  res.spanning = true;
  return res;
}

double spanning_margin(const std::vector<std::vector<Point2>>& network,
                       const WireFrame& wire) {
  // Minimum distance between features that do not share an endpoint.
  double margin = 1e300;
  struct Seg {
    Point2 a, b;
    int poly;
  };
  std::vector<Seg> segs;
  for (int e = 0; e < (int)network.size(); ++e)
    for (size_t i = 0; i + 1 < network[e].size(); ++i)
      segs.push_back({network[e][i], network[e][i + 1], e});
  auto seg_seg_dist = [](const Seg& s, const Seg& t) {
    double d = 1e300;
    d = std::min(d, point_seg_dist(s.a, t.a, t.b));
    d = std::min(d, point_seg_dist(s.b, t.a, t.b));
    d = std::min(d, point_seg_dist(t.a, s.a, s.b));
    d = std::min(d, point_seg_dist(t.b, s.a, s.b));
    return d;
  };
  for (size_t i = 0; i < segs.size(); ++i)
    for (size_t j = i + 1; j < segs.size(); ++j) {
      bool adjacent = dist(segs[i].a, segs[j].a) < 1e-7 || dist(segs[i].a, segs[j].b) < 1e-7 ||
                      dist(segs[i].b, segs[j].a) < 1e-7 || dist(segs[i].b, segs[j].b) < 1e-7;
      if (adjacent) continue;
      double d = seg_seg_dist(segs[i], segs[j]);
      if (segs[i].poly == segs[j].poly && d < 1e-12) continue;  // shared interior sample
      margin = std::min(margin, d);
    }
  for (const auto& s : segs)
    for (int i = 0; i < wire.count(); ++i) {
      double d = point_seg_dist(wire.obstacles[i], s.a, s.b) - wire.delta;
      bool anchored = std::abs(dist(s.a, wire.obstacles[i]) - wire.delta) < 1e-7 ||
                      std::abs(dist(s.b, wire.obstacles[i]) - wire.delta) < 1e-7;
      if (anchored) continue;
      margin = std::min(margin, std::max(d, 0.0));
    }
  for (int i = 0; i < wire.count(); ++i)
    for (int j = i + 1; j < wire.count(); ++j)
      margin = std::min(margin, dist(wire.obstacles[i], wire.obstacles[j]) - 2 * wire.delta);
  // Cap at a scene-scale value so gap-free configurations still report a
  // finite perturbation budget.
  Point2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  auto add = [&](const Point2& p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  };
  for (const auto& s : segs) add(s.a), add(s.b);
  for (const auto& c : wire.obstacles) add(c);
  double diam = std::max({hi.x - lo.x, hi.y - lo.y, 2 * wire.delta});
  return std::min(margin, diam);
}

}  // namespace plateau
