#include "plateau/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace plateau {

namespace {

struct SnapGrid {
  double cell;
  std::unordered_map<long long, std::vector<int>> buckets;
  std::vector<Point2>* pts;

  explicit SnapGrid(std::vector<Point2>* p, double tol) : cell(std::max(tol * 8, 1e-300)), pts(p) {}

  static long long key(long long ix, long long iy) { return ix * 2000003LL + iy; }

  int find_or_add(const Point2& p, double tol) {
    long long ix = (long long)std::floor(p.x / cell);
    long long iy = (long long)std::floor(p.y / cell);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = buckets.find(key(ix + dx, iy + dy));
        if (it == buckets.end()) continue;
        for (int id : it->second)
          if (dist((*pts)[id], p) <= tol) return id;
      }
    int id = (int)pts->size();
    pts->push_back(p);
    buckets[key(ix, iy)].push_back(id);
    return id;
  }
};

// Uniform-grid broadphase over segment AABBs.
struct BroadPhase {
  double cell;
  Point2 origin;
  std::unordered_map<long long, std::vector<int>> buckets;

  static long long key(long long ix, long long iy) { return ix * 2000003LL + iy; }

  BroadPhase(const std::vector<ArrSegment>& segs) {
    double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300, total = 0;
    for (const auto& s : segs) {
      minx = std::min({minx, s.a.x, s.b.x});
      miny = std::min({miny, s.a.y, s.b.y});
      maxx = std::max({maxx, s.a.x, s.b.x});
      maxy = std::max({maxy, s.a.y, s.b.y});
      total += dist(s.a, s.b);
    }
    origin = {minx, miny};
    double avg = segs.empty() ? 1.0 : total / segs.size();
    cell = std::max(avg, 1e-6 * std::max(maxx - minx, maxy - miny) + 1e-300);
    for (int i = 0; i < (int)segs.size(); ++i) insert(i, segs[i].a, segs[i].b);
  }

  void cells_of(const Point2& a, const Point2& b, std::vector<long long>& out) const {
    long long ix0 = (long long)std::floor((std::min(a.x, b.x) - origin.x) / cell);
    long long ix1 = (long long)std::floor((std::max(a.x, b.x) - origin.x) / cell);
    long long iy0 = (long long)std::floor((std::min(a.y, b.y) - origin.y) / cell);
    long long iy1 = (long long)std::floor((std::max(a.y, b.y) - origin.y) / cell);
    out.clear();
    for (long long ix = ix0; ix <= ix1; ++ix)
      for (long long iy = iy0; iy <= iy1; ++iy) out.push_back(key(ix, iy));
  }

  void insert(int id, const Point2& a, const Point2& b) {
    std::vector<long long> ks;
    cells_of(a, b, ks);
    for (long long k : ks) buckets[k].push_back(id);
  }

  void candidates(const Point2& a, const Point2& b, std::vector<int>& out) const {
    std::vector<long long> ks;
    cells_of(a, b, ks);
    out.clear();
    for (long long k : ks) {
      auto it = buckets.find(k);
      if (it == buckets.end()) continue;
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
};

double point_seg_dist(const Point2& p, const Point2& a, const Point2& b) {
  Vec2 d = b - a;
  double len2 = d.norm2();
  if (len2 == 0.0) return dist(p, a);
  double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return dist(p, a + d * t);
}

bool point_in_cycle(const std::vector<Point2>& verts, const std::vector<int>& cycle,
                    const Point2& p) {
  // Even-odd ray cast toward +x with a deterministic tie-break slope.
  bool inside = false;
  size_t n = cycle.size();
  for (size_t i = 0; i < n; ++i) {
    const Point2& a = verts[cycle[i]];
    const Point2& b = verts[cycle[(i + 1) % n]];
    if ((a.y > p.y) != (b.y > p.y)) {
      double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (xint > p.x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

int Arrangement::degree(int v) const {
  int d = 0;
  for (const auto& e : edges)
    if (e.a == v || e.b == v) ++d;
  return d;
}

Arrangement build_arrangement(const std::vector<ArrSegment>& input, double tol) {
  Arrangement arr;
  if (input.empty()) {
    Arrangement empty;
    empty.faces.push_back({0.0, false, Point2{0, 0}, {}});
    empty.outer_face = 0;
    return empty;
  }

  // 1. Pairwise intersections -> split parameters per segment.
  BroadPhase bp(input);
  std::vector<std::vector<double>> splits(input.size());
  std::vector<int> cand;
  for (int i = 0; i < (int)input.size(); ++i) {
    splits[i].push_back(0.0);
    splits[i].push_back(1.0);
    bp.candidates(input[i].a, input[i].b, cand);
    for (int j : cand) {
      if (j <= i) continue;
      Intersection ix = segment_intersect({input[i].a, input[i].b},
                                          {input[j].a, input[j].b}, tol);
      if (ix.kind == IntersectKind::None) continue;
      if (ix.kind == IntersectKind::CollinearOverlap) {
        // Overlap between distinct inputs is not representable; callers with
        // cut rays retry with rotated cuts.
        if (input[i].kind != input[j].kind || input[i].kind == SegKind::Network)
          throw ArrangementDegenerate("collinear overlap between input segments");
        continue;
      }
      auto add_param = [&](int s, const Point2& p) {
        Vec2 d = input[s].b - input[s].a;
        double len2 = d.norm2();
        if (len2 == 0) return;
        double t = (p - input[s].a).dot(d) / len2;
        if (t > 1e-12 && t < 1.0 - 1e-12) splits[s].push_back(t);
      };
      add_param(i, ix.point);
      add_param(j, ix.point);
    }
  }

  // 2. Snap endpoints/intersections into shared vertices; emit sub-edges.
  SnapGrid snap(&arr.verts, tol);
  std::map<std::pair<int, int>, int> edge_of;  // undirected vertex pair -> edge id
  for (int i = 0; i < (int)input.size(); ++i) {
    auto& ts = splits[i];
    std::sort(ts.begin(), ts.end());
    Vec2 d = input[i].b - input[i].a;
    int prev = -1;
    for (double t : ts) {
      int v = snap.find_or_add(input[i].a + d * t, tol);
      if (prev >= 0 && v != prev) {
        int a = std::min(prev, v), b = std::max(prev, v);
        auto it = edge_of.find({a, b});
        if (it != edge_of.end()) {
          const auto& other = arr.edges[it->second];
          if (other.kind != input[i].kind || other.kind == SegKind::Network)
            throw ArrangementDegenerate("duplicate sub-edge between inputs");
        } else {
          edge_of[{a, b}] = (int)arr.edges.size();
          arr.edges.push_back({a, b, input[i].kind, input[i].aux, -1, -1});
        }
      }
      if (v != prev) prev = v;
    }
  }
  if (arr.edges.empty()) throw ArrangementDegenerate("no usable edges");

  // 3. Half-edge orbits. Half-edge 2e = (a->b), 2e+1 = (b->a).
  int ne = (int)arr.edges.size();
  auto he_from = [&](int h) { return (h & 1) ? arr.edges[h >> 1].b : arr.edges[h >> 1].a; };
  auto he_to = [&](int h) { return (h & 1) ? arr.edges[h >> 1].a : arr.edges[h >> 1].b; };

  std::vector<std::vector<int>> outgoing(arr.verts.size());
  for (int h = 0; h < 2 * ne; ++h) outgoing[he_from(h)].push_back(h);
  std::vector<double> he_angle(2 * ne);
  for (int h = 0; h < 2 * ne; ++h) {
    Vec2 d = arr.verts[he_to(h)] - arr.verts[he_from(h)];
    he_angle[h] = std::atan2(d.y, d.x);
  }
  for (auto& out : outgoing)
    std::sort(out.begin(), out.end(),
              [&](int a, int b) { return he_angle[a] < he_angle[b]; });

  std::vector<int> next(2 * ne, -1);
  for (int h = 0; h < 2 * ne; ++h) {
    int twin = h ^ 1;
    const auto& out = outgoing[he_from(twin)];
    auto it = std::find(out.begin(), out.end(), twin);
    size_t idx = (size_t)(it - out.begin());
    next[h] = out[(idx + out.size() - 1) % out.size()];
  }

  // 4. Orbits -> cycles with signed area and an interior point to their left.
  std::vector<int> orbit_of(2 * ne, -1);
  struct Orbit {
    std::vector<int> hes;
    std::vector<int> cycle;  // vertex ids
    double area = 0.0;
    Point2 rep;
    bool rep_ok = false;
  };
  std::vector<Orbit> orbits;
  for (int h0 = 0; h0 < 2 * ne; ++h0) {
    if (orbit_of[h0] >= 0) continue;
    Orbit orb;
    int id = (int)orbits.size();
    int h = h0;
    do {
      orbit_of[h] = id;
      orb.hes.push_back(h);
      orb.cycle.push_back(he_from(h));
      h = next[h];
    } while (h != h0);
    double twice = 0.0;
    for (size_t i = 0; i < orb.cycle.size(); ++i)
      twice += arr.verts[orb.cycle[i]].cross(arr.verts[orb.cycle[(i + 1) % orb.cycle.size()]]);
    orb.area = 0.5 * twice;
    orbits.push_back(std::move(orb));
  }

  // Interior representative: offset the longest orbit edge leftward, shrinking
  // until the probe is clear of all other edges.
  auto clear_of_edges = [&](const Point2& p, int skip_edge, double clearance) {
    for (int e = 0; e < ne; ++e) {
      if (e == skip_edge) continue;
      if (point_seg_dist(p, arr.verts[arr.edges[e].a], arr.verts[arr.edges[e].b]) < clearance)
        return false;
    }
    return true;
  };
  for (auto& orb : orbits) {
    std::vector<int> by_len = orb.hes;
    std::sort(by_len.begin(), by_len.end(), [&](int h1, int h2) {
      return dist(arr.verts[he_from(h1)], arr.verts[he_to(h1)]) >
             dist(arr.verts[he_from(h2)], arr.verts[he_to(h2)]);
    });
    for (int cand = 0; cand < (int)by_len.size() && cand < 12 && !orb.rep_ok; ++cand) {
      int h = by_len[cand];
      Point2 a = arr.verts[he_from(h)], b = arr.verts[he_to(h)];
      double len = dist(a, b);
      if (len <= tol) continue;
      Point2 mid = (a + b) * 0.5;
      Vec2 left = (b - a).normalized().perp();
      double rho = len / 8.0;
      for (int iter = 0; iter < 45; ++iter) {
        Point2 p = mid + left * rho;
        double probe_tol = std::clamp(rho * 0.05, 1e-15, tol);
        bool ok = clear_of_edges(p, h >> 1, rho * 0.4);
        if (ok) {
          // The probe segment from just off the edge to p must cross nothing.
          Segment2 probe{mid + left * (probe_tol * 4), p};
          for (int e = 0; e < ne && ok; ++e) {
            if (e == (h >> 1)) continue;
            auto ix = segment_intersect(
                probe, {arr.verts[arr.edges[e].a], arr.verts[arr.edges[e].b]}, probe_tol);
            if (ix.kind != IntersectKind::None) ok = false;
          }
        }
        if (ok) {
          orb.rep = p;
          orb.rep_ok = true;
          break;
        }
        rho *= 0.5;
      }
    }
    if (!orb.rep_ok && orb.cycle.size() >= 3) {
      // Fallback for micro-sliver faces: the vertex centroid of a (near-)
      // triangular cycle lies inside even when no offset point has clearance.
      Point2 cen{0, 0};
      for (int v : orb.cycle) cen += arr.verts[v];
      cen = cen * (1.0 / (double)orb.cycle.size());
      if (point_in_cycle(arr.verts, orb.cycle, cen)) {
        orb.rep = cen;
        orb.rep_ok = true;
      }
    }
    if (!orb.rep_ok) throw ArrangementDegenerate("failed to place face representative");
  }

  // 5. Group orbits into faces: positive cycles are outer boundaries; others
  //    are holes of the smallest positive cycle containing their rep.
  double scale2 = 0.0;
  for (const auto& s : input) scale2 = std::max(scale2, (s.b - s.a).norm2());
  double area_eps = 1e-13 * std::max(scale2, 1.0);

  std::vector<int> face_of_orbit(orbits.size(), -1);
  std::vector<int> positive;
  for (int i = 0; i < (int)orbits.size(); ++i)
    if (orbits[i].area > area_eps) positive.push_back(i);

  // One face per positive orbit, plus the unbounded face.
  for (int i : positive) {
    Arrangement::Face f;
    f.area = orbits[i].area;
    f.bounded = true;
    f.rep = orbits[i].rep;
    f.cycles.push_back(orbits[i].cycle);
    face_of_orbit[i] = (int)arr.faces.size();
    arr.faces.push_back(std::move(f));
  }
  Arrangement::Face unbounded;
  unbounded.bounded = false;
  arr.outer_face = (int)arr.faces.size();
  arr.faces.push_back(std::move(unbounded));

  for (int i = 0; i < (int)orbits.size(); ++i) {
    if (face_of_orbit[i] >= 0) continue;
    int owner = arr.outer_face;
    double owner_area = 1e300;
    for (int j : positive) {
      if (j == i) continue;
      if (orbits[j].area < owner_area &&
          point_in_cycle(arr.verts, orbits[j].cycle, orbits[i].rep)) {
        owner = face_of_orbit[j];
        owner_area = orbits[j].area;
      }
    }
    face_of_orbit[i] = owner;
    arr.faces[owner].cycles.push_back(orbits[i].cycle);
    if (owner == arr.outer_face && !arr.faces[owner].bounded)
      arr.faces[owner].rep = orbits[i].rep;  // some point of the unbounded face
  }

  for (int e = 0; e < ne; ++e) {
    arr.edges[e].face_left = face_of_orbit[orbit_of[2 * e]];
    arr.edges[e].face_right = face_of_orbit[orbit_of[2 * e + 1]];
  }
  return arr;
}

int locate_face(const Arrangement& arr, const Point2& p) {
  for (int f = 0; f < (int)arr.faces.size(); ++f) {
    if (!arr.faces[f].bounded) continue;
    int parity = 0;
    for (const auto& cyc : arr.faces[f].cycles)
      if (point_in_cycle(arr.verts, cyc, p)) parity ^= 1;
    if (parity) return f;
  }
  return arr.outer_face;
}

}  // namespace plateau
