#include "plateau/film.hpp"

#include <algorithm>
#include <cmath>

namespace plateau {

std::vector<Point2> FilmNetwork::edge_polyline(int e, bool forward) const {
  const FilmEdge& ed = edges[e];
  std::vector<Point2> pts;
  pts.push_back(vertices[ed.a].pos);
  for (const Point2& p : ed.interior) pts.push_back(p);
  pts.push_back(vertices[ed.b].pos);
  if (!forward) std::reverse(pts.begin(), pts.end());
  return pts;
}

double FilmNetwork::edge_length(int e) const { return polyline_length(edge_polyline(e)); }

int FilmNetwork::multiplicity(int e) const { return is_wet(e) ? 1 : 2; }

bool FilmNetwork::is_wet(int e) const {
  const FilmEdge& ed = edges[e];
  auto liquid = [&](int f) { return f >= 0 && faces[f].label == FaceLabel::Liquid; };
  return liquid(ed.left_face) != liquid(ed.right_face);
}

double FilmNetwork::face_area(int f) const {
  const FilmFace& face = faces[f];
  if (face.unbounded) return 0.0;
  double twice = 0.0;
  for (const auto& [e, fwd] : face.cycle) {
    auto pts = edge_polyline(e, fwd);
    for (size_t i = 0; i + 1 < pts.size(); ++i) twice += pts[i].cross(pts[i + 1]);
  }
  return 0.5 * twice;
}

std::vector<std::vector<Point2>> FilmNetwork::as_polylines() const {
  std::vector<std::vector<Point2>> out;
  for (int e = 0; e < (int)edges.size(); ++e) out.push_back(edge_polyline(e));
  return out;
}

EnergyBreakdown energy(const FilmNetwork& net) {
  // Cheap structural check only; full validate() is O(n^2) and is run by
  // callers at entry points, not per evaluation.
  for (const auto& ed : net.edges) {
    auto liquid = [&](int f) { return f >= 0 && net.faces[f].label == FaceLabel::Liquid; };
    if (ed.left_face < 0 || ed.right_face < 0 || ed.left_face >= (int)net.faces.size() ||
        ed.right_face >= (int)net.faces.size())
      throw InvalidNetwork("energy: edge with missing face label");
    if (liquid(ed.left_face) && liquid(ed.right_face))
      throw InvalidNetwork("energy: liquid on both sides of an edge");
  }
  EnergyBreakdown out;
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    double len = net.edge_length(e);
    if (net.is_wet(e))
      out.boundary_length += len;
    else
      out.collapsed_length += len;
  }
  out.energy_F = out.boundary_length + 2 * out.collapsed_length;
  for (int f = 0; f < (int)net.faces.size(); ++f)
    if (net.faces[f].label == FaceLabel::Liquid) out.area += std::abs(net.face_area(f));
  return out;
}

std::vector<std::string> validate(const FilmNetwork& net, const WireFrame* wire, double tol) {
  std::vector<std::string> out;
  int nv = (int)net.vertices.size(), ne = (int)net.edges.size(), nf = (int)net.faces.size();

  int unbounded = 0;
  for (const auto& f : net.faces)
    if (f.unbounded) {
      ++unbounded;
      if (f.label != FaceLabel::Vacuum) out.push_back("UnboundedFaceNotVacuum");
      if (!f.cycle.empty()) out.push_back("UnboundedFaceHasCycle");
    }
  if (unbounded != 1) out.push_back("UnboundedFaceCount");

  for (int e = 0; e < ne; ++e) {
    const FilmEdge& ed = net.edges[e];
    if (ed.a < 0 || ed.a >= nv || ed.b < 0 || ed.b >= nv) {
      out.push_back("EdgeBadVertex");
      return out;  // cannot safely continue
    }
    if (ed.left_face < 0 || ed.left_face >= nf || ed.right_face < 0 || ed.right_face >= nf) {
      out.push_back("EdgeBadFace");
      return out;
    }
    auto liquid = [&](int f) { return net.faces[f].label == FaceLabel::Liquid; };
    if (liquid(ed.left_face) && liquid(ed.right_face)) out.push_back("LiquidBothSides");
  }

  // Face cycles: closed, consistent with the edges' left/right declarations,
  // and CCW for bounded liquid faces.
  for (int f = 0; f < nf; ++f) {
    const FilmFace& face = net.faces[f];
    if (face.unbounded) continue;
    if (face.cycle.empty()) {
      out.push_back("EmptyFaceCycle");
      continue;
    }
    int n = (int)face.cycle.size();
    bool cycle_ok = true;
    for (int i = 0; i < n; ++i) {
      auto [e, fwd] = face.cycle[i];
      if (e < 0 || e >= ne) {
        out.push_back("CycleBadEdge");
        cycle_ok = false;
        break;
      }
      const FilmEdge& ed = net.edges[e];
      int side = fwd ? ed.left_face : ed.right_face;
      if (side != f) {
        out.push_back("CycleSideMismatch");
        cycle_ok = false;
      }
      auto [e2, fwd2] = face.cycle[(i + 1) % n];
      int head = fwd ? ed.b : ed.a;
      const FilmEdge& nx = net.edges[e2];
      int tail = fwd2 ? nx.a : nx.b;
      if (head != tail) {
        out.push_back("CycleNotClosed");
        cycle_ok = false;
        break;
      }
    }
    if (cycle_ok && net.face_area(f) <= 0.0 && face.label == FaceLabel::Liquid)
      out.push_back("LiquidFaceNotCCW");
  }

  // Pairwise non-crossing except at shared vertices.
  struct Sub {
    Point2 a, b;
    int edge;
    bool first, last;
  };
  std::vector<Sub> subs;
  for (int e = 0; e < ne; ++e) {
    auto pts = net.edge_polyline(e);
    for (size_t i = 0; i + 1 < pts.size(); ++i)
      subs.push_back({pts[i], pts[i + 1], e, i == 0, i + 2 == pts.size()});
  }
  bool crossing = false;
  for (size_t i = 0; i < subs.size() && !crossing; ++i)
    for (size_t j = i + 1; j < subs.size() && !crossing; ++j) {
      const Sub &s = subs[i], &t = subs[j];
      if (s.edge == t.edge) continue;  // interior self-touch would be a crossing too,
                                       // but templates never emit it; skip for speed
      auto ix = segment_intersect({s.a, s.b}, {t.a, t.b}, tol);
      if (ix.kind == IntersectKind::None) continue;
      if (ix.kind == IntersectKind::EndpointTouch) {
        // Allowed only where the two edges share a network vertex.
        bool shared = false;
        const FilmEdge &es = net.edges[s.edge], &et = net.edges[t.edge];
        for (int v1 : {es.a, es.b})
          for (int v2 : {et.a, et.b})
            if (v1 == v2 && dist(net.vertices[v1].pos, ix.point) < 1e-6) shared = true;
        if (shared) continue;
      }
      out.push_back("EdgeCrossing");
      crossing = true;
    }

  if (wire) {
    for (int v = 0; v < nv; ++v) {
      const FilmVertex& fv = net.vertices[v];
      if (fv.anchor >= 0) {
        if (fv.anchor >= wire->count())
          out.push_back("AnchorBadObstacle");
        else if (std::abs(dist(fv.pos, wire->obstacles[fv.anchor]) - wire->delta) > tol)
          out.push_back("AnchorOffCircle");
      }
      for (int i = 0; i < wire->count(); ++i)
        if (dist(fv.pos, wire->obstacles[i]) < wire->delta - tol) out.push_back("VertexInWire");
    }
    for (const auto& s : subs)
      for (int i = 0; i < wire->count(); ++i) {
        Vec2 d = s.b - s.a;
        double len2 = d.norm2();
        double t = len2 > 0 ? std::clamp((wire->obstacles[i] - s.a).dot(d) / len2, 0.0, 1.0) : 0.0;
        if (dist(wire->obstacles[i], s.a + d * t) < wire->delta - 1e-7) {
          out.push_back("EdgeInWire");
          i = wire->count();
        }
      }
  }
  return out;
}

FilmNetwork refine(const FilmNetwork& net, double max_seg_len) {
  if (!(max_seg_len > 0)) throw std::invalid_argument("refine: max_seg_len must be positive");
  FilmNetwork out = net;
  for (auto& ed : out.edges) {
    std::vector<Point2> pts;
    pts.push_back(out.vertices[ed.a].pos);
    for (const Point2& p : ed.interior) pts.push_back(p);
    pts.push_back(out.vertices[ed.b].pos);
    std::vector<Point2> fine;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      double len = dist(pts[i], pts[i + 1]);
      int parts = std::max(1, (int)std::ceil(len / max_seg_len));
      for (int k = 0; k < parts; ++k) fine.push_back(pts[i] + (pts[i + 1] - pts[i]) * ((double)k / parts));
    }
    fine.push_back(pts.back());
    ed.interior.assign(fine.begin() + 1, fine.end() - 1);
  }
  return out;
}

}  // namespace plateau
