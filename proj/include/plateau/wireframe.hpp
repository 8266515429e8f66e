#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plateau/arrangement.hpp"
#include "plateau/geom.hpp"

namespace plateau {

// Mod-2 winding pattern over the m obstacles, bit i = obstacle i.
using Parity = std::uint32_t;

// The wire frame W: closed disks of radius delta around the obstacle points.
// Omega is the complement of W.
struct WireFrame {
  std::vector<Point2> obstacles;
  double delta = 0.0;

  Disk2 disk(int i) const { return Disk2(obstacles[i], delta); }
  int count() const { return (int)obstacles.size(); }

  // Throws std::invalid_argument unless delta > 0, m >= 1 and disks disjoint.
  void validate() const;

  // Deterministic cut ray for obstacle i: direction (1, i*1e-3), optionally
  // rotated by extra_rot (the degeneracy-resolution retries).
  Ray2 cut(int i, double extra_rot = 0.0) const;
};

struct SpanningClass {
  std::vector<Parity> generators;
  std::vector<std::vector<Point2>> representative_loops;  // optional, for rendering

  // Throws unless generators are nonzero, distinct and fit in m bits.
  void validate(int obstacle_count) const;
};

// Faces of the complement of (network ∪ W), refined by the m cut rays inside
// a bounding box. Traversable adjacencies are the cut sub-edges: crossing the
// cut of obstacle i toggles parity bit i. The mod-2 winding classes of loops
// avoiding the network are exactly the cycle space of this graph.
struct RegionGraph {
  Arrangement arr;
  std::vector<int> node_of_face;  // face id -> node id, -1 for W/unbounded faces
  std::vector<int> face_of_node;
  struct Adjacency {
    int n1 = -1;
    int n2 = -1;
    int obstacle = -1;
    int edge = -1;  // refined arrangement edge crossed
  };
  std::vector<Adjacency> adjacencies;
  int obstacle_count = 0;
  double cut_rotation = 0.0;  // retry rotation that produced a clean build
  std::vector<std::vector<Point2>> disk_polygons;
};

RegionGraph build_region_graph(const std::vector<std::vector<Point2>>& network,
                               const WireFrame& wire, double tol = kTolGeom,
                               int max_perturb = 8);

// Basis (over F2) of the achievable winding-parity subspace.
std::vector<Parity> achievable_parities(const RegionGraph& graph);

bool parity_in_span(Parity p, const std::vector<Parity>& basis);

struct SpanningResult {
  bool spanning = false;
  std::optional<Parity> violated_generator;
  std::vector<Point2> witness;  // closed loop realizing the violated generator
};

// True iff no generator class is realizable by a loop avoiding network ∪ W.
SpanningResult is_spanning(const std::vector<std::vector<Point2>>& network,
                           const WireFrame& wire, const SpanningClass& cls);

// Minimum clearance of the blocking structure: the smallest gap between
// non-incident network/wire features. Perturbations below half this margin
// cannot open a passage.
double spanning_margin(const std::vector<std::vector<Point2>>& network,
                       const WireFrame& wire);

}  // namespace plateau
