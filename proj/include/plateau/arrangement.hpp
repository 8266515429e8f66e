#pragma once

#include <stdexcept>
#include <vector>

#include "plateau/geom.hpp"

namespace plateau {

struct ArrangementDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Provenance of an input segment, carried through subdivision.
enum class SegKind { Network, Disk, Box, Cut };

struct ArrSegment {
  Point2 a;
  Point2 b;
  SegKind kind = SegKind::Network;
  int aux = -1;  // network edge id / disk index / cut obstacle index
};

// Planar subdivision of a set of segments: segments are split at mutual
// intersections, coincident endpoints are snapped, and faces are extracted by
// half-edge traversal (cycles grouped with their holes).
struct Arrangement {
  struct Edge {
    int a = -1;
    int b = -1;
    SegKind kind = SegKind::Network;
    int aux = -1;
    int face_left = -1;   // face of the a->b orbit
    int face_right = -1;  // face of the b->a orbit
  };
  struct Face {
    double area = 0.0;  // outer-cycle area; 0 for the unbounded face
    bool bounded = false;
    Point2 rep;                            // interior representative point
    std::vector<std::vector<int>> cycles;  // vertex cycles (outer first if bounded)
  };

  std::vector<Point2> verts;
  std::vector<Edge> edges;
  std::vector<Face> faces;
  int outer_face = -1;

  int degree(int v) const;
};

Arrangement build_arrangement(const std::vector<ArrSegment>& segs, double tol = kTolGeom);

// Index of the face containing p (even-odd against face outer cycles and
// holes). Points within tol of an edge give an unspecified neighbor face.
int locate_face(const Arrangement& arr, const Point2& p);

}  // namespace plateau
