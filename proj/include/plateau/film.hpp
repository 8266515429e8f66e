#pragma once

// The state (K,E): a planar curve network with liquid-face labels,
// multiplicity accounting, the energy F, and the area |E|.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plateau/wireframe.hpp"

namespace plateau {

struct InvalidNetwork : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FilmVertex {
  Point2 pos;
  int anchor = -1;  // obstacle index, or -1 for a free vertex
};

struct FilmEdge {
  int a = -1, b = -1;                // endpoint vertex indices
  std::vector<Point2> interior;      // polyline samples strictly between a and b
  int left_face = -1, right_face = -1;
};

enum class FaceLabel { Vacuum, Liquid };

struct FilmFace {
  FaceLabel label = FaceLabel::Vacuum;
  // Boundary as ordered (edge index, forward?) pairs with the face on the
  // left of traversal; CCW (positive signed area) for bounded faces. The
  // unbounded face stores no cycle.
  std::vector<std::pair<int, bool>> cycle;
  bool unbounded = false;
};

struct FilmNetwork {
  std::vector<FilmVertex> vertices;
  std::vector<FilmEdge> edges;
  std::vector<FilmFace> faces;

  // Full polyline of an edge including endpoints, in a->b order (or reversed).
  std::vector<Point2> edge_polyline(int e, bool forward = true) const;
  double edge_length(int e) const;
  // 1 on boundary (one liquid side), 2 on collapsed (vacuum both sides).
  int multiplicity(int e) const;
  bool is_wet(int e) const;  // exactly one liquid side
  double face_area(int f) const;  // signed area of a bounded face's cycle

  std::vector<std::vector<Point2>> as_polylines() const;
};

struct EnergyBreakdown {
  double boundary_length = 0.0;
  double collapsed_length = 0.0;
  double energy_F = 0.0;
  double area = 0.0;
  std::optional<double> lambda_estimate;
};

EnergyBreakdown energy(const FilmNetwork& net);

// Empty list iff all invariants hold; never throws.
std::vector<std::string> validate(const FilmNetwork& net, const WireFrame* wire = nullptr,
                                  double tol = kTolGeom);

// Subdivide straight sub-segments so every one has length <= max_seg_len.
FilmNetwork refine(const FilmNetwork& net, double max_seg_len);

}  // namespace plateau
