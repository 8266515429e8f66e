#pragma once

// Post-hoc verification of structure on converged states: Euler-Lagrange
// residual against test fields, Plateau junction angles, density lower bounds
// and monotonicity, the convex hull property, and measure distance to a pure
// length-minimizing network.

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "plateau/film.hpp"
#include "plateau/wireframe.hpp"

namespace plateau {

struct FieldViolatesBoundaryCondition : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CenterOffNetwork : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Compactly supported C^1 velocity field: polynomial components windowed by
// the standard bump on the support disk, so X and its gradient vanish on and
// outside the support circle.
struct TestField {
  Disk2 support{{0, 0}, 1};
  int degree = 1;
  // Coefficients of each component in (dx, dy) = p - support.center, indexed
  // by (i, j) with i + j <= degree, flattened row-major over i then j.
  std::vector<double> cx, cy;

  Vec2 operator()(const Point2& p) const;

  static TestField random(const Disk2& support, int degree, std::mt19937_64& rng);
};

// Max over fields of |LHS - RHS| / (|LHS| + |RHS| + 1), where
// RHS = sum over edges of multiplicity * (X(b) - X(a)) . tau per sub-segment
// (exact tangential-divergence integral on the polyline) and
// LHS = lambda * sum over wet edges of X(mid) . nu_E * len (midpoint rule),
// nu_E the outer normal of the liquid region. Throws if a field's support
// reaches a wire disk (the X . nu_Omega = 0 condition would fail).
double el_residual(const FilmNetwork& net, double lambda, const std::vector<TestField>& fields,
                   const WireFrame* wire = nullptr);

struct JunctionInfo {
  int vertex = -1;
  Point2 pos;
  double angles_deg[3] = {0, 0, 0};  // pairwise angles between incident tangents
  double max_dev_deg = 0.0;          // max |angle - 120|
  // A wet corner where an arc leaves a collapsed edge tangentially has
  // angles near (0, 180, 180); only genuine Y-points obey the 120-degree law.
  bool tangential = false;
};

// One entry per degree-3 vertex.
std::vector<JunctionInfo> junction_report(const FilmNetwork& net);

struct DensityRow {
  double r = 0.0;
  double mu = 0.0;     // multiplicity-weighted length in B_r (exact clip)
  double ratio = 0.0;  // e^{Lambda r} mu / (2 r)
};

struct DensityProfile {
  std::vector<DensityRow> rows;
  double min_ratio = 0.0;
  bool monotone = true;  // non-decreasing within mono_tol (relative)
  double lambda_used = 0.0;
};

// Lambda := |lambda_estimate| of the state (diagnostic convention); radii
// must be increasing. Throws CenterOffNetwork if the center is not on K.
DensityProfile density_profile(const FilmNetwork& net, const Point2& center,
                               const std::vector<double>& radii, double mono_tol = 1e-3);

struct HullCheck {
  bool ok = true;
  double max_violation = 0.0;  // distance beyond hull(W) of the worst sample
};

HullCheck convex_hull_check(const FilmNetwork& net, const WireFrame& wire,
                            double hull_tol = 1e-6);

// Flat-distance surrogate between the multiplicity-weighted length measures
// of the two networks: Gaussian kernel smoothing (sigma = bandwidth) on a
// common grid, then the L1 difference of the smoothed densities.
double plateau_distance(const FilmNetwork& net, const FilmNetwork& reference, double bandwidth);

}  // namespace plateau
