#pragma once

// Volume-constrained, spanning-preserving energy descent on FilmNetwork;
// Lagrange multiplier estimation; epsilon-sweeps and scaling-law fits.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plateau/film.hpp"
#include "plateau/templates.hpp"

namespace plateau {

struct SolverOptions {
  double step0 = -1.0;  // < 0: auto = 1e-2 * scene diameter
  int max_iters = 50000;
  double grad_tol = 1e-8;  // RMS projected gradient per node
  double vol_tol = 1e-10;  // relative volume error
  int span_check_every = 25;
  double backtrack_factor = 0.5;
  double max_seg_len = 0.02;
  std::uint64_t seed = 0;
};

// DOF layout: vertex positions first, then interior samples edge by edge.
struct DofMap {
  int n_vertices = 0;
  std::vector<int> edge_offset;  // interior samples of edge e start at edge_offset[e]
  int total = 0;

  explicit DofMap(const FilmNetwork& net);
  Point2 get(const FilmNetwork& net, int dof) const;
  void set(FilmNetwork& net, int dof, Point2 p) const;
};

struct GradientResult {
  std::vector<Vec2> force;      // dF/dx per DOF
  std::vector<Vec2> area_grad;  // dA/dx per DOF (signed liquid area)
};

GradientResult gradient(const FilmNetwork& net);

enum class RelaxStatus { Converged, NotConverged, SpanningLost, InfeasibleVolume };

struct RelaxResult {
  FilmNetwork net;
  EnergyBreakdown breakdown;
  RelaxStatus status = RelaxStatus::NotConverged;
  int iterations = 0;
  double lambda = 0.0;     // projection multiplier at the final step
  double grad_norm = 0.0;  // final RMS projected gradient
  std::string message;
};

RelaxResult relax(const FilmNetwork& init, const WireFrame& wire, const SpanningClass& cls,
                  double epsilon, const SolverOptions& opts = {});

struct LambdaEstimate {
  double lambda = 0.0;
  double stddev = 0.0;  // constancy residual of the discrete curvature
};

std::optional<LambdaEstimate> estimate_lambda(const FilmNetwork& net);

struct SweepRow {
  double epsilon = 0.0;
  double energy_F = 0.0;
  double boundary_length = 0.0;
  double collapsed_length = 0.0;
  double lambda = 0.0;
  int iterations = 0;
  bool spanning_ok = false;
  double ell_reference = 0.0;
};

struct SweepFit {
  std::string model;  // "quadratic-excess" or "sqrt-deficit"
  double exponent = 0.0;
  double coefficient = 0.0;
  double r2 = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by epsilon ascending
  SweepFit fit;
  double ell_reference = 0.0;
  bool all_ok = true;
};

SweepResult sweep(const TemplateSpec& spec, const WireFrame& wire, const SpanningClass& cls,
                  std::vector<double> epsilons, const SolverOptions& opts = {});

}  // namespace plateau
