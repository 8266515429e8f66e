#pragma once

// Explicit comparison surfaces for n = 1: cone, cup, exterior cup, slab, and
// the volume-fixing minimality check built on them.

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "plateau/film.hpp"
#include "plateau/wireframe.hpp"

namespace plateau {

struct TangentialCrossing : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoComponent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ComponentChoice { OutsideE, InsideE };

struct SlabSpec {
  Point2 center;
  double radius = 0.0;   // r
  Vec2 normal{0, 1};     // nu (unit)
  double tau = 0.5;      // half-thickness ratio in (0,1)
  double eta = 0.0;      // collar, in (0, r/2)
};

// Radial cone map f_eta about the ball center applied to every sample.
FilmNetwork cone_competitor(const FilmNetwork& net, const Disk2& ball, double eta);

// Delete K inside the ball, reroute along the complement of the maximal
// qualifying arc A of dB \ K, with an inward collar at radius r - eta.
// Requires the ball in "simple position": exactly one edge crossing, twice,
// transversally, and no network vertex inside.
FilmNetwork cup_competitor(const FilmNetwork& net, const Disk2& ball, ComponentChoice choice,
                           double eta);

// Truncate the network to B_R(0) and reroute strays along the circle.
FilmNetwork exterior_cup_competitor(const FilmNetwork& net, double R);

// Gauge map of the slab: Phi(y) = g(y) * y/|y| about spec.center, with
// g(y) = max(|y|, |y.nu|/tau); Phi maps dS_{tau,t} onto dB_t.
Point2 slab_phi(const SlabSpec& spec, Point2 y);
Point2 slab_phi_inv(const SlabSpec& spec, Point2 z);

// Cup competitor conjugated by Phi (ball radius r/2 in the image).
FilmNetwork slab_competitor(const FilmNetwork& net, const SlabSpec& spec, ComponentChoice choice);

// Multiplicity-weighted length of the network inside a disk (sampled clip).
double weighted_length_inside(const FilmNetwork& net, const Disk2& ball);

struct BallRecord {
  Disk2 ball{{0, 0}, 1};
  std::string construction;
  double F_before = 0.0;
  double F_after = 0.0;
  double area_delta = 0.0;
  bool violation = false;
  std::string note;
};

struct MinimalityReport {
  std::vector<BallRecord> records;
  int violations = 0;
  double C_star = 0.0;
  double slack_tol = 0.0;
};

// Sample balls centered on network edges, small enough to be in simple
// position (or centered at a junction, where only the cone applies).
std::vector<Disk2> sample_balls(const FilmNetwork& net, const WireFrame& wire, int count,
                                std::mt19937_64& rng);

MinimalityReport verify_minimality(const FilmNetwork& net, const WireFrame& wire,
                                   const std::vector<Disk2>& balls, double C_star,
                                   double slack_tol);

}  // namespace plateau
