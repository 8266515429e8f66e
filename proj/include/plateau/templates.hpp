#pragma once

// Named initial FilmNetwork constructions: lens, collapsed-Y and its chain
// generalizations (Steiner trees with liquid curvilinear triangles at chosen
// junctions), plus bare anchor-to-anchor segments.

#include <string>
#include <vector>

#include "plateau/film.hpp"

namespace plateau {

struct TemplateSpec {
  std::string name;
  std::string type;  // "lens" or "steiner"

  // lens: wet lens spanning the gap between two obstacles.
  int lens_i = 0, lens_j = 1;

  // steiner: tree with degree-3 junctions; legs go junction->junction or
  // junction->obstacle anchor. wet_junctions host a curvilinear triangle of
  // liquid (epsilon split evenly among them).
  std::vector<Point2> junctions;
  struct Leg {
    int j;             // junction index
    int to;            // junction index or obstacle index
    bool to_junction;  // true: junction-junction; false: junction-anchor
  };
  std::vector<Leg> legs;
  std::vector<int> wet_junctions;

  // Extra collapsed straight edges between obstacle anchors.
  std::vector<std::pair<int, int>> segments;
};

// Number of liquid sites; the selection principle ranks templates by this.
int wet_junction_count(const TemplateSpec& spec);

// Build the initial state. epsilon == 0 gives the dry (multiplicity-2 only)
// variant used for the ell reference; for the lens this is a single segment.
FilmNetwork instantiate(const TemplateSpec& spec, const WireFrame& wire, double epsilon,
                        int samples_per_arc = 48);

}  // namespace plateau
