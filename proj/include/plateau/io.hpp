#pragma once

// Artifact emission: the fixed-schema sweep CSV, SVG rendering (y-up), and a
// JSON network dump for the render command.

#include <string>
#include <vector>

#include "plateau/film.hpp"
#include "plateau/relax.hpp"
#include "plateau/wireframe.hpp"

namespace plateau {

// Columns: epsilon,energy_F,boundary_length,collapsed_length,lambda,
// iterations,spanning_ok,ell_reference. LF line endings, %.17g numbers.
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct SvgOptions {
  double margin_frac = 0.10;  // viewBox margin around the scene bounds
  double width_px = 640;
};

// Wire disks gray, wet edges single stroke, collapsed edges bold, liquid
// faces filled, optional witness loop dashed red. y-up.
std::string render_svg(const FilmNetwork& net, const WireFrame& wire,
                       const std::vector<Point2>* witness = nullptr, const SvgOptions& opts = {});

std::string network_to_json(const FilmNetwork& net);
FilmNetwork network_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace plateau
