#include "plateau/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace plateau {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Bounds {
  Point2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  void add(const Point2& p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
};

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "epsilon,energy_F,boundary_length,collapsed_length,lambda,iterations,spanning_ok,"
         "ell_reference\n";
  for (const auto& r : rows)
    out << num(r.epsilon) << ',' << num(r.energy_F) << ',' << num(r.boundary_length) << ','
        << num(r.collapsed_length) << ',' << num(r.lambda) << ',' << r.iterations << ','
        << (r.spanning_ok ? 1 : 0) << ',' << num(r.ell_reference) << '\n';
  return out.str();
}

std::string render_svg(const FilmNetwork& net, const WireFrame& wire,
                       const std::vector<Point2>* witness, const SvgOptions& opts) {
  Bounds b;
  for (int i = 0; i < wire.count(); ++i) {
    b.add(wire.obstacles[i] + Vec2{wire.delta, wire.delta});
    b.add(wire.obstacles[i] - Vec2{wire.delta, wire.delta});
  }
  for (const auto& poly : net.as_polylines())
    for (const auto& p : poly) b.add(p);
  if (witness)
    for (const auto& p : *witness) b.add(p);
  double w = std::max(b.hi.x - b.lo.x, 1e-9), h = std::max(b.hi.y - b.lo.y, 1e-9);
  double m = opts.margin_frac * std::max(w, h);
  double vx = b.lo.x - m, vy = b.lo.y - m, vw = w + 2 * m, vh = h + 2 * m;
  double stroke = std::max(vw, vh) / 300;

  std::ostringstream svg;
  // y-up: flip with a group transform so viewBox coordinates match the scene.
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width_px << "\" height=\""
      << opts.width_px * vh / vw << "\" viewBox=\"" << num(vx) << " " << num(-vy - vh) << " "
      << num(vw) << " " << num(vh) << "\">\n";
  svg << "<g transform=\"scale(1,-1)\">\n";

  // Liquid faces.
  for (const auto& f : net.faces) {
    if (f.label != FaceLabel::Liquid || f.unbounded) continue;
    svg << "<path d=\"";
    bool first = true;
    for (const auto& [e, fwd] : f.cycle) {
      auto pts = net.edge_polyline(e, fwd);
      for (size_t i = first ? 0 : 1; i < pts.size(); ++i)
        svg << (first && i == 0 ? "M " : "L ") << num(pts[i].x) << ' ' << num(pts[i].y) << ' ';
      first = false;
    }
    svg << "Z\" fill=\"#9ecae9\" stroke=\"none\"/>\n";
  }

  // Wire disks.
  for (int i = 0; i < wire.count(); ++i)
    svg << "<circle cx=\"" << num(wire.obstacles[i].x) << "\" cy=\"" << num(wire.obstacles[i].y)
        << "\" r=\"" << num(wire.delta) << "\" fill=\"#888888\"/>\n";

  // Edges: collapsed bold, wet single stroke.
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    bool collapsed = net.multiplicity(e) == 2;
    svg << "<polyline points=\"";
    for (const auto& p : net.edge_polyline(e)) svg << num(p.x) << ',' << num(p.y) << ' ';
    svg << "\" fill=\"none\" stroke=\"" << (collapsed ? "#000000" : "#1f4e79") << "\" stroke-width=\""
        << num(collapsed ? 2.2 * stroke : stroke) << "\"/>\n";
  }

  if (witness && !witness->empty()) {
    svg << "<polyline points=\"";
    for (const auto& p : *witness) svg << num(p.x) << ',' << num(p.y) << ' ';
    svg << num((*witness)[0].x) << ',' << num((*witness)[0].y);
    svg << "\" fill=\"none\" stroke=\"#cc2222\" stroke-width=\"" << num(stroke)
        << "\" stroke-dasharray=\"" << num(3 * stroke) << "\"/>\n";
  }

  svg << "</g>\n</svg>\n";
  return svg.str();
}

std::string network_to_json(const FilmNetwork& net) {
  nlohmann::json j;
  for (const auto& v : net.vertices)
    j["vertices"].push_back({{"pos", {v.pos.x, v.pos.y}}, {"anchor", v.anchor}});
  for (const auto& e : net.edges) {
    nlohmann::json je;
    je["a"] = e.a;
    je["b"] = e.b;
    je["left_face"] = e.left_face;
    je["right_face"] = e.right_face;
    je["interior"] = nlohmann::json::array();
    for (const auto& p : e.interior) je["interior"].push_back({p.x, p.y});
    j["edges"].push_back(je);
  }
  for (const auto& f : net.faces) {
    nlohmann::json jf;
    jf["label"] = f.label == FaceLabel::Liquid ? "liquid" : "vacuum";
    jf["unbounded"] = f.unbounded;
    jf["cycle"] = nlohmann::json::array();
    for (const auto& [e, fwd] : f.cycle) jf["cycle"].push_back({e, fwd ? 1 : 0});
    j["faces"].push_back(jf);
  }
  return j.dump(2) + "\n";
}

FilmNetwork network_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FilmNetwork net;
  for (const auto& jv : j.value("vertices", nlohmann::json::array())) {
    FilmVertex v;
    v.pos = {jv["pos"][0].get<double>(), jv["pos"][1].get<double>()};
    v.anchor = jv.value("anchor", -1);
    net.vertices.push_back(v);
  }
  for (const auto& je : j.value("edges", nlohmann::json::array())) {
    FilmEdge e;
    e.a = je["a"].get<int>();
    e.b = je["b"].get<int>();
    e.left_face = je["left_face"].get<int>();
    e.right_face = je["right_face"].get<int>();
    for (const auto& jp : je["interior"])
      e.interior.push_back({jp[0].get<double>(), jp[1].get<double>()});
    net.edges.push_back(e);
  }
  for (const auto& jf : j.value("faces", nlohmann::json::array())) {
    FilmFace f;
    f.label = jf["label"].get<std::string>() == "liquid" ? FaceLabel::Liquid : FaceLabel::Vacuum;
    f.unbounded = jf["unbounded"].get<bool>();
    for (const auto& jc : jf["cycle"]) f.cycle.push_back({jc[0].get<int>(), jc[1].get<int>() != 0});
    net.faces.push_back(f);
  }
  return net;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace plateau
