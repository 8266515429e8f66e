#include "plateau/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace plateau {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw SchemaError(where + ": unknown key \"" + key + "\"");
}

double get_number(const json& obj, const std::string& key) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw SchemaError(key + ": expected a number");
  return obj[key].get<double>();
}

Point2 get_point(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw SchemaError(where + ": expected [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

WireFrame parse_wire(const json& j) {
  require_keys(j, "wire", {"obstacles", "delta"});
  WireFrame w;
  if (!j.contains("obstacles") || !j["obstacles"].is_array() || j["obstacles"].empty())
    throw SchemaError("wire.obstacles: expected a non-empty array of points");
  for (const auto& p : j["obstacles"]) w.obstacles.push_back(get_point(p, "wire.obstacles"));
  if (!j.contains("delta")) throw SchemaError("delta: missing");
  w.delta = get_number(j, "delta");
  if (w.delta <= 0) throw SchemaError("delta: must be positive");
  for (size_t i = 0; i < w.obstacles.size(); ++i)
    for (size_t k = i + 1; k < w.obstacles.size(); ++k)
      if (dist(w.obstacles[i], w.obstacles[k]) <= 2 * w.delta)
        throw SchemaError("wire: obstacle disks overlap");
  return w;
}

SpanningClass parse_spanning(const json& j, int m) {
  require_keys(j, "spanning", {"generators"});
  if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty())
    throw SchemaError("generators: expected a non-empty array");
  SpanningClass cls;
  for (const auto& g : j["generators"]) {
    if (!g.is_array() || (int)g.size() != m)
      throw SchemaError("generators: each generator needs one bit per obstacle");
    Parity p = 0;
    for (int i = 0; i < m; ++i) {
      int bit = g[i].is_number_integer() ? g[i].get<int>() : -1;
      if (bit != 0 && bit != 1) throw SchemaError("generators: bits must be 0 or 1");
      if (bit) p |= Parity(1) << i;
    }
    if (p == 0) throw SchemaError("generators: zero vector");
    cls.generators.push_back(p);
  }
  return cls;
}

TemplateSpec parse_template(const json& j, int m) {
  require_keys(j, "template",
               {"name", "type", "lens", "junctions", "legs", "wet_junctions", "segments"});
  TemplateSpec t;
  if (!j.contains("name") || !j["name"].is_string()) throw SchemaError("template.name: missing");
  t.name = j["name"].get<std::string>();
  if (!j.contains("type") || !j["type"].is_string()) throw SchemaError("template.type: missing");
  t.type = j["type"].get<std::string>();
  if (t.type != "lens" && t.type != "steiner")
    throw SchemaError("template.type: expected \"lens\" or \"steiner\"");
  if (j.contains("lens")) {
    const auto& l = j["lens"];
    if (!l.is_array() || l.size() != 2) throw SchemaError("template.lens: expected [i, j]");
    t.lens_i = l[0].get<int>();
    t.lens_j = l[1].get<int>();
    if (t.lens_i < 0 || t.lens_i >= m || t.lens_j < 0 || t.lens_j >= m || t.lens_i == t.lens_j)
      throw SchemaError("template.lens: obstacle indices out of range");
  }
  if (j.contains("junctions"))
    for (const auto& p : j["junctions"]) t.junctions.push_back(get_point(p, "template.junctions"));
  if (j.contains("legs")) {
    for (const auto& l : j["legs"]) {
      require_keys(l, "template.legs", {"junction", "obstacle", "to_junction"});
      TemplateSpec::Leg leg;
      if (!l.contains("junction")) throw SchemaError("template.legs: junction missing");
      leg.j = l["junction"].get<int>();
      if (l.contains("obstacle") == l.contains("to_junction"))
        throw SchemaError("template.legs: exactly one of obstacle/to_junction");
      if (l.contains("obstacle")) {
        leg.to = l["obstacle"].get<int>();
        leg.to_junction = false;
        if (leg.to < 0 || leg.to >= m) throw SchemaError("template.legs: obstacle out of range");
      } else {
        leg.to = l["to_junction"].get<int>();
        leg.to_junction = true;
      }
      if (leg.j < 0 || leg.j >= (int)t.junctions.size() ||
          (leg.to_junction && (leg.to < 0 || leg.to >= (int)t.junctions.size())))
        throw SchemaError("template.legs: junction index out of range");
      t.legs.push_back(leg);
    }
  }
  if (j.contains("wet_junctions"))
    for (const auto& w : j["wet_junctions"]) {
      int idx = w.get<int>();
      if (idx < 0 || idx >= (int)t.junctions.size())
        throw SchemaError("template.wet_junctions: index out of range");
      t.wet_junctions.push_back(idx);
    }
  if (j.contains("segments"))
    for (const auto& s : j["segments"]) {
      if (!s.is_array() || s.size() != 2) throw SchemaError("template.segments: expected [i, j]");
      int a = s[0].get<int>(), b = s[1].get<int>();
      if (a < 0 || a >= m || b < 0 || b >= m || a == b)
        throw SchemaError("template.segments: obstacle indices out of range");
      t.segments.push_back({a, b});
    }
  return t;
}

SolverOptions parse_solver(const json& j) {
  require_keys(j, "solver",
               {"step0", "max_iters", "grad_tol", "vol_tol", "span_check_every",
                "backtrack_factor", "max_seg_len", "seed"});
  SolverOptions o;
  if (j.contains("step0")) o.step0 = get_number(j, "step0");
  if (j.contains("max_iters")) o.max_iters = j["max_iters"].get<int>();
  if (j.contains("grad_tol")) o.grad_tol = get_number(j, "grad_tol");
  if (j.contains("vol_tol")) o.vol_tol = get_number(j, "vol_tol");
  if (j.contains("span_check_every")) o.span_check_every = j["span_check_every"].get<int>();
  if (j.contains("backtrack_factor")) o.backtrack_factor = get_number(j, "backtrack_factor");
  if (j.contains("max_seg_len")) o.max_seg_len = get_number(j, "max_seg_len");
  if (j.contains("seed")) o.seed = j["seed"].get<std::uint64_t>();
  if (o.max_iters <= 0 || o.max_seg_len <= 0 || o.span_check_every <= 0 ||
      !(o.backtrack_factor > 0 && o.backtrack_factor < 1))
    throw SchemaError("solver: option out of range");
  return o;
}

}  // namespace

const TemplateSpec* Scenario::find_template(const std::string& tname) const {
  for (const auto& t : templates)
    if (t.name == tname) return &t;
  return nullptr;
}

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw SchemaError("scenario: expected an object");
  require_keys(j, "scenario",
               {"name", "wire", "spanning", "templates", "epsilons", "solver", "outputs"});
  Scenario sc;
  if (!j.contains("name") || !j["name"].is_string()) throw SchemaError("name: missing");
  sc.name = j["name"].get<std::string>();
  if (!j.contains("wire")) throw SchemaError("wire: missing");
  sc.wire = parse_wire(j["wire"]);
  if (!j.contains("spanning")) throw SchemaError("spanning: missing");
  sc.spanning = parse_spanning(j["spanning"], sc.wire.count());
  if (!j.contains("templates") || !j["templates"].is_array() || j["templates"].empty())
    throw SchemaError("templates: expected a non-empty array");
  for (const auto& t : j["templates"]) sc.templates.push_back(parse_template(t, sc.wire.count()));
  std::set<std::string> names;
  for (const auto& t : sc.templates)
    if (!names.insert(t.name).second) throw SchemaError("templates: duplicate name " + t.name);
  if (j.contains("epsilons")) {
    if (j["epsilons"].is_array()) {
      for (const auto& e : j["epsilons"]) {
        double v = e.get<double>();
        if (!(v > 0)) throw SchemaError("epsilons: must be positive");
        sc.epsilons.push_back(v);
      }
    } else if (j["epsilons"].is_string()) {
      sc.epsilons = parse_epsilon_range(j["epsilons"].get<std::string>());
    } else {
      throw SchemaError("epsilons: expected an array or \"START:STOP:N\"");
    }
  }
  if (j.contains("solver")) sc.solver = parse_solver(j["solver"]);
  if (j.contains("outputs")) sc.outputs = j["outputs"].get<std::string>();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::vector<double> parse_epsilon_range(const std::string& text) {
  double start = 0, stop = 0;
  int n = 0;
  char c1 = 0, c2 = 0;
  std::istringstream ss(text);
  if (!(ss >> start >> c1 >> stop >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 ||
      !(start > 0) || !(stop > 0))
    throw SchemaError("epsilons: expected START:STOP:N with positive bounds");
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    double t = n == 1 ? 0.0 : double(k) / (n - 1);
    out.push_back(std::exp(std::log(start) * (1 - t) + std::log(stop) * t));
  }
  return out;
}

}  // namespace plateau
