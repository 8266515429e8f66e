#include "plateau/relax.hpp"

#include <algorithm>
#include <cmath>

namespace plateau {

DofMap::DofMap(const FilmNetwork& net) {
  n_vertices = (int)net.vertices.size();
  int off = n_vertices;
  for (const auto& ed : net.edges) {
    edge_offset.push_back(off);
    off += (int)ed.interior.size();
  }
  total = off;
}

Point2 DofMap::get(const FilmNetwork& net, int dof) const {
  if (dof < n_vertices) return net.vertices[dof].pos;
  for (int e = (int)edge_offset.size() - 1; e >= 0; --e)
    if (dof >= edge_offset[e]) return net.edges[e].interior[dof - edge_offset[e]];
  throw std::out_of_range("DofMap::get");
}

void DofMap::set(FilmNetwork& net, int dof, Point2 p) const {
  if (dof < n_vertices) {
    net.vertices[dof].pos = p;
    return;
  }
  for (int e = (int)edge_offset.size() - 1; e >= 0; --e)
    if (dof >= edge_offset[e]) {
      net.edges[e].interior[dof - edge_offset[e]] = p;
      return;
    }
  throw std::out_of_range("DofMap::set");
}

namespace {

std::vector<int> edge_dofs(const FilmNetwork& net, const DofMap& map, int e, bool forward) {
  std::vector<int> ids;
  ids.push_back(net.edges[e].a);
  for (size_t k = 0; k < net.edges[e].interior.size(); ++k) ids.push_back(map.edge_offset[e] + (int)k);
  ids.push_back(net.edges[e].b);
  if (!forward) std::reverse(ids.begin(), ids.end());
  return ids;
}

double signed_liquid_area(const FilmNetwork& net) {
  double a = 0.0;
  for (int f = 0; f < (int)net.faces.size(); ++f)
    if (net.faces[f].label == FaceLabel::Liquid) a += net.face_area(f);
  return a;
}

void project_anchors(FilmNetwork& net, const WireFrame& wire) {
  for (auto& v : net.vertices)
    if (v.anchor >= 0) {
      Vec2 d = v.pos - wire.obstacles[v.anchor];
      double n = d.norm();
      if (n < 1e-300) d = {1, 0}, n = 1;
      v.pos = wire.obstacles[v.anchor] + d * (wire.delta / n);
    }
}

// Zero the radial component of a per-DOF field at anchored vertices so that
// motion respects the sliding constraint.
void project_tangent(const FilmNetwork& net, const WireFrame& wire, std::vector<Vec2>& field) {
  for (int v = 0; v < (int)net.vertices.size(); ++v) {
    int a = net.vertices[v].anchor;
    if (a < 0) continue;
    Vec2 t = (net.vertices[v].pos - wire.obstacles[a]).normalized().perp();
    field[v] = t * field[v].dot(t);
  }
}

std::vector<Vec2> area_gradient(const FilmNetwork& net, const DofMap& map) {
  std::vector<Vec2> g(map.total, Vec2{0, 0});
  for (int f = 0; f < (int)net.faces.size(); ++f) {
    if (net.faces[f].label != FaceLabel::Liquid) continue;
    std::vector<int> loop;
    for (const auto& [e, fwd] : net.faces[f].cycle) {
      auto ids = edge_dofs(net, map, e, fwd);
      loop.insert(loop.end(), ids.begin(), ids.end() - 1);
    }
    int n = (int)loop.size();
    for (int i = 0; i < n; ++i) {
      Point2 prev = map.get(net, loop[(i + n - 1) % n]);
      Point2 next = map.get(net, loop[(i + 1) % n]);
      g[loop[i]] += (prev.perp() - next.perp()) * 0.5;
    }
  }
  return g;
}

// One-dimensional Newton along the area gradient, restoring the liquid area.
// Returns false when the direction degenerates.
bool newton_area(FilmNetwork& net, const WireFrame& wire, const DofMap& map, double target,
                 double vol_tol) {
  double tol_abs = vol_tol * std::max(target, 1e-16);
  for (int it = 0; it < 60; ++it) {
    double r = signed_liquid_area(net) - target;
    if (std::abs(r) <= tol_abs) return true;
    auto g = area_gradient(net, map);
    project_tangent(net, wire, g);
    double denom = 0.0;
    for (const auto& v : g) denom += v.norm2();
    if (denom < 1e-30) return false;
    double s = -r / denom;
    for (int d = 0; d < map.total; ++d) map.set(net, d, map.get(net, d) + g[d] * s);
    project_anchors(net, wire);
  }
  return std::abs(signed_liquid_area(net) - target) <= 10 * tol_abs;
}

double scene_diameter(const FilmNetwork& net, const WireFrame& wire) {
  Point2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  auto add = [&](const Point2& p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  };
  for (const auto& v : net.vertices) add(v.pos);
  for (const auto& c : wire.obstacles) add(c);
  return std::max({hi.x - lo.x, hi.y - lo.y, 2 * wire.delta});
}

}  // namespace

GradientResult gradient(const FilmNetwork& net) {
  DofMap map(net);
  GradientResult out;
  out.force.assign(map.total, Vec2{0, 0});
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    double m = net.multiplicity(e);
    auto ids = edge_dofs(net, map, e, true);
    for (size_t i = 0; i + 1 < ids.size(); ++i) {
      Point2 p = map.get(net, ids[i]), q = map.get(net, ids[i + 1]);
      Vec2 u = (q - p);
      double len = u.norm();
      if (len < 1e-300) continue;
      u = u / len;
      out.force[ids[i]] -= u * m;
      out.force[ids[i + 1]] += u * m;
    }
  }
  out.area_grad = area_gradient(net, map);
  return out;
}

std::optional<LambdaEstimate> estimate_lambda(const FilmNetwork& net) {
  double wsum = 0.0, mean = 0.0, m2 = 0.0;
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    if (!net.is_wet(e)) continue;
    auto pts = net.edge_polyline(e);
    if (pts.size() < 3) continue;
    bool liquid_left = net.faces[net.edges[e].left_face].label == FaceLabel::Liquid;
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
      Vec2 d1 = pts[i] - pts[i - 1], d2 = pts[i + 1] - pts[i];
      double theta = std::atan2(d1.cross(d2), d1.dot(d2));
      if (!liquid_left) theta = -theta;
      double w = 0.5 * (d1.norm() + d2.norm());
      if (w < 1e-300) continue;
      double kappa = theta / w;
      wsum += w;
      double delta = kappa - mean;
      mean += (w / wsum) * delta;
      m2 += w * delta * (kappa - mean);
    }
  }
  if (wsum <= 0.0) return std::nullopt;
  LambdaEstimate out;
  out.lambda = mean;
  out.stddev = std::sqrt(std::max(0.0, m2 / wsum));
  return out;
}

RelaxResult relax(const FilmNetwork& init, const WireFrame& wire, const SpanningClass& cls,
                  double epsilon, const SolverOptions& opts) {
  RelaxResult res;
  FilmNetwork net = init;
  auto bad = validate(net, &wire);
  if (!bad.empty()) {
    std::string msg = "relax: invalid input network:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw InvalidNetwork(msg);
  }
  bool wet = false;
  for (const auto& f : net.faces) wet |= (f.label == FaceLabel::Liquid);
  if ((epsilon > 0) != wet) {
    res.net = net;
    res.status = RelaxStatus::InfeasibleVolume;
    res.message = epsilon > 0 ? "no liquid face to carry the volume" : "liquid face at epsilon=0";
    return res;
  }
  auto spanning_now = [&]() { return is_spanning(net.as_polylines(), wire, cls).spanning; };
  if (!spanning_now()) {
    res.net = net;
    res.status = RelaxStatus::SpanningLost;
    res.message = "initial state not spanning";
    return res;
  }

  double diam = scene_diameter(net, wire);
  double step0 = opts.step0 > 0 ? opts.step0 : 1e-2 * diam;

  // Coarse-to-fine schedule: junction/vertex corrections travel one node per
  // iteration, so settle the coarse shape before introducing fine samples.
  std::vector<double> levels;
  for (double s = diam / 6.0; s > opts.max_seg_len * 1.000001; s /= 4) levels.push_back(s);
  levels.push_back(opts.max_seg_len);

  bool done = false;
  for (size_t li = 0; li < levels.size() && !done; ++li) {
    net = refine(net, levels[li]);
    DofMap map(net);
    if (li == 0 && wet && !newton_area(net, wire, map, epsilon, opts.vol_tol)) {
      res.net = net;
      res.status = RelaxStatus::InfeasibleVolume;
      res.message = "area projection failed";
      return res;
    }
    int budget = std::max(1, (opts.max_iters - res.iterations) / (int)(levels.size() - li));
    bool last_level = li + 1 == levels.size();

    double step = step0;
    double curF = energy(net).energy_F;
    FilmNetwork last_verified = net;
    double lastF = curF;
    int accepted_since_check = 0;
    int stall = 0;
    res.status = RelaxStatus::NotConverged;

    for (int it = 1; it <= budget; ++it) {
      ++res.iterations;
      auto G = gradient(net);
      project_tangent(net, wire, G.force);
      project_tangent(net, wire, G.area_grad);
      double lam = 0.0;
      if (wet) {
        double num = 0.0, den = 0.0;
        for (int d = 0; d < map.total; ++d) {
          num += G.force[d].dot(G.area_grad[d]);
          den += G.area_grad[d].norm2();
        }
        if (den > 1e-30) lam = num / den;
      }
      std::vector<Vec2> P(map.total);
      double sum2 = 0.0;
      for (int d = 0; d < map.total; ++d) {
        P[d] = G.force[d] - G.area_grad[d] * lam;
        sum2 += P[d].norm2();
      }
      res.lambda = lam;
      res.grad_norm = std::sqrt(sum2 / std::max(1, map.total));
      if (res.grad_norm < opts.grad_tol) {
        res.status = RelaxStatus::Converged;
        break;
      }

      bool accepted = false;
      while (step > 1e-16 * diam) {
        FilmNetwork cand = net;
        for (int d = 0; d < map.total; ++d) map.set(cand, d, map.get(cand, d) - P[d] * step);
        project_anchors(cand, wire);
        if (wet && !newton_area(cand, wire, map, epsilon, opts.vol_tol)) {
          step *= opts.backtrack_factor;
          continue;
        }
        double Fc = energy(cand).energy_F;
        if (Fc < curF) {
          net = std::move(cand);
          curF = Fc;
          accepted = true;
          break;
        }
        step *= opts.backtrack_factor;
      }
      if (!accepted) {
        ++stall;
        if (stall >= 3) {
          res.status = RelaxStatus::Converged;
          res.message = "stalled: step underflow with no admissible decrease";
          break;
        }
        step = step0 * std::pow(0.5, stall);  // retry from a fresh step
        continue;
      }
      stall = 0;
      step = std::min(step / opts.backtrack_factor, step0);

      if (++accepted_since_check >= opts.span_check_every) {
        accepted_since_check = 0;
        bool ok = true, verified = true;
        try {
          ok = spanning_now();
        } catch (const ArrangementDegenerate&) {
          verified = false;  // keep going; roll back only on a definite violation
        }
        if (verified && !ok) {
          net = last_verified;
          curF = lastF;
          step *= 0.5;
          if (step <= 1e-14 * diam) {
            res.status = RelaxStatus::SpanningLost;
            res.message = "spanning violated and step exhausted";
            done = true;
            break;
          }
        } else if (verified) {
          last_verified = net;
          lastF = curF;
        }
      }
    }
    if (res.status == RelaxStatus::SpanningLost) {
      net = last_verified;
    } else if (res.status == RelaxStatus::NotConverged && last_level) {
      res.message = "max_iters reached";
    }
  }
  res.net = net;
  res.breakdown = energy(net);
  if (auto le = estimate_lambda(net)) res.breakdown.lambda_estimate = le->lambda;
  return res;
}

SweepResult sweep(const TemplateSpec& spec, const WireFrame& wire, const SpanningClass& cls,
                  std::vector<double> epsilons, const SolverOptions& opts) {
  SweepResult out;
  std::sort(epsilons.rbegin(), epsilons.rend());  // run big-to-small

  FilmNetwork dry = instantiate(spec, wire, 0.0);
  auto dry_res = relax(dry, wire, cls, 0.0, opts);
  out.ell_reference = dry_res.breakdown.energy_F / 2.0;

  for (double eps : epsilons) {
    SweepRow row;
    row.epsilon = eps;
    row.ell_reference = out.ell_reference;
    try {
      FilmNetwork init = instantiate(spec, wire, eps);
      auto r = relax(init, wire, cls, eps, opts);
      row.energy_F = r.breakdown.energy_F;
      row.boundary_length = r.breakdown.boundary_length;
      row.collapsed_length = r.breakdown.collapsed_length;
      row.lambda = r.lambda;
      row.iterations = r.iterations;
      row.spanning_ok =
          r.status == RelaxStatus::Converged || r.status == RelaxStatus::NotConverged;
      if (r.status != RelaxStatus::Converged) out.all_ok = false;
    } catch (const std::exception&) {
      row.spanning_ok = false;
      out.all_ok = false;
    }
    out.rows.push_back(row);
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.epsilon < b.epsilon; });

  // Scaling-law fit: log|psi(eps) - 2 ell| vs log eps.
  double two_ell = 2 * out.ell_reference;
  int pos = 0, neg = 0;
  for (const auto& r : out.rows)
    if (r.spanning_ok) (r.energy_F > two_ell ? pos : neg)++;
  out.fit.model = pos >= neg ? "quadratic-excess" : "sqrt-deficit";
  std::vector<double> xs, ys;
  for (const auto& r : out.rows) {
    if (!r.spanning_ok) continue;
    double d = out.fit.model == "quadratic-excess" ? r.energy_F - two_ell : two_ell - r.energy_F;
    if (d <= 0) continue;
    xs.push_back(std::log(r.epsilon));
    ys.push_back(std::log(d));
  }
  if (xs.size() >= 2) {
    double n = (double)xs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
      syy += ys[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    double slope = (n * sxy - sx * sy) / denom;
    double inter = (sy - slope * sx) / n;
    out.fit.exponent = slope;
    out.fit.coefficient = std::exp(inter);
    double ss_tot = syy - sy * sy / n, ss_res = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
      double e = ys[i] - (inter + slope * xs[i]);
      ss_res += e * e;
    }
    out.fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  }
  return out;
}

}  // namespace plateau
