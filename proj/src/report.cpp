#include "fbp/report.hpp"

#include "fbp/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace fbp {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Json point(const Point& p) { return Json::array({p.x(), p.y()}); }

}  // namespace

Json make_report(const std::string& kind, const Json& body) {
  Json j;
  j["schema_version"] = 1;
  j["report"] = kind;
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

void write_json(std::ostream& os, const Json& j) {
  os << j.dump(2) << '\n';
  if (!os) throw IoError("failed to write JSON");
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_json(os, j);
}

Json to_json(const EnergyBreakdown<double>& e) {
  return {{"biharm", num(e.biharm)}, {"volume", num(e.volume)}, {"total", num(e.total)}};
}

Json to_json(const SolveReport& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages)
    stages.push_back({{"epsilon", num(s.epsilon)},
                      {"iterations", s.iterations},
                      {"grad_inf", num(s.grad_inf)},
                      {"energy", to_json(s.energy)},
                      {"converged", s.converged},
                      {"note", s.note}});
  Json cands = Json::array();
  for (const auto& c : r.candidates)
    cands.push_back({{"schedule", c.schedule}, {"sharp_energy", num(c.sharp_energy)}, {"converged", c.converged}});
  return {{"schedule", r.schedule},      {"converged", r.converged},
          {"polished", r.polished},      {"final_grad_inf", num(r.final_grad_inf)},
          {"sharp_energy", to_json(r.sharp_energy)}, {"candidates", cands},
          {"stages", stages}};
}

Json to_json(const PiecewiseCubic& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coeffs) coeffs.push_back(Json::array({c[0], c[1], c[2], c[3]}));
  return {{"knots", nums(p.knots)}, {"origins", nums(p.origins)}, {"coeffs", coeffs}};
}

Json to_json(const Example1Profile& p) {
  return {{"A", p.A},       {"kind", to_string(p.kind)}, {"a", num(p.a)},
          {"beta", p.beta}, {"gamma", p.gamma},          {"threshold", example1_threshold()},
          {"energy", example1_energy(p.A)}, {"u", to_json(p.u)}};
}

Json to_json(const Example2Solution& s) {
  return {{"eps_weight", s.eps_weight}, {"a", s.a},
          {"alpha", s.alpha},           {"beta_lo", s.beta_lo},
          {"gamma_lo", s.gamma_lo},     {"beta_hi", s.beta_hi},
          {"gamma_hi", s.gamma_hi},     {"ddu_minus", s.ddu_minus()},
          {"ddu_plus", s.ddu_plus()},   {"dddu_minus", s.dddu_minus()},
          {"dddu_plus", s.dddu_plus()}, {"other_roots", nums(s.other_roots)},
          {"u", to_json(s.u)}};
}

Json to_json(const JunctionReport& r) {
  return {{"branch", to_string(r.branch)}, {"residual_X1", num(r.residual_X1)}, {"residual_X2", num(r.residual_X2)}};
}

Json to_json(const QuadraticForm2D& p) {
  return {{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"phi", p.phi}, {"rank", rank_stratum(p)}};
}

Json to_json(const FlatnessReport& r) {
  Json flat = Json::array();
  for (std::size_t k = 0; k < r.deltas.size(); ++k) flat.push_back({{"delta", r.deltas[k]}, {"flat", bool(r.flat_at[k])}});
  return {{"x0", point(r.x0)},
          {"r", r.r},
          {"h_value", num(r.h_value)},
          {"h_over_r", num(r.h_value / r.r)},
          {"resolution", r.resolution},
          {"best_form", to_json(r.best_form)},
          {"probed", r.probed},
          {"fb_points", r.fb_points},
          {"delta_flat_at", flat}};
}

Json to_json(const BlowupClass& c) {
  Json scales = Json::array();
  for (const auto& s : c.scales)
    scales.push_back({{"rho", s.rho},
                      {"residual_type1", num(s.residual[0])},
                      {"residual_type2", num(s.residual[1])},
                      {"residual_type3", num(s.residual[2])},
                      {"best", to_string(s.best)},
                      {"nodes", s.nodes}});
  return {{"type", to_string(c.type)}, {"amplitudes", nums(c.amplitudes)}, {"orientation", c.orientation},
          {"scales", scales}};
}

Json to_json(const CoveringReport& r) {
  Json levels = Json::array();
  for (std::size_t k = 0; k < r.levels.size(); ++k) levels.push_back({{"k", r.levels[k]}, {"c", num(r.c_per_level[k])}});
  return {{"holds", r.holds},
          {"c_est", r.c_est},
          {"failed_level", r.failed_level},
          {"verified_from", r.verified_from},
          {"levels", levels}};
}

Json to_json(const WhitneyDecomposition& d, const WhitneyAudit& a) {
  std::vector<int> per_level(d.K + 1, 0);
  for (const auto& q : d.cubes) ++per_level[q.level];
  return {{"K", d.K},
          {"x0", point(d.x0)},
          {"cubes", d.cubes.size()},
          {"cubes_per_level", per_level},
          {"c1", num(d.c1)},
          {"c2", num(d.c2)},
          {"residual_cells", d.residual_cells},
          {"audit",
           {{"disjoint", a.disjoint},
            {"covered_cells", a.covered},
            {"uncovered_cells", a.uncovered},
            {"min_ratio", num(a.min_ratio)},
            {"max_ratio", num(a.max_ratio)}}}};
}

Json to_json(const RatioTable& t) { return {{"kind", to_string(t.kind)}, {"radii", nums(t.radii)}, {"values", nums(t.values)}}; }

Json to_json(const BmoReport& b) {
  return {{"scales", nums(b.scales)}, {"per_scale", nums(b.per_scale)}, {"value", num(b.value)}, {"centers", b.centers}};
}

Json to_json(const LaplacianLowerBound& l) {
  return {{"min_laplacian", num(l.min_laplacian)},
          {"bound", num(l.bound)},
          {"constant", l.constant},
          {"l1_norm", num(l.l1_norm)},
          {"margin", l.margin},
          {"holds", l.min_laplacian >= l.bound}};
}

Json to_json(const MonotoneTrace& t) {
  return {{"center", point(t.center)},     {"radii", nums(t.radii)},         {"E", nums(t.E)},
          {"circle", nums(t.circle)},      {"bulk", nums(t.bulk)},           {"bulk_error", nums(t.bulk_error)},
          {"Q_integral", nums(t.Q_integral)}};
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "A,a_h,J_h,converged\n";
  for (const auto& r : rows)
    os << fmt17(r.A) << ',' << fmt17(r.a_h) << ',' << fmt17(r.J_h) << ',' << (r.converged ? 1 : 0) << '\n';
  if (!os) throw IoError("failed to write sweep CSV");
}

void write_monotone_csv(std::ostream& os, const MonotoneTrace& t) {
  os << "r,E,Q_cum\n";
  double cum = 0.0;
  for (std::size_t k = 0; k < t.radii.size(); ++k) {
    if (k > 0) cum += t.Q_integral[k - 1];
    os << fmt17(t.radii[k]) << ',' << fmt17(t.E[k]) << ',' << fmt17(cum) << '\n';
  }
  if (!os) throw IoError("failed to write monotone CSV");
}

}  // namespace fbp
