#include "fbp/acceptance.hpp"

#include "fbp/analytic1d.hpp"
#include "fbp/diagnostics.hpp"
#include "fbp/flatness.hpp"
#include "fbp/minimize.hpp"
#include "fbp/presets.hpp"
#include "fbp/whitney.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fbp {

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

SolveResult solve_problem(const Problem& p) { return solve(p.boundary, p.spec, SolveOptions{}); }

double last_epsilon(const SolveResult& r) { return r.report.stages.empty() ? 0.0 : r.report.stages.back().epsilon; }

/// The A = 4 solve feeds two criteria.
const SolveResult& example1_at_4() {
  static std::once_flag once;
  static std::optional<SolveResult> result;
  std::call_once(once, [] { result = solve_problem(example1_problem(4.0, 2049)); });
  return *result;
}

Outcome example1_free_boundary() {
  const SolveResult& r = example1_at_4();
  const auto a_h = free_boundary_1d(r.u, last_epsilon(r));
  if (!a_h) return {false, "no free boundary found"};
  const double a = 4.0 - std::sqrt(3.0), B = example1_threshold();
  const double J = r.report.sharp_energy.total;
  const bool pass = rel(*a_h, a) <= 0.02 && rel(J, B) <= 0.02;
  return {pass, fmt("a_h=%.6f (exact %.6f, rel %.2e), J_h=%.6f (exact %.6f, rel %.2e)", *a_h, a, rel(*a_h, a), J, B,
                    rel(J, B))};
}

Outcome example1_junction() {
  const SolveResult& r = example1_at_4();
  const auto a_h = free_boundary_1d(r.u, last_epsilon(r));
  if (!a_h) return {false, "no free boundary found"};
  const Jet1D minus = one_sided_jet(r.u, *a_h, JetSide::left);
  const Jet1D plus = one_sided_jet(r.u, *a_h, JetSide::right);
  const JunctionReport j = junction_check(plus.d1, minus.d2, plus.d2, minus.d3, plus.d3, 0.05);
  const bool pass = plus.d2 >= 0.9 && plus.d2 <= 1.1 && j.branch == JunctionBranch::X1 && j.residual_X1 <= 0.1;
  return {pass, fmt("u''(a_h+)=%.5f (exact 1), u'(a_h)=%.2e, branch %s, residual_X1=%.4f", plus.d2, plus.d1,
                    to_string(j.branch).c_str(), j.residual_X1)};
}

Outcome example1_threshold_check() {
  const SolveResult lo = solve_problem(example1_problem(2.0, 2049));
  const Grid& g = lo.u.grid();
  double min_interior = std::numeric_limits<double>::infinity();
  for (int i = 1; i < g.nx - 1; ++i) min_interior = std::min(min_interior, lo.u(i));
  const SolveResult hi = solve_problem(example1_problem(3.0, 2049));
  const auto a_h = free_boundary_1d(hi.u, last_epsilon(hi));
  const double a = 3.0 - std::sqrt(3.0);
  const bool pass = min_interior > 0.0 && a_h && rel(*a_h, a) <= 0.03;
  return {pass, fmt("A=2: min u on [h, A-h] = %.3e; A=3: a_h=%.6f (exact %.6f, rel %.2e)", min_interior,
                    a_h ? *a_h : std::nan(""), a, a_h ? rel(*a_h, a) : std::nan(""))};
}

Outcome example2_oracle() {
  const double eps = 0.1;
  const Example2Solution s = example2_solve(eps);
  const SolveResult r = solve_problem(example2_problem(eps, 4097));
  const auto a_h = free_boundary_1d(r.u, last_epsilon(r));
  if (!a_h) return {false, "no sign change found"};
  const Jet1D minus = one_sided_jet(r.u, *a_h, JetSide::left);
  const Jet1D plus = one_sided_jet(r.u, *a_h, JetSide::right);
  const double alpha_h = 0.5 * (minus.d1 + plus.d1);
  const double dd_gap = std::abs(plus.d2 - minus.d2);
  const double jump = 2.0 * alpha_h * (plus.d3 - minus.d3);
  const double a_err = rel(*a_h, s.a);
  const bool pass = a_err <= 0.03 && rel(alpha_h, s.alpha) <= 0.03 && dd_gap <= 0.05 && rel(jump, -eps) <= 0.15;
  return {pass, fmt("a_h=%.6f (root %.6f, rel %.2e), alpha_h=%.5f (root %.5f, rel %.2e), |u''+ - u''-|=%.4f, "
                    "2u'(u'''+ - u'''-)=%.4f (target %.2f, rel %.2e)",
                    *a_h, s.a, a_err, alpha_h, s.alpha, rel(alpha_h, s.alpha), dd_gap, jump, -eps, rel(jump, -eps))};
}

Outcome example3_sign_change() {
  const SolveResult r = solve_problem(example3_problem(10.0, 2049));
  const double m = r.u.values().minCoeff();
  return {m <= -1e-3, fmt("min u = %.5f", m)};
}

Outcome monotone_values() {
  const Grid g = Grid::square(-1.0, 1.0, 513);
  const std::vector<double> radii = {0.1, 0.2, 0.3, 0.4};
  const Point o(0.0, 0.0);
  auto max_rel = [&](const MonotoneTrace& t, double ref) {
    double m = 0.0;
    for (double e : t.E) m = std::max(m, rel(e, ref));
    return m;
  };
  const MonotoneTrace half = monotone_energy(analytic_field(FieldPreset::halfplane, g), o, radii);
  const MonotoneTrace full = monotone_energy(analytic_field(FieldPreset::quadratic, g), o, radii);
  double amp = 0.0;
  for (double c : {0.5, 2.0}) {
    const MonotoneTrace t = monotone_energy(analytic_field(FieldPreset::halfplane, g, c), o, radii);
    for (std::size_t k = 0; k < radii.size(); ++k) amp = std::max(amp, rel(t.E[k], half.E[k]));
  }
  const double e8 = max_rel(half, M_PI / 8.0), e4 = max_rel(full, M_PI / 4.0);
  return {e8 <= 0.01 && e4 <= 0.01 && amp <= 0.01,
          fmt("max rel dev: (x1+)^2 vs pi/8 %.2e, |x|^2 vs pi/4 %.2e, amplitude c in {0.5,2} %.2e", e8, e4, amp)};
}

Outcome monotonicity_identity() {
  const Point o(0.0, 0.0);
  const Grid g = Grid::square(-1.0, 1.0, 513);
  const MonotoneTrace t = monotone_energy(analytic_field(FieldPreset::r3, g), o, {0.2, 0.4});
  const double dE = t.E[1] - t.E[0];
  const Grid fine = Grid::square(-1.0, 1.0, 1025);
  MonotoneOptions opts;
  opts.q_substeps = 32;
  const MonotoneTrace oracle = monotone_energy(analytic_field(FieldPreset::r3, fine), o, {0.2, 0.4}, opts);
  const double Q = oracle.Q_integral[0];
  return {rel(dE, Q) <= 0.03, fmt("E(0.4)-E(0.2)=%.6f, integrated Q-term at 1025^2 = %.6f (rel %.2e)", dE, Q, rel(dE, Q))};
}

Outcome gradient_fd() {
  std::mt19937_64 rng(20260415);
  std::normal_distribution<double> N01(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int f = 0; f < 10; ++f) {
    const int n = f % 2 ? 65 : 33;
    const Grid g = Grid::square(-1.0, 1.0, n);
    const double k1 = 1.0 + 3.0 * U(rng), k2 = 1.0 + 3.0 * U(rng), ph = 6.0 * U(rng), shift = U(rng) - 0.5;
    GridFunctiond u = GridFunctiond::sample(g, [&](double x, double y) {
      return std::sin(k1 * x + ph) * std::cos(k2 * y) + shift + 0.3 * x * y;
    });
    Eigen::VectorXd vals = u.values();
    for (int k = 0; k < g.size(); ++k) vals[k] += 0.01 * N01(rng);
    u = u.with_values(vals);
    EnergySpec spec;
    spec.epsilon = 0.05 + 0.2 * U(rng);
    spec.chi_weight = 0.5 + U(rng);
    spec.phase = f % 3 == 0 ? Phase::one_phase : Phase::two_phase;
    const Eigen::VectorXd grad = smoothed_gradient(u, spec).values();
    for (int d = 0; d < 10; ++d) {
      Eigen::VectorXd v(g.size());
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) v[g.index(i, j)] = g.on_boundary(i, j) ? 0.0 : N01(rng);
      const double t = 1e-6;
      const double jp = evaluate(u.with_values(vals + t * v), spec).total;
      const double jm = evaluate(u.with_values(vals - t * v), spec).total;
      const double fd = (jp - jm) / (2.0 * t), an = grad.dot(v);
      worst = std::max(worst, std::abs(fd - an) / std::max({std::abs(an), std::abs(fd), 1e-12}));
    }
  }
  return {worst <= 1e-5, fmt("worst relative error %.2e over 10 fields x 10 directions", worst)};
}

Outcome hausdorff_oracle() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 1000);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    std::vector<Point> A(size(rng)), B(size(rng));
    const double squash = t % 4 == 0 ? 0.01 : 1.0;
    for (auto& p : A) p = {U(rng), squash * U(rng)};
    for (auto& p : B) p = {2.0 * U(rng) - 0.5, U(rng)};
    worst = std::max(worst, std::abs(hausdorff(A, B) - hausdorff_brute_force(A, B)));
  }
  return {worst <= 1e-12, fmt("max |HD - brute force| = %.2e over 50 pairs", worst)};
}

Outcome flatness_dichotomy() {
  const Grid g = Grid::square(-1.0, 1.0, 513);
  const FreeBoundary cone = extract_free_boundary(analytic_field(FieldPreset::cone, g), 0.0, 0.0);
  const FreeBoundary circle = extract_free_boundary(analytic_field(FieldPreset::circle, g), 0.0, 0.0);
  bool pass = true;
  std::string detail;
  for (double r : {0.1, 0.2, 0.4}) {
    const FlatnessReport c = flatness_h(cone, {0.0, 0.0}, r);
    const FlatnessReport s = flatness_h(circle, {0.0, 0.0}, r);
    const double lower = (s.h_value - s.resolution) / r;
    pass = pass && c.h_value / r <= 0.05 && lower >= 0.01;
    detail += fmt("r=%.1f: cone h/r=%.4f, circle (h-res)/r=%.4f; ", r, c.h_value / r, lower);
  }
  return {pass, detail.substr(0, detail.size() - 2)};
}

Outcome blowup_classification() {
  const Grid g = Grid::square(-1.0, 1.0, 513);
  const std::vector<double> scales = {0.4, 0.2, 0.1};
  const std::pair<FieldPreset, BlowupType> cases[] = {{FieldPreset::quadratic, BlowupType::Type1},
                                                      {FieldPreset::rank1, BlowupType::Type2},
                                                      {FieldPreset::halfplane, BlowupType::Type3}};
  bool pass = true;
  std::string detail;
  for (double deg : {0.0, 30.0}) {
    for (const auto& [field, want] : cases) {
      const double amplitude = field == FieldPreset::halfplane ? 1.5 : 1.0;
      const BlowupClass c = classify_blowup(analytic_field(field, g, amplitude, deg * M_PI / 180.0), {0.0, 0.0}, scales);
      const auto& s = c.scales;
      const bool stable = s[s.size() - 1].best == s[s.size() - 2].best;
      bool ok = c.type == want && stable;
      if (want == BlowupType::Type3) ok = ok && rel(c.amplitudes.at(0), amplitude) <= 0.01;
      pass = pass && ok;
      detail += fmt("%s@%g deg -> %s; ", to_string(field).c_str(), deg, to_string(c.type).c_str());
    }
  }
  return {pass, detail.substr(0, detail.size() - 2)};
}

Outcome whitney_validity() {
  const CompactMask E = CompactMask::from_predicate(8, {0.0, 0.0}, [](const Point& p) { return p.y() <= 0.0; });
  const WhitneyDecomposition dec = decompose(E);
  const WhitneyAudit a = audit(E, dec);
  const CoveringReport c = weak_c_covering(dec, {0.0, 0.0}, 3);
  const bool pass = a.disjoint && a.min_ratio >= 1.0 && a.max_ratio <= 4.0 && c.holds && c.c_est <= 6.0;
  return {pass, fmt("%zu cubes, dist/diam in [%.3f, %.3f], disjoint %d; covering k=3..7 holds %d, c_est=%.3f",
                    dec.cubes.size(), a.min_ratio, a.max_ratio, int(a.disjoint), int(c.holds), c.c_est)};
}

Outcome tangent_halfplane() {
  const Grid g = Grid::square(-1.0, 1.0, 513);
  const double rot = 30.0 * M_PI / 180.0;
  const TangentFit t = tangent_halfplane_fit(analytic_field(FieldPreset::halfplane, g, 1.0, rot), {0.0, 0.0},
                                             {0.4, 0.2, 0.1});
  double err = std::abs(std::atan2(t.direction.y(), t.direction.x()) - rot) * 180.0 / M_PI;
  err = std::min(err, 360.0 - err);
  const double dens = t.densities.back();
  return {err <= 1.0 && dens <= 0.05, fmt("direction error %.4f deg, density at rho=0.1 %.4f", err, dens)};
}

Outcome stationarity_residual() {
  // For u = a (x1^+)^2 the identity leaves (1 - 4a^2) int_{x1=0} phi^1 dx2; with the bump below that
  // integral is 16/35.
  auto residual = [](double a, int n) {
    const Grid g = Grid::square(-1.0, 1.0, n);
    const GridFunctiond u = analytic_field(FieldPreset::halfplane, g, a);
    const GridFunctiond p1 = GridFunctiond::sample(g, [](double x, double y) {
      const double s = 1.0 - 4.0 * (x * x + y * y);
      return s > 0.0 ? s * s * s : 0.0;
    });
    const std::vector<GridFunctiond> phi = {p1, GridFunctiond(g)};
    return domain_variation_residual(u, phi, EnergySpec{});
  };
  const double h1 = residual(0.5, 33), h2 = residual(0.5, 65), h3 = residual(0.5, 129);
  const double f1 = residual(1.0, 33), f2 = residual(1.0, 65), f3 = residual(1.0, 129);
  const double limit = -3.0 * 16.0 / 35.0;
  const bool decreasing = std::abs(h1) >= 1.5 * std::abs(h2) && std::abs(h2) >= 1.5 * std::abs(h3);
  const bool nonzero = std::abs(f3 - f2) < std::abs(f2 - f1) && rel(f3, limit) <= 0.05;
  return {decreasing && nonzero, fmt("a=1/2: %.3e, %.3e, %.3e; a=1: %.5f, %.5f, %.5f (limit %.5f)", h1, h2, h3, f1, f2,
                                     f3, limit)};
}

struct Entry {
  const char* name;
  Outcome (*run)();
};

const Entry entries[criterion_count] = {
    {"example1 free boundary", example1_free_boundary},
    {"example1 junction", example1_junction},
    {"example1 threshold", example1_threshold_check},
    {"example2 oracle vs solver", example2_oracle},
    {"example3 sign change", example3_sign_change},
    {"monotone energy values", monotone_values},
    {"monotonicity identity", monotonicity_identity},
    {"gradient vs finite differences", gradient_fd},
    {"hausdorff vs brute force", hausdorff_oracle},
    {"flatness dichotomy", flatness_dichotomy},
    {"blow-up classification", blowup_classification},
    {"whitney validity", whitney_validity},
    {"tangent half-plane", tangent_halfplane},
    {"stationarity residual", stationarity_residual},
};

CriterionResult timed(int id, const std::string& name, const std::function<Outcome()>& f) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Outcome o = f();
    r.pass = o.pass;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

std::string criterion_name(int id) {
  if (id < 1 || id > criterion_count) throw std::out_of_range("criterion id must lie in 1.." + std::to_string(criterion_count));
  return entries[id - 1].name;
}

CriterionResult run_criterion(int id) { return timed(id, criterion_name(id), entries[id - 1].run); }

std::string format_result(const CriterionResult& r) {
  return fmt("%s %02d %s (%.2f s): %s", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds, r.detail.c_str());
}

CriterionResult reproduce_example1(double A, int nodes) {
  return timed(0, fmt("example1 A=%g", A), [&] {
    const SolveResult r = solve_problem(example1_problem(A, nodes));
    const auto a_h = free_boundary_1d(r.u, last_epsilon(r));
    const Example1Profile p = example1_profile(A);
    if (p.kind == Example1Kind::no_fb) {
      const Grid& g = r.u.grid();
      double m = std::numeric_limits<double>::infinity();
      for (int i = 1; i < g.nx - 1; ++i) m = std::min(m, r.u(i));
      return Outcome{m > 0.0, fmt("expected no free boundary; min u on [h, A-h] = %.3e", m)};
    }
    if (!a_h) return Outcome{false, fmt("expected a = %.6f, found no free boundary", p.a)};
    return Outcome{rel(*a_h, p.a) <= 0.02,
                   fmt("a_h=%.6f (exact %.6f, rel %.2e), J_h=%.6f", *a_h, p.a, rel(*a_h, p.a), r.report.sharp_energy.total)};
  });
}

CriterionResult reproduce_example2(double eps_weight, int nodes) {
  return timed(0, fmt("example2 eps=%g", eps_weight), [&] {
    const Example2Solution s = example2_solve(eps_weight);
    const SolveResult r = solve_problem(example2_problem(eps_weight, nodes));
    const auto a_h = free_boundary_1d(r.u, last_epsilon(r));
    if (!a_h) return Outcome{false, "no sign change found"};
    const double alpha_h =
        0.5 * (one_sided_jet(r.u, *a_h, JetSide::left).d1 + one_sided_jet(r.u, *a_h, JetSide::right).d1);
    return Outcome{rel(*a_h, s.a) <= 0.03 && rel(alpha_h, s.alpha) <= 0.03,
                   fmt("a_h=%.6f (root %.6f), alpha_h=%.5f (root %.5f)", *a_h, s.a, alpha_h, s.alpha)};
  });
}

CriterionResult reproduce_example3(double A, int nodes) {
  return timed(0, fmt("example3 A=%g", A), [&] {
    const SolveResult r = solve_problem(example3_problem(A, nodes));
    const double m = r.u.values().minCoeff();
    return Outcome{m <= -1e-3, fmt("min u = %.5f", m)};
  });
}

}  // namespace fbp
