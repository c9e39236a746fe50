#include "fbp/minimize.hpp"

#include "fbp/errors.hpp"
#include "fbp/parallel.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

namespace fbp {

void SolveOptions::validate() const {
  if (max_iters < 1) throw std::invalid_argument("solve: max_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("solve: grad_tol must be > 0");
  if (memory < 1) throw std::invalid_argument("solve: memory must be >= 1");
  if (max_halvings < 1) throw std::invalid_argument("solve: max_halvings must be >= 1");
  for (std::size_t k = 0; k < continuation.size(); ++k) {
    if (!(continuation[k] > 0.0)) throw std::invalid_argument("solve: continuation epsilons must be positive");
    if (k > 0 && !(continuation[k] < continuation[k - 1]))
      throw std::invalid_argument("solve: continuation must be strictly decreasing");
  }
}

double boundary_scale(const GridFunctiond& bv) {
  const Grid& g = bv.grid();
  double m = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (g.on_boundary(i, j)) m = std::max(m, std::abs(bv(i, j)));
  return m > 0.0 ? m : 1.0;
}

std::vector<double> direct_schedule(const Grid& g, double scale) {
  const double h2 = g.h * g.h * scale;
  return {100.0 * h2, 30.0 * h2, 10.0 * h2};
}

std::vector<double> homotopy_schedule(const Grid& g, double scale) {
  const auto tail = direct_schedule(g, scale);
  std::vector<double> eps;
  const double ratio = 1.0 / std::sqrt(10.0);
  for (double e = 4.0 * scale; e > 3.0 * tail.front(); e *= ratio) eps.push_back(e);
  eps.insert(eps.end(), tail.begin(), tail.end());
  return eps;
}

namespace {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

std::vector<int> interior_nodes(const Grid& g) {
  std::vector<int> idx;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (!g.on_boundary(i, j)) idx.push_back(g.index(i, j));
  return idx;
}

// Laplacian restricted to interior unknowns (Dirichlet rows and columns).
SpMat interior_laplacian(const Grid& g, const std::vector<int>& interior) {
  std::vector<int> slot(g.size(), -1);
  for (std::size_t k = 0; k < interior.size(); ++k) slot[interior[k]] = static_cast<int>(k);
  const double inv_h2 = 1.0 / (g.h * g.h);
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t k = 0; k < interior.size(); ++k) {
    const int node = interior[k];
    const int i = node % g.nx, j = node / g.nx;
    t.emplace_back(k, k, -2.0 * g.dim * inv_h2);
    auto link = [&](int ii, int jj) {
      const int s = slot[g.index(ii, jj)];
      if (s >= 0) t.emplace_back(k, s, inv_h2);
    };
    link(i - 1, j);
    link(i + 1, j);
    if (g.dim == 2) {
      link(i, j - 1);
      link(i, j + 1);
    }
  }
  SpMat L(interior.size(), interior.size());
  L.setFromTriplets(t.begin(), t.end());
  return L;
}

// The smoothed discrete energy as a function of the interior unknowns.
class InteriorEnergy {
 public:
  InteriorEnergy(const GridFunctiond& start, EnergySpec spec)
      : grid_(start.grid()), spec_(spec), interior_(interior_nodes(grid_)), full_(start.values()),
        full_grad_(grid_.size()) {
    const SpMat L = interior_laplacian(grid_, interior_);
    P_ = (2.0 * grid_.cell_volume()) * SpMat(L.transpose() * L);
    P_.makeCompressed();
    precond_.compute(P_);
    if (precond_.info() != Eigen::Success) throw SolverError("solve: biharmonic preconditioner factorization failed");
  }

  // Factors H_FF with H = P + diag(max(volume curvature, 0)); rows and
  // columns outside `free_set` are replaced by the diagonal of P. Pattern
  // analysis happens once.
  bool factor_newton(const Vec& x, const std::vector<char>& free_set) {
    SpMat H = P_;
    const double w = grid_.cell_volume() * spec_.chi_weight;
    const double eps = spec_.epsilon;
    for (int c = 0; c < H.outerSize(); ++c)
      for (SpMat::InnerIterator it(H, c); it; ++it) {
        const int r = static_cast<int>(it.row());
        if (r == c) {
          if (free_set[r] && eps > 0.0 && x[r] > 0.0 && x[r] < eps) {
            const double s = x[r] / eps;
            it.valueRef() += std::max(0.0, w * 6.0 * (1.0 - 2.0 * s) / (eps * eps));
          }
        } else if (!free_set[r] || !free_set[c]) {
          it.valueRef() = 0.0;
        }
      }
    if (!newton_analyzed_) {
      newton_.analyzePattern(H);
      newton_analyzed_ = true;
    }
    newton_.factorize(H);
    return newton_.info() == Eigen::Success;
  }

  // H_FF^{-1} q on the free set, zero elsewhere.
  Vec solve_newton(const Vec& q, const std::vector<char>& free_set) const {
    Vec rhs = q;
    for (int k = 0; k < rhs.size(); ++k)
      if (!free_set[k]) rhs[k] = 0.0;
    Vec d = newton_.solve(rhs);
    for (int k = 0; k < d.size(); ++k)
      if (!free_set[k]) d[k] = 0.0;
    return d;
  }

  bool reduced_newton(const Vec& x, const Vec& g, const std::vector<char>& free_set, Vec& d) {
    if (!factor_newton(x, free_set)) return false;
    d = -solve_newton(g, free_set);
    return d.allFinite();
  }

  Vec gather(const Vec& full) const {
    Vec x(interior_.size());
    for (std::size_t k = 0; k < interior_.size(); ++k) x[k] = full[interior_[k]];
    return x;
  }

  const Vec& scatter(const Vec& x) {
    for (std::size_t k = 0; k < interior_.size(); ++k) full_[interior_[k]] = x[k];
    return full_;
  }

  void set_epsilon(double e) { spec_.epsilon = e; }
  const EnergySpec& spec() const { return spec_; }

  EnergyBreakdown<double> breakdown(const Vec& x) { return detail::evaluate_values(grid_, scatter(x), spec_); }
  double value(const Vec& x) { return breakdown(x).total; }

  Vec gradient(const Vec& x) {
    detail::gradient_values(grid_, scatter(x), spec_, full_grad_);
    return gather(full_grad_);
  }

  Vec apply_preconditioner(const Vec& q) const { return precond_.solve(q); }

  GridFunctiond field(const Vec& x) {
    scatter(x);
    return GridFunctiond(grid_, full_);
  }

  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  EnergySpec spec_;
  std::vector<int> interior_;
  Vec full_;
  Vec full_grad_;
  SpMat P_;
  Eigen::SimplicialLDLT<SpMat> precond_;
  Eigen::SimplicialLDLT<SpMat> newton_;
  bool newton_analyzed_ = false;
};

// Limited-memory BFGS history with the biharmonic preconditioner as the
// initial inverse Hessian.
class QuasiNewtonMemory {
 public:
  explicit QuasiNewtonMemory(int capacity) : capacity_(capacity) {}

  void clear() {
    s_.clear();
    y_.clear();
    rho_.clear();
  }

  void push(Vec s, Vec y) {
    const double sy = s.dot(y);
    if (!(sy > 1e-12 * s.norm() * y.norm())) return;  // curvature condition fails
    if (static_cast<int>(s_.size()) == capacity_) {
      s_.pop_front();
      y_.pop_front();
      rho_.pop_front();
    }
    s_.push_back(std::move(s));
    y_.push_back(std::move(y));
    rho_.push_back(1.0 / sy);
  }

  template <typename H0>
  Vec apply_inverse(const Vec& g, H0&& initial) const {
    Vec q = g;
    std::vector<double> alpha(s_.size());
    for (int k = static_cast<int>(s_.size()) - 1; k >= 0; --k) {
      alpha[k] = rho_[k] * s_[k].dot(q);
      q -= alpha[k] * y_[k];
    }
    Vec r = initial(q);
    for (std::size_t k = 0; k < s_.size(); ++k) {
      const double beta = rho_[k] * y_[k].dot(r);
      r += (alpha[k] - beta) * s_[k];
    }
    return r;
  }

 private:
  int capacity_;
  std::deque<Vec> s_, y_;
  std::deque<double> rho_;
};

void project_nonnegative(Vec& x) { x = x.cwiseMax(0.0); }

StageReport run_stage(InteriorEnergy& energy, Vec& x, double eps, const SolveOptions& opts) {
  constexpr double armijo_c = 1e-4;
  constexpr int stall_window = 25;
  const bool one_phase = energy.spec().phase == Phase::one_phase;
  energy.set_epsilon(eps);

  StageReport rep;
  rep.epsilon = eps;
  double f = energy.value(x);
  if (!std::isfinite(f)) throw SolverError("solve: energy is not finite at stage start");
  Vec g = energy.gradient(x);
  rep.totals.push_back(f);
  QuasiNewtonMemory memory(opts.memory);
  std::vector<char> last_free;
  int stalled = 0;

  auto projected = [&](const Vec& grad) {
    Vec pg = grad;
    if (one_phase)
      for (int k = 0; k < pg.size(); ++k)
        if (x[k] <= 0.0 && pg[k] > 0.0) pg[k] = 0.0;
    return pg;
  };

  for (int it = 0; it < opts.max_iters; ++it) {
    const Vec pg = projected(g);
    rep.grad_inf = pg.lpNorm<Eigen::Infinity>();
    if (rep.grad_inf <= opts.grad_tol) {
      rep.converged = true;
      break;
    }
    // Nodes on the bound pushed down by the gradient are held.
    std::vector<char> free_set(x.size(), 1);
    if (one_phase)
      for (int k = 0; k < x.size(); ++k) free_set[k] = !(x[k] <= 0.0 && g[k] > 0.0);
    if (free_set != last_free) memory.clear();
    last_free = free_set;
    bool factored = energy.factor_newton(x, free_set);
    Vec d = factored ? Vec(-memory.apply_inverse(pg, [&](const Vec& q) { return energy.solve_newton(q, free_set); }))
                     : Vec(-energy.apply_preconditioner(pg));
    if (!(g.dot(d) < 0.0)) {
      memory.clear();
      d = factored ? Vec(-energy.solve_newton(pg, free_set)) : Vec(-energy.apply_preconditioner(pg));
      if (!(g.dot(d) < 0.0)) d = -energy.apply_preconditioner(pg);
    }

    Vec xt;
    double ft = f;
    auto line_search = [&](const Vec& dir) {
      double t = 1.0;
      for (int k = 0; k <= opts.max_halvings; ++k) {
        xt = x + t * dir;
        if (one_phase) project_nonnegative(xt);
        ft = energy.value(xt);
        if (std::isfinite(ft) && ft <= f + armijo_c * g.dot(xt - x)) return true;
        t *= 0.5;
      }
      return false;
    };
    bool accepted = line_search(d);
    if (!accepted) {
      memory.clear();
      accepted = line_search(-energy.apply_preconditioner(pg));
    }
    if (!accepted) {
      rep.note = "line search failed after " + std::to_string(opts.max_halvings) + " halvings";
      rep.converged = false;
      break;
    }
    Vec gt = energy.gradient(xt);
    Vec s = xt - x;
    Vec y = gt - g;
    memory.push(std::move(s), std::move(y));
    stalled = (f - ft <= 1e-15 * std::abs(f)) ? stalled + 1 : 0;
    x = std::move(xt);
    f = ft;
    g = std::move(gt);
    rep.totals.push_back(f);
    rep.iterations = it + 1;
    if (stalled >= stall_window) {
      rep.grad_inf = projected(g).lpNorm<Eigen::Infinity>();
      rep.converged = true;
      if (rep.grad_inf > opts.grad_tol) rep.note = "stationary to machine precision";
      break;
    }
  }
  if (rep.note.empty() && !rep.converged) {
    rep.grad_inf = projected(g).lpNorm<Eigen::Infinity>();
    rep.converged = rep.grad_inf <= opts.grad_tol;
    if (!rep.converged) rep.note = "iteration limit reached";
  }
  rep.energy = energy.breakdown(x);
  return rep;
}

// Minimizes the biharmonic term with the pinned nodes held at zero.
bool pinned_solve(InteriorEnergy& energy, Vec& y, const std::vector<char>& pinned, bool one_phase) {
  std::vector<char> free_set(pinned.size());
  for (std::size_t k = 0; k < pinned.size(); ++k) {
    free_set[k] = !pinned[k];
    if (pinned[k]) y[k] = 0.0;
  }
  Vec d;
  if (!energy.reduced_newton(y, energy.gradient(y), free_set, d)) return false;
  y += d;
  if (one_phase) project_nonnegative(y);
  return y.allFinite();
}

// Nodes with u in (0, tol) (one-phase: u < tol) are pinned to zero and the
// biharmonic term is minimized over the rest with the positivity pattern
// frozen. On 1D grids the pinned pattern is then shifted node by node along
// the interface. Changes are kept only when the exact-indicator energy drops.
bool polish_sharp(InteriorEnergy& energy, Vec& x, double tol) {
  const bool one_phase = energy.spec().phase == Phase::one_phase;
  const double eps_saved = energy.spec().epsilon;
  energy.set_epsilon(0.0);
  bool improved = false;
  double best = energy.value(x);
  for (int round = 0; round < 3; ++round) {
    Vec y = x;
    std::vector<char> pinned(y.size());
    for (int k = 0; k < y.size(); ++k) pinned[k] = one_phase ? y[k] < tol : (y[k] > 0.0 && y[k] < tol);
    if (!pinned_solve(energy, y, pinned, one_phase)) break;
    const double f = energy.value(y);
    if (!(f < best)) break;
    best = f;
    x = std::move(y);
    improved = true;
  }

  if (energy.grid().dim == 1) {
    const int n = static_cast<int>(x.size());
    auto sign_class = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
    for (int round = 0; round < 200; ++round) {
      std::vector<char> pinned(n);
      for (int k = 0; k < n; ++k) pinned[k] = x[k] == 0.0;
      std::vector<std::vector<char>> trials;
      for (int k = 0; k + 1 < n; ++k) {
        if (sign_class(x[k]) == sign_class(x[k + 1])) continue;
        for (int m : {k, k + 1}) {
          auto t = pinned;
          t[m] = !t[m];
          trials.push_back(t);
        }
        if (pinned[k] != pinned[k + 1]) {
          auto t = pinned;
          std::swap(t[k], t[k + 1]);
          trials.push_back(t);
        }
      }
      Vec best_y;
      for (const auto& t : trials) {
        Vec y = x;
        if (!pinned_solve(energy, y, t, one_phase)) continue;
        const double f = energy.value(y);
        if (f < best * (1.0 - 1e-14)) {
          best = f;
          best_y = std::move(y);
        }
      }
      if (best_y.size() == 0) break;
      x = std::move(best_y);
      improved = true;
    }
  }
  energy.set_epsilon(eps_saved);
  return improved;
}

SolveResult run_schedule(const GridFunctiond& start, const EnergySpec& spec, const SolveOptions& opts,
                         const std::vector<double>& schedule, const std::string& label) {
  InteriorEnergy energy(start, spec);
  Vec x = energy.gather(start.values());
  if (spec.phase == Phase::one_phase) project_nonnegative(x);
  SolveReport report;
  report.schedule = label;
  report.converged = true;
  for (double eps : schedule) {
    report.stages.push_back(run_stage(energy, x, eps, opts));
    report.converged = report.converged && report.stages.back().converged;
  }
  report.final_grad_inf = report.stages.empty() ? 0.0 : report.stages.back().grad_inf;
  if (!schedule.empty()) report.polished = polish_sharp(energy, x, schedule.back());
  GridFunctiond u = energy.field(x);
  report.sharp_energy = evaluate(u, spec.with_epsilon(0.0));
  return {std::move(u), std::move(report)};
}

void check_boundary(const GridFunctiond& bv, const EnergySpec& spec) {
  const Grid& g = bv.grid();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!g.on_boundary(i, j)) continue;
      if (!std::isfinite(bv(i, j))) throw std::invalid_argument("solve: boundary values must be finite");
      if (spec.phase == Phase::one_phase && bv(i, j) < 0.0)
        throw std::invalid_argument("solve: one-phase boundary values must be >= 0");
    }
}

}  // namespace

GridFunctiond initial_guess(const GridFunctiond& bv, double noise_amplitude, std::uint64_t seed) {
  const Grid& g = bv.grid();
  Vec u = bv.values();
  if (g.dim == 1) {
    const double a = bv(0), b = bv(g.nx - 1);
    for (int i = 1; i < g.nx - 1; ++i) u[i] = a + (b - a) * double(i) / double(g.nx - 1);
  } else {
    const auto interior = interior_nodes(g);
    const SpMat L = interior_laplacian(g, interior);
    std::vector<int> slot(g.size(), -1);
    for (std::size_t k = 0; k < interior.size(); ++k) slot[interior[k]] = static_cast<int>(k);
    Vec rhs = Vec::Zero(interior.size());
    const double inv_h2 = 1.0 / (g.h * g.h);
    for (std::size_t k = 0; k < interior.size(); ++k) {
      const int node = interior[k];
      const int i = node % g.nx, j = node / g.nx;
      for (auto [ii, jj] : {std::pair{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}})
        if (g.on_boundary(ii, jj)) rhs[k] -= bv(ii, jj) * inv_h2;
    }
    Eigen::SimplicialLDLT<SpMat> solver(SpMat(-L));
    const Vec x = solver.solve(-rhs);
    for (std::size_t k = 0; k < interior.size(); ++k) u[interior[k]] = x[k];
  }
  if (noise_amplitude > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (!g.on_boundary(i, j)) u[g.index(i, j)] += noise_amplitude * normal(rng);
  }
  return GridFunctiond(g, std::move(u));
}

SolveResult solve_from(const GridFunctiond& start, const EnergySpec& spec, const SolveOptions& opts) {
  spec.validate();
  opts.validate();
  detail::require_stencil_size(start.grid());
  check_boundary(start, spec);
  if (!start.all_finite()) throw std::invalid_argument("solve: start field must be finite");
  const double scale = boundary_scale(start);
  if (!opts.continuation.empty()) return run_schedule(start, spec, opts, opts.continuation, "explicit");

  const std::vector<std::pair<std::string, std::vector<double>>> schedules = {
      {"direct", direct_schedule(start.grid(), scale)}, {"homotopy", homotopy_schedule(start.grid(), scale)}};
  std::vector<std::optional<SolveResult>> runs(schedules.size());
  parallel_for(schedules.size(), [&](std::size_t k) {
    runs[k] = run_schedule(start, spec, opts, schedules[k].second, schedules[k].first);
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k)
    if (runs[k]->report.sharp_energy.total < runs[best]->report.sharp_energy.total * (1.0 - 1e-12)) best = k;
  std::vector<CandidateReport> candidates;
  for (const auto& r : runs) candidates.push_back({r->report.schedule, r->report.sharp_energy.total, r->report.converged});
  SolveResult out = std::move(*runs[best]);
  out.report.candidates = std::move(candidates);
  return out;
}

SolveResult solve(const GridFunctiond& bv, const EnergySpec& spec, const SolveOptions& opts) {
  spec.validate();
  check_boundary(bv, spec);
  GridFunctiond start = initial_guess(bv, 1e-3 * boundary_scale(bv), opts.seed);
  if (spec.phase == Phase::one_phase) start = start.with_values(start.values().cwiseMax(0.0));
  return solve_from(start, spec, opts);
}

std::optional<double> free_boundary_1d(const GridFunctiond& u, double zero_tol) {
  const Grid& g = u.grid();
  if (g.dim != 1) throw std::invalid_argument("free_boundary_1d: 1D field required");
  for (int i = g.nx - 2; i >= 1; --i) {
    if (u(i) > zero_tol) continue;
    if (u(i) <= 0.0 && u(i + 1) > 0.0) return g.x(i) + g.h * (-u(i)) / (u(i + 1) - u(i));
    return g.x(i);
  }
  return std::nullopt;
}

std::vector<SweepRow> sweep1d(const std::vector<double>& A_values, int nodes, const EnergySpec& spec,
                              const SolveOptions& opts) {
  for (double A : A_values)
    if (!(A > 0.0)) throw std::invalid_argument("sweep1d: every A must be > 0");
  EnergySpec one_phase = spec;
  one_phase.phase = Phase::one_phase;
  std::vector<SweepRow> rows(A_values.size());
  parallel_for(A_values.size(), [&](std::size_t k) {
    const double A = A_values[k];
    const Grid g = Grid::interval(0.0, A, nodes);
    Vec bv = Vec::Zero(g.size());
    bv[g.nx - 1] = 1.0;
    const SolveResult res = solve(GridFunctiond(g, bv), one_phase, opts);
    const double tol = res.report.stages.back().epsilon;
    const auto a = free_boundary_1d(res.u, tol);
    rows[k] = {A, a ? *a : std::numeric_limits<double>::quiet_NaN(), res.report.sharp_energy.total,
               res.report.converged};
  });
  return rows;
}

}  // namespace fbp
