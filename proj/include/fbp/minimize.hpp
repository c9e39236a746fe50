#pragma once

#include "fbp/energy.hpp"
#include "fbp/grid.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fbp {

struct SolveOptions {
  int max_iters = 4000;       ///< per continuation stage
  double grad_tol = 1e-10;    ///< on the infinity norm of the (projected) energy gradient
  std::vector<double> continuation;  ///< decreasing epsilons; empty selects the automatic schedule
  int memory = 10;            ///< quasi-Newton history length
  std::uint64_t seed = 0;     ///< initial-guess noise
  int max_halvings = 60;

  void validate() const;
  bool operator==(const SolveOptions&) const = default;
};

struct StageReport {
  double epsilon = 0.0;
  int iterations = 0;
  double grad_inf = 0.0;
  EnergyBreakdown<double> energy;   ///< smoothed energy at stage end
  std::vector<double> totals;       ///< total after every accepted step (index 0: stage start)
  bool converged = false;
  std::string note;
};

/// One run of the continuation from a given schedule, when the automatic
/// strategy compares several.
struct CandidateReport {
  std::string schedule;
  double sharp_energy = 0.0;
  bool converged = false;
};

struct SolveReport {
  std::string schedule;
  std::vector<StageReport> stages;
  std::vector<CandidateReport> candidates;
  double final_grad_inf = 0.0;
  bool converged = false;
  bool polished = false;  ///< final sharp clean-up of sub-threshold nodes was accepted
  EnergyBreakdown<double> sharp_energy;  ///< exact-indicator energy of the returned field
};

struct SolveResult {
  GridFunctiond u;
  SolveReport report;
};

/// Amplitude used to scale epsilons and noise: max |boundary value|, or 1 when all vanish.
double boundary_scale(const GridFunctiond& boundary_values);

/// Grid-tied final stages {100, 30, 10} h^2 * scale.
std::vector<double> direct_schedule(const Grid& g, double scale);

/// Geometric ladder from 4 * scale down to the direct schedule (ratio 10^-1/2).
std::vector<double> homotopy_schedule(const Grid& g, double scale);

/// Harmonic extension of the boundary values (exact linear interpolation in 1D)
/// plus seeded Gaussian noise of amplitude noise_amplitude on interior nodes.
GridFunctiond initial_guess(const GridFunctiond& boundary_values, double noise_amplitude, std::uint64_t seed);

/// Minimizes J_eps with u pinned to boundary_values on the outermost node
/// layer. With an explicit continuation the stages run in order from the
/// initial guess. With an empty one, both the direct and the homotopy schedule
/// run and the result with the lower exact-indicator energy is returned.
/// Throws SolverError when the energy becomes non-finite.
SolveResult solve(const GridFunctiond& boundary_values, const EnergySpec& spec, const SolveOptions& opts);

/// Same, starting from an explicit field (its boundary layer is the data).
SolveResult solve_from(const GridFunctiond& start, const EnergySpec& spec, const SolveOptions& opts);

/// Largest free-boundary point of a 1D field: the largest interior node with
/// u <= zero_tol, refined to the linear zero crossing when u changes sign there.
/// Empty when no interior node qualifies.
std::optional<double> free_boundary_1d(const GridFunctiond& u, double zero_tol);

struct SweepRow {
  double A = 0.0;
  double a_h = 0.0;  ///< NaN without free boundary
  double J_h = 0.0;  ///< exact-indicator energy
  bool converged = false;
};

/// One-phase problem on (0, A) with u(0) = 0, u(A) = 1 for every A, solved
/// concurrently. spec.phase is forced to one_phase.
std::vector<SweepRow> sweep1d(const std::vector<double>& A_values, int nodes, const EnergySpec& spec,
                              const SolveOptions& opts);

}  // namespace fbp
