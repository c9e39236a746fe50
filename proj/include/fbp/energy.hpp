#pragma once

#include "fbp/grid.hpp"

#include <span>
#include <stdexcept>
#include <string>

namespace fbp {

enum class Phase { two_phase, one_phase };

std::string to_string(Phase p);
Phase phase_from_string(const std::string& s);

/// Parameters of J_eps[u] = sum |Lap_h u|^2 h^n + chi_weight * sum H_eps(u) h^n.
/// epsilon == 0 selects the exact indicator of {u > 0}.
struct EnergySpec {
  double epsilon = 0.0;
  double chi_weight = 1.0;
  Phase phase = Phase::two_phase;

  void validate() const {
    if (!(epsilon >= 0.0)) throw std::invalid_argument("energy: epsilon must be >= 0");
    if (!(chi_weight >= 0.0)) throw std::invalid_argument("energy: chi_weight must be >= 0");
  }
  EnergySpec with_epsilon(double e) const {
    EnergySpec s = *this;
    s.epsilon = e;
    return s;
  }
  bool operator==(const EnergySpec&) const = default;
};

template <typename Scalar = double>
struct EnergyBreakdown {
  Scalar biharm = 0;
  Scalar volume = 0;
  Scalar total = 0;
};

/// C^1 smoothstep: 0 for t <= 0, (t/eps)^2 (3 - 2t/eps) on (0, eps), 1 beyond.
template <typename Scalar>
Scalar smoothed_heaviside(Scalar t, Scalar eps) {
  if (eps == Scalar(0)) return t > Scalar(0) ? Scalar(1) : Scalar(0);
  if (t <= Scalar(0)) return Scalar(0);
  if (t >= eps) return Scalar(1);
  const Scalar s = t / eps;
  return s * s * (Scalar(3) - Scalar(2) * s);
}

template <typename Scalar>
Scalar smoothed_heaviside_derivative(Scalar t, Scalar eps) {
  if (t <= Scalar(0) || t >= eps) return Scalar(0);
  const Scalar s = t / eps;
  return Scalar(6) * s * (Scalar(1) - s) / eps;
}

namespace detail {

template <typename Derived>
EnergyBreakdown<typename Derived::Scalar> evaluate_values(const Grid& g, const Eigen::MatrixBase<Derived>& u,
                                                          const EnergySpec& spec) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> lap(g.size());
  laplacian_interior(g, u, lap);
  const Scalar eps = Scalar(spec.epsilon);
  Scalar biharm = 0, volume = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (g.on_boundary(i, j)) continue;
      const int k = g.index(i, j);
      biharm += lap[k] * lap[k];
      volume += smoothed_heaviside(u[k], eps);
    }
  const Scalar w = Scalar(g.cell_volume());
  EnergyBreakdown<Scalar> e;
  e.biharm = biharm * w;
  e.volume = Scalar(spec.chi_weight) * volume * w;
  e.total = e.biharm + e.volume;
  return e;
}

/// Gradient of the smoothed discrete energy with respect to interior nodal
/// values; boundary entries are zero.
template <typename Derived, typename OutDerived>
void gradient_values(const Grid& g, const Eigen::MatrixBase<Derived>& u, const EnergySpec& spec,
                     Eigen::MatrixBase<OutDerived>& out) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> lap(g.size());
  lap.setZero();
  laplacian_interior(g, u, lap);
  laplacian_adjoint_interior(g, lap, out);
  const Scalar eps = Scalar(spec.epsilon);
  const Scalar w = Scalar(g.cell_volume());
  const Scalar cw = Scalar(spec.chi_weight);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.index(i, j);
      if (g.on_boundary(i, j)) {
        out[k] = 0;
        continue;
      }
      out[k] = w * (Scalar(2) * out[k] + cw * smoothed_heaviside_derivative(u[k], eps));
    }
}

}  // namespace detail

/// Nodal quadrature of both terms over interior nodes.
template <typename Scalar>
EnergyBreakdown<Scalar> evaluate(const GridFunction<Scalar>& u, const EnergySpec& spec) {
  spec.validate();
  detail::require_stencil_size(u.grid());
  if (!u.all_finite()) throw std::invalid_argument("energy: field has non-finite values");
  return detail::evaluate_values(u.grid(), u.values(), spec);
}

/// h^n (2 L^T L u + chi_weight H_eps'(u)) on interior nodes, zero on the boundary.
template <typename Scalar>
GridFunction<Scalar> smoothed_gradient(const GridFunction<Scalar>& u, const EnergySpec& spec) {
  spec.validate();
  if (spec.epsilon <= 0.0) throw std::invalid_argument("smoothed_gradient: epsilon must be > 0");
  detail::require_stencil_size(u.grid());
  typename GridFunction<Scalar>::Vector out(u.grid().size());
  detail::gradient_values(u.grid(), u.values(), spec, out);
  return u.with_values(std::move(out));
}

/// LHS - RHS of the first domain variation identity
///   2 int Lap u sum_m (2 grad u_m . grad phi^m + u_m Lap phi^m)
///     = int (|Lap u|^2 + chi_weight chi_{u>0}) div phi,
/// with grid calculus and the exact indicator. phi has one component per
/// dimension and must vanish on the two outermost node layers.
double domain_variation_residual(const GridFunctiond& u, std::span<const GridFunctiond> phi, const EnergySpec& spec);

}  // namespace fbp
