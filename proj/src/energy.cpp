#include "fbp/energy.hpp"

namespace fbp {

std::string to_string(Phase p) { return p == Phase::one_phase ? "one_phase" : "two_phase"; }

Phase phase_from_string(const std::string& s) {
  if (s == "one_phase") return Phase::one_phase;
  if (s == "two_phase") return Phase::two_phase;
  throw std::invalid_argument("unknown phase '" + s + "' (expected one_phase or two_phase)");
}

namespace {

struct Jet1 {
  double d, dd;
};

// Centered first and second differences at an interior node along one axis.
Jet1 axis_jet(const GridFunctiond& f, int i, int j, int di, int dj) {
  const double h = f.grid().h;
  const double fm = f(i - di, j - dj), f0 = f(i, j), fp = f(i + di, j + dj);
  return {(fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)};
}

double mixed(const GridFunctiond& f, int i, int j) {
  const double h = f.grid().h;
  return (f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) + f(i - 1, j - 1)) / (4.0 * h * h);
}

}  // namespace

double domain_variation_residual(const GridFunctiond& u, std::span<const GridFunctiond> phi, const EnergySpec& spec) {
  spec.validate();
  const Grid& g = u.grid();
  detail::require_stencil_size(g);
  if (static_cast<int>(phi.size()) != g.dim)
    throw std::invalid_argument("domain_variation_residual: phi needs one component per dimension");
  for (const auto& c : phi) {
    if (!(c.grid() == g)) throw std::invalid_argument("domain_variation_residual: phi lives on a different grid");
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const bool near_x = i < 2 || i > g.nx - 3;
        const bool near_y = g.dim == 2 && (j < 2 || j > g.ny - 3);
        if ((near_x || near_y) && c(i, j) != 0.0)
          throw std::invalid_argument("domain_variation_residual: phi touches the boundary layer");
      }
  }

  double sum = 0.0;
  const double chi_w = spec.chi_weight;
  if (g.dim == 1) {
    for (int i = 1; i < g.nx - 1; ++i) {
      const Jet1 uj = axis_jet(u, i, 0, 1, 0);
      const Jet1 pj = axis_jet(phi[0], i, 0, 1, 0);
      const double lap = uj.dd;
      const double lhs = 2.0 * lap * (2.0 * uj.dd * pj.d + uj.d * pj.dd);
      const double rhs = (lap * lap + chi_w * (u(i) > 0.0 ? 1.0 : 0.0)) * pj.d;
      sum += lhs - rhs;
    }
    return sum * g.cell_volume();
  }

  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) {
      const Jet1 ux = axis_jet(u, i, j, 1, 0), uy = axis_jet(u, i, j, 0, 1);
      const double uxy = mixed(u, i, j);
      const double lap = ux.dd + uy.dd;
      // grad u_1 = (u_xx, u_xy), grad u_2 = (u_xy, u_yy)
      const Jet1 p1x = axis_jet(phi[0], i, j, 1, 0), p1y = axis_jet(phi[0], i, j, 0, 1);
      const Jet1 p2x = axis_jet(phi[1], i, j, 1, 0), p2y = axis_jet(phi[1], i, j, 0, 1);
      const double term1 = 2.0 * (ux.dd * p1x.d + uxy * p1y.d) + ux.d * (p1x.dd + p1y.dd);
      const double term2 = 2.0 * (uxy * p2x.d + uy.dd * p2y.d) + uy.d * (p2x.dd + p2y.dd);
      const double lhs = 2.0 * lap * (term1 + term2);
      const double div = p1x.d + p2y.d;
      const double rhs = (lap * lap + chi_w * (u(i, j) > 0.0 ? 1.0 : 0.0)) * div;
      sum += lhs - rhs;
    }
  return sum * g.cell_volume();
}

}  // namespace fbp
