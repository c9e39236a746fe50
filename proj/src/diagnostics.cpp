#include "fbp/diagnostics.hpp"

#include "fbp/parallel.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace fbp {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

void require_2d(const Grid& g, const char* what) {
  if (g.dim != 2) throw std::invalid_argument(std::string(what) + ": 2D grid required");
}

bool ball_inside(const Grid& g, const Point& c, double r) {
  const double m = r + g.h;
  if (g.dim == 1) return c.x() - m >= g.ox && c.x() + m <= g.x_max();
  return c.x() - m >= g.ox && c.x() + m <= g.x_max() && c.y() - m >= g.oy && c.y() + m <= g.y_max();
}

void require_ball_inside(const Grid& g, const Point& c, double r, const char* what) {
  if (!(r > 0.0)) throw std::invalid_argument(std::string(what) + ": radii must be positive");
  if (!ball_inside(g, c, r)) throw std::out_of_range(std::string(what) + ": radius exits the grid");
}

double ball_measure(int dim, double r) { return dim == 1 ? 2.0 * r : M_PI * r * r; }

// (1/4r^2) int_{B_r} (|Lap u|^2 + chi_{u>0}) with clipped-cell weights.
double disk_bulk(const GridFunctiond& u, const GridFunctiond& lap, const Point& c, double r) {
  double s = 0.0;
  for (const auto& [k, w] : ball_weights(u.grid(), c, r)) {
    const double l = lap[k];
    if (!std::isfinite(l)) throw std::out_of_range("monotone_energy: disk reaches the boundary layer");
    s += w * (l * l + (u[k] > 0.0 ? 1.0 : 0.0));
  }
  return s / (4.0 * r * r);
}

double circle_density_integral(const PolarSamples& s) {
  const double r = s.r;
  const double r2 = r * r, r3 = r2 * r, r4 = r3 * r, r5 = r4 * r;
  const Eigen::ArrayXd d = s.lap * s.u_r / (2.0 * r2) - 5.0 * s.u_r.square() / (2.0 * r3) - s.lap * s.u / r3 +
                           6.0 * s.u * s.u_r / r4 + s.u_theta * s.u_thetar / r4 - 4.0 * s.u.square() / r5 -
                           1.5 * s.u_theta.square() / r5;
  return d.mean() * 2.0 * M_PI * r;
}

Eigen::ArrayXd q_density(const PolarSamples& s) {
  const double r = s.r;
  const Eigen::ArrayXd t1 = -s.u_thetar / r + 2.0 * s.u_theta / (r * r);
  const Eigen::ArrayXd t2 = s.u_rr - 3.0 * s.u_r / r + 4.0 * s.u / (r * r);
  return t1.square() + t2.square();
}

// r^-2 int_{dB_r} Q ds
double q_rate(const PolarSampler& ps, const Point& c, double r, int n_theta) {
  return 2.0 * M_PI * q_density(ps.sample(c, r, n_theta)).mean() / r;
}

bool can_coarsen(const Grid& g) {
  return (g.nx - 1) % 2 == 0 && (g.ny - 1) % 2 == 0 && (g.nx + 1) / 2 >= 5 && (g.ny + 1) / 2 >= 5;
}

}  // namespace

MonotoneTrace monotone_energy(const GridFunctiond& u, const Point& center, const std::vector<double>& radii,
                              const MonotoneOptions& opts) {
  const Grid& g = u.grid();
  require_2d(g, "monotone_energy");
  if (opts.n_theta < 16) throw std::invalid_argument("monotone_energy: n_theta must be >= 16");
  if (opts.q_substeps < 1) throw std::invalid_argument("monotone_energy: q_substeps must be >= 1");
  if (radii.empty()) throw std::invalid_argument("monotone_energy: no radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 6.0 * g.h)) throw std::invalid_argument("monotone_energy: radii must be >= 6h");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw std::invalid_argument("monotone_energy: radii must increase");
  }

  const PolarSampler ps(u);
  for (double r : radii)
    if (!ps.fits(center, r)) throw std::out_of_range("monotone_energy: radius exits the grid");

  const GridFunctiond lap = laplacian(u);
  std::optional<GridFunctiond> coarse, coarse_lap;
  if (opts.richardson && can_coarsen(g)) {
    coarse = coarsen(u);
    coarse_lap = laplacian(*coarse);
  }

  const std::size_t n = radii.size();
  MonotoneTrace t;
  t.center = center;
  t.radii = radii;
  t.E.resize(n);
  t.circle.resize(n);
  t.bulk.resize(n);
  t.bulk_error.assign(n, nan_v);
  t.Q_integral.assign(n > 0 ? n - 1 : 0, 0.0);

  parallel_for(n, [&](std::size_t i) {
    const double r = radii[i];
    t.circle[i] = circle_density_integral(ps.sample(center, r, opts.n_theta));
    const double fine = disk_bulk(u, lap, center, r);
    double bulk = fine;
    if (coarse && ball_inside(coarse->grid(), center, r + coarse->grid().h)) {
      const double crs = disk_bulk(*coarse, *coarse_lap, center, r);
      bulk = 2.0 * fine - crs;
      t.bulk_error[i] = std::abs(fine - crs);
    }
    t.bulk[i] = bulk;
    t.E[i] = t.circle[i] + bulk;
  });

  parallel_for(n - 1, [&](std::size_t i) {
    const double a = radii[i], b = radii[i + 1];
    const int m = opts.q_substeps;
    const double dr = (b - a) / m;
    double s = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double w = (k == 0 || k == m) ? 0.5 : 1.0;
      s += w * q_rate(ps, center, a + k * dr, opts.n_theta);
    }
    t.Q_integral[i] = s * dr;
  });
  return t;
}

double q_deficit(const GridFunctiond& u, const Point& center, double r, int n_theta) {
  require_2d(u.grid(), "q_deficit");
  return q_density(sample_circle(u, center, r, n_theta)).mean();
}

std::string to_string(RatioKind k) {
  switch (k) {
    case RatioKind::nondeg: return "nondeg";
    case RatioKind::density: return "density";
    case RatioKind::hessian_decay: return "hessian_decay";
    case RatioKind::bmo: return "bmo";
    default: return "lap_lower";
  }
}

RatioTable nondegeneracy_ratio(const GridFunctiond& u, const Point& x0, const std::vector<double>& radii,
                               bool positive_part) {
  const Grid& g = u.grid();
  RatioTable t{RatioKind::nondeg, radii, {}};
  for (double r : radii) {
    require_ball_inside(g, x0, r, "nondegeneracy_ratio");
    double sup = 0.0;
    for (const auto& nw : ball_weights(g, x0, r)) {
      const int k = nw.index;
      const int i = k % g.nx, j = k / g.nx;
      if ((g.node(i, j) - x0).norm() > r) continue;
      sup = std::max(sup, positive_part ? std::max(u[k], 0.0) : std::abs(u[k]));
    }
    t.values.push_back(sup / (r * r));
  }
  return t;
}

RatioTable density_positivity(const GridFunctiond& u, const Point& x0, const std::vector<double>& radii) {
  const Grid& g = u.grid();
  RatioTable t{RatioKind::density, radii, {}};
  for (double r : radii) {
    require_ball_inside(g, x0, r, "density_positivity");
    double pos = 0.0;
    for (const auto& [k, w] : ball_weights(g, x0, r))
      if (u[k] > 0.0) pos += w;
    t.values.push_back(pos / ball_measure(g.dim, r));
  }
  return t;
}

RatioTable hessian_decay_check(const GridFunctiond& u, const Point& x0, const std::vector<double>& radii) {
  const Grid& g = u.grid();
  require_2d(g, "hessian_decay_check");
  const auto grad = gradient(u);
  const auto hess = hessian(u);
  RatioTable t{RatioKind::hessian_decay, radii, {}};
  for (double R : radii) {
    require_ball_inside(g, x0, 4.0 * R, "hessian_decay_check");
    const auto outer = ball_weights(g, x0, 4.0 * R);
    double m = std::numeric_limits<double>::infinity();
    for (const auto& nw : outer) {
      const int i = nw.index % g.nx, j = nw.index / g.nx;
      if ((g.node(i, j) - x0).norm() <= 4.0 * R) m = std::min(m, u[nw.index]);
    }
    double grad2 = 0.0, hess2 = 0.0;
    for (const auto& [k, w] : ball_weights(g, x0, R)) {
      grad2 += w * (grad[0][k] * grad[0][k] + grad[1][k] * grad[1][k]);
      const double xx = hess.xx[k], xy = hess.xy[k], yy = hess.yy[k];
      hess2 += w * (xx * xx + 2.0 * xy * xy + yy * yy);
    }
    double dev2 = 0.0, dev1 = 0.0;
    for (const auto& [k, w] : outer) {
      const double d = u[k] - m;
      dev2 += w * d * d;
      dev1 += w * d;
    }
    const double lhs = grad2 / std::pow(R, 4) + hess2 / (R * R);
    const double rhs = dev2 / std::pow(R, 6) + dev1 / std::pow(R, 4);
    t.values.push_back(lhs == 0.0 && rhs == 0.0 ? 0.0 : lhs / rhs);
  }
  return t;
}

BmoReport bmo_seminorm(const GridFunctiond& f, const Box& region, const std::vector<double>& scales, int max_centers) {
  const Grid& g = f.grid();
  if (scales.empty()) throw std::invalid_argument("bmo_seminorm: no scales");
  if (max_centers < 1) throw std::invalid_argument("bmo_seminorm: max_centers must be >= 1");
  for (double r : scales)
    if (!(r > 0.0)) throw std::invalid_argument("bmo_seminorm: scales must be positive");

  std::vector<Point> centers;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Point p = g.node(i, j);
      if (p.x() >= region.x0 && p.x() <= region.x1 && (g.dim == 1 || (p.y() >= region.y0 && p.y() <= region.y1)))
        centers.push_back(p);
    }
  if (centers.empty()) throw std::invalid_argument("bmo_seminorm: region contains no nodes");
  const std::size_t stride = (centers.size() + max_centers - 1) / max_centers;

  BmoReport rep;
  rep.scales = scales;
  rep.per_scale.assign(scales.size(), 0.0);
  parallel_for(scales.size(), [&](std::size_t s) {
    const double r = scales[s];
    double best = 0.0;
    for (std::size_t c = 0; c < centers.size(); c += stride) {
      if (!ball_inside(g, centers[c], r)) continue;
      const auto w = ball_weights(g, centers[c], r);
      double mass = 0.0, mean = 0.0;
      bool finite = true;
      for (const auto& [k, wk] : w) {
        if (!std::isfinite(f[k])) {
          finite = false;
          break;
        }
        mass += wk;
        mean += wk * f[k];
      }
      if (!finite || mass <= 0.0) continue;
      mean /= mass;
      double osc = 0.0;
      for (const auto& [k, wk] : w) osc += wk * (f[k] - mean) * (f[k] - mean);
      best = std::max(best, osc / std::pow(r, g.dim));
    }
    rep.per_scale[s] = best;
  });
  for (std::size_t c = 0; c < centers.size(); c += stride) ++rep.centers;
  rep.value = *std::max_element(rep.per_scale.begin(), rep.per_scale.end());
  return rep;
}

LaplacianLowerBound laplacian_lower_bound(const GridFunctiond& u, double margin) {
  const Grid& g = u.grid();
  if (!(margin > 0.0)) throw std::invalid_argument("laplacian_lower_bound: margin must be > 0");
  const GridFunctiond lap = laplacian(u);
  LaplacianLowerBound b;
  b.margin = margin;
  b.constant = std::pow(2.0, g.dim) / ball_measure(g.dim, 1.0);
  b.min_laplacian = std::numeric_limits<double>::infinity();
  double l1 = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (g.on_boundary(i, j)) continue;
      const double l = lap(i, j);
      l1 += std::abs(l);
      double dist = std::min(g.x(i) - g.ox, g.x_max() - g.x(i));
      if (g.dim == 2) dist = std::min({dist, g.y(j) - g.oy, g.y_max() - g.y(j)});
      if (dist >= margin - 1e-12 * g.h) b.min_laplacian = std::min(b.min_laplacian, l);
    }
  if (!std::isfinite(b.min_laplacian)) throw std::invalid_argument("laplacian_lower_bound: margin leaves no nodes");
  b.l1_norm = l1 * g.cell_volume();
  b.bound = -b.constant * b.l1_norm / std::pow(margin, g.dim);
  return b;
}

Jet1D one_sided_jet(const GridFunctiond& u, double x_star, JetSide side, int skip_nodes, int fit_nodes) {
  const Grid& g = u.grid();
  if (g.dim != 1) throw std::invalid_argument("one_sided_jet: 1D field required");
  if (skip_nodes < 0 || fit_nodes < 4) throw std::invalid_argument("one_sided_jet: need skip >= 0 and >= 4 fit nodes");
  if (!(x_star >= g.ox && x_star <= g.x_max())) throw std::out_of_range("one_sided_jet: x_star outside the grid");

  std::vector<int> nodes;
  if (side == JetSide::right) {
    int i = static_cast<int>(std::floor((x_star - g.ox) / g.h + 1e-9)) + 1 + skip_nodes;
    for (; i < g.nx && static_cast<int>(nodes.size()) < fit_nodes; ++i) nodes.push_back(i);
  } else {
    int i = static_cast<int>(std::ceil((x_star - g.ox) / g.h - 1e-9)) - 1 - skip_nodes;
    for (; i >= 0 && static_cast<int>(nodes.size()) < fit_nodes; --i) nodes.push_back(i);
  }
  if (nodes.size() < 4) throw std::out_of_range("one_sided_jet: not enough nodes on that side");

  const double span = std::abs(g.x(nodes.back()) - x_star);
  Eigen::MatrixXd V(nodes.size(), 4);
  Eigen::VectorXd y(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double t = (g.x(nodes[k]) - x_star) / span;
    V.row(k) << 1.0, t, t * t, t * t * t;
    y[k] = u(nodes[k]);
  }
  const Eigen::Vector4d c = V.colPivHouseholderQr().solve(y);
  Jet1D j;
  j.value = c[0];
  j.d1 = c[1] / span;
  j.d2 = 2.0 * c[2] / (span * span);
  j.d3 = 6.0 * c[3] / (span * span * span);
  j.rms_residual = std::sqrt((V * c - y).squaredNorm() / nodes.size());
  j.nodes = static_cast<int>(nodes.size());
  return j;
}

}  // namespace fbp
