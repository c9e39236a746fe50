#pragma once

#include "fbp/grid.hpp"

#include <string>
#include <vector>

namespace fbp {

struct MonotoneOptions {
  int n_theta = 512;
  int q_substeps = 16;      ///< trapezoid panels in r between consecutive radii
  bool richardson = true;   ///< extrapolate the disk integral from h and 2h when the grid allows it
};

/// E(r) at each radius, and the integrated Q-term between consecutive radii:
///   Q_integral[i] = int_{r_i}^{r_{i+1}} r^-2 int_{dB_r} Q ds dr.
struct MonotoneTrace {
  Point center = Point::Zero();
  std::vector<double> radii;
  std::vector<double> E;
  std::vector<double> circle;        ///< boundary part of E
  std::vector<double> bulk;          ///< (1/4r^2) int_{B_r} (|Lap u|^2 + chi_{u>0})
  std::vector<double> bulk_error;    ///< |bulk_h - bulk_2h|, NaN without a coarse level
  std::vector<double> Q_integral;
};

/// 2D only. Radii must be strictly increasing, >= 6h, and each circle must fit
/// the grid with a 2h margin.
MonotoneTrace monotone_energy(const GridFunctiond& u, const Point& center, const std::vector<double>& radii,
                              const MonotoneOptions& opts = {});

/// Circle average of Q = (-u_rtheta / r + 2 u_theta / r^2)^2 + (u_rr - 3 u_r / r + 4 u / r^2)^2.
double q_deficit(const GridFunctiond& u, const Point& center, double r, int n_theta = 512);

enum class RatioKind { nondeg, density, hessian_decay, bmo, lap_lower };
std::string to_string(RatioKind k);

struct RatioTable {
  RatioKind kind = RatioKind::nondeg;
  std::vector<double> radii;
  std::vector<double> values;
};

/// sup over nodes of B_r(x0) of |u| (u^+ when positive_part) divided by r^2.
RatioTable nondegeneracy_ratio(const GridFunctiond& u, const Point& x0, const std::vector<double>& radii,
                               bool positive_part = false);

/// |B_r(x0) cap {u > 0}| / |B_r| with clipped-cell node weights.
RatioTable density_positivity(const GridFunctiond& u, const Point& x0, const std::vector<double>& radii);

/// Per R: [R^-(n+2) int_{B_R} |grad u|^2 + R^-n int_{B_R} |D^2 u|^2]
///      / [R^-(n+4) int_{B_4R} (u-m)^2 + R^-(n+2) int_{B_4R} (u-m)],  m = min_{B_4R} u.
/// 0 when both sides vanish; B_4R must lie inside the grid. 2D only.
RatioTable hessian_decay_check(const GridFunctiond& u, const Point& x0, const std::vector<double>& radii);

struct Box {
  double x0, x1, y0, y1;
};

struct BmoReport {
  std::vector<double> scales;
  std::vector<double> per_scale;  ///< max over sampled centers at that scale
  double value = 0.0;             ///< max over scales
  int centers = 0;
};

/// max over node centers in `region` (at most ~max_centers of them, strided)
/// and over scales of r^-n int_{B_r} |f - mean_{B_r} f|^2. Balls touching
/// non-finite values or leaving the grid are skipped.
BmoReport bmo_seminorm(const GridFunctiond& f, const Box& region, const std::vector<double>& scales,
                       int max_centers = 400);

struct LaplacianLowerBound {
  double min_laplacian = 0.0;   ///< min of Lap_h u over nodes at distance >= margin from the boundary
  double bound = 0.0;           ///< -C ||Lap_h u||_L1 / margin^n
  double constant = 0.0;        ///< C = 2^n / |B_1|
  double l1_norm = 0.0;
  double margin = 0.0;
};

LaplacianLowerBound laplacian_lower_bound(const GridFunctiond& u, double margin);

enum class JetSide { left, right };

/// Cubic least-squares fit to nodes on one side of x_star, skipping the
/// first skip_nodes, and its derivatives at x_star. 1D only.
struct Jet1D {
  double value = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
  double rms_residual = 0.0;
  int nodes = 0;
};

Jet1D one_sided_jet(const GridFunctiond& u, double x_star, JetSide side, int skip_nodes = 3, int fit_nodes = 64);

}  // namespace fbp
