#pragma once

#include <Eigen/Core>

#include <cmath>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace fbp {

using Point = Eigen::Vector2d;

/// Uniform node lattice on an interval (dim 1) or an axis-aligned rectangle
/// (dim 2) with identical spacing on both axes. Nodes are stored row-major:
/// index(i, j) = j * nx + i, with i running along x.
struct Grid {
  int dim = 1;
  int nx = 0;
  int ny = 1;
  double h = 0.0;
  double ox = 0.0;
  double oy = 0.0;

  static Grid interval(double a, double b, int n) {
    Grid g{1, n, 1, (b - a) / (n - 1), a, 0.0};
    g.validate();
    return g;
  }

  static Grid rectangle(double ox, double oy, double h, int nx, int ny) {
    Grid g{2, nx, ny, h, ox, oy};
    g.validate();
    return g;
  }

  /// [lo, hi]^2 with n nodes per axis.
  static Grid square(double lo, double hi, int n) {
    return rectangle(lo, lo, (hi - lo) / (n - 1), n, n);
  }

  void validate() const {
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid: spacing must be positive");
    if (nx < 5 || (dim == 2 && ny < 5)) throw std::invalid_argument("grid: at least 5 nodes per axis required");
    if (dim == 1 && ny != 1) throw std::invalid_argument("grid: 1D grid must have ny == 1");
  }

  int size() const { return nx * ny; }
  int index(int i, int j = 0) const { return j * nx + i; }
  double x(int i) const { return ox + i * h; }
  double y(int j) const { return oy + j * h; }
  Point node(int i, int j = 0) const { return {x(i), dim == 2 ? y(j) : 0.0}; }
  double x_max() const { return ox + (nx - 1) * h; }
  double y_max() const { return oy + (ny - 1) * h; }
  /// Quadrature weight of one node: h^dim.
  double cell_volume() const { return dim == 1 ? h : h * h; }

  bool on_boundary(int i, int j = 0) const {
    if (i == 0 || i == nx - 1) return true;
    return dim == 2 && (j == 0 || j == ny - 1);
  }

  bool operator==(const Grid&) const = default;
};

/// Scalar field sampled at the nodes of a Grid. Stencil outputs mark nodes
/// where the stencil is undefined with quiet NaN.
template <typename Scalar = double>
class GridFunction {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit GridFunction(Grid grid) : grid_(grid), values_(Vector::Zero(grid.size())) { grid_.validate(); }

  GridFunction(Grid grid, Vector values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.size()) throw std::invalid_argument("grid function: value count does not match grid");
  }

  /// Samples f at every node; f takes (x) in 1D and (x, y) in 2D.
  template <typename F>
  static GridFunction sample(const Grid& grid, F&& f) {
    Vector v(grid.size());
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        if constexpr (std::is_invocable_v<F, double, double>)
          v[grid.index(i, j)] = static_cast<Scalar>(f(grid.x(i), grid.y(j)));
        else
          v[grid.index(i, j)] = static_cast<Scalar>(f(grid.x(i)));
      }
    return GridFunction(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  const Vector& values() const { return values_; }
  Scalar operator()(int i, int j = 0) const { return values_[grid_.index(i, j)]; }
  Scalar operator[](int k) const { return values_[k]; }

  GridFunction with_values(Vector v) const { return GridFunction(grid_, std::move(v)); }

  /// True exactly on the outermost node layer.
  Eigen::Array<bool, Eigen::Dynamic, 1> boundary_mask() const {
    Eigen::Array<bool, Eigen::Dynamic, 1> m(grid_.size());
    for (int j = 0; j < grid_.ny; ++j)
      for (int i = 0; i < grid_.nx; ++i) m[grid_.index(i, j)] = grid_.on_boundary(i, j);
    return m;
  }

  bool all_finite() const { return values_.allFinite(); }

  Scalar max_abs() const {
    Scalar m = 0;
    for (int k = 0; k < values_.size(); ++k)
      if (std::isfinite(static_cast<double>(values_[k]))) m = std::max<Scalar>(m, std::abs(values_[k]));
    return m;
  }

 private:
  Grid grid_;
  Vector values_;
};

using GridFunctiond = GridFunction<double>;

namespace detail {

template <typename Scalar>
constexpr Scalar undefined() {
  return std::numeric_limits<Scalar>::quiet_NaN();
}

/// Writes the 3-point (1D) / 5-point (2D) Laplacian at interior nodes of out.
/// Boundary entries of out are left untouched.
template <typename Derived, typename OutDerived>
void laplacian_interior(const Grid& g, const Eigen::MatrixBase<Derived>& u, Eigen::MatrixBase<OutDerived>& out) {
  using Scalar = typename Derived::Scalar;
  const Scalar inv_h2 = Scalar(1) / (Scalar(g.h) * Scalar(g.h));
  if (g.dim == 1) {
    for (int i = 1; i < g.nx - 1; ++i) out[i] = (u[i - 1] - Scalar(2) * u[i] + u[i + 1]) * inv_h2;
    return;
  }
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) {
      const int k = g.index(i, j);
      out[k] = (u[k - 1] + u[k + 1] + u[k - g.nx] + u[k + g.nx] - Scalar(4) * u[k]) * inv_h2;
    }
}

/// Adjoint of laplacian_interior restricted to interior nodes: d is read on
/// interior nodes only (boundary entries treated as zero), result written on
/// interior nodes and zeroed on the boundary.
template <typename Derived, typename OutDerived>
void laplacian_adjoint_interior(const Grid& g, const Eigen::MatrixBase<Derived>& d, Eigen::MatrixBase<OutDerived>& out) {
  using Scalar = typename Derived::Scalar;
  const Scalar inv_h2 = Scalar(1) / (Scalar(g.h) * Scalar(g.h));
  auto interior_value = [&](int i, int j) -> Scalar { return g.on_boundary(i, j) ? Scalar(0) : d[g.index(i, j)]; };
  out.setZero();
  if (g.dim == 1) {
    for (int i = 1; i < g.nx - 1; ++i)
      out[i] = (interior_value(i - 1, 0) - Scalar(2) * d[i] + interior_value(i + 1, 0)) * inv_h2;
    return;
  }
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i)
      out[g.index(i, j)] = (interior_value(i - 1, j) + interior_value(i + 1, j) + interior_value(i, j - 1) +
                            interior_value(i, j + 1) - Scalar(4) * d[g.index(i, j)]) *
                           inv_h2;
}

inline void require_stencil_size(const Grid& g) {
  if (g.nx < 5 || (g.dim == 2 && g.ny < 5)) throw std::invalid_argument("stencil: grid too small (< 5 nodes per axis)");
}

}  // namespace detail

/// Second-order Laplacian on interior nodes; boundary nodes are NaN (undefined).
template <typename Scalar>
GridFunction<Scalar> laplacian(const GridFunction<Scalar>& u) {
  const Grid& g = u.grid();
  detail::require_stencil_size(g);
  typename GridFunction<Scalar>::Vector out =
      GridFunction<Scalar>::Vector::Constant(g.size(), detail::undefined<Scalar>());
  detail::laplacian_interior(g, u.values(), out);
  return u.with_values(std::move(out));
}

/// Second-order gradient: centered differences on interior nodes, one-sided
/// second-order differences on the boundary layer. Returns dim components.
template <typename Scalar>
std::vector<GridFunction<Scalar>> gradient(const GridFunction<Scalar>& u) {
  const Grid& g = u.grid();
  detail::require_stencil_size(g);
  const Scalar inv_2h = Scalar(1) / (Scalar(2) * Scalar(g.h));
  auto diff = [&](int i, int j, int di, int dj, int n, int pos) -> Scalar {
    auto at = [&](int s) { return u(i + s * di, j + s * dj); };
    if (pos == 0) return (-Scalar(3) * at(0) + Scalar(4) * at(1) - at(2)) * inv_2h;
    if (pos == n - 1) return (Scalar(3) * at(0) - Scalar(4) * at(-1) + at(-2)) * inv_2h;
    return (at(1) - at(-1)) * inv_2h;
  };
  std::vector<GridFunction<Scalar>> out;
  typename GridFunction<Scalar>::Vector dx(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) dx[g.index(i, j)] = diff(i, j, 1, 0, g.nx, i);
  out.push_back(u.with_values(std::move(dx)));
  if (g.dim == 2) {
    typename GridFunction<Scalar>::Vector dy(g.size());
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) dy[g.index(i, j)] = diff(i, j, 0, 1, g.ny, j);
    out.push_back(u.with_values(std::move(dy)));
  }
  return out;
}

/// Centered second derivatives (u_xx, u_xy, u_yy) on interior nodes of a 2D
/// grid; boundary nodes are NaN.
template <typename Scalar>
struct Hessian2D {
  GridFunction<Scalar> xx, xy, yy;
};

template <typename Scalar>
Hessian2D<Scalar> hessian(const GridFunction<Scalar>& u) {
  const Grid& g = u.grid();
  detail::require_stencil_size(g);
  if (g.dim != 2) throw std::invalid_argument("hessian: 2D grid required");
  using Vector = typename GridFunction<Scalar>::Vector;
  Vector xx = Vector::Constant(g.size(), detail::undefined<Scalar>());
  Vector xy = xx, yy = xx;
  const Scalar h = Scalar(g.h);
  const Scalar inv_h2 = Scalar(1) / (h * h);
  const Scalar inv_4h2 = inv_h2 / Scalar(4);
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) {
      const int k = g.index(i, j);
      xx[k] = (u(i - 1, j) - Scalar(2) * u(i, j) + u(i + 1, j)) * inv_h2;
      yy[k] = (u(i, j - 1) - Scalar(2) * u(i, j) + u(i, j + 1)) * inv_h2;
      xy[k] = (u(i + 1, j + 1) - u(i + 1, j - 1) - u(i - 1, j + 1) + u(i - 1, j - 1)) * inv_4h2;
    }
  return {u.with_values(std::move(xx)), u.with_values(std::move(xy)), u.with_values(std::move(yy))};
}

/// Zero level set of u, as points on sign-change edges.
struct FreeBoundary {
  std::vector<Point> points;
  std::vector<bool> singular;
  double grad_tol = 0.0;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  /// Points inside the closed ball B_r(center).
  std::vector<Point> points_in_ball(const Point& center, double r) const;
};

/// Default singular-point threshold: 10 * h * max|u|.
double default_grad_tol(const GridFunctiond& u);

/// Edges between a node with u > zero_tol and a node with u <= zero_tol carry
/// one point: the node itself when |u| <= zero_tol there, otherwise the linear
/// zero crossing. Points are flagged singular when the interpolated |grad u|
/// is <= grad_tol.
FreeBoundary extract_free_boundary(const GridFunctiond& u, double zero_tol, double grad_tol);

/// Cubic-convolution (Keys, a = -1/2) interpolation; reproduces quadratics.
/// Throws when the 4x4 support leaves the grid.
double cubic_interpolate(const GridFunctiond& f, const Point& p);
double bilinear_interpolate(const GridFunctiond& f, const Point& p);

struct PolarSamples {
  Point center = Point::Zero();
  double r = 0.0;
  Eigen::ArrayXd theta;
  Eigen::ArrayXd u, u_r, u_theta, u_rr, u_thetar, u_thetatheta, lap;
};

/// Holds nodal derivative fields of u so many circles can be sampled cheaply.
class PolarSampler {
 public:
  explicit PolarSampler(const GridFunctiond& u);
  /// Circle of radius r around center sampled at n_theta uniform angles.
  PolarSamples sample(const Point& center, double r, int n_theta) const;
  /// True when the circle plus a 2h margin lies inside the grid.
  bool fits(const Point& center, double r) const;
  const Grid& grid() const { return u_.grid(); }

 private:
  GridFunctiond u_, ux_, uy_, uxx_, uxy_, uyy_;
};

PolarSamples sample_circle(const GridFunctiond& u, const Point& center, double r, int n_theta);

/// Area of the axis-aligned box [x0,x1] x [y0,y1] inside the disk of radius r
/// centered at the origin (exact).
double disk_box_overlap(double x0, double x1, double y0, double y1, double r);

struct NodeWeight {
  int index;
  double weight;
};

/// Nodal-cell quadrature weights for B_r(center): each node owns the cell of
/// side h around it, weighted by the exact overlap of that cell with the ball.
/// In 1D the ball is the interval [c - r, c + r].
std::vector<NodeWeight> ball_weights(const Grid& g, const Point& center, double r);

/// Every second node of u (same origin, spacing 2h). Requires >= 5 coarse nodes per axis.
GridFunctiond coarsen(const GridFunctiond& u);

void write_csv(std::ostream& os, const GridFunctiond& u);
GridFunctiond read_csv(std::istream& is);
void write_csv_file(const std::string& path, const GridFunctiond& u);
GridFunctiond read_csv_file(const std::string& path);

}  // namespace fbp
