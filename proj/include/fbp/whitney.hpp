#pragma once

#include "fbp/grid.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fbp {

/// Occupancy of the 2^K x 2^K cells of the unit square centered at x0.
/// Cell (i, j) is [x0 - 1/2 + i s, x0 - 1/2 + (i+1) s] x [...] with s = 2^-K,
/// stored row-major with i along x.
struct CompactMask {
  int K = 0;
  Point x0 = Point::Zero();
  std::vector<std::uint8_t> cells;

  int side() const { return 1 << K; }
  double cell_size() const { return std::ldexp(1.0, -K); }
  bool operator()(int i, int j) const { return cells[static_cast<std::size_t>(j) * side() + i] != 0; }
  std::size_t count() const;
  void validate() const;

  static CompactMask empty(int K, const Point& x0);
  /// A cell is in E when any of samples^2 interior sample points satisfies in_set.
  static CompactMask from_predicate(int K, const Point& x0, const std::function<bool(const Point&)>& in_set,
                                    int samples = 4);
  /// Marks the cell containing each point (points outside the root are ignored).
  static CompactMask from_points(int K, const Point& x0, const std::vector<Point>& pts);
  /// E = {u <= 0} sampled bilinearly from a 2D grid function.
  static CompactMask from_field(int K, const Point& x0, const GridFunctiond& u, int samples = 2);
};

/// Closed dyadic square of side 2^-level; (i, j) index it inside the root.
struct WhitneyCube {
  int level = 0;
  int i = 0, j = 0;
};

struct WhitneyDecomposition {
  int K = 0;
  Point x0 = Point::Zero();
  std::vector<WhitneyCube> cubes;
  double c1 = 0.0;            ///< min dist(Q, E) / diam Q over cubes
  double c2 = 0.0;            ///< max dist(Q, E) / diam Q over cubes
  std::size_t residual_cells = 0;  ///< cells outside E left uncovered at level K

  double side(const WhitneyCube& q) const { return std::ldexp(1.0, -q.level); }
  double diam(const WhitneyCube& q) const { return std::sqrt(2.0) * side(q); }
  /// Lower-left corner in physical coordinates.
  Point corner(const WhitneyCube& q) const;
};

/// Per-cell distance to E, in physical units, with cells and E as closed squares.
/// Zero on E and on cells touching E.
Eigen::ArrayXXd mask_distance(const CompactMask& E);

/// Quadtree refinement from the root: a square disjoint from E is kept when
/// diam Q <= dist(Q, E) <= 4 diam Q, subdivided otherwise, down to level K.
WhitneyDecomposition decompose(const CompactMask& E);

struct WhitneyAudit {
  bool disjoint = true;
  std::size_t covered = 0, uncovered = 0, overlapping = 0, in_E = 0;
  double min_ratio = 0.0, max_ratio = 0.0;
};

/// Rasterizes the cubes back onto the mask to check disjointness, coverage and ratio bounds.
WhitneyAudit audit(const CompactMask& E, const WhitneyDecomposition& dec);

struct CoveringReport {
  bool holds = true;
  double c_est = 0.0;
  std::vector<int> levels;
  std::vector<double> c_per_level;   ///< min over level-k cubes of dist(x0, Q) 2^k; NaN when no cube
  int failed_level = -1;             ///< first level without a cube (or above c_bound)
  int verified_from = -1;            ///< smallest k such that every level k .. K-1 passes; -1 if none
};

/// Weak c-covering at x0 over levels k0 .. K-1. With c_bound, a level whose
/// constant exceeds it also fails.
CoveringReport weak_c_covering(const WhitneyDecomposition& dec, const Point& x0, int k0,
                               std::optional<double> c_bound = std::nullopt);

/// "# K,x0,y0" then one line per row (j = 0 first) of alternating run lengths,
/// starting with a run of empty cells (possibly 0).
void write_mask(std::ostream& os, const CompactMask& E);
CompactMask read_mask(std::istream& is);
void write_mask_file(const std::string& path, const CompactMask& E);
CompactMask read_mask_file(const std::string& path);

}  // namespace fbp
