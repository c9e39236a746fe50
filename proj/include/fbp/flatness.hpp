#pragma once

#include "fbp/grid.hpp"

#include <string>
#include <vector>

namespace fbp {

/// p(x) = lambda1 y1^2 + lambda2 y2^2 with y = R(-phi) x, i.e. y1 = x.(cos phi, sin phi).
struct QuadraticForm2D {
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  double phi = 0.0;

  /// lambda1 = 1, lambda2 = rho in [-1, 1], phi reduced to [0, pi).
  static QuadraticForm2D from_ratio(double phi, double rho);

  double operator()(const Point& x) const;
  /// Rescaled so max(|lambda1|, |lambda2|) = 1; throws for the zero form.
  QuadraticForm2D normalized() const;
};

/// Number of eigenvalues with |lambda| > tol.
int rank_stratum(const QuadraticForm2D& p, double tol = 1e-12);

/// Exact Hausdorff distance of two finite sets (bucket grid nearest-neighbour search).
double hausdorff(const std::vector<Point>& A, const std::vector<Point>& B);
/// O(nm) reference.
double hausdorff_brute_force(const std::vector<Point>& A, const std::vector<Point>& B);

/// Zero set of p(x - x0) inside the closed ball B_r(x0): n points per line, uniform in
/// the signed distance along the line (two lines for an indefinite form, one for
/// rank one, {x0} for a definite form). n >= 64.
std::vector<Point> zero_set_samples(const QuadraticForm2D& p, const Point& x0, double r, int n = 256);

struct FlatnessOptions {
  int n_phi = 64;
  int n_rho = 33;
  int samples = 256;          ///< zero-set points per line
  int refine_starts = 3;      ///< Nelder-Mead runs from the best grid candidates
  std::vector<double> deltas = {0.01, 0.05, 0.1, 0.2};
};

struct FlatnessReport {
  Point x0 = Point::Zero();
  double r = 0.0;
  double h_value = 0.0;        ///< running minimum over every probed form
  double resolution = 0.0;     ///< zero-set sampling half-spacing
  QuadraticForm2D best_form;
  int probed = 0;
  int fb_points = 0;
  std::vector<double> deltas;
  std::vector<bool> flat_at;   ///< h_value < delta r
};

/// inf over normalized forms of HD(fb cap B_r(x0), S(p, x0) cap B_r(x0)), searched on a
/// (phi, lambda2/lambda1) grid then refined with Nelder-Mead.
FlatnessReport flatness_h(const FreeBoundary& fb, const Point& x0, double r, const FlatnessOptions& opts = {});

/// Hausdorff distance for one form (h_min).
double flatness_h_min(const std::vector<Point>& fb_in_ball, const QuadraticForm2D& p, const Point& x0, double r,
                      int samples = 256);

enum class BlowupType { Type1, Type2, Type3, Undetermined };
std::string to_string(BlowupType t);

struct BlowupScaleFit {
  double rho = 0.0;
  double residual[3] = {0.0, 0.0, 0.0};  ///< relative residuals of Type1, Type2, Type3 templates
  BlowupType best = BlowupType::Undetermined;
  int nodes = 0;
};

struct BlowupClass {
  BlowupType type = BlowupType::Undetermined;
  std::vector<double> amplitudes;   ///< Type1: Hessian/2 eigenvalues; Type2/3: a
  double orientation = 0.0;         ///< angle of e (Type2/3) or of the first eigenvector (Type1)
  std::vector<BlowupScaleFit> scales;
};

struct BlowupOptions {
  double undetermined_threshold = 0.2;
  double tie_tolerance = 0.02;      ///< residual gap under which the simpler template wins
};

/// Least-squares fits of u(x0 + rho z) / rho^2 on the annulus rho/2 <= |x - x0| <= rho,
/// away from a 2h band around the sign change, to c11 z1^2 + c12 z1 z2 + c22 z2^2,
/// a (z.e)^2 and a ((z.e)^+)^2. Scales must be >= 8h and fit the grid.
BlowupClass classify_blowup(const GridFunctiond& u, const Point& x0, const std::vector<double>& scales,
                            const BlowupOptions& opts = {});

/// E of a degree-2 homogeneous profile supported on the cone theta1 < theta < theta2.
double cone_energy(double theta1, double theta2);

struct TangentFit {
  Point direction = Point::UnitX();   ///< at the smallest radius
  std::vector<double> radii;
  std::vector<double> angles;         ///< best direction angle per radius
  std::vector<double> densities;      ///< |D| / |B_rho| at the best direction
};

/// Per radius, the unit e minimizing |({u > 0} symmetric-difference {(x - xbar).e > 0}) cap B_rho|,
/// with nodes weighted by clipped-cell area and the half-plane by fractional cell coverage.
/// Scan of 360 directions, then golden-section refinement.
TangentFit tangent_halfplane_fit(const GridFunctiond& u, const Point& xbar, const std::vector<double>& radii);

/// |D| / |B_rho| for one direction.
double halfplane_mismatch(const GridFunctiond& u, const Point& xbar, double rho, double angle);

}  // namespace fbp
