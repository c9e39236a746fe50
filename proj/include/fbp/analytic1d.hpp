#pragma once

#include <array>
#include <string>
#include <vector>

namespace fbp {

/// Piecewise cubic on [knots.front(), knots.back()]. Piece k covers
/// [knots[k], knots[k+1]] and is the polynomial sum_m coeffs[k][m] (x - origins[k])^m.
struct PiecewiseCubic {
  enum class Side { left, right };

  std::vector<double> knots;
  std::vector<double> origins;
  std::vector<std::array<double, 4>> coeffs;

  /// Derivative of the given order (0..3). At an interior knot the piece on
  /// `side` is used; outside the range an exception is thrown.
  double eval(double x, int order = 0, Side side = Side::right) const;
};

enum class Example1Kind { no_fb, threshold, fb };
std::string to_string(Example1Kind k);

/// Energy threshold B = 1/sqrt(3) + sqrt(3).
double example1_threshold();

/// One-phase minimizer on (0, A) with u(0) = u''(0) = 0, u(A) = 1, u''(A) = 0.
/// For kind == fb, u vanishes on [0, a] and
///   u = beta (x - a)^2 + gamma (x - a)^3,  beta = 3 / (2 (A - a)^2),  gamma = -1 / (2 (A - a)^3)
/// on (a, A] with a = A - sqrt(3). For no_fb, a is NaN and u = x / A.
/// At the threshold the free-boundary branch is returned (a = A - sqrt(3) >= 0).
struct Example1Profile {
  double A = 0.0;
  double a = 0.0;
  Example1Kind kind = Example1Kind::no_fb;
  double beta = 0.0;
  double gamma = 0.0;
  PiecewiseCubic u;
};

Example1Profile example1_profile(double A);

/// min(A, Phi(A - sqrt(3))) where Phi(a) = 3 / (A - a)^3 + (A - a); A when no free boundary.
double example1_energy(double A);

/// Two-phase minimizer of int |u''|^2 + w chi_{u>0} on (-1, 1), u(-1) = -1, u(1) = 1,
/// Navier ends, with a single crossing at a and slope alpha there:
///   u = -alpha_lo (a - x) + beta_lo (a - x)^2 + gamma_lo (a - x)^3   on (-1, a)   (alpha_lo = alpha)
///   u =  alpha    (x - a) + beta_hi (x - a)^2 + gamma_hi (x - a)^3   on [a, 1).
struct Example2Solution {
  double eps_weight = 0.0;
  double a = 0.0;
  double alpha = 0.0;
  double beta_lo = 0.0, gamma_lo = 0.0;
  double beta_hi = 0.0, gamma_hi = 0.0;
  std::vector<double> other_roots;  ///< further alpha roots in the bracket, if any
  PiecewiseCubic u;

  double ddu_minus() const { return 2.0 * beta_lo; }
  double ddu_plus() const { return 2.0 * beta_hi; }
  double dddu_minus() const { return -6.0 * gamma_lo; }
  double dddu_plus() const { return 6.0 * gamma_hi; }
};

/// d Psi / d a of the reduced two-parameter energy.
double example2_dpsi_da(double a, double alpha, double eps_weight);
/// d Psi / d alpha.
double example2_dpsi_dalpha(double a, double alpha);

/// Bisection on alpha in (1, 1 + 10 eps_weight) after eliminating a^2 = (alpha-1)/(alpha+1).
/// eps_weight must lie in (0, 0.5]; throws std::domain_error when no root is bracketed.
Example2Solution example2_solve(double eps_weight);

enum class JunctionBranch { X1, X2 };
std::string to_string(JunctionBranch b);

/// Residuals of the 1D free-boundary conditions; the inactive one is NaN.
/// X1 (|du| <= tol): | |ddu+|^2 - |ddu-|^2 - weight |.
/// X2 otherwise:     | dddu+ - dddu- + weight / (2 du) |.
/// "+" is the positive-phase side.
struct JunctionReport {
  double residual_X1 = 0.0;
  double residual_X2 = 0.0;
  JunctionBranch branch = JunctionBranch::X1;
};

JunctionReport junction_check(double du, double ddu_minus, double ddu_plus, double dddu_minus, double dddu_plus,
                              double tol, double weight = 1.0);

/// u = sqrt(2) x^2 (3 - x) / 6 on [0, 1], -x^2 (3 + x) / 6 on [-1, 0).
PiecewiseCubic example4_profile();

}  // namespace fbp
