#include "fbp/analytic1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fbp {

double PiecewiseCubic::eval(double x, int order, Side side) const {
  if (order < 0 || order > 3) throw std::invalid_argument("PiecewiseCubic: derivative order must be 0..3");
  if (knots.size() < 2 || coeffs.size() + 1 != knots.size() || origins.size() != coeffs.size())
    throw std::logic_error("PiecewiseCubic: inconsistent pieces");
  if (!(x >= knots.front() && x <= knots.back())) throw std::out_of_range("PiecewiseCubic: x outside the knot range");

  std::size_t k = std::upper_bound(knots.begin(), knots.end(), x) - knots.begin();
  k = k == 0 ? 0 : k - 1;
  if (k >= coeffs.size()) k = coeffs.size() - 1;
  if (side == Side::left && k > 0 && x == knots[k]) --k;

  const auto& c = coeffs[k];
  const double t = x - origins[k];
  switch (order) {
    case 0: return c[0] + t * (c[1] + t * (c[2] + t * c[3]));
    case 1: return c[1] + t * (2.0 * c[2] + 3.0 * t * c[3]);
    case 2: return 2.0 * c[2] + 6.0 * t * c[3];
    default: return 6.0 * c[3];
  }
}

std::string to_string(Example1Kind k) {
  switch (k) {
    case Example1Kind::no_fb: return "no_fb";
    case Example1Kind::threshold: return "threshold";
    default: return "fb";
  }
}

std::string to_string(JunctionBranch b) { return b == JunctionBranch::X1 ? "X1" : "X2"; }

double example1_threshold() { return 1.0 / std::sqrt(3.0) + std::sqrt(3.0); }

Example1Profile example1_profile(double A) {
  if (!(A > 0.0) || !std::isfinite(A)) throw std::invalid_argument("example1_profile: A must be > 0");
  Example1Profile p;
  p.A = A;
  const double B = example1_threshold();
  if (A < B - 1e-12) {
    p.kind = Example1Kind::no_fb;
    p.a = std::numeric_limits<double>::quiet_NaN();
    p.u = {{0.0, A}, {0.0}, {{0.0, 1.0 / A, 0.0, 0.0}}};
    return p;
  }
  p.kind = std::abs(A - B) <= 1e-12 ? Example1Kind::threshold : Example1Kind::fb;
  p.a = A - std::sqrt(3.0);
  const double L = A - p.a;
  p.beta = 3.0 / (2.0 * L * L);
  p.gamma = -1.0 / (2.0 * L * L * L);
  p.u = {{0.0, p.a, A}, {0.0, p.a}, {{0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, p.beta, p.gamma}}};
  return p;
}

double example1_energy(double A) {
  const Example1Profile p = example1_profile(A);
  if (p.kind == Example1Kind::no_fb) return A;
  const double L = A - p.a;
  return std::min(A, 3.0 / (L * L * L) + L);
}

double example2_dpsi_da(double a, double alpha, double eps_weight) {
  const double a2 = a * a, a4 = a2 * a2;
  const double poly = alpha * a4 * (alpha + 2.0) + 2.0 * a2 * (2.0 * alpha - alpha * alpha + 3.0) + alpha * alpha -
                      6.0 * alpha + 6.0;
  const double q = 1.0 - a2;
  return 12.0 * a * poly / (q * q * q * q) - eps_weight;
}

double example2_dpsi_dalpha(double a, double alpha) {
  const double q = 1.0 - a * a;
  return 12.0 * (alpha - 1.0 - a * a * (1.0 + alpha)) / (q * q);
}

namespace {

double a_of_alpha(double alpha) { return std::sqrt((alpha - 1.0) / (alpha + 1.0)); }

template <typename F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Example2Solution example2_solve(double eps_weight) {
  if (!(eps_weight > 0.0 && eps_weight <= 0.5))
    throw std::invalid_argument("example2_solve: eps_weight must lie in (0, 0.5]");
  auto f = [&](double alpha) { return example2_dpsi_da(a_of_alpha(alpha), alpha, eps_weight); };

  const double lo = 1.0, hi = 1.0 + 10.0 * eps_weight;
  constexpr int scan = 4096;
  std::vector<double> roots;
  double x0 = lo, f0 = f(lo);
  for (int k = 1; k <= scan; ++k) {
    const double x1 = lo + (hi - lo) * k / scan;
    const double f1 = f(x1);
    if (f1 == 0.0 || (f0 < 0.0) != (f1 < 0.0)) roots.push_back(f1 == 0.0 ? x1 : bisect(f, x0, x1));
    x0 = x1;
    f0 = f1;
  }
  if (roots.empty()) throw std::domain_error("example2_solve: no root bracketed in (1, 1 + 10 eps_weight)");

  Example2Solution s;
  s.eps_weight = eps_weight;
  s.alpha = roots.front();
  s.other_roots.assign(roots.begin() + 1, roots.end());
  s.a = a_of_alpha(s.alpha);
  const double a = s.a, al = s.alpha;
  const double p = 1.0 + a, m = 1.0 - a;
  s.beta_lo = -3.0 * (1.0 - al * p) / (2.0 * p * p);
  s.gamma_lo = (1.0 - al * p) / (2.0 * p * p * p);
  s.beta_hi = 3.0 * (1.0 - al * m) / (2.0 * m * m);
  s.gamma_hi = (al * m - 1.0) / (2.0 * m * m * m);
  s.u = {{-1.0, a, 1.0}, {a, a}, {{0.0, al, s.beta_lo, -s.gamma_lo}, {0.0, al, s.beta_hi, s.gamma_hi}}};
  return s;
}

JunctionReport junction_check(double du, double ddu_minus, double ddu_plus, double dddu_minus, double dddu_plus,
                              double tol, double weight) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  JunctionReport r;
  if (std::abs(du) <= tol) {
    r.branch = JunctionBranch::X1;
    r.residual_X1 = std::abs(ddu_plus * ddu_plus - ddu_minus * ddu_minus - weight);
    r.residual_X2 = nan;
  } else {
    r.branch = JunctionBranch::X2;
    r.residual_X1 = nan;
    r.residual_X2 = std::abs(dddu_plus - dddu_minus + weight / (2.0 * du));
  }
  return r;
}

PiecewiseCubic example4_profile() {
  const double s2 = std::sqrt(2.0);
  return {{-1.0, 0.0, 1.0}, {0.0, 0.0}, {{0.0, 0.0, -0.5, -1.0 / 6.0}, {0.0, 0.0, s2 / 2.0, -s2 / 6.0}}};
}

}  // namespace fbp
