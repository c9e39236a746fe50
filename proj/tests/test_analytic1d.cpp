#include "fbp/analytic1d.hpp"

#include <doctest.h>

#include <cmath>

using namespace fbp;

namespace {

// Composite Simpson of |u''|^2 over [a, b].
double bending(const PiecewiseCubic& u, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  auto f = [&](double x) {
    const double d = u.eval(x, 2);
    return d * d;
  };
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_SUITE("analytic1d") {
  TEST_CASE("example 1 profile satisfies its boundary and free-boundary conditions") {
    const auto p = example1_profile(4.0);
    REQUIRE(p.kind == Example1Kind::fb);
    CHECK(p.a == doctest::Approx(4.0 - std::sqrt(3.0)));
    CHECK(p.u.eval(4.0, 0, PiecewiseCubic::Side::left) == doctest::Approx(1.0));
    CHECK(p.u.eval(4.0, 2, PiecewiseCubic::Side::left) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(p.u.eval(p.a, 0) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(p.u.eval(p.a, 1) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(p.u.eval(0.5) == 0.0);
    // Energy: int |u''|^2 + |{u > 0}|, integrated independently.
    const double J = bending(p.u, p.a, 4.0) + (4.0 - p.a);
    CHECK(J == doctest::Approx(example1_energy(4.0)).epsilon(1e-9));
  }

  TEST_CASE("example 1 threshold separates the two branches") {
    const double B = example1_threshold();
    CHECK(B == doctest::Approx(1 / std::sqrt(3.0) + std::sqrt(3.0)));
    CHECK(example1_profile(B - 1e-3).kind == Example1Kind::no_fb);
    CHECK(example1_profile(B + 1e-3).kind == Example1Kind::fb);
    CHECK(example1_energy(2.0) == doctest::Approx(2.0));
    // Above the threshold the free boundary strictly lowers the energy.
    CHECK(example1_energy(3.0) < 3.0);
    CHECK(example1_energy(3.0) == doctest::Approx(3.0 / std::pow(std::sqrt(3.0), 3) + std::sqrt(3.0)));
    const auto p = example1_profile(2.0);
    CHECK(std::isnan(p.a));
    CHECK(p.u.eval(1.0) == doctest::Approx(0.5));
  }

  TEST_CASE("example 2 satisfies the reduced equations") {
    for (double eps : {0.02, 0.1, 0.3}) {
      const auto s = example2_solve(eps);
      // a^2 = (alpha - 1) / (alpha + 1) and 3 a alpha (1 + alpha)^2 = eps.
      CHECK(s.a * s.a == doctest::Approx((s.alpha - 1) / (s.alpha + 1)).epsilon(1e-9));
      CHECK(3 * s.a * s.alpha * (1 + s.alpha) * (1 + s.alpha) == doctest::Approx(eps).epsilon(1e-6));
      CHECK(example2_dpsi_da(s.a, s.alpha, eps) == doctest::Approx(0.0).epsilon(1e-8).scale(1.0));
      CHECK(example2_dpsi_dalpha(s.a, s.alpha) == doctest::Approx(0.0).epsilon(1e-8).scale(1.0));
      CHECK(s.u.eval(-1.0) == doctest::Approx(-1.0));
      CHECK(s.u.eval(1.0, 0, PiecewiseCubic::Side::left) == doctest::Approx(1.0));
      CHECK(s.u.eval(-1.0, 2) == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
      CHECK(s.u.eval(1.0, 2, PiecewiseCubic::Side::left) == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
      CHECK(s.u.eval(s.a) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
      // C^2 at the crossing and the jump condition on the third derivative.
      CHECK(s.ddu_minus() == doctest::Approx(s.ddu_plus()).epsilon(1e-9));
      const auto j = junction_check(s.alpha, s.ddu_minus(), s.ddu_plus(), s.dddu_minus(), s.dddu_plus(), 1e-12, eps);
      CHECK(j.branch == JunctionBranch::X2);
      CHECK(j.residual_X2 == doctest::Approx(0.0).epsilon(1e-8).scale(1.0));
      CHECK(std::isnan(j.residual_X1));
    }
    CHECK_THROWS(example2_solve(0.0));
    CHECK_THROWS(example2_solve(0.9));
  }

  TEST_CASE("example 4 profile meets the degenerate junction condition") {
    const auto u = example4_profile();
    CHECK(u.eval(0.0, 0, PiecewiseCubic::Side::left) == doctest::Approx(0.0));
    CHECK(u.eval(0.0, 1, PiecewiseCubic::Side::left) == doctest::Approx(0.0));
    CHECK(u.eval(0.0, 1, PiecewiseCubic::Side::right) == doctest::Approx(0.0));
    const double ddp = u.eval(0.0, 2, PiecewiseCubic::Side::right), ddm = u.eval(0.0, 2, PiecewiseCubic::Side::left);
    CHECK(ddp == doctest::Approx(std::sqrt(2.0)));
    CHECK(ddm == doctest::Approx(-1.0));
    const auto j = junction_check(0.0, ddm, ddp, u.eval(0.0, 3, PiecewiseCubic::Side::left),
                                  u.eval(0.0, 3, PiecewiseCubic::Side::right), 1e-12);
    CHECK(j.branch == JunctionBranch::X1);
    CHECK(j.residual_X1 == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(u.eval(-0.5) < 0.0);
    CHECK(u.eval(0.5) > 0.0);
  }

  TEST_CASE("piecewise cubic rejects points outside its range") {
    const auto u = example4_profile();
    CHECK_THROWS(u.eval(1.5));
    CHECK_THROWS(u.eval(0.0, 4));
  }

  TEST_CASE("example 1 energy never exceeds the linear competitor") {
    for (double A = 0.25; A < 8.0; A += 0.25) {
      const double J = example1_energy(A);
      CHECK(J <= A + 1e-12);
      if (example1_profile(A).kind == Example1Kind::no_fb)
        CHECK(J == doctest::Approx(A));
      else
        CHECK(J < A);
    }
  }

  TEST_CASE("X1 residual depends only on the jump of |u''|^2") {
    const double a = 0.7, b = -1.3;
    const double base = junction_check(0.0, a, b, 0.1, 0.2, 1e-9).residual_X1;
    CHECK(junction_check(0.0, -a, b, 3.0, -2.0, 1e-9).residual_X1 == doctest::Approx(base));
    CHECK(junction_check(0.0, a, -b, 0.0, 0.0, 1e-9).residual_X1 == doctest::Approx(base));
    CHECK(junction_check(0.0, -a, -b, 0.1, 0.2, 1e-9).residual_X1 == doctest::Approx(base));
  }
}
