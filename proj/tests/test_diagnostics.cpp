#include "fbp/diagnostics.hpp"
#include "fbp/presets.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace fbp;

TEST_SUITE("diagnostics") {
  TEST_CASE("monotone energy is constant for a homogeneous half-plane solution") {
    const Grid g = Grid::square(-1.0, 1.0, 257);
    const auto u = analytic_field(FieldPreset::halfplane, g, 1.0, 0.4);
    const auto t = monotone_energy(u, Point::Zero(), {0.2, 0.3, 0.4, 0.5});
    const auto [lo, hi] = std::minmax_element(t.E.begin(), t.E.end());
    CHECK((*hi - *lo) / *hi < 5e-3);
    for (double q : t.Q_integral) CHECK(std::abs(q) < 1e-3);
    CHECK(q_deficit(u, Point::Zero(), 0.3) < 1e-2);
  }

  TEST_CASE("monotone energy of |x|^3 against its closed form") {
    // E(r) = 17 pi r^2 / 8 + pi / 4 by direct integration in polar coordinates.
    const Grid g = Grid::square(-1.0, 1.0, 513);
    const auto u = analytic_field(FieldPreset::r3, g);
    const std::vector<double> radii{0.1, 0.2, 0.3, 0.4};
    const auto t = monotone_energy(u, Point::Zero(), radii);
    for (std::size_t k = 0; k < radii.size(); ++k)
      CHECK(t.E[k] == doctest::Approx(17 * std::numbers::pi * radii[k] * radii[k] / 8 + std::numbers::pi / 4).epsilon(5e-3));
  }

  TEST_CASE("monotone energy preconditions") {
    const Grid g = Grid::square(-1.0, 1.0, 65);
    const auto u = analytic_field(FieldPreset::cone, g);
    CHECK_THROWS(monotone_energy(u, Point::Zero(), {0.3, 0.2}));
    CHECK_THROWS(monotone_energy(u, Point::Zero(), {0.01, 0.2}));
    CHECK_THROWS(monotone_energy(u, Point::Zero(), {0.2, 0.99}));
  }

  TEST_CASE("nondegeneracy and density of the half-plane solution") {
    const Grid g = Grid::square(-1.0, 1.0, 513);
    const auto u = analytic_field(FieldPreset::halfplane, g);
    const auto nd = nondegeneracy_ratio(u, Point::Zero(), {0.1, 0.2, 0.4});
    for (double v : nd.values) {
      CHECK(v <= 1.0 + 1e-12);
      CHECK(v > 0.9);
    }
    const auto d = density_positivity(u, Point::Zero(), {0.2, 0.4});
    for (double v : d.values) CHECK(v == doctest::Approx(0.5).epsilon(0.02));
    const auto dq = density_positivity(analytic_field(FieldPreset::quadratic, g), Point(0.3, 0.1), {0.2});
    CHECK(dq.values[0] == doctest::Approx(1.0).epsilon(1e-3));
  }

  TEST_CASE("Hessian decay ratio") {
    const Grid g = Grid::square(-1.0, 1.0, 129);
    const auto zero = GridFunctiond(g);
    CHECK(hessian_decay_check(zero, Point::Zero(), {0.1}).values[0] == 0.0);
    const auto u = analytic_field(FieldPreset::halfplane, g);
    const auto t = hessian_decay_check(u, Point::Zero(), {0.05, 0.1, 0.2});
    for (double v : t.values) {
      CHECK(std::isfinite(v));
      CHECK(v > 0.0);
    }
    CHECK_THROWS(hessian_decay_check(u, Point::Zero(), {0.3}));
  }

  TEST_CASE("BMO of constants vanishes and of a step does not") {
    const Grid g = Grid::square(-1.0, 1.0, 129);
    const Box box{-0.3, 0.3, -0.3, 0.3};
    const auto c = GridFunctiond::sample(g, [](double, double) { return 2.5; });
    CHECK(bmo_seminorm(c, box, {0.1, 0.2}).value == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    const auto step = GridFunctiond::sample(g, [](double x, double) { return x > 0 ? 2.0 : 0.0; });
    const auto b = bmo_seminorm(step, box, {0.1, 0.2});
    CHECK(b.value > 0.5);
    CHECK(b.centers > 0);
  }

  TEST_CASE("Laplacian lower bound constant and inequality") {
    const Grid g = Grid::square(-1.0, 1.0, 129);
    const auto u = analytic_field(FieldPreset::cone, g);
    const auto l = laplacian_lower_bound(u, 0.1);
    CHECK(l.constant == doctest::Approx(4.0 / std::numbers::pi));
    CHECK(l.min_laplacian >= l.bound);
    const auto l1 = laplacian_lower_bound(GridFunctiond::sample(Grid::interval(-1, 1, 65), [](double x) { return -x * x; }), 0.2);
    CHECK(l1.constant == doctest::Approx(1.0));
    CHECK(l1.min_laplacian == doctest::Approx(-2.0));
  }

  TEST_CASE("one-sided jet recovers cubic derivatives") {
    const Grid g = Grid::interval(-1.0, 1.0, 401);
    const auto u = GridFunctiond::sample(g, [](double x) {
      const double s = x - 0.3;
      return s < 0 ? 1 - 2 * s + 3 * s * s : 1 + s - s * s + 4 * s * s * s;
    });
    const auto r = one_sided_jet(u, 0.3, JetSide::right);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.d1 == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(r.d2 == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(r.d3 == doctest::Approx(24.0).epsilon(1e-5));
    const auto l = one_sided_jet(u, 0.3, JetSide::left);
    CHECK(l.d1 == doctest::Approx(-2.0).epsilon(1e-7));
    CHECK(l.d2 == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(l.d3 == doctest::Approx(0.0).epsilon(1e-4).scale(1.0));
  }

  TEST_CASE("degree-2 homogeneous profiles: E equals the cone energy") {
    const Grid g = Grid::square(-1.0, 1.0, 513);
    const std::vector<double> radii{0.1, 0.25, 0.4};
    for (double c : {0.5, 1.0, 2.0}) {
      const auto t = monotone_energy(analytic_field(FieldPreset::halfplane, g, c, 0.7), Point::Zero(), radii);
      for (double e : t.E) CHECK(e == doctest::Approx(std::numbers::pi / 8).epsilon(0.01));
    }
    const auto q = monotone_energy(analytic_field(FieldPreset::quadratic, g), Point::Zero(), radii);
    for (double e : q.E) CHECK(e == doctest::Approx(std::numbers::pi / 4).epsilon(0.01));
  }

  TEST_CASE("E is compatible with blow-up rescaling") {
    // For u = |x|^3, u_s(x) = u(s x) / s^2 = s |x|^3, so E_{u_s}(r) = E_u(s r).
    const Grid g = Grid::square(-1.0, 1.0, 513);
    const double s = 0.5;
    const auto u = analytic_field(FieldPreset::r3, g);
    const auto us = analytic_field(FieldPreset::r3, g, s);
    const auto a = monotone_energy(us, Point::Zero(), {0.2, 0.4, 0.6});
    const auto b = monotone_energy(u, Point::Zero(), {0.1, 0.2, 0.3});
    for (std::size_t k = 0; k < 3; ++k) CHECK(a.E[k] == doctest::Approx(b.E[k]).epsilon(5e-3));
  }

  TEST_CASE("the Q integrand is nonnegative") {
    const Grid g = Grid::square(-1.0, 1.0, 257);
    const auto u = GridFunctiond::sample(g, [](double x, double y) { return std::sin(2 * x) * y + x * x * x; });
    for (double r : {0.1, 0.3, 0.5}) CHECK(q_deficit(u, Point(0.05, 0.1), r) >= 0.0);
    const auto t = monotone_energy(u, Point(0.05, 0.1), {0.1, 0.2, 0.3});
    for (double v : t.Q_integral) CHECK(v >= 0.0);
  }
}
