#include "fbp/energy.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace fbp;

TEST_SUITE("energy") {
  TEST_CASE("1D parabola: both terms by hand") {
    const Grid g = Grid::interval(-1.0, 1.0, 41);
    const auto u = GridFunctiond::sample(g, [](double x) { return x * x - 0.25; });
    const auto e = evaluate(u, EnergySpec{});
    // Lap u = 2 at all 39 interior nodes; u > 0 where |x| > 1/2.
    int positive = 0;
    for (int i = 1; i < g.nx - 1; ++i) positive += (g.x(i) * g.x(i) - 0.25 > 0);
    CHECK(e.biharm == doctest::Approx(4.0 * 39 * g.h));
    CHECK(e.volume == doctest::Approx(positive * g.h));
    CHECK(e.total == doctest::Approx(e.biharm + e.volume));
  }

  TEST_CASE("chi weight scales the volume term only") {
    const Grid g = Grid::square(-1.0, 1.0, 21);
    const auto u = GridFunctiond::sample(g, [](double x, double y) { return x + y * y; });
    EnergySpec a, b;
    b.chi_weight = 0.3;
    const auto ea = evaluate(u, a), eb = evaluate(u, b);
    CHECK(eb.biharm == doctest::Approx(ea.biharm));
    CHECK(eb.volume == doctest::Approx(0.3 * ea.volume));
  }

  TEST_CASE("smoothed Heaviside is C1") {
    const double eps = 0.2;
    CHECK(smoothed_heaviside(0.0, eps) == 0.0);
    CHECK(smoothed_heaviside(eps, eps) == doctest::Approx(1.0));
    CHECK(smoothed_heaviside(eps / 2, eps) == doctest::Approx(0.5));
    CHECK(smoothed_heaviside_derivative(1e-14, eps) == doctest::Approx(0.0).epsilon(1e-10));
    const double t = 0.07, d = 1e-6;
    CHECK(smoothed_heaviside_derivative(t, eps) ==
          doctest::Approx((smoothed_heaviside(t + d, eps) - smoothed_heaviside(t - d, eps)) / (2 * d)).epsilon(1e-6));
  }

  TEST_CASE("smoothed gradient matches central differences") {
    for (int dim : {1, 2}) {
      const Grid g = dim == 1 ? Grid::interval(0.0, 1.0, 15) : Grid::square(0.0, 1.0, 9);
      std::mt19937 rng(11 + dim);
      std::normal_distribution<double> nd(0.0, 0.1);
      Eigen::VectorXd v(g.size());
      for (auto& x : v) x = nd(rng);
      const GridFunctiond u(g, v);
      EnergySpec spec;
      spec.epsilon = 0.15;
      spec.chi_weight = 0.7;
      const auto grad = smoothed_gradient(u, spec);
      const double t = 1e-6;
      for (int k = 0; k < g.size(); ++k) {
        Eigen::VectorXd p = v, m = v;
        p[k] += t;
        m[k] -= t;
        const double fd = u.grid().on_boundary(k % g.nx, k / g.nx)
                              ? 0.0
                              : (evaluate(u.with_values(p), spec).total - evaluate(u.with_values(m), spec).total) / (2 * t);
        CHECK(grad[k] == doctest::Approx(fd).epsilon(1e-5).scale(1e-3));
      }
    }
  }

  TEST_CASE("domain variation of a half-plane solution") {
    // u = a (x1^+)^2 with a bump field phi = (0, 0) + e1 (1 - 4|x|^2)^3_+: the residual
    // tends to (1 - 4 a^2) * 16/35 and vanishes at a = 1/2.
    const Grid g = Grid::square(-1.0, 1.0, 257);
    auto residual = [&](double a) {
      const auto u = GridFunctiond::sample(g, [a](double x, double) { return x > 0 ? a * x * x : 0.0; });
      const auto bump = GridFunctiond::sample(g, [](double x, double y) {
        const double s = 1 - 4 * (x * x + y * y);
        return s > 0 ? s * s * s : 0.0;
      });
      const std::vector<GridFunctiond> phi{bump, GridFunctiond(g)};
      return domain_variation_residual(u, phi, EnergySpec{});
    };
    CHECK(std::abs(residual(0.5)) < 0.02);
    CHECK(residual(1.0) == doctest::Approx(-48.0 / 35.0).epsilon(0.08));
  }

  TEST_CASE("phase names round trip") {
    CHECK(phase_from_string(to_string(Phase::one_phase)) == Phase::one_phase);
    CHECK(phase_from_string(to_string(Phase::two_phase)) == Phase::two_phase);
    CHECK_THROWS(phase_from_string("three_phase"));
  }

  TEST_CASE("invalid specs throw") {
    const GridFunctiond u(Grid::interval(0, 1, 9));
    EnergySpec s;
    s.epsilon = -1;
    CHECK_THROWS_AS(evaluate(u, s), std::invalid_argument);
    CHECK_THROWS_AS(smoothed_gradient(u, EnergySpec{}), std::invalid_argument);
  }

  TEST_CASE("energy scaling under u_s(x) = u(s x) / s^2") {
    // With s = 1/2 on grids of equal node count, both terms on [-1, 1]^2 are s^-2 times
    // those of u on [-1/2, 1/2]^2; the discrete Laplacian scales exactly.
    const double s = 0.5;
    auto u = [](double x, double y) { return std::cos(3 * x) * y + x * x - 0.1; };
    const auto big = GridFunctiond::sample(Grid::square(-1.0, 1.0, 41),
                                           [&](double x, double y) { return u(s * x, s * y) / (s * s); });
    const auto small = GridFunctiond::sample(Grid::square(-s, s, 41), u);
    const auto eb = evaluate(big, EnergySpec{}), es = evaluate(small, EnergySpec{});
    CHECK(eb.biharm == doctest::Approx(es.biharm / (s * s)).epsilon(1e-10));
    CHECK(eb.volume == doctest::Approx(es.volume / (s * s)).epsilon(1e-10));
  }

  TEST_CASE("smoothed volume decreases as epsilon grows, biharmonic term unchanged") {
    const Grid g = Grid::square(-1.0, 1.0, 33);
    const auto u = GridFunctiond::sample(g, [](double x, double y) { return std::max(0.0, x + 0.2 * y); });
    double prev = evaluate(u, EnergySpec{}).volume;
    const double bh = evaluate(u, EnergySpec{}).biharm;
    for (double e : {1e-3, 1e-2, 0.1, 0.5}) {
      EnergySpec spec;
      spec.epsilon = e;
      const auto en = evaluate(u, spec);
      CHECK(en.biharm == bh);
      CHECK(en.volume <= prev);
      prev = en.volume;
    }
  }
}
