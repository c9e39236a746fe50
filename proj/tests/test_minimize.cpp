#include "fbp/minimize.hpp"
#include "fbp/presets.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fbp;

TEST_SUITE("minimize") {
  TEST_CASE("example 1 free boundary at A - sqrt(3) on a coarse grid") {
    const Problem p = example1_problem(4.0, 257);
    const auto res = solve(p.boundary, p.spec, SolveOptions{});
    CHECK(res.report.converged);
    CHECK(res.u(0) == 0.0);
    CHECK(res.u(256) == 1.0);
    const auto a = free_boundary_1d(res.u, 0.0);
    REQUIRE(a.has_value());
    CHECK(*a == doctest::Approx(4.0 - std::sqrt(3.0)).epsilon(0.03));
    CHECK(res.report.sharp_energy.total == doctest::Approx(1 / std::sqrt(3.0) + std::sqrt(3.0)).epsilon(0.03));
    CHECK(res.u.values().minCoeff() >= 0.0);
  }

  TEST_CASE("example 1 below the threshold stays positive") {
    const Problem p = example1_problem(2.0, 257);
    const auto res = solve(p.boundary, p.spec, SolveOptions{});
    CHECK(res.report.converged);
    CHECK(res.report.sharp_energy.total == doctest::Approx(2.0).epsilon(0.01));
    for (int i = 1; i < 256; ++i) CHECK(res.u(i) > 0.0);
  }

  TEST_CASE("seeded initial guess is reproducible and keeps the boundary") {
    const Grid g = Grid::square(0.0, 1.0, 17);
    const auto b = GridFunctiond::sample(g, [](double x, double y) { return x - y; });
    const auto u1 = initial_guess(b, 0.1, 5), u2 = initial_guess(b, 0.1, 5), u3 = initial_guess(b, 0.1, 6);
    CHECK((u1.values().array() == u2.values().array()).all());
    CHECK(!(u1.values().array() == u3.values().array()).all());
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (g.on_boundary(i, j)) CHECK(u1(i, j) == b(i, j));
  }

  TEST_CASE("schedules decrease and end on the grid scale") {
    const Grid g = Grid::interval(0.0, 1.0, 101);
    const auto d = direct_schedule(g, 2.0), h = homotopy_schedule(g, 2.0);
    CHECK(d.size() == 3);
    CHECK(d.back() == doctest::Approx(10 * g.h * g.h * 2.0));
    CHECK(h.front() == doctest::Approx(8.0));
    CHECK(h.back() == doctest::Approx(d.back()));
    for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] < h[k - 1]);
  }

  TEST_CASE("free_boundary_1d on a synthetic profile") {
    const Grid g = Grid::interval(0.0, 1.0, 11);
    const auto u = GridFunctiond::sample(g, [](double x) { return x < 0.35 ? 0.0 : x - 0.35; });
    const auto a = free_boundary_1d(u, 0.0);
    REQUIRE(a.has_value());
    CHECK(*a == doctest::Approx(0.3));
    const auto lin = GridFunctiond::sample(g, [](double x) { return x - 0.35; });
    REQUIRE(free_boundary_1d(lin, 0.0).has_value());
    CHECK(*free_boundary_1d(lin, 0.0) == doctest::Approx(0.35));
    const auto pos = GridFunctiond::sample(g, [](double x) { return 1 + x; });
    CHECK(!free_boundary_1d(pos, 0.0).has_value());
  }

  TEST_CASE("option validation") {
    SolveOptions o;
    o.continuation = {0.1, 0.2};
    CHECK_THROWS_AS(o.validate(), std::invalid_argument);
    o = SolveOptions{};
    o.memory = 0;
    CHECK_THROWS_AS(o.validate(), std::invalid_argument);
  }

  TEST_CASE("warm-started stages never increase their own energy") {
    const Problem p = example3_problem(10.0, 257);
    const auto res = solve(p.boundary, p.spec, SolveOptions{});
    const auto& st = res.report.stages;
    REQUIRE(st.size() >= 2);
    for (std::size_t k = 1; k < st.size(); ++k) {
      REQUIRE(!st[k].totals.empty());
      for (std::size_t i = 1; i < st[k].totals.size(); ++i)
        CHECK(st[k].totals[i] <= st[k].totals[i - 1] * (1 + 1e-9));
      CHECK(st[k].energy.total <= st[k].totals.front() * (1 + 1e-9));
    }
  }

  TEST_CASE("two-phase minimizer: random local perturbations do not lower the energy") {
    const Problem p = example2_problem(0.1, 257);
    const auto res = solve(p.boundary, p.spec, SolveOptions{});
    REQUIRE(res.report.converged);
    const Grid& g = res.u.grid();
    const double J0 = res.report.sharp_energy.total;
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> centre(10, g.nx - 11);
    std::normal_distribution<double> amp(0.0, 1e-4);
    for (int trial = 0; trial < 50; ++trial) {
      const int c = centre(rng);
      const double a = amp(rng);
      Eigen::VectorXd v = res.u.values();
      for (int k = -8; k <= 8; ++k) v[c + k] += a * std::pow(std::cos(k * 3.14159265358979 / 18), 2);
      CHECK(evaluate(res.u.with_values(v), p.spec).total >= J0 - 1e-10);
    }
  }

  TEST_CASE("two-phase minimizer is weakly super-biharmonic") {
    const Problem p = example2_problem(0.1, 257);
    const auto res = solve(p.boundary, p.spec, SolveOptions{});
    const Grid& g = res.u.grid();
    const auto L = laplacian(res.u);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> centre(-0.8, 0.8), width(0.05, 0.2);
    for (int trial = 0; trial < 20; ++trial) {
      const double c = centre(rng), w = width(rng);
      const auto phi = GridFunctiond::sample(g, [&](double x) {
        const double t = 1 - (x - c) * (x - c) / (w * w);
        return t > 0 ? t * t * t : 0.0;
      });
      const auto Lphi = laplacian(phi);
      double pairing = 0;
      for (int i = 1; i < g.nx - 1; ++i) pairing += L(i) * Lphi(i) * g.h;
      CHECK(pairing <= 1e-3);
    }
  }

  TEST_CASE("a one-sided quadratic layer is not a local minimizer") {
    const Grid g = Grid::square(-1.0, 1.0, 33);
    const auto start = GridFunctiond::sample(g, [](double, double y) { return y > 0 ? y * y : 0.0; });
    EnergySpec spec;
    SolveOptions opts;
    opts.continuation = {10 * g.h * g.h};
    const auto res = solve_from(start, spec, opts);
    CHECK(res.report.sharp_energy.total < evaluate(start, spec).total - 1e-6);
  }
}
