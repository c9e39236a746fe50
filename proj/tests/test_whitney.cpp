#include "fbp/diagnostics.hpp"
#include "fbp/errors.hpp"
#include "fbp/presets.hpp"
#include "fbp/whitney.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace fbp;

TEST_SUITE("whitney") {
  TEST_CASE("mask distance matches brute force") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> d(-0.5, 0.5);
    std::vector<Point> pts;
    for (int k = 0; k < 6; ++k) pts.emplace_back(d(rng), d(rng));
    const auto E = CompactMask::from_points(5, Point::Zero(), pts);
    const auto dist = mask_distance(E);
    const int n = E.side();
    const double s = E.cell_size();
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double best = INFINITY;
        for (int q = 0; q < n; ++q)
          for (int p = 0; p < n; ++p)
            if (E(p, q)) {
              const double dx = std::max(std::abs(p - i) - 1, 0) * s, dy = std::max(std::abs(q - j) - 1, 0) * s;
              best = std::min(best, std::hypot(dx, dy));
            }
        CHECK(dist(i, j) == doctest::Approx(best).epsilon(1e-12));
      }
  }

  TEST_CASE("decomposition of a half-plane is a disjoint Whitney family") {
    const auto E = CompactMask::from_predicate(7, Point::Zero(), [](const Point& p) { return p.y() <= 0; });
    const auto dec = decompose(E);
    const auto a = audit(E, dec);
    CHECK(a.disjoint);
    CHECK(a.in_E == E.count());
    CHECK(a.covered + a.uncovered + a.in_E == E.cells.size());
    CHECK(a.min_ratio >= 1.0 - 1e-12);
    CHECK(a.max_ratio <= 4.0 + 1e-12);
    CHECK(dec.c1 >= 1.0 - 1e-12);
    CHECK(dec.c2 <= 4.0 + 1e-12);
    const auto cov = weak_c_covering(dec, Point::Zero(), 3);
    CHECK(cov.holds);
    CHECK(cov.c_est == doctest::Approx(2.0));
  }

  TEST_CASE("a cusp defeats a fixed covering constant") {
    const auto E = CompactMask::from_predicate(
        8, Point::Zero(), [](const Point& p) { return !(p.y() > 0 && std::abs(p.x()) < std::pow(p.y(), 4)); });
    const auto cov = weak_c_covering(decompose(E), Point::Zero(), 3, 6.0);
    CHECK(!cov.holds);
    CHECK(cov.failed_level >= 3);
  }

  TEST_CASE("degenerate masks are rejected") {
    CHECK_THROWS(decompose(CompactMask::empty(4, Point::Zero())));
    const auto full = CompactMask::from_predicate(4, Point::Zero(), [](const Point&) { return true; });
    CHECK_THROWS(decompose(full));
    CHECK_THROWS(CompactMask::empty(0, Point::Zero()));
  }

  TEST_CASE("run-length mask format round trips") {
    const auto E = CompactMask::from_predicate(6, Point(0.25, -1.0),
                                               [](const Point& p) { return std::abs(p.x() - 0.25) + std::abs(p.y() + 1) < 0.3; });
    std::stringstream ss;
    write_mask(ss, E);
    const std::string text = ss.str();
    CHECK(text.rfind("# 6,0.25,-1\n", 0) == 0);
    std::stringstream in(text);
    const auto back = read_mask(in);
    CHECK(back.K == E.K);
    CHECK(back.x0 == E.x0);
    CHECK(back.cells == E.cells);
    std::stringstream bad("# 3,0,0\n1 2\n");
    CHECK_THROWS_AS(read_mask(bad), IoError);
  }

  TEST_CASE("decomposition is translation-equivariant") {
    auto in_set = [](const Point& p) { return p.x() * p.x() + 2 * p.y() * p.y() <= 0.05; };
    const Point t(0.375, -1.25);
    const auto A = CompactMask::from_predicate(6, Point::Zero(), in_set);
    const auto B = CompactMask::from_predicate(6, t, [&](const Point& p) { return in_set(p - t); });
    REQUIRE(A.cells == B.cells);
    const auto da = decompose(A), db = decompose(B);
    REQUIRE(da.cubes.size() == db.cubes.size());
    for (std::size_t k = 0; k < da.cubes.size(); ++k) {
      const auto& qa = da.cubes[k];
      const auto& qb = db.cubes[k];
      CHECK(qa.level == qb.level);
      CHECK((db.corner(qb) - da.corner(qa) - t).norm() < 1e-12);
    }
  }

  TEST_CASE("covering at a free-boundary point of the half-plane solution goes with nondegeneracy") {
    const Grid g = Grid::square(-1.0, 1.0, 257);
    const auto u = analytic_field(FieldPreset::halfplane, g);
    const auto E = CompactMask::from_field(7, Point::Zero(), u);
    const auto cov = weak_c_covering(decompose(E), Point::Zero(), 3);
    REQUIRE(cov.holds);
    for (double v : nondegeneracy_ratio(u, Point::Zero(), {0.05, 0.1, 0.2}, true).values) CHECK(v > 0.5);
  }
}
