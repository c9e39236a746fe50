#include "fbp/flatness.hpp"
#include "fbp/presets.hpp"

#include <doctest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <random>

using namespace fbp;

namespace {

std::vector<Point> random_points(std::mt19937& rng, int n, double spread) {
  std::uniform_real_distribution<double> d(-spread, spread);
  std::vector<Point> p(n);
  for (auto& x : p) x = Point(d(rng), d(rng));
  return p;
}

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_SUITE("flatness") {
  TEST_CASE("Hausdorff distance agrees with brute force") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const auto A = random_points(rng, 50 + 7 * trial, 1.0), B = random_points(rng, 200 - 5 * trial, 0.5 + 0.1 * trial);
      CHECK(hausdorff(A, B) == doctest::Approx(hausdorff_brute_force(A, B)).epsilon(1e-14));
      CHECK(hausdorff(A, B) == doctest::Approx(hausdorff(B, A)).epsilon(1e-14));
    }
    const auto A = random_points(rng, 40, 1.0);
    CHECK(hausdorff(A, A) == 0.0);
    CHECK(hausdorff({Point(0, 0)}, {Point(3, 4)}) == doctest::Approx(5.0));
    CHECK_THROWS(hausdorff({}, A));
  }

  TEST_CASE("quadratic forms") {
    const auto p = QuadraticForm2D::from_ratio(pi / 6, -0.25);
    CHECK(p.lambda1 == 1.0);
    CHECK(p({std::cos(pi / 6), std::sin(pi / 6)}) == doctest::Approx(1.0));
    CHECK(p({-std::sin(pi / 6), std::cos(pi / 6)}) == doctest::Approx(-0.25));
    CHECK(rank_stratum(QuadraticForm2D{0.0, 2.0, 0.0}) == 1);
    CHECK(rank_stratum(p) == 2);
    const auto n = QuadraticForm2D{-4.0, 2.0, 0.3}.normalized();
    CHECK(std::max(std::abs(n.lambda1), std::abs(n.lambda2)) == doctest::Approx(1.0));
    CHECK_THROWS(QuadraticForm2D{0.0, 0.0, 0.0}.normalized());
  }

  TEST_CASE("zero-set samples lie on the zero set inside the ball") {
    const Point x0(0.2, -0.1);
    const auto cone = QuadraticForm2D::from_ratio(0.4, -0.5);
    const auto s = zero_set_samples(cone, x0, 0.3, 128);
    CHECK(s.size() == 256);
    for (const auto& p : s) {
      CHECK(std::abs(cone(p - x0)) < 1e-12);
      CHECK((p - x0).norm() <= 0.3 + 1e-12);
    }
    CHECK(zero_set_samples(QuadraticForm2D{1.0, 0.0, 0.0}, x0, 0.3, 64).size() == 64);
    const auto def = zero_set_samples(QuadraticForm2D{1.0, 0.5, 0.0}, x0, 0.3, 64);
    REQUIRE(def.size() == 1);
    CHECK((def[0] - x0).norm() == 0.0);
  }

  TEST_CASE("flatness of an exact cone scales with the grid, not with r") {
    const Grid g = Grid::square(-1.0, 1.0, 257);
    const auto u = analytic_field(FieldPreset::cone, g, 1.0, 0.3);
    const auto fb = extract_free_boundary(u, 0.0, default_grad_tol(u));
    const auto r = flatness_h(fb, Point::Zero(), 0.4);
    CHECK(r.h_value / r.r < 0.03);
    CHECK(r.h_value <= 2 * r.resolution + g.h);
    CHECK(rank_stratum(r.best_form) == 2);
    CHECK(r.flat_at.back());
  }

  TEST_CASE("a circle is not flat at scales comparable to its radius") {
    const Grid g = Grid::square(-1.0, 1.0, 257);
    const auto u = analytic_field(FieldPreset::circle, g);
    const auto fb = extract_free_boundary(u, 0.0, default_grad_tol(u));
    const auto r = flatness_h(fb, Point::Zero(), 0.6);
    CHECK(r.h_value / r.r > 0.05);
  }

  TEST_CASE("blow-up classes of the model profiles") {
    const Grid g = Grid::square(-1.0, 1.0, 257);
    const std::vector<double> scales{0.4, 0.2, 0.1};
    const double rot = 0.5;
    const auto t1 = classify_blowup(analytic_field(FieldPreset::quadratic, g, 0.7), Point::Zero(), scales);
    CHECK(t1.type == BlowupType::Type1);
    CHECK(t1.amplitudes[0] == doctest::Approx(0.7).epsilon(1e-6));
    const auto t2 = classify_blowup(analytic_field(FieldPreset::rank1, g, 1.3, rot), Point::Zero(), scales);
    CHECK(t2.type == BlowupType::Type2);
    CHECK(t2.amplitudes[0] == doctest::Approx(1.3).epsilon(1e-3));
    CHECK(std::abs(std::remainder(t2.orientation - rot, pi)) < 1e-3);
    const auto t3 = classify_blowup(analytic_field(FieldPreset::halfplane, g, 0.9, rot), Point::Zero(), scales);
    CHECK(t3.type == BlowupType::Type3);
    CHECK(t3.amplitudes[0] == doctest::Approx(0.9).epsilon(1e-2));
    CHECK(std::abs(std::remainder(t3.orientation - rot, 2 * pi)) < 1e-2);
    CHECK_THROWS(classify_blowup(analytic_field(FieldPreset::halfplane, g), Point::Zero(), {0.01}));
    CHECK_THROWS(classify_blowup(analytic_field(FieldPreset::halfplane, g), Point(0.8, 0.0), {0.4}));
  }

  TEST_CASE("cone energy") {
    CHECK(cone_energy(0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
    CHECK(cone_energy(0.0, pi) > 0.0);
    CHECK_THROWS(cone_energy(1.0, 0.5));
    CHECK_THROWS(cone_energy(0.0, 7.0));
  }

  TEST_CASE("tangent half-plane of a rotated half-plane solution") {
    const Grid g = Grid::square(-1.0, 1.0, 257);
    const double rot = 2.0;
    const auto u = analytic_field(FieldPreset::halfplane, g, 1.0, rot);
    const auto fit = tangent_halfplane_fit(u, Point::Zero(), {0.1, 0.2, 0.4});
    for (double a : fit.angles) CHECK(std::abs(std::remainder(a - rot, 2 * pi)) < 2e-2);
    for (double d : fit.densities) CHECK(d < 0.02);
    CHECK(halfplane_mismatch(u, Point::Zero(), 0.2, rot + pi) == doctest::Approx(1.0).epsilon(0.03));
    CHECK_THROWS(tangent_halfplane_fit(analytic_field(FieldPreset::quadratic, g), Point(0.3, 0.3), {0.1}));
  }

  TEST_CASE("Hausdorff distance is a metric on finite sets") {
    std::mt19937 rng(101);
    for (int trial = 0; trial < 100; ++trial) {
      const auto A = random_points(rng, 20, 1.0), B = random_points(rng, 25, 0.7), C = random_points(rng, 15, 1.3);
      CHECK(hausdorff(A, C) <= hausdorff(A, B) + hausdorff(B, C) + 1e-14);
    }
    auto A = random_points(rng, 30, 1.0);
    auto B = A;
    B.push_back(A.front());
    CHECK(hausdorff(A, B) == 0.0);
    B.back() += Point(1e-9, 0.0);
    CHECK(hausdorff(A, B) > 0.0);
  }

  TEST_CASE("flatness is rotation-equivariant and bounded by every probed form") {
    const Grid g = Grid::square(-1.0, 1.0, 257);
    const auto u = analytic_field(FieldPreset::circle, g);
    const auto fb = extract_free_boundary(u, 0.0, default_grad_tol(u));
    const Point x0(0.02, 0.01);
    const auto base = flatness_h(fb, x0, 0.3);
    const double t = 0.9;
    const Eigen::Rotation2Dd R(t);
    FreeBoundary rotated = fb;
    for (auto& p : rotated.points) p = R * p;
    const auto turned = flatness_h(rotated, R * x0, 0.3);
    CHECK(std::abs(turned.h_value - base.h_value) <= 2 * base.resolution);
    const auto in_ball = fb.points_in_ball(x0, 0.3);
    CHECK(base.h_value <= flatness_h_min(in_ball, base.best_form, x0, 0.3) + 1e-15);
    for (double phi : {0.0, 0.5, 1.5})
      for (double rho : {-1.0, 0.0, 0.5})
        CHECK(base.h_value <= flatness_h_min(in_ball, QuadraticForm2D::from_ratio(phi, rho), x0, 0.3) + base.resolution);
  }

  TEST_CASE("cone energy equals pi/4 times the positive density") {
    for (double t1 = 0.0; t1 <= 2 * pi; t1 += 0.7)
      for (double t2 = t1; t2 <= 2 * pi; t2 += 0.45)
        CHECK(cone_energy(t1, t2) == doctest::Approx((pi / 4) * (t2 - t1) / (2 * pi)));
  }

  TEST_CASE("blow-up class is stable over the last two scales") {
    const Grid g = Grid::square(-1.0, 1.0, 257);
    for (auto f : {FieldPreset::quadratic, FieldPreset::rank1, FieldPreset::halfplane}) {
      const auto c = classify_blowup(analytic_field(f, g, 1.0, 0.3), Point::Zero(), {0.4, 0.2, 0.1});
      const auto n = c.scales.size();
      CHECK(c.scales[n - 1].best == c.scales[n - 2].best);
    }
  }
}
