#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "formation/geometry.hpp"
#include "support/oracles.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <random>

using formation::Position;
using formation::signed_area;

TEST_CASE("signed area of the worked examples") {
  // Base 2, height 6.
  CHECK(signed_area({-1, 0}, {1, 0}, {0, 6}) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(oracle::cofactor_signed_area({-1, 0}, {1, 0}, {0, 6}) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(signed_area({0, 0}, {1, 0}, {2, 0}) == 0.0);
  // d12 = 6 with legs 3*sqrt(2): Z = 9.
  CHECK(signed_area({-3, 0}, {3, 0}, {0, 3}) == doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("signed area sign follows orientation") {
  CHECK(signed_area({0, 0}, {1, 0}, {0, 1}) > 0.0);
  CHECK(signed_area({0, 0}, {0, 1}, {1, 0}) < 0.0);
}

TEST_CASE("heron area and triangle inequality") {
  const double leg = 3.0 * std::sqrt(2.0);
  CHECK(formation::heron_area(6.0, leg, leg) == doctest::Approx(9.0).epsilon(1e-13));
  CHECK(formation::heron_area(3.0, 4.0, 5.0) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(formation::heron_area(1.0, 2.0, 3.0) == 0.0);
  CHECK(formation::heron_area(1.0, 1.0, 5.0) == 0.0);
  CHECK(formation::strict_triangle_inequality(3, 4, 5));
  CHECK_FALSE(formation::strict_triangle_inequality(1, 2, 3));
  CHECK_FALSE(formation::strict_triangle_inequality(1, 1, 5));
}

TEST_CASE("signed area properties over random triples") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int trial = 0; trial < 2000; ++trial) {
    const Position a(u(rng), u(rng));
    const Position b(u(rng), u(rng));
    const Position c(u(rng), u(rng));
    const double z = signed_area(a, b, c);
    const double scale = std::max({1.0, (a - b).squaredNorm(), (b - c).squaredNorm(), (c - a).squaredNorm()});

    CHECK(std::abs(z - oracle::cofactor_signed_area(a, b, c)) <= 1e-12 * scale);
    CHECK(signed_area(b, a, c) == doctest::Approx(-z).epsilon(1e-12).scale(scale));
    CHECK(signed_area(b, c, a) == doctest::Approx(z).epsilon(1e-12).scale(scale));

    const Eigen::Rotation2Dd rot(angle(rng));
    const Position shift(u(rng), u(rng));
    auto move = [&](const Position& p) -> Position { return rot * p + shift; };
    CHECK(std::abs(signed_area(move(a), move(b), move(c)) - z) <= 1e-12 * scale);

    auto reflect = [](const Position& p) { return Position(p.x(), -p.y()); };
    CHECK(std::abs(signed_area(reflect(a), reflect(b), reflect(c)) + z) <= 1e-12 * scale);

    const double d_ab = (a - b).norm();
    const double d_bc = (b - c).norm();
    const double d_ca = (c - a).norm();
    if (std::abs(z) > 1e-3 * scale) {
      CHECK(formation::heron_area(d_ab, d_bc, d_ca) == doctest::Approx(std::abs(z)).epsilon(1e-9));
      CHECK(oracle::plain_heron(d_ab, d_bc, d_ca) == doctest::Approx(std::abs(z)).epsilon(1e-9));
    }
  }
}

TEST_CASE("finiteness checks") {
  CHECK(formation::is_finite(Position(1, 2)));
  CHECK_FALSE(formation::is_finite(Position(NAN, 0)));
  CHECK_FALSE(formation::is_finite(formation::CollectiveState{{0, 0}, {INFINITY, 1}}));
}
