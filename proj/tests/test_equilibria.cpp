#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "formation/equilibria.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace formation;

namespace {

using Counts = std::map<std::pair<EquilibriumLabel, Stability>, int>;

Counts tally(const std::vector<EquilibriumRecord>& records) {
  Counts out;
  for (const auto& r : records) {
    ++out[{r.label, r.stability}];
  }
  return out;
}

const EquilibriumRecord* find_label(const std::vector<EquilibriumRecord>& records, EquilibriumLabel label) {
  for (const auto& r : records) {
    if (r.label == label) {
      return &r;
    }
  }
  return nullptr;
}

const EquilibriumRecord* nearest(const std::vector<EquilibriumRecord>& records, const Position& p) {
  const EquilibriumRecord* best = nullptr;
  for (const auto& r : records) {
    if (best == nullptr || (r.position - p).norm() < (best->position - p).norm()) {
      best = &r;
    }
  }
  return best;
}

CanonicalTriangleParams isosceles(double b, double c, double K) { return {0.0, b, c, K}; }

}  // namespace

TEST_CASE("gain thresholds") {
  CHECK(k_star(6, 1) == 18.0);
  CHECK(k_star(2.5, 2.5) == 0.5);
  CHECK(k_star(std::sqrt(3.0) * 2.0, 2.0) == doctest::Approx(1.5).epsilon(1e-15));

  REQUIRE(k_zero(6, 1).has_value());
  CHECK(std::abs(*k_zero(6, 1) - (12.0 * std::sqrt(34.0) - 68.0)) < 1e-12);
  CHECK(*k_zero(6, 1) == doctest::Approx(1.971422738).epsilon(1e-9));
  CHECK(k_zero(std::sqrt(2.0), 1.0).value() == doctest::Approx(0.0).scale(1.0).epsilon(1e-7));
  CHECK(k_zero(2.0, std::sqrt(2.0)).value() == 0.0);
  CHECK_FALSE(k_zero(1, 1).has_value());
  CHECK_THROWS_AS(k_star(0, 1), InvalidParams);
}

TEST_CASE("at K_0 the off-axis pair meets the axis point Pc") {
  // Pc satisfies 2y^2 + 2by + Kc^2 = 0; Pd/Pe have y = Kb/(K - 4) and x^2 = b^2 - 2c^2 - y^2.
  const double b = 6.0;
  const double c = 1.0;
  const double K = *k_zero(b, c);
  const double y = K * b / (K - 4.0);
  CHECK(std::abs(b * b - 2 * c * c - y * y) < 1e-10);
  CHECK(std::abs(2 * y * y + 2 * b * y + K * c * c) < 1e-10);
}

TEST_CASE("threshold identity and ordering") {
  for (int i = 0; i < 1000; ++i) {
    const double h = std::sqrt(2.0) + (10.0 - std::sqrt(2.0)) * i / 999.0;
    const auto k0 = k_zero(h, 1.0);
    REQUIRE(k0.has_value());
    const double root = h - std::sqrt(std::max(0.0, h * h - 2.0));
    CHECK(std::abs((2.0 - *k0) - root * root) <= 1e-12);
    CHECK(*k0 <= k_star(h, 1.0) + 1e-12);
  }
  // The two thresholds touch at b^2/c^2 = 8/3.
  const double h = std::sqrt(8.0 / 3.0);
  CHECK(*k_zero(h, 1.0) == doctest::Approx(k_star(h, 1.0)).epsilon(1e-12));
}

TEST_CASE("isosceles enumeration examples") {
  const auto above = enumerate_isosceles(isosceles(6, 1, 20));
  REQUIRE(above.size() == 1);
  CHECK(above[0].label == EquilibriumLabel::Pa);
  CHECK(above[0].position == Position(0, 6));
  CHECK(above[0].stability == Stability::Stable);
  CHECK(above[0].eigenvalues[0] == doctest::Approx(4.0));
  CHECK(above[0].eigenvalues[1] == doctest::Approx(164.0));

  const auto mid = enumerate_isosceles(isosceles(6, 1, 4));
  REQUIRE(mid.size() == 3);
  CHECK(find_label(mid, EquilibriumLabel::Pa)->stability == Stability::Stable);
  const auto* pb = find_label(mid, EquilibriumLabel::Pb);
  const auto* pc = find_label(mid, EquilibriumLabel::Pc);
  CHECK(std::abs(pb->position.y() - (-3.0 + std::sqrt(7.0))) < 1e-14);
  CHECK(std::abs(pc->position.y() - (-3.0 - std::sqrt(7.0))) < 1e-14);
  CHECK(pb->stability == Stability::Unstable);
  CHECK(pc->stability == Stability::Saddle);

  const auto low = enumerate_isosceles(isosceles(6, 1, 1));
  REQUIRE(low.size() == 5);
  CHECK(find_label(low, EquilibriumLabel::Pb)->stability == Stability::Unstable);
  CHECK(find_label(low, EquilibriumLabel::Pc)->stability == Stability::Stable);
  const auto* pd = find_label(low, EquilibriumLabel::Pd);
  const auto* pe = find_label(low, EquilibriumLabel::Pe);
  CHECK(pd->stability == Stability::Saddle);
  CHECK(pe->stability == Stability::Saddle);
  CHECK(pd->position.x() == doctest::Approx(std::sqrt(30.0)));
  CHECK(pe->position.x() == doctest::Approx(-std::sqrt(30.0)));
  CHECK(pd->position.y() == doctest::Approx(-2.0));
  CHECK(pd->hessian.determinant() < 0.0);
  CHECK(pe->hessian.determinant() < 0.0);

  CHECK_THROWS_AS(enumerate_isosceles({1.0, 6, 1, 4}), InvalidParams);
  CHECK_THROWS_AS(enumerate_isosceles(isosceles(6, 1, -1)), InvalidParams);
}

TEST_CASE("case table verdicts") {
  const auto r20 = case_table(isosceles(6, 1, 20));
  CHECK(r20.k_star == 18.0);
  CHECK(r20.globally_convergent);
  CHECK(r20.almost_globally_convergent);

  const auto r4 = case_table(isosceles(6, 1, 4));
  CHECK_FALSE(r4.globally_convergent);
  CHECK(r4.almost_globally_convergent);

  const auto r1 = case_table(isosceles(6, 1, 1));
  CHECK_FALSE(r1.globally_convergent);
  CHECK_FALSE(r1.almost_globally_convergent);

  // Exactly at K_*: the axis roots coincide.
  const auto boundary = case_table(isosceles(1, 1, 0.5));
  REQUIRE(boundary.equilibria.size() == 2);
  CHECK(boundary.equilibria[1].stability == Stability::Degenerate);
  CHECK(boundary.equilibria[1].position.y() == -0.5);
  CHECK_FALSE(boundary.globally_convergent);
  CHECK_FALSE(boundary.k_zero.has_value());
}

TEST_CASE("summary regimes agree with the Hessian classification") {
  SUBCASE("K between the thresholds, b^2/c^2 <= 8/3: Pb saddle, Pc stable") {
    const double b = std::sqrt(2.5);
    REQUIRE(*k_zero(b, 1.0) < 1.24);
    REQUIRE(1.24 < k_star(b, 1.0));
    const auto eq = enumerate_isosceles(isosceles(b, 1.0, 1.24));
    const Counts expected{{{EquilibriumLabel::Pa, Stability::Stable}, 1},
                          {{EquilibriumLabel::Pb, Stability::Saddle}, 1},
                          {{EquilibriumLabel::Pc, Stability::Stable}, 1}};
    CHECK(tally(eq) == expected);
  }
  SUBCASE("K between the thresholds, b^2/c^2 > 8/3: Pb unstable, Pc saddle") {
    const Counts expected{{{EquilibriumLabel::Pa, Stability::Stable}, 1},
                          {{EquilibriumLabel::Pb, Stability::Unstable}, 1},
                          {{EquilibriumLabel::Pc, Stability::Saddle}, 1}};
    CHECK(tally(enumerate_isosceles(isosceles(6, 1, 2))) == expected);
    CHECK(tally(enumerate_isosceles(isosceles(6, 1, 4))) == expected);
  }
  SUBCASE("K below K_0, 2 < b^2/c^2 < 8/3: Pc is stable by its Hessian") {
    const double b = std::sqrt(2.5);
    const auto eq = enumerate_isosceles(isosceles(b, 1.0, 1.0));
    const Counts expected{{{EquilibriumLabel::Pa, Stability::Stable}, 1},
                          {{EquilibriumLabel::Pb, Stability::Unstable}, 1},
                          {{EquilibriumLabel::Pc, Stability::Stable}, 1},
                          {{EquilibriumLabel::Pd, Stability::Saddle}, 1},
                          {{EquilibriumLabel::Pe, Stability::Saddle}, 1}};
    CHECK(tally(eq) == expected);
    const auto* pc = find_label(eq, EquilibriumLabel::Pc);
    const double y = pc->position.y();
    CHECK(2 * y * y + 4.0 - 2 * b * b > 0.0);
    CHECK(6 * y * y + 1.0 - 2 * b * b > 0.0);
  }
  SUBCASE("b^2/c^2 < 2: no off-axis pair for any gain") {
    for (const double K : {0.01, 0.1, 0.4, 0.49}) {
      const auto eq = enumerate_isosceles(isosceles(1.0, 1.0, K));
      CHECK(eq.size() == 3);
      CHECK(find_label(eq, EquilibriumLabel::Pd) == nullptr);
    }
  }
}

TEST_CASE("uniqueness boundary at K_*") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double b = u(rng);
    const double c = u(rng);
    const double ks = k_star(b, c);
    CHECK(enumerate_isosceles(isosceles(b, c, ks * (1 + 1e-6))).size() == 1);
    CHECK(enumerate_isosceles(isosceles(b, c, ks * (1 - 1e-6))).size() >= 3);
    // Pa is stable for every gain.
    for (const double K : {0.1 * ks, ks, 10 * ks}) {
      CHECK(enumerate_isosceles(isosceles(b, c, K)).front().stability == Stability::Stable);
    }
  }
}

TEST_CASE("large-gain limit examples") {
  const auto two = enumerate_general_large_k(3, 1, 1);
  REQUIRE(two.size() == 3);
  CHECK(two[0].position == Position(3, 1));
  CHECK(two[0].stability == Stability::Stable);
  const auto* pb = find_label(two, EquilibriumLabel::Pb);
  const auto* pc = find_label(two, EquilibriumLabel::Pc);
  CHECK(pb->position == Position(-1, 1));
  CHECK(pc->position == Position(-2, 1));
  CHECK(pb->stability == Stability::Saddle);
  CHECK(pc->stability == Stability::Stable);
  CHECK(std::isinf(pc->eigenvalues[1]));

  // Mirrored target: the stable extra root moves to the other side.
  const auto mirrored = enumerate_general_large_k(-3, 1, 1);
  CHECK(find_label(mirrored, EquilibriumLabel::Pb)->stability == Stability::Stable);
  CHECK(find_label(mirrored, EquilibriumLabel::Pc)->stability == Stability::Saddle);

  CHECK(enumerate_general_large_k(1, 1, 1).size() == 1);
  CHECK(enumerate_general_large_k(0, 2, 1).size() == 1);

  const auto tangent = enumerate_general_large_k(std::sqrt(8.0), 1, 1);
  REQUIRE(tangent.size() == 2);
  CHECK(tangent[1].stability == Stability::Degenerate);
  CHECK(tangent[1].position.x() == doctest::Approx(-std::sqrt(2.0)));
}

TEST_CASE("numeric refinement examples") {
  const auto p = isosceles(6, 1, 4);
  const auto found = refine_numeric(p, seed_grid(-10, 10, -10, 10, 41));
  REQUIRE(found.equilibria.size() == 3);
  const auto analytic = enumerate_isosceles(p);
  for (const auto& r : analytic) {
    const auto* n = nearest(found.equilibria, r.position);
    CHECK((n->position - r.position).norm() < 1e-8);
    CHECK(n->stability == r.stability);
    CHECK(n->label == EquilibriumLabel::Numeric);
  }

  const auto single = refine_numeric(isosceles(1, 1, 10), default_seeds(isosceles(1, 1, 10)));
  REQUIRE(single.equilibria.size() == 1);
  CHECK((single.equilibria[0].position - Position(0, 1)).norm() < 1e-10);
}

TEST_CASE("numeric refinement recovers the large-gain extra minimum") {
  const CanonicalTriangleParams p{3, 1, 1, 80};
  const auto found = refine_numeric(p, default_seeds(p, 61));
  int stable = 0;
  for (const auto& r : found.equilibria) {
    stable += r.stability == Stability::Stable ? 1 : 0;
  }
  CHECK(stable == 2);
  const auto* target = nearest(found.equilibria, {3, 1});
  CHECK((target->position - Position(3, 1)).norm() < 1e-10);
  const auto* extra = nearest(found.equilibria, {-2, 1});
  CHECK(extra->stability == Stability::Stable);
  CHECK((extra->position - Position(-2, 1)).norm() < 0.3);

  // The finite-gain root approaches the limit point as K grows.
  double previous = (extra->position - Position(-2, 1)).norm();
  for (const double K : {1e3, 1e4, 1e5}) {
    const CanonicalTriangleParams q{3, 1, 1, K};
    const auto roots = refine_numeric(q, seed_grid(-2.5, -1.5, 0.5, 1.5, 11));
    const auto* r = nearest(roots.equilibria, {-2, 1});
    REQUIRE(r != nullptr);
    const double dist = (r->position - Position(-2, 1)).norm();
    CHECK(dist < previous);
    CHECK(r->stability == Stability::Stable);
    previous = dist;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("numeric and closed-form enumerations agree on random draws") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int compared = 0;
  while (compared < 200) {
    const double c = std::pow(10.0, -1.0 + 2.0 * u(rng));
    const double b = c * (0.5 + 7.5 * u(rng));
    const double ks = k_star(b, c);
    const double K = ks * std::pow(10.0, -2.0 + 2.5 * u(rng));
    const auto k0 = k_zero(b, c);
    // Skip draws sitting on a bifurcation, where roots merge.
    const bool near_kstar = std::abs(K - ks) < 1e-2 * ks;
    const bool near_k0 = k0 && std::abs(K - *k0) < 1e-2 * std::max(*k0, 1e-3);
    const bool near_four = std::abs(K - 4.0) < 1e-2;
    const bool near_two = std::abs(b * b - 2.0 * c * c) < 1e-2 * c * c;
    if (near_kstar || near_k0 || near_four || near_two) {
      continue;
    }
    const auto p = isosceles(b, c, K);
    const auto analytic = enumerate_isosceles(p);
    const auto numeric = refine_numeric(p, default_seeds(p, 41));
    CHECK_MESSAGE(numeric.equilibria.size() == analytic.size(), "b=", b, " c=", c, " K=", K);
    for (const auto& r : analytic) {
      const auto* n = nearest(numeric.equilibria, r.position);
      REQUIRE(n != nullptr);
      CHECK((n->position - r.position).norm() <= 1e-8 * p.length_scale());
      CHECK(n->stability == r.stability);
    }
    ++compared;
  }
}

TEST_CASE("classification by eigenvalue sign") {
  CHECK(classify(Matrix2::Identity()).stability == Stability::Stable);
  CHECK(classify(-Matrix2::Identity()).stability == Stability::Unstable);
  Matrix2 saddle;
  saddle << 1, 0, 0, -2;
  CHECK(classify(saddle).stability == Stability::Saddle);
  CHECK(classify(saddle).eigenvalues[0] == -2.0);
  Matrix2 flat;
  flat << 1, 0, 0, 1e-12;
  CHECK(classify(flat).stability == Stability::Degenerate);
}

TEST_CASE("description text") {
  const auto r = enumerate_isosceles(isosceles(6, 1, 20)).front();
  CHECK(describe(r) == "Pa [0, 6] Stable eigenvalues (4, 164)");
}
