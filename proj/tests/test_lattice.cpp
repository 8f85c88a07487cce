#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "dsm/arith.hpp"
#include "dsm/lattice.hpp"

using namespace dsm;
using namespace dsm::lattice;

TEST_CASE("rep_counts: frozen values") {
  auto r2 = rep_counts(2, 30);
  auto r3 = rep_counts(3, 30);
  auto r4 = rep_counts(4, 30);
  auto r5 = rep_counts(5, 600);
  CHECK(r2.at(0) == 1);
  CHECK(r2.at(25) == 12);
  CHECK(r3.at(9) == 30);
  CHECK(r4.at(12) == 96);
  CHECK(r4.at(25) == 248);
  CHECK(r5.at(4) == 90);
  CHECK(r5.at(16) == 730);
  CHECK(r5.at(64) == 5850);
  CHECK(r5.at(576) == 146250);
}

TEST_CASE("rep_counts d=4 obeys Jacobi's formula") {
  // r_4(n) = 8 sum over divisors of n not divisible by 4
  auto r4 = rep_counts(4, 60);
  for (i64 n = 1; n <= 60; ++n) {
    i64 s = 0;
    for (i64 d = 1; d <= n; ++d)
      if (n % d == 0 && d % 4 != 0) s += d;
    CHECK(r4.at(n) == 8 * s);
  }
}

TEST_CASE("rep_counts budget") {
  CHECK_THROWS_AS(rep_counts(5, 1'000'000, /*budget=*/100), budget_error);
}

TEST_CASE("enumerate_sphere agrees with rep_counts and is symmetric") {
  auto r5 = rep_counts(5, 30);
  for (i64 s : {0, 1, 4, 9, 16, 25}) {
    auto k = enumerate_sphere(5, s);
    CHECK(k.weight_defined);
    CHECK(static_cast<i64>(k.points.size()) == r5.at(s));
    std::set<std::vector<int>> pts(k.points.begin(), k.points.end());
    CHECK(pts.size() == k.points.size());  // no duplicates
    for (const auto& p : k.points) {
      i64 norm = 0;
      for (int c : p) norm += static_cast<i64>(c) * c;
      CHECK(norm == s);
      // closed under negation and a coordinate swap
      std::vector<int> neg(p);
      for (int& c : neg) c = -c;
      CHECK(pts.count(neg) == 1);
      std::vector<int> sw(p);
      std::swap(sw[0], sw[4]);
      CHECK(pts.count(sw) == 1);
    }
    CHECK(k.weight() == doctest::Approx(1.0 / static_cast<double>(k.points.size())));
  }
}

TEST_CASE("enumerate_sphere: empty sphere is not an error") {
  auto k = enumerate_sphere(1, 3);  // 3 is not a square
  CHECK(!k.weight_defined);
  CHECK(k.points.empty());
  CHECK_THROWS_AS(k.weight(), std::domain_error);
}

TEST_CASE("validate_sequence: lacunary doubling") {
  RadiusSequence seq;
  seq.kind = SequenceKind::lacunary;
  seq.lambda_sq = {bigint(2), bigint(4), bigint(8), bigint(16)};
  CHECK(validate_sequence(seq).valid);
  seq.lambda_sq = {bigint(2), bigint(4), bigint(7)};  // 7 < 2*4
  auto v = validate_sequence(seq);
  CHECK(!v.valid);
  CHECK(!v.violation.empty());
}

TEST_CASE("factorial_radii: exact factorials, divisibility, trend") {
  auto seq = factorial_radii({1, 2, 3, 4, 6, 8, 10, 12});
  CHECK(seq.kind == SequenceKind::factorial);
  CHECK(seq.lambda_sq[0] == 1);
  CHECK(seq.lambda_sq[3] == 24);
  CHECK(seq.lambda_sq[7] == 479001600);
  // q | mu! for every q <= mu
  for (i64 q = 1; q <= 12; ++q) CHECK(congruence_check(seq.lambda_sq[7], q));
  CHECK(!congruence_check(seq.lambda_sq[3], 5));
  auto v = validate_sequence(seq);
  CHECK(v.valid);
  REQUIRE(v.trend_statistic.has_value());
  CHECK(*v.trend_statistic > 0.9);  // mu_k ~ k level growth or better
  CHECK_THROWS_AS(factorial_radii({6000}), std::domain_error);
}

TEST_CASE("annulus_stats: frozen counts and volume comparability") {
  auto a = annulus_stats(4, 10.0, 5.0);
  CHECK(a.lattice_count == 81856);
  CHECK(a.volume == doctest::Approx(82115.10861706345).epsilon(1e-10));
  REQUIRE(a.ratio.has_value());
  CHECK(*a.ratio == doctest::Approx(0.9968445682965387).epsilon(1e-9));

  auto b = annulus_stats(3, 8.0, 4.0);
  CHECK(b.lattice_count == 3214);
  CHECK(*b.ratio == doctest::Approx(0.9786810977627901).epsilon(1e-9));

  auto c = annulus_stats(2, 12.0, 6.0);
  CHECK(c.lattice_count == 292);
  CHECK(*c.ratio == doctest::Approx(0.9681925704756966).epsilon(1e-9));
}
