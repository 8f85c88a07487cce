#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "dsm/arith.hpp"

using namespace dsm;
using namespace dsm::arith;

TEST_CASE("factorize basics") {
  auto f = factorize(720);
  REQUIRE(f.factors.size() == 3);
  CHECK(f.factors[0] == std::pair<i64, int>{2, 4});
  CHECK(f.factors[1] == std::pair<i64, int>{3, 2});
  CHECK(f.factors[2] == std::pair<i64, int>{5, 1});
  CHECK(factorize(1).factors.empty());
  CHECK_THROWS_AS(factorize(0), std::domain_error);
  CHECK_THROWS_AS(factorize(kFactorizationLimit + 1), std::domain_error);

  auto b = arithmetic_basics(30);
  CHECK(b.mobius == -1);
  CHECK(b.phi == 8);
  CHECK(b.divisor_count == 8);
  CHECK(arithmetic_basics(12).mobius == 0);
  CHECK(arithmetic_basics(1).phi == 1);
  CHECK(arithmetic_basics(97).phi == 96);
}

TEST_CASE("ramanujan sums: frozen values") {
  // independently computed from c_q(n) = sum_{d | gcd(q,n)} d mu(q/d)
  struct Row { i64 q, n, c; };
  const Row rows[] = {
      {1, 0, 1},    {12, 8, -2}, {12, 7, 0},   {9, 3, -3},
      {10, 5, -4},  {30, 6, -2}, {7, 0, 6},    {49, 7, -7},
      {36, 24, -6}, {100, 35, 0}, {720, 48, 24},
  };
  for (auto [q, n, c] : rows) {
    CHECK(ramanujan_sum(q, n, RamanujanMode::direct) == c);
    CHECK(ramanujan_sum(q, n, RamanujanMode::multiplicative) == c);
    CHECK(ramanujan_sum(q, n, RamanujanMode::moebius_gcd) == c);
  }
}

TEST_CASE("ramanujan sums: structural properties") {
  for (i64 q = 1; q <= 60; ++q) {
    i64 phi = arithmetic_basics(q).phi;
    CHECK(ramanujan_sum(q, 0) == phi);  // c_q(0) = phi(q)
    i64 row_total = 0;
    for (i64 n = 0; n < q; ++n) {
      i64 c = ramanujan_sum(q, n);
      row_total += c;
      // tri-mode agreement
      CHECK(ramanujan_sum(q, n, RamanujanMode::direct) == c);
      CHECK(ramanujan_sum(q, n, RamanujanMode::moebius_gcd) == c);
      // |c_q(n)| <= gcd(q, n), gcd(q, 0) := q
      CHECK(std::abs(c) <= (n == 0 ? q : std::gcd(q, n)));
      // periodicity on all of Z
      CHECK(ramanujan_sum(q, n + q) == c);
      CHECK(ramanujan_sum(q, n - 3 * q) == c);
    }
    // orthogonality: the row sums to 0 for q > 1
    CHECK(row_total == (q == 1 ? 1 : 0));
  }
  // multiplicativity in q for coprime moduli
  for (i64 q1 : {3, 4, 5, 7, 9}) {
    for (i64 q2 : {8, 11, 25}) {
      if (std::gcd(q1, q2) != 1) continue;
      for (i64 n : {0, 1, 6, 17, 60}) {
        CHECK(ramanujan_sum(q1 * q2, n) == ramanujan_sum(q1, n) * ramanujan_sum(q2, n));
      }
    }
  }
}

TEST_CASE("ramanujan_row matches pointwise evaluation") {
  for (i64 q : {1, 2, 12, 45}) {
    auto row = ramanujan_row(q);
    REQUIRE(row.size() == static_cast<size_t>(q));
    for (i64 n = 0; n < q; ++n) CHECK(row[static_cast<size_t>(n)] == ramanujan_sum(q, n));
  }
}

TEST_CASE("partial sums C_N and S_N: frozen values") {
  auto p = partial_sums(12, 30);
  CHECK(p.signed_sum == -28);
  CHECK(p.abs_sum == 52);
  p = partial_sums(7, 50);
  CHECK(p.signed_sum == -17);
  CHECK(p.abs_sum == 63);
  CHECK(partial_sums(-5, 20).signed_sum == -8);  // negative n via periodicity
}

TEST_CASE("ramanujan_moment: frozen values and budget") {
  auto r = ramanujan_moment(10, 2, 50);
  CHECK(r.value == doctest::Approx(13.532183859229818).epsilon(1e-12));
  CHECK(r.get("Q") == 10);
  CHECK(r.get("j") == 2);
  CHECK(r.get("M") == 50);

  auto r3 = ramanujan_moment(8, 3, 40);
  CHECK(r3.value == doctest::Approx(10.819150407698583).epsilon(1e-12));

  CHECK_THROWS_AS(ramanujan_moment(1000, 2, 1'000'000, /*budget=*/1000), budget_error);
}

TEST_CASE("lcm_moment: exact enumeration vs divisor route") {
  auto r = lcm_moment(6, 2);
  CHECK(r.value == doctest::Approx(461.0 / 60.0).epsilon(1e-14));
  CHECK(r.get("divisor_route") == doctest::Approx(41.28192638189756).epsilon(1e-9));
  CHECK(r.value <= r.get("divisor_route"));

  auto r3 = lcm_moment(4, 3);
  CHECK(r3.value == doctest::Approx(181.0 / 12.0).epsilon(1e-14));
  CHECK(r3.value <= r3.get("divisor_route"));

  CHECK_THROWS_AS(lcm_moment(100, 4, /*budget=*/1000), budget_error);
}

TEST_CASE("gcd_product_period_sum: frozen values and period extension") {
  CHECK(gcd_product_period_sum({4, 6}) == 70);     // lcm 12, mean 35/6
  CHECK(gcd_product_period_sum({2, 3, 4}) == 70);  // lcm 12, mean 35/6
  CHECK(gcd_product_period_sum({1}) == 1);
  // single modulus: sum_{n=1..q} gcd(q,n) = sum_{d|q} d phi(q/d)
  for (i64 q : {2, 6, 9, 12}) {
    i64 expect = 0;
    for (i64 d = 1; d <= q; ++d)
      if (q % d == 0) expect += d * arithmetic_basics(q / d).phi;
    CHECK(gcd_product_period_sum({q}) == expect);
  }
}

TEST_CASE("loglog_fit recovers exact power laws") {
  std::vector<double> xs, ys;
  for (double x : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    xs.push_back(x);
    ys.push_back(3.7 * std::pow(x, 2.5));
  }
  auto fit = loglog_fit(xs, ys);
  CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.7)).epsilon(1e-10));
  CHECK(fit.residual < 1e-12);
  CHECK_THROWS_AS(loglog_fit({1.0, -2.0}, {1.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(loglog_fit({1.0}, {1.0}), std::domain_error);
}
