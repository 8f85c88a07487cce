#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include "dsm/bump.hpp"
#include "dsm/gauss.hpp"

using namespace dsm;
using namespace dsm::gauss;

namespace {
GaussSumParams make(i64 a, std::vector<i64> l, i64 q) {
  GaussSumParams p;
  p.a = a;
  p.l = std::move(l);
  p.q = q;
  p.d = static_cast<int>(p.l.size());
  return p;
}
}  // namespace

TEST_CASE("gauss_sum: frozen values") {
  auto g = gauss_sum(make(1, {0, 0}, 5));
  CHECK(g.real() == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::abs(g.imag()) < 1e-12);

  g = gauss_sum(make(2, {1, 3}, 5));
  CHECK(g.real() == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::abs(g.imag()) < 1e-12);

  g = gauss_sum(make(1, {1, 1}, 3));
  CHECK(g.real() == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(g.imag() == doctest::Approx(-0.2886751345948127).epsilon(1e-10));

  g = gauss_sum(make(3, {2, 1}, 7));
  CHECK(g.real() == doctest::Approx(-0.08906997169410477).epsilon(1e-10));
  CHECK(g.imag() == doctest::Approx(0.11169021178114713).epsilon(1e-10));
  CHECK(std::abs(g) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));

  g = gauss_sum(make(1, {0, 0, 0, 0, 0}, 3));
  CHECK(std::abs(g.real()) < 1e-12);
  CHECK(g.imag() == doctest::Approx(0.06415002990995847).epsilon(1e-10));

  g = gauss_sum(make(2, {1, 2, 3, 4, 5}, 9));
  CHECK(g.real() == doctest::Approx(0.003152446267979335).epsilon(1e-9));
  CHECK(g.imag() == doctest::Approx(0.0026452165007676467).epsilon(1e-9));
}

TEST_CASE("gauss_sum: direct equals factored") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    i64 q = 1 + static_cast<i64>(rng() % 9);
    int d = 1 + static_cast<int>(rng() % 4);
    std::vector<i64> l(static_cast<size_t>(d));
    for (auto& v : l) v = static_cast<i64>(rng() % static_cast<std::uint64_t>(q));
    auto p = make(static_cast<i64>(rng() % static_cast<std::uint64_t>(q)), l, q);
    auto gf = gauss_sum(p, GaussMode::factored);
    auto gd = gauss_sum(p, GaussMode::direct);
    CHECK(std::abs(gf - gd) < 1e-10);
  }
  CHECK_THROWS_AS(gauss_sum(make(1, {0, 0, 0, 0, 0}, 100), GaussMode::direct, /*budget=*/1000),
                  budget_error);
}

TEST_CASE("gauss_sum: conjugation symmetry") {
  for (i64 q : {4, 5, 9, 12}) {
    for (i64 a = 0; a < q; ++a) {
      auto g = gauss_sum(make(a, {1, 2}, q));
      auto gc = gauss_sum(make((q - a) % q, {q - 1, q - 2}, q));
      CHECK(std::abs(gc - std::conj(g)) < 1e-12);
    }
  }
}

TEST_CASE("reduce_params divides out the common factor without changing the value") {
  auto rp = reduce_params(make(4, {2, 6}, 8));
  CHECK(rp.rho == 2);
  CHECK(rp.reduced.a == 2);
  CHECK(rp.reduced.q == 4);
  CHECK(rp.reduced.l == std::vector<i64>{1, 3});

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    i64 rho = 1 + static_cast<i64>(rng() % 3);
    i64 q0 = 2 + static_cast<i64>(rng() % 6);
    std::vector<i64> l = {rho * static_cast<i64>(rng() % static_cast<std::uint64_t>(q0)),
                          rho * static_cast<i64>(rng() % static_cast<std::uint64_t>(q0)),
                          rho * static_cast<i64>(rng() % static_cast<std::uint64_t>(q0))};
    auto p = make(rho * static_cast<i64>(rng() % static_cast<std::uint64_t>(q0)), l, rho * q0);
    auto r = reduce_params(p);
    CHECK(std::abs(gauss_sum(p) - gauss_sum(r.reduced)) < 1e-12);
    CHECK(p.q == r.rho * r.reduced.q);
  }
}

TEST_CASE("magnitude_survey: exhaustive maxima at small q") {
  auto r2 = magnitude_survey(12, 2);
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-9));  // attains 2^{d/2}
  CHECK(r2.value <= std::pow(2.0, 1.0) + 1e-9);

  auto r3 = magnitude_survey(12, 3);
  CHECK(r3.value == doctest::Approx(2.8284271247461903).epsilon(1e-9));
  CHECK(r3.value <= std::pow(2.0, 1.5) + 1e-9);
}

TEST_CASE("dual_gauss_sum equals the closed form") {
  struct Case { i64 Q; std::vector<i64> m; };
  const Case cases[] = {
      {4, {2, 2, 2, 0, 0}},  // |m|^2 = 12, divisible
      {4, {1, 0, 0, 0, 0}},  // not divisible
      {6, {1, 2, 1, 0, 0}},  // |m|^2 = 6, divisible
      {5, {0, 0, 0, 0, 0}},
  };
  for (const auto& c : cases) {
    auto direct = dual_gauss_sum(c.m, c.Q, 5);
    double closed = dual_gauss_sum_closed(c.m, c.Q);
    CHECK(std::abs(direct - cdouble(closed, 0.0)) < 1e-9 * static_cast<double>(c.Q));
  }
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    i64 Q = 2 + static_cast<i64>(rng() % 5);
    std::vector<i64> m(5);
    for (auto& v : m) v = static_cast<i64>(rng() % static_cast<std::uint64_t>(Q));
    auto direct = dual_gauss_sum(m, Q, 5);
    CHECK(std::abs(direct - cdouble(dual_gauss_sum_closed(m, Q), 0.0)) < 1e-9 * static_cast<double>(Q));
  }
}

TEST_CASE("u_kernel_l1 matches a brute-force lattice sum in d=3") {
  const int d = 3;
  const i64 Q = 2;
  bump::SpatialBump psi(bump::BumpProfile{}, d);
  auto rep = u_kernel_l1(Q, d, psi);

  // independent route: enumerate Z^3 directly, keep Q | |n|^2
  double qd = std::pow(static_cast<double>(Q), 1 - d);
  int R = static_cast<int>(psi.r_max() * static_cast<double>(Q));
  double brute = 0.0;
  for (int x = -R; x <= R; ++x)
    for (int y = -R; y <= R; ++y)
      for (int z = -R; z <= R; ++z) {
        i64 s = static_cast<i64>(x) * x + static_cast<i64>(y) * y + static_cast<i64>(z) * z;
        if (s % Q != 0) continue;
        double r = std::sqrt(static_cast<double>(s)) / static_cast<double>(Q);
        if (r >= psi.r_max()) continue;
        brute += qd * std::abs(psi(r));
      }
  CHECK(std::abs(brute - rep.value) <= rep.get("truncation_error") + 1e-9 * rep.value);
  CHECK(rep.get("truncation_error") < 0.01 * rep.value);
}
