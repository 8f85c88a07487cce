#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "dsm/grid.hpp"
#include "dsm/lattice.hpp"
#include "dsm/multiplier.hpp"
#include "dsm/operators.hpp"

using namespace dsm;
using namespace dsm::operators;
using grid::GridFunction;

namespace {

GridFunction random_grid(int d, int M, std::uint64_t seed) {
  GridFunction f(d, M);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& v : f.values) v = dist(rng);
  return f;
}

GridFunction naive_average(const GridFunction& f, const lattice::SphereKernel& k) {
  GridFunction out(f.d, f.M);
  std::vector<int> x(static_cast<size_t>(f.d), 0);
  for (size_t flat = 0; flat < f.size(); ++flat) {
    double acc = 0;
    for (const auto& p : k.points) {
      std::vector<int> y(x);
      for (int i = 0; i < f.d; ++i) y[static_cast<size_t>(i)] -= p[static_cast<size_t>(i)];
      acc += f.at(y);
    }
    out.values[flat] = acc * k.weight();
    for (int i = f.d - 1; i >= 0; --i) {
      if (++x[static_cast<size_t>(i)] < f.M) break;
      x[static_cast<size_t>(i)] = 0;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("GridFunction indexing, norms, serialization round trips") {
  GridFunction f(2, 4);
  f.at({1, 2}) = 3.5;
  f.at({-1, 6}) = 2.0;  // wraps to (3, 2)
  CHECK(f.at({3, 2}) == 2.0);
  CHECK(f.values[1 * 4 + 2] == 3.5);
  CHECK(f.sum() == doctest::Approx(5.5));
  CHECK(f.norm_linf() == 3.5);
  CHECK(f.norm_lp(1.0) == doctest::Approx(5.5));
  CHECK(f.norm_lp(2.0) == doctest::Approx(std::sqrt(3.5 * 3.5 + 4.0)));

  std::stringstream js;
  grid::save_json(f, js);
  auto fj = grid::load_json(js);
  CHECK(fj.d == 2);
  CHECK(fj.M == 4);
  CHECK(fj.values == f.values);

  std::stringstream bs;
  grid::save_binary(f, bs);
  auto fb = grid::load_binary(bs);
  CHECK(fb.values == f.values);
  CHECK(fb.flags == f.flags);

  multiplier::FreqMultiplier m;
  m.d = 1;
  m.M = 3;
  m.values = {{1.0, 0.0}, {0.25, -0.5}, {0.25, 0.5}};
  std::stringstream ms;
  grid::save_json(m, ms);
  auto mj = grid::load_multiplier_json(ms);
  CHECK(mj.values == m.values);
  std::stringstream mb;
  grid::save_binary(m, mb);
  auto mbb = grid::load_multiplier_binary(mb);
  CHECK(mbb.values == m.values);
}

TEST_CASE("spherical_average equals the naive convolution") {
  auto k = lattice::enumerate_sphere(2, 2);
  auto f = random_grid(2, 6, 42);
  auto fast = spherical_average(f, k);
  auto naive = naive_average(f, k);
  for (size_t i = 0; i < f.size(); ++i)
    CHECK(fast.values[i] == doctest::Approx(naive.values[i]).epsilon(1e-12));

  auto k5 = lattice::enumerate_sphere(5, 4);
  auto f5 = random_grid(5, 6, 43);
  auto fast5 = spherical_average(f5, k5);
  auto naive5 = naive_average(f5, k5);
  for (size_t i = 0; i < f5.size(); ++i)
    CHECK(fast5.values[i] == doctest::Approx(naive5.values[i]).epsilon(1e-12));
}

TEST_CASE("spherical_average preserves constants and mass") {
  auto k = lattice::enumerate_sphere(3, 9);
  GridFunction ones(3, 8, 1.0);
  auto avg = spherical_average(ones, k);
  for (double v : avg.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  auto f = random_grid(3, 8, 7);
  CHECK(spherical_average(f, k).sum() == doctest::Approx(f.sum()).epsilon(1e-12));
}

TEST_CASE("spherical_average is self-adjoint and translation equivariant") {
  auto k = lattice::enumerate_sphere(3, 4);
  auto f = random_grid(3, 7, 1);
  auto g = random_grid(3, 7, 2);
  CHECK(grid::inner_product(spherical_average(f, k), g) ==
        doctest::Approx(grid::inner_product(f, spherical_average(g, k))).epsilon(1e-12));

  // shift then average == average then shift
  auto shift = [](const GridFunction& h) {
    GridFunction out(h.d, h.M);
    std::vector<int> x(static_cast<size_t>(h.d), 0);
    for (size_t flat = 0; flat < h.size(); ++flat) {
      std::vector<int> y(x);
      y[0] += 3;
      y[2] -= 1;
      out.values[out.index(y)] = h.values[flat];
      for (int i = h.d - 1; i >= 0; --i) {
        if (++x[static_cast<size_t>(i)] < h.M) break;
        x[static_cast<size_t>(i)] = 0;
      }
    }
    return out;
  };
  auto a = spherical_average(shift(f), k);
  auto b = shift(spherical_average(f, k));
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
}

TEST_CASE("no_wrap demands a large enough torus") {
  auto k = lattice::enumerate_sphere(2, 9);  // lambda = 3
  auto f = random_grid(2, 6, 3);
  CHECK_THROWS_AS(spherical_average(f, k, /*no_wrap=*/true), std::domain_error);
  auto g = random_grid(2, 7, 3);
  CHECK_NOTHROW(spherical_average(g, k, /*no_wrap=*/true));
}

TEST_CASE("exact rational route is bit-exact against the rational oracle") {
  auto k = lattice::enumerate_sphere(2, 5);
  const int M = 6;
  std::vector<rational> f(36);
  for (size_t i = 0; i < f.size(); ++i)
    f[i] = rational(static_cast<int>(i * 7 % 13) - 6, static_cast<int>(i % 4) + 1);
  auto got = spherical_average_exact(f, 2, M, k);

  // independent naive rational convolution
  const i64 cnt = static_cast<i64>(k.points.size());
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) {
      rational acc = 0;
      for (const auto& p : k.points) {
        int ya = ((a - p[0]) % M + M) % M;
        int yb = ((b - p[1]) % M + M) % M;
        acc += f[static_cast<size_t>(ya * M + yb)];
      }
      acc /= cnt;
      CHECK(got[static_cast<size_t>(a * M + b)] == acc);
    }

  // double route agrees to rounding
  GridFunction fd(2, M);
  for (size_t i = 0; i < f.size(); ++i)
    fd.values[i] = f[i].convert_to<double>();
  auto avg = spherical_average(fd, k);
  for (size_t i = 0; i < f.size(); ++i)
    CHECK(avg.values[i] ==
          doctest::Approx(got[i].convert_to<double>()).epsilon(1e-12));
}

TEST_CASE("DFT route agrees with the spatial convolution to 1e-9") {
  const int d = 3, M = 8;
  const i64 lam2 = 4;
  auto k = lattice::enumerate_sphere(d, lam2);
  auto f = random_grid(d, M, 11);
  auto spatial = spherical_average(f, k);

  auto r = lattice::rep_counts(d, lam2);
  multiplier::FreqMultiplier m;
  m.d = d;
  m.M = M;
  m.values.resize(f.size());
  std::vector<int> kk(static_cast<size_t>(d), 0);
  for (size_t flat = 0; flat < f.size(); ++flat) {
    std::vector<double> xi(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) xi[static_cast<size_t>(i)] = kk[static_cast<size_t>(i)] / static_cast<double>(M);
    m.values[flat] = multiplier::average_multiplier(lam2, r.at(lam2), xi);
    for (int i = d - 1; i >= 0; --i) {
      if (++kk[static_cast<size_t>(i)] < M) break;
      kk[static_cast<size_t>(i)] = 0;
    }
  }
  double resid = 0;
  auto viaDft = grid::apply_multiplier(f, m, &resid);
  CHECK(resid < 1e-9);
  for (size_t i = 0; i < f.size(); ++i)
    CHECK(std::abs(viaDft.values[i] - spatial.values[i]) < 1e-9);
}

TEST_CASE("dft of a delta is flat; kernel_of inverts") {
  GridFunction delta(2, 4);
  delta.at({0, 0}) = 1.0;
  auto F = grid::dft(delta);
  for (const auto& v : F) CHECK(std::abs(v - grid::cdouble(1.0, 0.0)) < 1e-12);

  multiplier::FreqMultiplier m;
  m.d = 2;
  m.M = 4;
  m.values.assign(16, {1.0, 0.0});
  auto ker = grid::kernel_of(m);  // inverse of flat multiplier = delta
  CHECK(std::abs(ker[0] - grid::cdouble(1.0, 0.0)) < 1e-12);
  for (size_t i = 1; i < ker.size(); ++i) CHECK(std::abs(ker[i]) < 1e-12);
}

TEST_CASE("maximal function dominates every average and matches one kernel") {
  std::vector<lattice::SphereKernel> ks = {lattice::enumerate_sphere(2, 1),
                                           lattice::enumerate_sphere(2, 2),
                                           lattice::enumerate_sphere(2, 4)};
  auto f = random_grid(2, 9, 21);
  for (auto& v : f.values) v = std::abs(v);
  auto mx = maximal_function(f, ks);
  for (const auto& k : ks) {
    auto avg = spherical_average(f, k);
    for (size_t i = 0; i < f.size(); ++i) CHECK(mx.values[i] >= avg.values[i] - 1e-14);
  }
  auto single = maximal_function(f, {ks[1]});
  auto avg1 = spherical_average(f, ks[1]);
  for (size_t i = 0; i < f.size(); ++i)
    CHECK(single.values[i] == doctest::Approx(avg1.values[i]).epsilon(1e-14));
}

TEST_CASE("argmax stopping time linearizes the maximal function") {
  std::vector<lattice::SphereKernel> ks = {lattice::enumerate_sphere(2, 1),
                                           lattice::enumerate_sphere(2, 4),
                                           lattice::enumerate_sphere(2, 5)};
  auto f = random_grid(2, 8, 33);
  for (auto& v : f.values) v = std::abs(v);
  auto tau = argmax_stopping_time(f, ks);
  auto linear = stopping_time_apply(f, ks, tau);
  auto mx = maximal_function(f, ks);
  for (size_t i = 0; i < f.size(); ++i)
    CHECK(linear.values[i] == doctest::Approx(mx.values[i]).epsilon(1e-14));
  for (int idx : tau.k_index) {
    CHECK(idx >= 0);
    CHECK(idx < 3);
  }
  // constant input: every average is 1, ties resolve to the lowest index
  GridFunction ones(2, 8, 1.0);
  auto tie = argmax_stopping_time(ones, ks);
  for (int idx : tie.k_index) CHECK(idx == 0);
}

TEST_CASE("pairing_ratio on full indicators is exactly one") {
  std::vector<lattice::SphereKernel> ks = {lattice::enumerate_sphere(2, 2)};
  GridFunction full(2, 6, 1.0);
  full.flags = GridFunction::kIndicator;
  auto rep = pairing_ratio(full, full, ks, 1.5);
  CHECK(rep.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("operator_norm_l2: identity, scaling, averaging operator") {
  LinearGridOp ident{[](const GridFunction& f) { return f; }, nullptr};
  auto r = operator_norm_l2(ident, 2, 5);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.get("converged") == 1.0);

  LinearGridOp triple{[](const GridFunction& f) {
                        GridFunction g = f;
                        for (auto& v : g.values) v *= -3.0;
                        return g;
                      },
                      nullptr};
  CHECK(operator_norm_l2(triple, 2, 5).value == doctest::Approx(3.0).epsilon(1e-8));

  // averaging operator: multiplier peaks at frequency zero with value 1
  auto k = lattice::enumerate_sphere(2, 2);
  LinearGridOp avg{[&](const GridFunction& f) { return spherical_average(f, k); }, nullptr};
  CHECK(operator_norm_l2(avg, 2, 6).value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("error_operator_norm: zero arcs leaves the full averaging operator") {
  auto r = error_operator_norm(4, 0, 3, 8);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));  // multiplier max at xi = 0
}
