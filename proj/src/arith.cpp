#include "dsm/arith.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>

namespace dsm::arith {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

i64 lcm(i64 a, i64 b) { return std::lcm(a, b); }

Factorization factorize(i64 n) {
  if (n < 1) throw std::domain_error("factorize: n must be positive");
  if (n > kFactorizationLimit) throw std::domain_error("factorize: n exceeds limit");
  Factorization f;
  f.value = n;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.emplace_back(p, e);
  }
  if (n > 1) f.factors.emplace_back(n, 1);
  return f;
}

Basics arithmetic_basics(i64 n) {
  Basics b;
  b.factorization = factorize(n);
  for (const auto& [p, e] : b.factorization.factors) {
    b.divisor_count *= e + 1;
    i64 pe = p;
    for (int i = 1; i < e; ++i) pe *= p;
    b.phi *= pe / p * (p - 1);
    b.mobius = (e > 1) ? 0 : -b.mobius;
  }
  return b;
}

namespace {

i64 ramanujan_direct(i64 q, i64 n) {
  constexpr i64 kDirectLimit = 1'000'000;
  if (q > kDirectLimit) throw budget_error("ramanujan_sum: q beyond brute-force limit");
  double re = 0, im = 0;
  const double w = 2.0 * M_PI * static_cast<double>(((n % q) + q) % q) / static_cast<double>(q);
  for (i64 a = 1; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    re += std::cos(w * static_cast<double>(a));
    im += std::sin(w * static_cast<double>(a));
  }
  const double tol = 1e-6 * static_cast<double>(q);
  if (std::abs(im) > tol)
    throw numerical_integrity_error("ramanujan_sum: imaginary residual above tolerance");
  const double rounded = std::nearbyint(re);
  if (std::abs(re - rounded) > tol)
    throw numerical_integrity_error("ramanujan_sum: rounding residual above tolerance");
  return static_cast<i64>(rounded);
}

// Prime-power values: c_{p^k}(n) = 0, -p^{k-1}, or p^k (1 - 1/p) according
// to the power of p dividing n.
i64 ramanujan_prime_power(i64 p, int k, i64 n) {
  i64 pk1 = 1;  // p^{k-1}
  for (int i = 1; i < k; ++i) pk1 *= p;
  const i64 pk = pk1 * p;
  const i64 r = (n % pk + pk) % pk;
  if (r % pk == 0) return pk - pk1;  // p^k | n
  if (r % pk1 == 0) return -pk1;     // p^{k-1} | n, p^k not
  return 0;
}

i64 ramanujan_multiplicative(i64 q, i64 n) {
  i64 v = 1;
  for (const auto& [p, e] : factorize(q).factors) v *= ramanujan_prime_power(p, e, n);
  return v;
}

i64 ramanujan_moebius_gcd(i64 q, i64 n) {
  const i64 r = ((n % q) + q) % q;
  const i64 g = (r == 0) ? q : std::gcd(q, r);
  i64 v = 0;
  for (i64 d = 1; d * d <= g; ++d) {
    if (g % d) continue;
    v += d * arithmetic_basics(q / d).mobius;
    if (d * d != g) v += (g / d) * arithmetic_basics(q / (g / d)).mobius;
  }
  return v;
}

}  // namespace

// c_q is q-periodic on all of Z, so negative n folds into [0, q).
i64 ramanujan_sum(i64 q, i64 n, RamanujanMode mode) {
  if (q < 1) throw std::domain_error("ramanujan_sum: q must be positive");
  if (q == 1) return 1;
  n = ((n % q) + q) % q;
  switch (mode) {
    case RamanujanMode::direct:
      return ramanujan_direct(q, n);
    case RamanujanMode::multiplicative:
      return ramanujan_multiplicative(q, n);
    case RamanujanMode::moebius_gcd:
      return ramanujan_moebius_gcd(q, n);
  }
  throw std::domain_error("ramanujan_sum: bad mode");
}

std::vector<i64> ramanujan_row(i64 q) {
  std::vector<i64> row(static_cast<size_t>(q));
  for (i64 n = 0; n < q; ++n) row[static_cast<size_t>(n)] = ramanujan_sum(q, n, RamanujanMode::moebius_gcd);
  return row;
}

PartialSums partial_sums(i64 n, i64 N) {
  if (N < 1) throw std::domain_error("partial_sums: N must be positive");
  PartialSums s;
  for (i64 q = 1; q <= N; ++q) {
    const i64 c = ramanujan_sum(q, n, RamanujanMode::multiplicative);
    s.signed_sum += c;
    s.abs_sum += std::abs(c);
  }
  return s;
}

MomentReport ramanujan_moment(i64 Q, int j, i64 M, i64 budget) {
  if (Q < 1 || j < 1 || M < 1) throw std::domain_error("ramanujan_moment: bad parameters");
  if (M * Q > budget) throw budget_error("ramanujan_moment: M*Q exceeds budget");

  // One period of |c_q| per q; S_Q(n) then costs Q lookups.
  std::vector<std::vector<i64>> rows;
  rows.reserve(static_cast<size_t>(Q));
  for (i64 q = 1; q <= Q; ++q) rows.push_back(ramanujan_row(q));

  cpp_int acc = 0;
  for (i64 n = 1; n <= M; ++n) {
    i64 s = 0;
    for (i64 q = 1; q <= Q; ++q) s += std::abs(rows[static_cast<size_t>(q - 1)][static_cast<size_t>(n % q)]);
    cpp_int term = s;
    cpp_int pw = 1;
    for (int i = 0; i < j; ++i) pw *= term;
    acc += pw;
  }

  MomentReport rep;
  rep.set("Q", static_cast<double>(Q));
  rep.set("j", j);
  rep.set("M", static_cast<double>(M));
  const double mean = static_cast<double>(cpp_rational(acc, M));
  rep.value = std::pow(mean, 1.0 / j);
  rep.oracle_checked = false;
  return rep;
}

MomentReport lcm_moment(i64 Q, int j, i64 budget) {
  if (Q < 1 || j < 1) throw std::domain_error("lcm_moment: bad parameters");
  double tuples = std::pow(static_cast<double>(Q), j);
  if (tuples > static_cast<double>(budget)) throw budget_error("lcm_moment: Q^j exceeds budget");

  // Exact enumeration over all j-tuples, odometer style.
  std::vector<i64> q(static_cast<size_t>(j), 1);
  cpp_rational total = 0;
  while (true) {
    i64 L = 1;
    for (i64 v : q) L = std::lcm(L, v);
    total += cpp_rational(1, L);
    int pos = 0;
    while (pos < j && q[static_cast<size_t>(pos)] == Q) {
      q[static_cast<size_t>(pos)] = 1;
      ++pos;
    }
    if (pos == j) break;
    ++q[static_cast<size_t>(pos)];
  }

  // Upper route via d(r) <= #tuples with lcm r: sum_{r <= Q^j} d(r)^j / r.
  const i64 cap = static_cast<i64>(tuples);
  std::vector<int> divc(static_cast<size_t>(cap + 1), 0);
  for (i64 d = 1; d <= cap; ++d)
    for (i64 m = d; m <= cap; m += d) ++divc[static_cast<size_t>(m)];
  double route = 0;
  for (i64 r = 1; r <= cap; ++r)
    route += std::pow(static_cast<double>(divc[static_cast<size_t>(r)]), j) / static_cast<double>(r);

  MomentReport rep;
  rep.set("Q", static_cast<double>(Q));
  rep.set("j", j);
  rep.set("divisor_route", route);
  rep.value = static_cast<double>(total);
  if (rep.value > route + 1e-12)
    throw numerical_integrity_error("lcm_moment: enumeration exceeds divisor-route bound");
  rep.oracle_checked = true;
  return rep;
}

i64 gcd_product_period_sum(const std::vector<i64>& q_vec, i64 budget) {
  if (q_vec.empty()) throw std::domain_error("gcd_product_period_sum: empty tuple");
  i64 L = 1;
  for (i64 q : q_vec) {
    if (q < 1) throw std::domain_error("gcd_product_period_sum: entries must be positive");
    L = std::lcm(L, q);
  }
  if (4 * L > budget) throw budget_error("gcd_product_period_sum: lcm exceeds budget");

  auto sum_to = [&](i64 bound) {
    i64 s = 0;
    for (i64 n = 1; n <= bound; ++n) {
      i64 prod = 1;
      for (i64 q : q_vec) prod *= std::gcd(q, n);
      s += prod;
    }
    return s;
  };

  const i64 base = sum_to(L);
  // Period-extension identity: the average over n <= mL matches the
  // average over one period, exactly.
  for (i64 m : {2, 3}) {
    if (m * L > budget) break;
    if (sum_to(m * L) != m * base)
      throw numerical_integrity_error("gcd_product_period_sum: period extension failed");
  }
  return base;
}

}  // namespace dsm::arith
