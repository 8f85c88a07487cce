#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dsm/report.hpp"

// Exact integer arithmetic for multiplicative functions, Ramanujan sums,
// and the moment quantities built from them.
namespace dsm::arith {

using i64 = std::int64_t;

inline constexpr i64 kFactorizationLimit = 1'000'000'000'000LL;  // 10^12

struct Factorization {
  i64 value = 1;
  std::vector<std::pair<i64, int>> factors;  // (prime, exponent), primes increasing
};

struct Basics {
  Factorization factorization;
  int mobius = 1;         // in {-1, 0, 1}
  i64 phi = 1;            // Euler totient
  i64 divisor_count = 1;  // d(n)
};

// Trial division up to sqrt(n).  Throws std::domain_error for n < 1 or
// n beyond kFactorizationLimit.
Factorization factorize(i64 n);

Basics arithmetic_basics(i64 n);

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);

enum class RamanujanMode { direct, multiplicative, moebius_gcd };

// Ramanujan sum c_q(n) = sum over a in Z_q^* of e^{2 pi i a n / q}.
//   direct:         rounds the real part of the exponential sum; throws
//                   numerical_integrity_error if the imaginary residual
//                   exceeds 1e-6 * q.
//   multiplicative: prime-power case analysis times multiplicativity in q.
//   moebius_gcd:    c_q(n) = sum_{d | gcd(q, n)} d * mu(q/d), gcd(q,0) := q.
i64 ramanujan_sum(i64 q, i64 n, RamanujanMode mode = RamanujanMode::multiplicative);

// C_N(n) = sum_{q<=N} c_q(n) and S_N(n) = sum_{q<=N} |c_q(n)|.
struct PartialSums {
  i64 signed_sum = 0;  // C_N(n)
  i64 abs_sum = 0;     // S_N(n)
};
PartialSums partial_sums(i64 n, i64 N);

// One-period table of c_q(n mod q) for n = 0..q-1, via the moebius_gcd route.
std::vector<i64> ramanujan_row(i64 q);

// [ (1/M) sum_{n=1..M} S_Q(n)^j ]^{1/j}, exact integer accumulation before
// the final real root.  Throws budget_error when M * Q exceeds the budget.
MomentReport ramanujan_moment(i64 Q, int j, i64 M, i64 budget = 200'000'000);

// Exact enumeration of sum over q-tuples in [1,Q]^j of 1/lcm(tuple), as a
// rational accumulated exactly; the divisor-function upper route
// sum_{q <= Q^j} d(q)^j / q is reported alongside in params["divisor_route"].
MomentReport lcm_moment(i64 Q, int j, i64 budget = 20'000'000);

// sum_{n=1..L} prod_i gcd(q_i, n) with L = lcm(q_vec); also verifies that
// the sum over m*L equals m times the sum over L for m in {2, 3}.
i64 gcd_product_period_sum(const std::vector<i64>& q_vec, i64 budget = 50'000'000);

}  // namespace dsm::arith
