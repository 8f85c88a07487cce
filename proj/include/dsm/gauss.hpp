#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "dsm/bump.hpp"
#include "dsm/report.hpp"

// Normalized d-dimensional Gauss sums G(a, l, q), their reduction and
// magnitude laws, and the dual-sum identity behind the kernel of U.
namespace dsm::gauss {

using i64 = std::int64_t;
using cdouble = std::complex<double>;

struct GaussSumParams {
  i64 a = 0;
  std::vector<i64> l;  // d residues mod q
  i64 q = 1;
  int d = 1;
};

enum class GaussMode { direct, factored };

// G(a, l, q) = q^{-d} sum over n in Z_q^d of e_q(|n|^2 a + n.l).
// The factored mode multiplies d one-dimensional sums; the direct mode
// enumerates all q^d terms and is limited by `budget`.
cdouble gauss_sum(const GaussSumParams& p, GaussMode mode = GaussMode::factored,
                  i64 budget = 40'000'000);

// One-dimensional factor q^{-1} sum_m e_q(a m^2 + l m).
cdouble gauss_sum_1d(i64 a, i64 l, i64 q);

struct ReducedParams {
  GaussSumParams reduced;
  i64 rho = 1;  // gcd(a, all l_i, q)
};

// Divide out rho = gcd(a, l, q); the Gauss-sum value is unchanged.
ReducedParams reduce_params(const GaussSumParams& p);

// Max over primitive triples (a, l, q), q <= q_max, of |G| q^{d/2}; the
// l-grid is sampled deterministically (`samples` draws per (a, q)) when it
// is larger than the exhaustive cutoff.
MomentReport magnitude_survey(i64 q_max, int d, int samples = 1000, std::uint64_t seed = 1);

// Double sum over a in [0,Q) and l in Z_Q^d of G(a, l, Q) e_Q(-m.l).
// The closed form is Q when Q | |m|^2 and 0 otherwise.
cdouble dual_gauss_sum(const std::vector<i64>& m, i64 Q, int d);
double dual_gauss_sum_closed(const std::vector<i64>& m, i64 Q);

// Truncated lattice evaluation of ||U||_1 = Q sum over m with Q | |m|^2 of
// |psi_Q(m)|, with the certified truncation tail in params["truncation_error"].
// Throws precision_error if the tail bound exceeds 1% of the value.
MomentReport u_kernel_l1(i64 Q, int d, const bump::SpatialBump& psi, double floor = 1e-12);

}  // namespace dsm::gauss
