#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <vector>

#include "dsm/grid.hpp"
#include "dsm/lattice.hpp"
#include "dsm/report.hpp"

// Discrete spherical averages, maximal and stopping-time operators on
// finite tori, and empirical norm/pairing estimation.
namespace dsm::operators {

using grid::GridFunction;
using i64 = std::int64_t;
using rational = boost::multiprecision::cpp_rational;

// A_lambda f(x) = s^-1 sum_{|n|^2 = lambda^2} f(x - n), torus semantics.
// With no_wrap set, requires M > 2 lambda so compactly supported data never
// wraps (recovering Z^d semantics).
GridFunction spherical_average(const GridFunction& f, const lattice::SphereKernel& kernel,
                               bool no_wrap = false);

// Exact-rational route for bit-exact oracle comparison on small grids.
std::vector<rational> spherical_average_exact(const std::vector<rational>& f, int d, int M,
                                              const lattice::SphereKernel& kernel);

// sup over the sequence of spherical averages (f >= 0 expected).
GridFunction maximal_function(const GridFunction& f,
                              const std::vector<lattice::SphereKernel>& kernels);

// Per-site radius selection tau; entries index into `kernels`.
struct StoppingTime {
  int d = 1;
  int M = 1;
  std::vector<int> k_index;
};

GridFunction stopping_time_apply(const GridFunction& f,
                                 const std::vector<lattice::SphereKernel>& kernels,
                                 const StoppingTime& tau);

// Argmax stopping time of the maximal function (ties -> lowest index).
StoppingTime argmax_stopping_time(const GridFunction& f,
                                  const std::vector<lattice::SphereKernel>& kernels);

// <maximal(1_F), 1_G> / (|F|^{1/p} |G|^{1/p'}).
MomentReport pairing_ratio(const GridFunction& F, const GridFunction& G,
                           const std::vector<lattice::SphereKernel>& kernels, double p);

// A linear operator on grid functions together with its adjoint.
struct LinearGridOp {
  std::function<GridFunction(const GridFunction&)> apply;
  std::function<GridFunction(const GridFunction&)> apply_adjoint;  // empty => self-adjoint
};

// Largest singular value via power iteration on op* . op.  params carry
// iteration count and convergence flag; non-convergence is flagged, not
// thrown.
MomentReport operator_norm_l2(const LinearGridOp& op, int d, int M, int max_iter = 200,
                              double tol = 1e-10, std::uint64_t seed = 7);

// l2 -> l2 norm of A_lambda - C_lambda, where C is assembled from arcs
// q <= n_arcs.  Both are convolution operators, so the norm equals the max
// modulus of the multiplier difference over the dual grid; symmetry of both
// multipliers reduces the scan to sorted nonnegative frequencies.
MomentReport error_operator_norm(i64 lambda_sq, i64 n_arcs, int d, int M);

}  // namespace dsm::operators
