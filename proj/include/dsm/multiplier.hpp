#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "dsm/bump.hpp"
#include "dsm/report.hpp"

// Frequency-side constructions: major-arc multipliers, the composite
// multipliers b/u/t of the highly composite decomposition, and the hybrid
// kernels K_lambda and M_{1,2,lambda}.
namespace dsm::multiplier {

using i64 = std::int64_t;
using cdouble = std::complex<double>;

struct Grid {
  int d = 1;
  int M = 1;
};

// Dense complex multiplier over the DFT dual grid of (Z/MZ)^d, row-major,
// last coordinate fastest.
struct FreqMultiplier {
  int d = 1;
  int M = 1;
  std::vector<cdouble> values;

  size_t size() const { return values.size(); }
};

// The standard bump (support 1) and the narrowed bump (support 2/3) used
// where the arc factorization must be an exact identity.
const bump::BumpProfile& standard_bump();
const bump::BumpProfile& factorization_bump();

// Shared spatial profile tables, keyed by (d, support); built lazily.
const bump::SpatialBump& spatial_bump(int d, const bump::BumpProfile& profile);

// Pointwise value of the arc multiplier
//   c^{a/q}_lambda(xi) = sum_l G(a,l,q) psi~(q|xi - l/q|) dsigma~_lambda(|xi - l/q|)
// with torus-periodic minimal-norm distance; xi in [0,1)^d.
cdouble arc_value(i64 a, i64 q, double lambda, const std::vector<double>& xi,
                  const bump::BumpProfile& bp);

// Full major-arc multiplier sum_{q<=q_max} sum_{a in Z_q^*} e_q(-lambda^2 a) c^{a/q}_lambda.
cdouble major_arc_value(i64 lambda_sq, i64 q_max, const std::vector<double>& xi,
                        const bump::BumpProfile& bp);

// Multiplier of the spherical average A_lambda at xi, computed exactly as
// s^-1 sum_{|n|^2 = lambda^2} e(-n.xi) by a squares-convolution DP.
double average_multiplier(i64 lambda_sq, i64 rep_count, const std::vector<double>& xi);

// Dense arc multiplier on a grid (q must resolve: q <= M).
FreqMultiplier arc_multiplier_caq(i64 a, i64 q, i64 lambda_sq, Grid grid);

struct CompositeMultipliers {
  FreqMultiplier b, u, t;
};

// b, u, t of the highly composite decomposition, assembled with the
// narrowed bump so b = t * u holds pointwise.  Requires Q <= M/4 so that
// the 2Q-scale arcs are disjoint on the grid.
CompositeMultipliers composite_multipliers(i64 Q, i64 lambda_sq, Grid grid);

// Radial samples of K_lambda = psi_{lambda/N} * dsigma_lambda at lattice
// radii; width can be overridden (e.g. lambda/N^beta for flatness checks).
class KKernel {
 public:
  KKernel(i64 lambda_sq, i64 N, int d, double truncation_floor = 1e-10,
          double width_override = 0.0);

  // K at squared radius s; zero outside the sampled annulus.
  double at_radius_sq(i64 s) const;
  double value(double r) const;  // continuous evaluation

  i64 s_lo() const { return s_lo_; }
  i64 s_hi() const { return s_hi_; }
  double lattice_mass() const { return mass_; }  // sum_n K(n) over Z^d
  double width() const { return width_; }
  double lambda() const { return lambda_; }
  int dim() const { return d_; }

 private:
  int d_;
  double lambda_, width_, floor_;
  i64 s_lo_ = 0, s_hi_ = -1;
  std::vector<double> samples_;  // index s - s_lo_
  double mass_ = 0.0;
};

// M_{1,2,lambda}(n) = K_lambda(n) * C_N(lambda^2 - |n|^2); values depend on
// |n|^2 only, stored radially.
struct HybridKernel {
  int d = 1;
  i64 lambda_sq = 0;
  i64 N = 1;
  std::map<i64, double> samples;  // squared radius -> kernel value
};

HybridKernel m12_kernel(i64 lambda_sq, i64 N, int d, double truncation_floor = 1e-10);

// Psi_2 = [ sum_n K_lambda(n) |C_N(lambda^2 - |n|^2)|^j ]^{1/j}.
MomentReport psi2_statistic(i64 lambda_sq, i64 N, int j, int d);

}  // namespace dsm::multiplier
