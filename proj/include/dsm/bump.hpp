#pragma once

#include <memory>
#include <vector>

#include "dsm/report.hpp"

// Radial frequency-side bump profiles and the sphere measure's Fourier
// transform, shared by the multiplier and Gauss-sum modules.
namespace dsm::bump {

// Smooth radial profile with value 1 on [0, 1/2] and 0 from `support` on,
// monotone nonincreasing in between (exp(-1/x) ramp).  The default support
// of 1 matches the sandwich 1_{r<=1/2} <= profile <= 1_{r<=1}.  A profile
// with support 2/3 keeps neighbouring arcs at spacing 1/Q from overlapping
// after rescaling by Q and 2Q, which makes the multiplier factorization an
// exact identity.
struct BumpProfile {
  double support = 1.0;

  double operator()(double r) const;

  // Stated spatial decay rate used by truncation bookkeeping: the radial
  // inverse transform decays faster than r^{-decay_certificate}.
  int decay_certificate = 8;
};

// Radial Fourier transform of the uniform probability measure on the unit
// sphere S^{d-1}: Gamma(d/2) (pi t)^{-(d/2-1)} J_{d/2-1}(2 pi t); value 1
// at t = 0, decay t^{-(d-1)/2}.
double sphere_ft(int d, double t);

// Independent oracle: 1-d quadrature of the oscillatory surface integral
// over the polar angle.
double sphere_ft_quadrature(int d, double t);

// Tabulated radial profile of the spatial (inverse Fourier) transform of a
// radial frequency profile, computed by adaptive Hankel quadrature
//   f(r) = 2 pi r^{-(d/2-1)} Int_0^support profile(s) J_{d/2-1}(2 pi r s) s^{d/2} ds.
class SpatialBump {
 public:
  SpatialBump(const BumpProfile& profile, int d, double r_max = 32.0, double step = 0.005);

  double operator()(double r) const;  // cubic interpolation of the table
  double r_max() const { return r_max_; }
  int dim() const { return d_; }
  const BumpProfile& profile() const { return profile_; }

  // Direct quadrature at a single radius (no table); the oracle route.
  static double quadrature(const BumpProfile& profile, int d, double r);

 private:
  BumpProfile profile_;
  int d_;
  double r_max_;
  double step_;
  std::vector<double> table_;
};

}  // namespace dsm::bump
