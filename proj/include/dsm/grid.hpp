#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dsm/multiplier.hpp"
#include "dsm/report.hpp"

// Real-valued functions on the discrete torus (Z/MZ)^d and their DFT-side
// manipulation.
namespace dsm::grid {

using i64 = std::int64_t;
using cdouble = std::complex<double>;

// Dense real array indexed row-major over (Z/MZ)^d, last coordinate fastest.
struct GridFunction {
  int d = 1;
  int M = 1;
  std::uint32_t flags = 0;  // bit 0: indicator-valued
  std::vector<double> values;

  static constexpr std::uint32_t kIndicator = 1u;

  GridFunction() = default;
  GridFunction(int d_, int M_, double fill = 0.0);

  size_t size() const { return values.size(); }
  size_t index(const std::vector<int>& x) const;  // coordinates taken mod M
  double& at(const std::vector<int>& x) { return values[index(x)]; }
  double at(const std::vector<int>& x) const { return values[index(x)]; }

  double norm_lp(double p) const;  // p = inf allowed via huge p? use norm_linf
  double norm_linf() const;
  double sum() const;
};

double inner_product(const GridFunction& f, const GridFunction& g);

// Serialization: JSON ({"d","M","flags","values"}) and a flat binary layout
// ("DSMG", u32 d, u32 M, u32 flags, f64 values row-major, little endian).
void save_json(const GridFunction& f, std::ostream& os);
GridFunction load_json(std::istream& is);
void save_binary(const GridFunction& f, std::ostream& os);
GridFunction load_binary(std::istream& is);

// FreqMultiplier serialization mirrors GridFunction with interleaved
// complex values ("DSMF" magic for the binary layout).
void save_json(const multiplier::FreqMultiplier& m, std::ostream& os);
multiplier::FreqMultiplier load_multiplier_json(std::istream& is);
void save_binary(const multiplier::FreqMultiplier& m, std::ostream& os);
multiplier::FreqMultiplier load_multiplier_binary(std::istream& is);

// Forward DFT: F(k) = sum_x f(x) e(-2 pi i k.x / M).
std::vector<cdouble> dft(const GridFunction& f);
// Apply a frequency multiplier via DFT / pointwise product / inverse DFT,
// returning the real part (imaginary residual is reported if requested).
GridFunction apply_multiplier(const GridFunction& f, const multiplier::FreqMultiplier& m,
                              double* imag_residual = nullptr);
// Inverse DFT of a multiplier: the spatial kernel values.
std::vector<cdouble> kernel_of(const multiplier::FreqMultiplier& m);

}  // namespace dsm::grid
