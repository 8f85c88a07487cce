#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsm/report.hpp"

// Lattice-point counting and enumeration on spheres and annuli in Z^d,
// plus generation/validation of radius sequences.
namespace dsm::lattice {

using i64 = std::int64_t;
using bigint = boost::multiprecision::cpp_int;

// counts[n] = r_d(n) = #{x in Z^d : |x|^2 = n}.
struct RepCountTable {
  int d = 1;
  i64 n_max = 0;
  std::vector<i64> counts;

  i64 at(i64 n) const { return counts.at(static_cast<size_t>(n)); }
};

// Exact table via d-1 integer convolutions of the one-dimensional
// square-representation array (1, 2, 0, 0, 2, ...).
RepCountTable rep_counts(int d, i64 n_max, i64 budget = 4'000'000'000LL);

struct SphereKernel {
  int d = 1;
  i64 lambda_sq = 0;
  std::vector<std::vector<int>> points;  // all x with |x|^2 = lambda_sq
  bool weight_defined = false;           // false iff the sphere is empty

  double weight() const {
    if (!weight_defined) throw std::domain_error("SphereKernel: empty sphere has no weight");
    return 1.0 / static_cast<double>(points.size());
  }
};

// Complete enumeration by recursive descent with square-residual pruning.
// An empty sphere is returned with weight_defined = false, not an error.
SphereKernel enumerate_sphere(int d, i64 lambda_sq, i64 budget = 50'000'000);

enum class SequenceKind { general, lacunary, factorial };

struct RadiusSequence {
  std::vector<bigint> lambda_sq;
  SequenceKind kind = SequenceKind::general;
  std::vector<i64> mu;  // populated for factorial sequences
};

struct ValidationResult {
  bool valid = true;
  std::string violation;               // empty when valid
  std::optional<double> trend_statistic;  // min over tail of log(mu_k)/log(k)
};

ValidationResult validate_sequence(const RadiusSequence& seq);

// lambda_k^2 = mu_k!, arbitrary precision.
RadiusSequence factorial_radii(const std::vector<i64>& mu, i64 factorial_cap = 5'000);

// True iff q divides lambda_sq.
bool congruence_check(const bigint& lambda_sq, i64 q);

struct AnnulusStats {
  i64 lattice_count = 0;
  double volume = 0.0;
  std::optional<double> ratio;  // absent when the annulus holds no admissible radius
};

// Lattice points vs volume of { x : | |x| - lambda | < lambda / M }.
AnnulusStats annulus_stats(int d, double lambda, double M);

}  // namespace dsm::lattice
