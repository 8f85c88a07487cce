#include "dsm/lattice.hpp"

#include <cmath>
#include <limits>

namespace dsm::lattice {

RepCountTable rep_counts(int d, i64 n_max, i64 budget) {
  if (d < 1 || n_max < 0) throw std::domain_error("rep_counts: bad parameters");
  if ((n_max + 1) * static_cast<i64>(d) > budget)
    throw budget_error("rep_counts: convolution cost exceeds budget");

  const size_t len = static_cast<size_t>(n_max) + 1;
  std::vector<i64> r1(len, 0);
  r1[0] = 1;
  for (i64 k = 1; k * k <= n_max; ++k) r1[static_cast<size_t>(k * k)] = 2;

  std::vector<i64> acc = r1;
  for (int i = 1; i < d; ++i) {
    std::vector<i64> next(len, 0);
    // Sparse factor: only perfect squares contribute.
    for (i64 k = 0; k * k <= n_max; ++k) {
      const i64 s = k * k;
      const i64 w = (k == 0) ? 1 : 2;
      for (i64 n = s; n <= n_max; ++n) next[static_cast<size_t>(n)] += w * acc[static_cast<size_t>(n - s)];
    }
    acc.swap(next);
  }

  RepCountTable t;
  t.d = d;
  t.n_max = n_max;
  t.counts = std::move(acc);
  return t;
}

namespace {

void descend(int d, i64 residual, std::vector<int>& partial,
             std::vector<std::vector<int>>& out, i64 budget) {
  if (static_cast<int>(partial.size()) == d) {
    if (residual == 0) {
      if (static_cast<i64>(out.size()) >= budget)
        throw budget_error("enumerate_sphere: point count exceeds budget");
      out.push_back(partial);
    }
    return;
  }
  const int remaining = d - static_cast<int>(partial.size());
  if (residual == 0) {
    partial.push_back(0);
    descend(d, 0, partial, out, budget);
    partial.pop_back();
    return;
  }
  const int cmax = static_cast<int>(std::sqrt(static_cast<double>(residual))) + 1;
  (void)remaining;
  for (int c = -cmax; c <= cmax; ++c) {
    const i64 rem = residual - static_cast<i64>(c) * c;
    if (rem < 0) continue;
    partial.push_back(c);
    descend(d, rem, partial, out, budget);
    partial.pop_back();
  }
}

}  // namespace

SphereKernel enumerate_sphere(int d, i64 lambda_sq, i64 budget) {
  if (d < 1 || lambda_sq < 0) throw std::domain_error("enumerate_sphere: bad parameters");
  SphereKernel k;
  k.d = d;
  k.lambda_sq = lambda_sq;
  std::vector<int> partial;
  descend(d, lambda_sq, partial, k.points, budget);
  k.weight_defined = !k.points.empty();
  return k;
}

ValidationResult validate_sequence(const RadiusSequence& seq) {
  ValidationResult r;
  const auto& v = seq.lambda_sq;
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= v[i - 1]) {
      r.valid = false;
      r.violation = "not strictly increasing at index " + std::to_string(i);
      return r;
    }
  }
  if (seq.kind == SequenceKind::lacunary) {
    for (size_t i = 1; i < v.size(); ++i) {
      if (v[i] < 2 * v[i - 1]) {
        r.valid = false;
        r.violation = "doubling violated at index " + std::to_string(i);
        return r;
      }
    }
  }
  if (seq.kind == SequenceKind::factorial) {
    for (size_t i = 1; i < seq.mu.size(); ++i) {
      if (seq.mu[i] <= seq.mu[i - 1]) {
        r.valid = false;
        r.violation = "mu not strictly increasing at index " + std::to_string(i);
        return r;
      }
    }
    // Finite-prefix proxy for log(mu_k)/log(k) -> infinity: minimum of the
    // statistic over the tail half of the list.
    double stat = std::numeric_limits<double>::infinity();
    for (size_t i = seq.mu.size() / 2; i < seq.mu.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      if (k <= 1) continue;
      stat = std::min(stat, std::log(static_cast<double>(seq.mu[i])) / std::log(k));
    }
    if (std::isfinite(stat)) r.trend_statistic = stat;
  }
  return r;
}

RadiusSequence factorial_radii(const std::vector<i64>& mu, i64 factorial_cap) {
  RadiusSequence seq;
  seq.kind = SequenceKind::factorial;
  seq.mu = mu;
  i64 prev = 0;
  for (i64 m : mu) {
    if (m <= prev) throw std::domain_error("factorial_radii: mu must be strictly increasing");
    if (m > factorial_cap) throw std::domain_error("factorial_radii: mu exceeds cap");
    prev = m;
    bigint f = 1;
    for (i64 i = 2; i <= m; ++i) f *= i;
    seq.lambda_sq.push_back(f);
  }
  return seq;
}

bool congruence_check(const bigint& lambda_sq, i64 q) {
  if (q < 1) throw std::domain_error("congruence_check: q must be positive");
  return lambda_sq % q == 0;
}

AnnulusStats annulus_stats(int d, double lambda, double M) {
  if (M < 2 || lambda / M < 2)
    throw std::domain_error("annulus_stats: require M >= 2 and lambda/M >= 2");
  const double lo = lambda * (1.0 - 1.0 / M);
  const double hi = lambda * (1.0 + 1.0 / M);

  AnnulusStats st;
  const double vd = std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
  st.volume = vd * (std::pow(hi, d) - std::pow(lo, d));

  const i64 s_hi = static_cast<i64>(std::floor(hi * hi));
  const i64 s_lo = static_cast<i64>(std::ceil(lo * lo));
  if (s_lo > s_hi) return st;  // degenerate: no admissible mu^2, ratio absent

  const RepCountTable t = rep_counts(d, s_hi);
  bool any = false;
  for (i64 s = s_lo; s <= s_hi; ++s) {
    const double mu = std::sqrt(static_cast<double>(s));
    if (mu <= lo || mu >= hi) continue;  // strict inequality as displayed
    st.lattice_count += t.at(s);
    any = true;
  }
  if (any) st.ratio = static_cast<double>(st.lattice_count) / st.volume;
  return st;
}

}  // namespace dsm::lattice
