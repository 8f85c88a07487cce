#include "dsm/gauss.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "dsm/lattice.hpp"

namespace dsm::gauss {

namespace {

inline cdouble unit_phase(i64 num, i64 q) {
  // e_q(num) with num reduced mod q to keep the argument small.
  const double x = 2.0 * M_PI * static_cast<double>(((num % q) + q) % q) / static_cast<double>(q);
  return {std::cos(x), std::sin(x)};
}

i64 gcd_all(const GaussSumParams& p) {
  i64 g = std::gcd(p.a, p.q);
  for (i64 li : p.l) g = std::gcd(g, ((li % p.q) + p.q) % p.q);
  return g;
}

}  // namespace

cdouble gauss_sum_1d(i64 a, i64 l, i64 q) {
  cdouble s = 0;
  for (i64 m = 0; m < q; ++m) s += unit_phase(a * m * m + l * m, q);
  return s / static_cast<double>(q);
}

cdouble gauss_sum(const GaussSumParams& p, GaussMode mode, i64 budget) {
  if (p.q < 1 || p.d < 1 || static_cast<int>(p.l.size()) != p.d)
    throw std::domain_error("gauss_sum: bad parameters");
  if (mode == GaussMode::factored) {
    cdouble v = 1.0;
    for (i64 li : p.l) v *= gauss_sum_1d(p.a, li, p.q);
    return v;
  }
  // Direct enumeration over Z_q^d.
  double cost = std::pow(static_cast<double>(p.q), p.d);
  if (cost > static_cast<double>(budget)) throw budget_error("gauss_sum: q^d exceeds budget");
  std::vector<i64> n(static_cast<size_t>(p.d), 0);
  cdouble s = 0;
  while (true) {
    i64 phase = 0;
    for (int i = 0; i < p.d; ++i) phase += p.a * n[i] * n[i] + n[i] * p.l[i];
    s += unit_phase(phase, p.q);
    int pos = 0;
    while (pos < p.d && n[static_cast<size_t>(pos)] == p.q - 1) {
      n[static_cast<size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == p.d) break;
    ++n[static_cast<size_t>(pos)];
  }
  return s / std::pow(static_cast<double>(p.q), p.d);
}

ReducedParams reduce_params(const GaussSumParams& p) {
  ReducedParams r;
  r.rho = gcd_all(p);
  if (r.rho == 0) r.rho = p.q;  // a = 0, l = 0: everything collapses to q = 1
  r.reduced.a = p.a / r.rho;
  r.reduced.q = p.q / r.rho;
  r.reduced.d = p.d;
  r.reduced.l.resize(p.l.size());
  for (size_t i = 0; i < p.l.size(); ++i)
    r.reduced.l[i] = (((p.l[i] % p.q) + p.q) % p.q) / r.rho;
  if (r.reduced.q == 0) {
    r.reduced.q = 1;
    r.reduced.a = 0;
    std::fill(r.reduced.l.begin(), r.reduced.l.end(), 0);
  }
  return r;
}

MomentReport magnitude_survey(i64 q_max, int d, int samples, std::uint64_t seed) {
  if (q_max < 1 || d < 1) throw std::domain_error("magnitude_survey: bad parameters");
  double worst = 0;
  for (i64 q = 1; q <= q_max; ++q) {
    const double scale = std::pow(static_cast<double>(q), d / 2.0);
    const double l_space = std::pow(static_cast<double>(q), d);
    const bool exhaustive = l_space <= 100'000.0;
    for (i64 a = 0; a < q || (q == 1 && a == 0); ++a) {
      GaussSumParams p;
      p.a = a;
      p.q = q;
      p.d = d;
      p.l.assign(static_cast<size_t>(d), 0);
      auto consider = [&] {
        i64 g = std::gcd(p.a, p.q);
        for (i64 li : p.l) g = std::gcd(g, li);
        if (q > 1 && g != 1) return;  // primitive triples only
        worst = std::max(worst, std::abs(gauss_sum(p)) * scale);
      };
      if (exhaustive) {
        while (true) {
          consider();
          int pos = 0;
          while (pos < d && p.l[static_cast<size_t>(pos)] == q - 1) {
            p.l[static_cast<size_t>(pos)] = 0;
            ++pos;
          }
          if (pos == d) break;
          ++p.l[static_cast<size_t>(pos)];
        }
      } else {
        std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(q * 1024 + a));
        std::uniform_int_distribution<i64> dist(0, q - 1);
        for (int t = 0; t < samples; ++t) {
          for (auto& li : p.l) li = dist(rng);
          consider();
        }
      }
      if (q == 1) break;
    }
  }
  MomentReport rep;
  rep.set("q_max", static_cast<double>(q_max));
  rep.set("d", d);
  rep.value = worst;
  return rep;
}

cdouble dual_gauss_sum(const std::vector<i64>& m, i64 Q, int d) {
  if (Q < 1 || static_cast<int>(m.size()) != d)
    throw std::domain_error("dual_gauss_sum: bad parameters");
  // G factors over coordinates, so the double sum factors as well:
  // sum_a prod_i [ sum_l g1(a, l; Q) e_Q(-m_i l) ].
  cdouble total = 0;
  for (i64 a = 0; a < Q; ++a) {
    cdouble prod = 1.0;
    for (int i = 0; i < d; ++i) {
      cdouble inner = 0;
      for (i64 l = 0; l < Q; ++l) inner += gauss_sum_1d(a, l, Q) * unit_phase(-m[i] * l, Q);
      prod *= inner;
    }
    total += prod;
  }
  return total;
}

double dual_gauss_sum_closed(const std::vector<i64>& m, i64 Q) {
  i64 norm_sq = 0;
  for (i64 mi : m) norm_sq += mi * mi;
  return (norm_sq % Q == 0) ? static_cast<double>(Q) : 0.0;
}

MomentReport u_kernel_l1(i64 Q, int d, const bump::SpatialBump& psi, double floor) {
  if (Q < 1 || d < 2) throw std::domain_error("u_kernel_l1: bad parameters");

  // Truncation radius: smallest tabulated radius beyond which |psi| stays
  // under the floor (right-to-left envelope scan).
  const double scan_step = 0.01;
  double r_trunc = psi.r_max();
  double envelope = 0;
  for (double r = psi.r_max(); r >= 0; r -= scan_step) {
    envelope = std::max(envelope, std::abs(psi(r)));
    if (envelope >= floor) {
      r_trunc = r + scan_step;
      break;
    }
  }
  // Past the tabulated range |psi| is only known through the decay
  // certificate anchored at the measured envelope, not at the floor.
  const double env_bound = std::max(floor, envelope);

  const double qd = static_cast<double>(Q);
  const i64 s_max = static_cast<i64>(std::ceil(r_trunc * qd * r_trunc * qd));
  const auto table = lattice::rep_counts(d, s_max);

  // Q * sum_{Q | |m|^2} |psi_Q(m)|, psi_Q(m) = Q^{-d} psi(|m|/Q).
  double value = 0;
  const double qpow = std::pow(qd, 1 - d);
  for (i64 s = 0; s <= s_max; s += Q) {
    const i64 cnt = table.at(s);
    if (cnt == 0) continue;
    value += qpow * static_cast<double>(cnt) * std::abs(psi(std::sqrt(static_cast<double>(s)) / qd));
  }

  // Tail bound: |psi(r)| <= env_bound (r/r_trunc)^{-p} for r >= r_trunc.
  // Rep counts are bounded by A s^{d/2 - 1} with A measured from the table.
  double rep_const = 1.0;
  for (i64 s = std::max<i64>(1, s_max / 2); s <= s_max; ++s)
    rep_const = std::max(rep_const,
                         static_cast<double>(table.at(s)) / std::pow(static_cast<double>(s), d / 2.0 - 1.0));
  const int p = psi.profile().decay_certificate;
  const double sm = static_cast<double>(s_max);
  // (1/Q) Int_{s_max}^inf A floor (s/s_max)^{-p/2} s^{d/2-1} ds, p > d
  const double integral = rep_const * env_bound * std::pow(sm, d / 2.0) * 2.0 / (p - d);
  const double tail = qpow * integral / qd;

  MomentReport rep;
  rep.set("Q", qd);
  rep.set("d", d);
  rep.set("truncation_radius", r_trunc);
  rep.set("truncation_error", tail);
  rep.value = value;
  if (tail > 0.01 * value)
    throw precision_error("u_kernel_l1: truncation bound exceeds 1% of value");
  return rep;
}

}  // namespace dsm::gauss
