#include "dsm/multiplier.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>

#include "dsm/arith.hpp"
#include "dsm/gauss.hpp"
#include "dsm/lattice.hpp"

namespace dsm::multiplier {

namespace {

double wrap_half(double x) {
  // reduce to [-1/2, 1/2)
  x -= std::floor(x + 0.5);
  return x;
}

}  // namespace

const bump::BumpProfile& standard_bump() {
  static const bump::BumpProfile b{1.0};
  return b;
}

const bump::BumpProfile& factorization_bump() {
  // Support inside 2/3: after rescaling by Q and 2Q, an arc at l/Q cannot
  // see the psi_Q bump of any neighbouring arc, so b = t * u exactly.
  static const bump::BumpProfile b{2.0 / 3.0};
  return b;
}

const bump::SpatialBump& spatial_bump(int d, const bump::BumpProfile& profile) {
  static std::map<std::pair<int, int>, std::unique_ptr<bump::SpatialBump>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(d, static_cast<int>(profile.support * 1e6));
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<bump::SpatialBump>(profile, d)).first;
  return *it->second;
}

cdouble arc_value(i64 a, i64 q, double lambda, const std::vector<double>& xi,
                  const bump::BumpProfile& bp) {
  const int d = static_cast<int>(xi.size());
  const double radius = bp.support / static_cast<double>(q);

  // Per-coordinate residues l_i whose wrapped offset can fit in the arc.
  std::vector<std::vector<std::pair<i64, double>>> cand(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    for (i64 l = 0; l < q; ++l) {
      const double v = wrap_half(xi[static_cast<size_t>(i)] - static_cast<double>(l) / q);
      if (std::abs(v) <= radius) cand[static_cast<size_t>(i)].emplace_back(l, v);
    }
    if (cand[static_cast<size_t>(i)].empty()) return 0.0;
  }

  // One-dimensional Gauss factors for this (a, q).
  std::vector<cdouble> g1(static_cast<size_t>(q));
  for (i64 l = 0; l < q; ++l) g1[static_cast<size_t>(l)] = gauss::gauss_sum_1d(a, l, q);

  cdouble total = 0;
  std::vector<size_t> idx(static_cast<size_t>(d), 0);
  while (true) {
    double norm_sq = 0;
    cdouble g = 1.0;
    for (int i = 0; i < d; ++i) {
      const auto& [l, v] = cand[static_cast<size_t>(i)][idx[static_cast<size_t>(i)]];
      norm_sq += v * v;
      g *= g1[static_cast<size_t>(l)];
    }
    const double dist = std::sqrt(norm_sq);
    if (dist <= radius && g != cdouble(0.0)) {
      const double cut = bp(static_cast<double>(q) * dist);
      if (cut > 0) total += g * cut * bump::sphere_ft(d, lambda * dist);
    }
    int pos = 0;
    while (pos < d && idx[static_cast<size_t>(pos)] + 1 == cand[static_cast<size_t>(pos)].size()) {
      idx[static_cast<size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == d) break;
    ++idx[static_cast<size_t>(pos)];
  }
  return total;
}

cdouble major_arc_value(i64 lambda_sq, i64 q_max, const std::vector<double>& xi,
                        const bump::BumpProfile& bp) {
  const double lambda = std::sqrt(static_cast<double>(lambda_sq));
  cdouble total = 0;
  for (i64 q = 1; q <= q_max; ++q) {
    for (i64 a = (q == 1 ? 0 : 1); a < q || (q == 1 && a == 0); ++a) {
      if (q > 1 && std::gcd(a, q) != 1) continue;
      const i64 phase = ((-(lambda_sq % q) * (a % q)) % q + q) % q;
      const double x = 2.0 * M_PI * static_cast<double>(phase) / static_cast<double>(q);
      total += cdouble(std::cos(x), std::sin(x)) * arc_value(a, q, lambda, xi, bp);
      if (q == 1) break;
    }
  }
  return total;
}

double average_multiplier(i64 lambda_sq, i64 rep_count, const std::vector<double>& xi) {
  if (rep_count <= 0) throw std::domain_error("average_multiplier: empty sphere");
  const int d = static_cast<int>(xi.size());
  const size_t len = static_cast<size_t>(lambda_sq) + 1;
  // Real squares-convolution DP: the per-coordinate factor at squared
  // residual c^2 is 2 cos(2 pi c xi_i) (1 at c = 0).
  std::vector<double> acc(len, 0.0);
  acc[0] = 1.0;
  for (int i = 0; i < d; ++i) {
    std::vector<double> next(len, 0.0);
    for (i64 c = 0; c * c <= lambda_sq; ++c) {
      const double w = (c == 0) ? 1.0
                                : 2.0 * std::cos(2.0 * M_PI * c * xi[static_cast<size_t>(i)]);
      const i64 s = c * c;
      for (i64 n = s; n <= lambda_sq; ++n) next[static_cast<size_t>(n)] += w * acc[static_cast<size_t>(n - s)];
    }
    acc.swap(next);
  }
  return acc[static_cast<size_t>(lambda_sq)] / static_cast<double>(rep_count);
}

FreqMultiplier arc_multiplier_caq(i64 a, i64 q, i64 lambda_sq, Grid grid) {
  if (q > grid.M) throw std::domain_error("arc_multiplier_caq: q must not exceed M");
  const double cost = std::pow(static_cast<double>(grid.M), grid.d);
  if (cost > 40e6) throw budget_error("arc_multiplier_caq: grid too large");

  FreqMultiplier out;
  out.d = grid.d;
  out.M = grid.M;
  out.values.resize(static_cast<size_t>(cost));
  const double lambda = std::sqrt(static_cast<double>(lambda_sq));

  std::vector<int> k(static_cast<size_t>(grid.d), 0);
  std::vector<double> xi(static_cast<size_t>(grid.d), 0.0);
  for (size_t flat = 0; flat < out.values.size(); ++flat) {
    for (int i = 0; i < grid.d; ++i) xi[static_cast<size_t>(i)] = static_cast<double>(k[static_cast<size_t>(i)]) / grid.M;
    out.values[flat] = arc_value(a, q, lambda, xi, standard_bump());
    for (int i = grid.d - 1; i >= 0; --i) {
      if (++k[static_cast<size_t>(i)] < grid.M) break;
      k[static_cast<size_t>(i)] = 0;
    }
  }
  return out;
}

CompositeMultipliers composite_multipliers(i64 Q, i64 lambda_sq, Grid grid) {
  if (4 * Q > grid.M)
    throw std::domain_error("composite_multipliers: need Q <= M/4 for disjoint arcs");
  const double n_l = std::pow(static_cast<double>(Q), grid.d);
  const double n_grid = std::pow(static_cast<double>(grid.M), grid.d);
  if (n_l > 1e5 || n_grid > 40e6) throw budget_error("composite_multipliers: grid too large");

  const bump::BumpProfile& bp = factorization_bump();
  const double lambda = std::sqrt(static_cast<double>(lambda_sq));
  const int d = grid.d;

  // Aggregate Gauss weight H(l) = sum_{0<=a<Q} G(a,l,Q) for every residue
  // vector l, from the one-dimensional factor tables.
  std::vector<std::vector<cdouble>> g1(static_cast<size_t>(Q),
                                       std::vector<cdouble>(static_cast<size_t>(Q)));
  for (i64 a = 0; a < Q; ++a)
    for (i64 l = 0; l < Q; ++l) g1[static_cast<size_t>(a)][static_cast<size_t>(l)] = gauss::gauss_sum_1d(a, l, Q);

  const size_t ln = static_cast<size_t>(n_l);
  std::vector<cdouble> H(ln, 0.0);
  {
    std::vector<i64> l(static_cast<size_t>(d), 0);
    for (size_t flat = 0; flat < ln; ++flat) {
      for (i64 a = 0; a < Q; ++a) {
        cdouble g = 1.0;
        for (int i = 0; i < d; ++i) g *= g1[static_cast<size_t>(a)][static_cast<size_t>(l[static_cast<size_t>(i)])];
        H[flat] += g;
      }
      for (int i = d - 1; i >= 0; --i) {
        if (++l[static_cast<size_t>(i)] < Q) break;
        l[static_cast<size_t>(i)] = 0;
      }
    }
  }
  auto l_flat = [&](const std::vector<i64>& l) {
    size_t f = 0;
    for (int i = 0; i < d; ++i) f = f * static_cast<size_t>(Q) + static_cast<size_t>(l[static_cast<size_t>(i)]);
    return f;
  };

  CompositeMultipliers out;
  for (FreqMultiplier* fm : {&out.b, &out.u, &out.t}) {
    fm->d = d;
    fm->M = grid.M;
    fm->values.assign(static_cast<size_t>(n_grid), 0.0);
  }

  const double radius_u = bp.support / static_cast<double>(Q);
  std::vector<int> k(static_cast<size_t>(d), 0);
  std::vector<std::vector<std::pair<i64, double>>> cand(static_cast<size_t>(d));
  std::vector<i64> lvec(static_cast<size_t>(d), 0);
  for (size_t flat = 0; flat < static_cast<size_t>(n_grid); ++flat) {
    for (int i = 0; i < d; ++i) {
      auto& ci = cand[static_cast<size_t>(i)];
      ci.clear();
      const double xii = static_cast<double>(k[static_cast<size_t>(i)]) / grid.M;
      for (i64 l = 0; l < Q; ++l) {
        const double v = wrap_half(xii - static_cast<double>(l) / Q);
        if (std::abs(v) <= radius_u) ci.emplace_back(l, v);
      }
    }
    bool nonempty = true;
    for (int i = 0; i < d; ++i) nonempty &= !cand[static_cast<size_t>(i)].empty();
    if (nonempty) {
      std::vector<size_t> idx(static_cast<size_t>(d), 0);
      cdouble bv = 0, uv = 0, tv = 0;
      while (true) {
        double norm_sq = 0;
        for (int i = 0; i < d; ++i) {
          const auto& [l, v] = cand[static_cast<size_t>(i)][idx[static_cast<size_t>(i)]];
          lvec[static_cast<size_t>(i)] = l;
          norm_sq += v * v;
        }
        const double dist = std::sqrt(norm_sq);
        if (dist <= radius_u) {
          const cdouble h = H[l_flat(lvec)];
          const double cut_u = bp(static_cast<double>(Q) * dist);
          const double cut_2q = bp(2.0 * static_cast<double>(Q) * dist);
          uv += h * cut_u;
          if (cut_2q > 0) {
            const double sph = bump::sphere_ft(d, lambda * dist);
            bv += h * cut_2q * sph;
            tv += cut_2q * sph;
          }
        }
        int pos = 0;
        while (pos < d && idx[static_cast<size_t>(pos)] + 1 == cand[static_cast<size_t>(pos)].size()) {
          idx[static_cast<size_t>(pos)] = 0;
          ++pos;
        }
        if (pos == d) break;
        ++idx[static_cast<size_t>(pos)];
      }
      out.b.values[flat] = bv;
      out.u.values[flat] = uv;
      out.t.values[flat] = tv;
    }
    for (int i = d - 1; i >= 0; --i) {
      if (++k[static_cast<size_t>(i)] < grid.M) break;
      k[static_cast<size_t>(i)] = 0;
    }
  }
  return out;
}

KKernel::KKernel(i64 lambda_sq, i64 N, int d, double truncation_floor, double width_override)
    : d_(d), floor_(truncation_floor) {
  if (lambda_sq < 1 || N < 1) throw std::domain_error("KKernel: bad parameters");
  lambda_ = std::sqrt(static_cast<double>(lambda_sq));
  width_ = (width_override > 0) ? width_override : lambda_ / static_cast<double>(N);
  if (width_ < 1.0)
    throw std::domain_error("KKernel: annulus narrower than lattice spacing");

  const bump::SpatialBump& psi = spatial_bump(d, standard_bump());

  // Radial cutoff of the spatial bump at the truncation floor.
  double r_cut = psi.r_max();
  double env = 0;
  for (double r = psi.r_max(); r >= 0; r -= 0.01) {
    env = std::max(env, std::abs(psi(r)));
    if (env * std::pow(width_, -d) >= truncation_floor * 1e-3) {
      r_cut = r + 0.01;
      break;
    }
  }

  const double cut = width_ * r_cut;
  const double lo = std::max(0.0, lambda_ - cut);
  const double hi = lambda_ + cut;
  s_lo_ = static_cast<i64>(std::ceil(lo * lo));
  if (lo == 0.0) s_lo_ = 0;
  s_hi_ = static_cast<i64>(std::floor(hi * hi));
  samples_.resize(static_cast<size_t>(s_hi_ - s_lo_ + 1));
  for (i64 s = s_lo_; s <= s_hi_; ++s)
    samples_[static_cast<size_t>(s - s_lo_)] = value(std::sqrt(static_cast<double>(s)));

  const auto table = lattice::rep_counts(d, s_hi_);
  for (i64 s = s_lo_; s <= s_hi_; ++s)
    mass_ += static_cast<double>(table.at(s)) * samples_[static_cast<size_t>(s - s_lo_)];
}

double KKernel::value(double r) const {
  const bump::SpatialBump& psi = spatial_bump(d_, standard_bump());
  const double w = width_;
  auto psi_w = [&](double z) { return std::pow(w, -d_) * psi(z / w); };

  if (r < 1e-12) return psi_w(lambda_);

  // Surface integral over the sphere of radius lambda: substitute t = cos
  // of the polar angle; the weight is (1-t^2)^{(d-3)/2} normalized.
  const double bnorm = std::sqrt(M_PI) * std::tgamma((d_ - 1) / 2.0) / std::tgamma(d_ / 2.0);
  // Restrict to the t-range where the bump argument is inside its support.
  const double reach = w * psi.r_max();
  double t_lo = -1.0, t_hi = 1.0;
  const double a2 = r * r + lambda_ * lambda_;
  if (2.0 * r * lambda_ > 0) {
    t_lo = std::max(-1.0, (a2 - reach * reach) / (2.0 * r * lambda_));
    if (t_lo >= 1.0) return 0.0;
  }
  // The integrand varies on the bump's dist-scale w; across [t_lo, 1] the
  // distance sweeps ~2 min(r, lambda), so ~2 min(r, lambda)/w features.
  const double features = 2.0 * std::min(r, lambda_) / w + 1.0;
  int n = static_cast<int>(std::min(4000.0, std::max(400.0, 64.0 * features)));
  n += n % 2;
  const double h = (t_hi - t_lo) / n;
  double acc = 0;
  for (int i = 0; i <= n; ++i) {
    const double t = t_lo + i * h;
    const double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double dist = std::sqrt(std::max(0.0, a2 - 2.0 * r * lambda_ * t));
    acc += wgt * psi_w(dist) * std::pow(std::max(0.0, 1.0 - t * t), (d_ - 3) / 2.0);
  }
  return acc * h / 3.0 / bnorm;
}

double KKernel::at_radius_sq(i64 s) const {
  if (s < s_lo_ || s > s_hi_) return 0.0;
  return samples_[static_cast<size_t>(s - s_lo_)];
}

HybridKernel m12_kernel(i64 lambda_sq, i64 N, int d, double truncation_floor) {
  KKernel k(lambda_sq, N, d, truncation_floor);
  HybridKernel h;
  h.d = d;
  h.lambda_sq = lambda_sq;
  h.N = N;
  for (i64 s = k.s_lo(); s <= k.s_hi(); ++s) {
    const double kv = k.at_radius_sq(s);
    if (kv == 0.0) continue;
    const i64 cn = arith::partial_sums(lambda_sq - s, N).signed_sum;
    h.samples[s] = kv * static_cast<double>(cn);
  }
  return h;
}

MomentReport psi2_statistic(i64 lambda_sq, i64 N, int j, int d) {
  if (j < 1 || j % 2 != 0) throw std::domain_error("psi2_statistic: j must be even");
  KKernel k(lambda_sq, N, d);
  const auto table = lattice::rep_counts(d, k.s_hi());
  double acc = 0;
  for (i64 s = k.s_lo(); s <= k.s_hi(); ++s) {
    const i64 cnt = table.at(s);
    if (cnt == 0) continue;
    const double cn = std::abs(static_cast<double>(arith::partial_sums(lambda_sq - s, N).signed_sum));
    acc += static_cast<double>(cnt) * k.at_radius_sq(s) * std::pow(cn, j);
  }
  MomentReport rep;
  rep.set("lambda_sq", static_cast<double>(lambda_sq));
  rep.set("N", static_cast<double>(N));
  rep.set("j", j);
  rep.set("lattice_mass", k.lattice_mass());
  const double lambda = std::sqrt(static_cast<double>(lambda_sq));
  // Relaxed separation between lambda and N usable at desk scale; flag
  // when even that is not met.
  rep.set("low_confidence", lambda >= static_cast<double>(N) * N ? 0.0 : 1.0);
  rep.value = std::pow(acc, 1.0 / j);
  return rep;
}

}  // namespace dsm::multiplier
