#include "dsm/operators.hpp"

#include <cmath>
#include <random>

#include "dsm/multiplier.hpp"

namespace dsm::operators {

namespace {

template <typename T>
std::vector<T> convolve(const std::vector<T>& f, int d, int M,
                        const lattice::SphereKernel& kernel, const T& zero) {
  std::vector<T> out(f.size(), zero);
  std::vector<int> x(static_cast<size_t>(d), 0);
  std::vector<int> y(static_cast<size_t>(d), 0);
  for (size_t flat = 0; flat < f.size(); ++flat) {
    T acc = zero;
    for (const auto& p : kernel.points) {
      size_t idx = 0;
      for (int i = 0; i < d; ++i) {
        int c = (x[static_cast<size_t>(i)] - p[static_cast<size_t>(i)]) % M;
        if (c < 0) c += M;
        idx = idx * static_cast<size_t>(M) + static_cast<size_t>(c);
      }
      acc += f[idx];
    }
    out[flat] = acc;
    for (int i = d - 1; i >= 0; --i) {
      if (++x[static_cast<size_t>(i)] < M) break;
      x[static_cast<size_t>(i)] = 0;
    }
  }
  return out;
}

void check_no_wrap(const GridFunction& f, const lattice::SphereKernel& kernel) {
  const double lambda = std::sqrt(static_cast<double>(kernel.lambda_sq));
  if (f.M <= 2 * lambda)
    throw std::domain_error("spherical_average: no_wrap requires M > 2 lambda");
}

}  // namespace

GridFunction spherical_average(const GridFunction& f, const lattice::SphereKernel& kernel,
                               bool no_wrap) {
  if (!kernel.weight_defined) throw std::domain_error("spherical_average: empty kernel");
  if (kernel.d != f.d) throw std::domain_error("spherical_average: dimension mismatch");
  if (no_wrap) check_no_wrap(f, kernel);
  auto sums = convolve<double>(f.values, f.d, f.M, kernel, 0.0);
  GridFunction out(f.d, f.M);
  const double w = kernel.weight();
  for (size_t i = 0; i < sums.size(); ++i) out.values[i] = sums[i] * w;
  return out;
}

std::vector<rational> spherical_average_exact(const std::vector<rational>& f, int d, int M,
                                              const lattice::SphereKernel& kernel) {
  if (!kernel.weight_defined) throw std::domain_error("spherical_average_exact: empty kernel");
  auto sums = convolve<rational>(f, d, M, kernel, rational(0));
  const rational w(1, static_cast<i64>(kernel.points.size()));
  for (auto& v : sums) v *= w;
  return sums;
}

GridFunction maximal_function(const GridFunction& f,
                              const std::vector<lattice::SphereKernel>& kernels) {
  if (kernels.empty()) throw std::domain_error("maximal_function: empty sequence");
  GridFunction out = spherical_average(f, kernels[0]);
  for (size_t k = 1; k < kernels.size(); ++k) {
    GridFunction a = spherical_average(f, kernels[k]);
    for (size_t i = 0; i < out.values.size(); ++i)
      out.values[i] = std::max(out.values[i], a.values[i]);
  }
  return out;
}

GridFunction stopping_time_apply(const GridFunction& f,
                                 const std::vector<lattice::SphereKernel>& kernels,
                                 const StoppingTime& tau) {
  if (tau.d != f.d || tau.M != f.M || tau.k_index.size() != f.values.size())
    throw std::domain_error("stopping_time_apply: shape mismatch");
  std::vector<GridFunction> avgs;
  avgs.reserve(kernels.size());
  for (const auto& k : kernels) avgs.push_back(spherical_average(f, k));
  GridFunction out(f.d, f.M);
  for (size_t i = 0; i < out.values.size(); ++i) {
    const int k = tau.k_index[i];
    if (k < 0 || k >= static_cast<int>(kernels.size()))
      throw std::domain_error("stopping_time_apply: index out of range");
    out.values[i] = avgs[static_cast<size_t>(k)].values[i];
  }
  return out;
}

StoppingTime argmax_stopping_time(const GridFunction& f,
                                  const std::vector<lattice::SphereKernel>& kernels) {
  StoppingTime tau;
  tau.d = f.d;
  tau.M = f.M;
  tau.k_index.assign(f.values.size(), 0);
  GridFunction best = spherical_average(f, kernels.at(0));
  for (size_t k = 1; k < kernels.size(); ++k) {
    GridFunction a = spherical_average(f, kernels[k]);
    for (size_t i = 0; i < best.values.size(); ++i) {
      if (a.values[i] > best.values[i]) {
        best.values[i] = a.values[i];
        tau.k_index[i] = static_cast<int>(k);
      }
    }
  }
  return tau;
}

MomentReport pairing_ratio(const GridFunction& F, const GridFunction& G,
                           const std::vector<lattice::SphereKernel>& kernels, double p) {
  if (p <= 1.0) throw std::domain_error("pairing_ratio: need p > 1");
  const double fsize = F.sum();
  const double gsize = G.sum();
  if (fsize <= 0 || gsize <= 0) throw std::domain_error("pairing_ratio: empty F or G");
  const GridFunction mf = maximal_function(F, kernels);
  const double num = inner_product(mf, G);
  const double pprime = p / (p - 1.0);
  MomentReport rep;
  rep.set("|F|", fsize);
  rep.set("|G|", gsize);
  rep.set("p", p);
  rep.value = num / (std::pow(fsize, 1.0 / p) * std::pow(gsize, 1.0 / pprime));
  return rep;
}

MomentReport operator_norm_l2(const LinearGridOp& op, int d, int M, int max_iter, double tol,
                              std::uint64_t seed) {
  GridFunction x(d, M);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& v : x.values) v = dist(rng);

  auto adjoint = op.apply_adjoint ? op.apply_adjoint : op.apply;
  double sigma = 0, prev = -1;
  bool converged = false;
  int used = 0;
  for (int it = 0; it < max_iter; ++it) {
    GridFunction y = op.apply(x);
    GridFunction z = adjoint(y);
    const double nz = z.norm_lp(2.0);
    if (nz == 0) {
      sigma = 0;
      converged = true;
      used = it + 1;
      break;
    }
    // Rayleigh estimate: sigma^2 = <op* op x, x> / <x, x>
    sigma = std::sqrt(std::abs(inner_product(z, x)) / inner_product(x, x));
    for (size_t i = 0; i < x.values.size(); ++i) x.values[i] = z.values[i] / nz;
    used = it + 1;
    if (prev >= 0 && std::abs(sigma - prev) <= tol * std::max(1.0, sigma)) {
      converged = true;
      break;
    }
    prev = sigma;
  }

  MomentReport rep;
  rep.set("iterations", used);
  rep.set("converged", converged ? 1.0 : 0.0);
  rep.value = sigma;
  return rep;
}

MomentReport error_operator_norm(i64 lambda_sq, i64 n_arcs, int d, int M) {
  const double lambda = std::sqrt(static_cast<double>(lambda_sq));
  if (2.0 * lambda > M) throw std::domain_error("error_operator_norm: need lambda <= M/2");
  const auto table = lattice::rep_counts(d, lambda_sq);
  const i64 rep_count = table.at(lambda_sq);

  // Both multipliers are invariant under coordinate permutations and sign
  // flips, so scanning sorted frequencies 0 <= k_1 <= ... <= k_d <= M/2
  // covers the whole dual grid.
  std::vector<int> k(static_cast<size_t>(d), 0);
  std::vector<double> xi(static_cast<size_t>(d));
  double worst = 0;
  while (true) {
    for (int i = 0; i < d; ++i) xi[static_cast<size_t>(i)] = static_cast<double>(k[static_cast<size_t>(i)]) / M;
    const double a = multiplier::average_multiplier(lambda_sq, rep_count, xi);
    const multiplier::cdouble c =
        (n_arcs > 0)
            ? multiplier::major_arc_value(lambda_sq, n_arcs, xi, multiplier::standard_bump())
            : multiplier::cdouble(0.0);
    worst = std::max(worst, std::abs(multiplier::cdouble(a) - c));
    // next sorted tuple
    int pos = d - 1;
    while (pos >= 0 && k[static_cast<size_t>(pos)] == M / 2) --pos;
    if (pos < 0) break;
    const int v = k[static_cast<size_t>(pos)] + 1;
    for (int i = pos; i < d; ++i) k[static_cast<size_t>(i)] = v;
  }

  MomentReport rep;
  rep.set("lambda_sq", static_cast<double>(lambda_sq));
  rep.set("n_arcs", static_cast<double>(n_arcs));
  rep.set("M", M);
  rep.value = worst;
  return rep;
}

}  // namespace dsm::operators
