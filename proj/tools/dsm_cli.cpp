// Batch experiment runner: every library operation is exposed as a
// subcommand emitting a versioned JSON report.
//
// Exit codes: 0 ok, 2 validation error, 3 budget exceeded, 4 numerical
// integrity failure.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dsm/arith.hpp"
#include "dsm/bump.hpp"
#include "dsm/gauss.hpp"
#include "dsm/grid.hpp"
#include "dsm/lattice.hpp"
#include "dsm/multiplier.hpp"
#include "dsm/operators.hpp"
#include "dsm/report.hpp"

using json = nlohmann::json;
using i64 = std::int64_t;

namespace {

struct Ctx {
  std::string output_path;
  bool no_volatile = false;
  std::uint64_t seed = 1;
  i64 budget = 0;  // 0: library defaults; DSM_BUDGET env or --budget override
  int exit_code = 0;
};

i64 effective_budget(const Ctx& ctx, i64 fallback) {
  if (ctx.budget > 0) return ctx.budget;
  if (const char* env = std::getenv("DSM_BUDGET")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return fallback;
}

json moment_to_json(const dsm::MomentReport& rep) {
  json j;
  j["value"] = rep.value;
  json params = json::object();
  for (const auto& [k, v] : rep.params) params[k] = v;
  j["params"] = params;
  if (rep.fitted_exponent) j["fitted_exponent"] = *rep.fitted_exponent;
  j["oracle_checked"] = rep.oracle_checked;
  return j;
}

void emit(Ctx& ctx, const std::string& subcommand, const json& config, const json& result,
          double wall_time_s) {
  json report;
  report["schema_version"] = 1;
  report["subcommand"] = subcommand;
  report["config"] = config;
  report["result"] = result;
  if (!ctx.no_volatile) {
    // Everything except this object is byte-deterministic for a fixed
    // config and seed.
    report["volatile"]["wall_time_s"] = wall_time_s;
    report["volatile"]["timestamp"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
  }
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!ctx.output_path.empty()) {
    std::ofstream os(ctx.output_path, std::ios::binary);
    if (!os) throw std::domain_error("cannot open output path: " + ctx.output_path);
    os << text;
  }
}

// Runs `body` (which returns the result object), wraps it in a report.
void run_op(Ctx& ctx, const std::string& name, const json& config,
            const std::function<json()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  json result = body();
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(ctx, name, config, result, dt);
}

dsm::grid::GridFunction load_grid(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::domain_error("cannot open grid file: " + path);
  char magic[4] = {};
  is.read(magic, 4);
  is.seekg(0);
  if (std::string(magic, 4) == "DSMG") return dsm::grid::load_binary(is);
  return dsm::grid::load_json(is);
}

void store_grid(const dsm::grid::GridFunction& g, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::domain_error("cannot open output grid file: " + path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".bin")
    dsm::grid::save_binary(g, os);
  else
    dsm::grid::save_json(g, os);
}

std::vector<double> xi_of(const std::vector<double>& xi) { return xi; }

std::vector<dsm::lattice::SphereKernel> kernels_of(int d, const std::vector<i64>& lam2s) {
  std::vector<dsm::lattice::SphereKernel> ks;
  ks.reserve(lam2s.size());
  for (i64 s : lam2s) {
    auto k = dsm::lattice::enumerate_sphere(d, s);
    if (!k.weight_defined)
      throw std::domain_error("empty sphere at lambda_sq = " + std::to_string(s));
    ks.push_back(std::move(k));
  }
  return ks;
}

// ---------------------------------------------------------------- sweeps

struct SweepPoint {
  double x = 0;
  double y = 0;
  json detail;
};

using SweepFn = std::function<SweepPoint(double)>;

json run_sweep(const std::string& target, const std::vector<double>& xs, int jobs,
               const SweepFn& fn, const std::string& csv_path) {
  if (xs.size() < 3) throw std::domain_error("sweep needs at least 3 points");
  std::vector<SweepPoint> pts(xs.size());
  std::vector<std::exception_ptr> errs(xs.size());
  std::mutex next_mu;
  size_t next = 0;
  auto worker = [&] {
    for (;;) {
      size_t i;
      {
        std::lock_guard<std::mutex> lock(next_mu);
        if (next >= xs.size()) return;
        i = next++;
      }
      try {
        pts[i] = fn(xs[i]);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);

  std::vector<double> fx, fy;
  json points = json::array();
  for (const auto& p : pts) {
    json jp;
    jp["x"] = p.x;
    jp["y"] = p.y;
    if (!p.detail.is_null()) jp["detail"] = p.detail;
    points.push_back(jp);
    fx.push_back(p.x);
    fy.push_back(std::abs(p.y));
  }
  auto fit = dsm::loglog_fit(fx, fy);
  json out;
  out["target"] = target;
  out["points"] = points;
  out["fit"]["slope"] = fit.slope;
  out["fit"]["intercept"] = fit.intercept;
  out["fit"]["residual"] = fit.residual;
  if (!csv_path.empty()) {
    std::ofstream os(csv_path);
    if (!os) throw std::domain_error("cannot open csv path: " + csv_path);
    os << "x,y\n";  // columns: sweep abscissa, measured value
    for (const auto& p : pts) os << p.x << "," << p.y << "\n";
  }
  return out;
}

// ---------------------------------------------------------------- verify

struct Check {
  std::string name;
  bool pass = false;
  double measured = 0;
};

json verify_gauss_identities(std::uint64_t seed) {
  std::vector<Check> checks;
  std::mt19937_64 rng(seed);
  // reduction identity on sampled triples
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    dsm::gauss::GaussSumParams p;
    p.q = 2 + static_cast<i64>(rng() % 23);
    p.d = 5;
    p.a = static_cast<i64>(rng() % static_cast<std::uint64_t>(p.q));
    p.l.resize(5);
    for (auto& v : p.l) v = static_cast<i64>(rng() % static_cast<std::uint64_t>(p.q));
    auto r = dsm::gauss::reduce_params(p);
    worst = std::max(worst, std::abs(dsm::gauss::gauss_sum(p) - dsm::gauss::gauss_sum(r.reduced)));
  }
  checks.push_back({"reduction-identity", worst < 1e-9, worst});
  // separability on small direct-enumerable parameters
  double worst2 = 0;
  for (int trial = 0; trial < 40; ++trial) {
    dsm::gauss::GaussSumParams p;
    p.q = 2 + static_cast<i64>(rng() % 6);
    p.d = 5;
    p.a = static_cast<i64>(rng() % static_cast<std::uint64_t>(p.q));
    p.l.resize(5);
    for (auto& v : p.l) v = static_cast<i64>(rng() % static_cast<std::uint64_t>(p.q));
    worst2 = std::max(worst2, std::abs(dsm::gauss::gauss_sum(p, dsm::gauss::GaussMode::factored) -
                                       dsm::gauss::gauss_sum(p, dsm::gauss::GaussMode::direct)));
  }
  checks.push_back({"separability", worst2 < 1e-9, worst2});

  json out;
  out["suite"] = "gauss-identities";
  bool all = true;
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}});
    all = all && c.pass;
  }
  out["checks"] = arr;
  out["pass"] = all;
  return out;
}

json verify_dual_sum() {
  double worst = 0;
  for (i64 Q : {2, 3, 4}) {
    std::vector<i64> m(5, 0);
    for (;;) {
      auto direct = dsm::gauss::dual_gauss_sum(m, Q, 5);
      const double closed = dsm::gauss::dual_gauss_sum_closed(m, Q);
      worst = std::max(worst, std::abs(direct - std::complex<double>(closed, 0.0)) /
                                  static_cast<double>(Q));
      int i = 4;
      for (; i >= 0; --i) {
        if (++m[static_cast<size_t>(i)] < Q) break;
        m[static_cast<size_t>(i)] = 0;
      }
      if (i < 0) break;
    }
  }
  json out;
  out["suite"] = "dual-sum";
  out["checks"] = json::array(
      {{{"name", "closed-form-vs-direct"}, {"pass", worst < 1e-6}, {"measured", worst}}});
  out["pass"] = worst < 1e-6;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Desk-scale verification toolkit for discrete spherical averages:\n"
      "Ramanujan/Gauss sums, lattice point counts, major-arc multipliers and\n"
      "torus operators.  Every subcommand prints a JSON report\n"
      "(schema_version 1) embedding the config that produced it; CSV output\n"
      "for sweeps has columns x (sweep abscissa) and y (measured value)."};
  app.require_subcommand(1);

  Ctx ctx;
  app.add_option("--output", ctx.output_path, "also write the JSON report to this path");
  app.add_option("--seed", ctx.seed, "seed for the single named RNG")->capture_default_str();
  app.add_option("--budget", ctx.budget,
                 "work budget override (also via DSM_BUDGET env var; 0 = library default)");
  app.add_flag("--no-volatile", ctx.no_volatile,
               "omit the volatile field (timestamp, wall time) for byte-stable output");

  std::vector<std::function<void()>> actions;
  auto defer = [&](CLI::App* sub, std::function<void()> fn) {
    sub->callback([&actions, fn = std::move(fn)] { actions.push_back(fn); });
  };

  // ------------------------------------------------------------- arith
  {
    auto* sub = app.add_subcommand("basics", "factorization, mu, phi, d(n)");
    auto n = std::make_shared<i64>(1);
    sub->add_option("--n", *n, "integer >= 1")->required();
    defer(sub, [&ctx, n] {
      run_op(ctx, "basics", {{"n", *n}}, [&] {
        auto b = dsm::arith::arithmetic_basics(*n);
        json factors = json::array();
        for (auto [p, e] : b.factorization.factors) factors.push_back({{"p", p}, {"e", e}});
        return json{{"factors", factors},
                    {"mobius", b.mobius},
                    {"phi", b.phi},
                    {"divisor_count", b.divisor_count}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("ramanujan", "Ramanujan sum c_q(n)");
    auto q = std::make_shared<i64>(1);
    auto n = std::make_shared<i64>(0);
    auto mode = std::make_shared<std::string>("multiplicative");
    sub->add_option("--q", *q)->required();
    sub->add_option("--n", *n)->required();
    sub->add_option("--mode", *mode, "direct | multiplicative | moebius-gcd")
        ->check(CLI::IsMember({"direct", "multiplicative", "moebius-gcd"}));
    defer(sub, [&ctx, q, n, mode] {
      run_op(ctx, "ramanujan", {{"q", *q}, {"n", *n}, {"mode", *mode}}, [&] {
        auto m = *mode == "direct"         ? dsm::arith::RamanujanMode::direct
                 : *mode == "moebius-gcd" ? dsm::arith::RamanujanMode::moebius_gcd
                                          : dsm::arith::RamanujanMode::multiplicative;
        return json{{"value", dsm::arith::ramanujan_sum(*q, *n, m)}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("ramanujan-row", "one period of c_q(.)");
    auto q = std::make_shared<i64>(1);
    sub->add_option("--q", *q)->required();
    defer(sub, [&ctx, q] {
      run_op(ctx, "ramanujan-row", {{"q", *q}},
             [&] { return json{{"row", dsm::arith::ramanujan_row(*q)}}; });
    });
  }
  {
    auto* sub = app.add_subcommand("partial-sums", "C_N(n) and S_N(n)");
    auto n = std::make_shared<i64>(0);
    auto N = std::make_shared<i64>(1);
    sub->add_option("--n", *n)->required();
    sub->add_option("--N", *N)->required();
    defer(sub, [&ctx, n, N] {
      run_op(ctx, "partial-sums", {{"n", *n}, {"N", *N}}, [&] {
        auto p = dsm::arith::partial_sums(*n, *N);
        return json{{"signed_sum", p.signed_sum}, {"abs_sum", p.abs_sum}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("ramanujan-moment", "[(1/M) sum S_Q(n)^j]^{1/j}");
    auto Q = std::make_shared<i64>(1);
    auto j = std::make_shared<int>(2);
    auto M = std::make_shared<i64>(1);
    sub->add_option("--Q", *Q)->required();
    sub->add_option("--j", *j)->required();
    sub->add_option("--M", *M)->required();
    defer(sub, [&ctx, Q, j, M] {
      run_op(ctx, "ramanujan-moment", {{"Q", *Q}, {"j", *j}, {"M", *M}}, [&] {
        return moment_to_json(
            dsm::arith::ramanujan_moment(*Q, *j, *M, effective_budget(ctx, 200'000'000)));
      });
    });
  }
  {
    auto* sub = app.add_subcommand("lcm-moment", "sum over tuples of 1/lcm");
    auto Q = std::make_shared<i64>(1);
    auto j = std::make_shared<int>(2);
    sub->add_option("--Q", *Q)->required();
    sub->add_option("--j", *j)->required();
    defer(sub, [&ctx, Q, j] {
      run_op(ctx, "lcm-moment", {{"Q", *Q}, {"j", *j}}, [&] {
        return moment_to_json(dsm::arith::lcm_moment(*Q, *j, effective_budget(ctx, 20'000'000)));
      });
    });
  }
  {
    auto* sub = app.add_subcommand("gcd-period-sum", "sum over one period of prod gcd(q_i, n)");
    auto qs = std::make_shared<std::vector<i64>>();
    sub->add_option("--q-list", *qs, "moduli")->required();
    defer(sub, [&ctx, qs] {
      run_op(ctx, "gcd-period-sum", {{"q_list", *qs}}, [&] {
        return json{
            {"value", dsm::arith::gcd_product_period_sum(*qs, effective_budget(ctx, 50'000'000))}};
      });
    });
  }

  // ------------------------------------------------------------ lattice
  {
    auto* sub = app.add_subcommand("counts", "rep counts r_d(0..n_max)");
    auto d = std::make_shared<int>(5);
    auto nmax = std::make_shared<i64>(0);
    sub->add_option("--d", *d)->required();
    sub->add_option("--n-max", *nmax)->required();
    defer(sub, [&ctx, d, nmax] {
      run_op(ctx, "counts", {{"d", *d}, {"n_max", *nmax}}, [&] {
        auto t = dsm::lattice::rep_counts(*d, *nmax, effective_budget(ctx, 4'000'000'000LL));
        return json{{"counts", t.counts}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("sphere", "enumerate lattice sphere");
    auto d = std::make_shared<int>(5);
    auto lam2 = std::make_shared<i64>(0);
    auto list = std::make_shared<bool>(false);
    sub->add_option("--d", *d)->required();
    sub->add_option("--lambda-sq", *lam2)->required();
    sub->add_flag("--list-points", *list, "include the point list in the report");
    defer(sub, [&ctx, d, lam2, list] {
      run_op(ctx, "sphere", {{"d", *d}, {"lambda_sq", *lam2}, {"list_points", *list}}, [&] {
        auto k = dsm::lattice::enumerate_sphere(*d, *lam2, effective_budget(ctx, 50'000'000));
        json out{{"count", k.points.size()}, {"empty", !k.weight_defined}};
        if (*list) out["points"] = k.points;
        return out;
      });
    });
  }
  {
    auto* sub = app.add_subcommand("factorial-radii", "lambda_k^2 = mu_k! sequence");
    auto mu = std::make_shared<std::vector<i64>>();
    sub->add_option("--mu-list", *mu)->required();
    defer(sub, [&ctx, mu] {
      run_op(ctx, "factorial-radii", {{"mu_list", *mu}}, [&] {
        auto seq = dsm::lattice::factorial_radii(*mu);
        auto v = dsm::lattice::validate_sequence(seq);
        json lams = json::array();
        for (const auto& l : seq.lambda_sq) lams.push_back(l.str());
        json out{{"lambda_sq", lams}, {"valid", v.valid}, {"violation", v.violation}};
        if (v.trend_statistic) out["trend_statistic"] = *v.trend_statistic;
        return out;
      });
    });
  }
  {
    auto* sub = app.add_subcommand("congruence", "does q divide lambda_sq?");
    auto lam2 = std::make_shared<std::string>();
    auto q = std::make_shared<i64>(1);
    sub->add_option("--lambda-sq", *lam2, "arbitrary-precision integer")->required();
    sub->add_option("--q", *q)->required();
    defer(sub, [&ctx, lam2, q] {
      run_op(ctx, "congruence", {{"lambda_sq", *lam2}, {"q", *q}}, [&] {
        dsm::lattice::bigint big(*lam2);
        return json{{"divides", dsm::lattice::congruence_check(big, *q)}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("annulus", "lattice count vs volume of an annulus");
    auto d = std::make_shared<int>(5);
    auto lam = std::make_shared<double>(1);
    auto M = std::make_shared<double>(2);
    sub->add_option("--d", *d)->required();
    sub->add_option("--lambda", *lam)->required();
    sub->add_option("--M", *M, "relative width parameter: |.|x| - lambda| < lambda/M")->required();
    defer(sub, [&ctx, d, lam, M] {
      run_op(ctx, "annulus", {{"d", *d}, {"lambda", *lam}, {"M", *M}}, [&] {
        auto a = dsm::lattice::annulus_stats(*d, *lam, *M);
        json out{{"lattice_count", a.lattice_count}, {"volume", a.volume}};
        if (a.ratio) out["ratio"] = *a.ratio;
        return out;
      });
    });
  }

  // -------------------------------------------------------------- gauss
  {
    auto* sub = app.add_subcommand("gauss-sum", "normalized Gauss sum G(a, l, q)");
    auto a = std::make_shared<i64>(0);
    auto l = std::make_shared<std::vector<i64>>();
    auto q = std::make_shared<i64>(1);
    auto mode = std::make_shared<std::string>("factored");
    sub->add_option("--a", *a)->required();
    sub->add_option("--l-list", *l)->required();
    sub->add_option("--q", *q)->required();
    sub->add_option("--mode", *mode)->check(CLI::IsMember({"factored", "direct"}));
    defer(sub, [&ctx, a, l, q, mode] {
      run_op(ctx, "gauss-sum", {{"a", *a}, {"l_list", *l}, {"q", *q}, {"mode", *mode}}, [&] {
        dsm::gauss::GaussSumParams p;
        p.a = *a;
        p.l = *l;
        p.q = *q;
        p.d = static_cast<int>(l->size());
        auto g = dsm::gauss::gauss_sum(p,
                                       *mode == "direct" ? dsm::gauss::GaussMode::direct
                                                         : dsm::gauss::GaussMode::factored,
                                       effective_budget(ctx, 40'000'000));
        return json{{"re", g.real()}, {"im", g.imag()}, {"abs", std::abs(g)}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("gauss-reduce", "divide out gcd(a, l, q)");
    auto a = std::make_shared<i64>(0);
    auto l = std::make_shared<std::vector<i64>>();
    auto q = std::make_shared<i64>(1);
    sub->add_option("--a", *a)->required();
    sub->add_option("--l-list", *l)->required();
    sub->add_option("--q", *q)->required();
    defer(sub, [&ctx, a, l, q] {
      run_op(ctx, "gauss-reduce", {{"a", *a}, {"l_list", *l}, {"q", *q}}, [&] {
        dsm::gauss::GaussSumParams p;
        p.a = *a;
        p.l = *l;
        p.q = *q;
        p.d = static_cast<int>(l->size());
        auto r = dsm::gauss::reduce_params(p);
        return json{{"rho", r.rho},
                    {"a", r.reduced.a},
                    {"l_list", r.reduced.l},
                    {"q", r.reduced.q}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("gauss-survey", "max |G| q^{d/2} over primitive triples");
    auto qmax = std::make_shared<i64>(10);
    auto d = std::make_shared<int>(5);
    auto samples = std::make_shared<int>(1000);
    sub->add_option("--q-max", *qmax)->required();
    sub->add_option("--d", *d)->required();
    sub->add_option("--samples", *samples)->capture_default_str();
    defer(sub, [&ctx, qmax, d, samples] {
      run_op(ctx, "gauss-survey",
             {{"q_max", *qmax}, {"d", *d}, {"samples", *samples}, {"seed", ctx.seed}}, [&] {
               return moment_to_json(dsm::gauss::magnitude_survey(*qmax, *d, *samples, ctx.seed));
             });
    });
  }
  {
    auto* sub = app.add_subcommand("dual-sum", "sum_a sum_l G(a,l,Q) e_Q(-m.l) vs closed form");
    auto m = std::make_shared<std::vector<i64>>();
    auto Q = std::make_shared<i64>(2);
    sub->add_option("--m-list", *m)->required();
    sub->add_option("--Q", *Q)->required();
    defer(sub, [&ctx, m, Q] {
      run_op(ctx, "dual-sum", {{"m_list", *m}, {"Q", *Q}}, [&] {
        auto direct = dsm::gauss::dual_gauss_sum(*m, *Q, static_cast<int>(m->size()));
        const double closed = dsm::gauss::dual_gauss_sum_closed(*m, *Q);
        return json{{"direct_re", direct.real()},
                    {"direct_im", direct.imag()},
                    {"closed", closed},
                    {"abs_error", std::abs(direct - std::complex<double>(closed, 0.0))}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("u-kernel-l1", "truncated ||U||_1 with certified tail");
    auto Q = std::make_shared<i64>(2);
    auto d = std::make_shared<int>(5);
    auto floor = std::make_shared<double>(1e-12);
    sub->add_option("--Q", *Q)->required();
    sub->add_option("--d", *d)->required();
    sub->add_option("--floor", *floor)->capture_default_str();
    defer(sub, [&ctx, Q, d, floor] {
      run_op(ctx, "u-kernel-l1", {{"Q", *Q}, {"d", *d}, {"floor", *floor}}, [&] {
        const auto& psi = dsm::multiplier::spatial_bump(*d, dsm::multiplier::standard_bump());
        return moment_to_json(dsm::gauss::u_kernel_l1(*Q, *d, psi, *floor));
      });
    });
  }

  // --------------------------------------------------- bump / multiplier
  {
    auto* sub = app.add_subcommand("sphere-ft", "Fourier transform of the sphere measure");
    auto d = std::make_shared<int>(5);
    auto t = std::make_shared<double>(0);
    auto oracle = std::make_shared<bool>(false);
    sub->add_option("--d", *d)->required();
    sub->add_option("--t", *t)->required();
    sub->add_flag("--oracle", *oracle, "also run the quadrature cross-check");
    defer(sub, [&ctx, d, t, oracle] {
      run_op(ctx, "sphere-ft", {{"d", *d}, {"t", *t}, {"oracle", *oracle}}, [&] {
        json out{{"value", dsm::bump::sphere_ft(*d, *t)}};
        if (*oracle) out["quadrature"] = dsm::bump::sphere_ft_quadrature(*d, *t);
        return out;
      });
    });
  }
  {
    auto* sub = app.add_subcommand("spatial-bump", "spatial profile of the frequency bump");
    auto d = std::make_shared<int>(5);
    auto r = std::make_shared<double>(0);
    auto support = std::make_shared<double>(1.0);
    sub->add_option("--d", *d)->required();
    sub->add_option("--r", *r)->required();
    sub->add_option("--support", *support)->capture_default_str();
    defer(sub, [&ctx, d, r, support] {
      run_op(ctx, "spatial-bump", {{"d", *d}, {"r", *r}, {"support", *support}}, [&] {
        dsm::bump::BumpProfile bp;
        bp.support = *support;
        return json{{"value", dsm::bump::SpatialBump::quadrature(bp, *d, *r)}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("avg-multiplier", "multiplier of A_lambda at xi");
    auto lam2 = std::make_shared<i64>(1);
    auto xi = std::make_shared<std::vector<double>>();
    sub->add_option("--lambda-sq", *lam2)->required();
    sub->add_option("--xi", *xi, "frequency in [0,1)^d")->required();
    defer(sub, [&ctx, lam2, xi] {
      run_op(ctx, "avg-multiplier", {{"lambda_sq", *lam2}, {"xi", *xi}}, [&] {
        auto table = dsm::lattice::rep_counts(static_cast<int>(xi->size()), *lam2);
        return json{
            {"value", dsm::multiplier::average_multiplier(*lam2, table.at(*lam2), xi_of(*xi))}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("arc-value", "major-arc piece c^{a/q}_lambda at xi");
    auto a = std::make_shared<i64>(0);
    auto q = std::make_shared<i64>(1);
    auto lam = std::make_shared<double>(1);
    auto xi = std::make_shared<std::vector<double>>();
    sub->add_option("--a", *a)->required();
    sub->add_option("--q", *q)->required();
    sub->add_option("--lambda", *lam)->required();
    sub->add_option("--xi", *xi)->required();
    defer(sub, [&ctx, a, q, lam, xi] {
      run_op(ctx, "arc-value", {{"a", *a}, {"q", *q}, {"lambda", *lam}, {"xi", *xi}}, [&] {
        auto v = dsm::multiplier::arc_value(*a, *q, *lam, xi_of(*xi),
                                            dsm::multiplier::standard_bump());
        return json{{"re", v.real()}, {"im", v.imag()}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("major-arc", "full major-arc multiplier at xi");
    auto lam2 = std::make_shared<i64>(1);
    auto qmax = std::make_shared<i64>(1);
    auto xi = std::make_shared<std::vector<double>>();
    sub->add_option("--lambda-sq", *lam2)->required();
    sub->add_option("--q-max", *qmax)->required();
    sub->add_option("--xi", *xi)->required();
    defer(sub, [&ctx, lam2, qmax, xi] {
      run_op(ctx, "major-arc", {{"lambda_sq", *lam2}, {"q_max", *qmax}, {"xi", *xi}}, [&] {
        auto v = dsm::multiplier::major_arc_value(*lam2, *qmax, xi_of(*xi),
                                                  dsm::multiplier::standard_bump());
        return json{{"re", v.real()}, {"im", v.imag()}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("composite", "b, t, u multipliers and the b = t u deviation");
    auto Q = std::make_shared<i64>(2);
    auto lam2 = std::make_shared<i64>(4);
    auto d = std::make_shared<int>(5);
    auto M = std::make_shared<int>(16);
    auto prefix = std::make_shared<std::string>();
    sub->add_option("--Q", *Q)->required();
    sub->add_option("--lambda-sq", *lam2)->required();
    sub->add_option("--d", *d)->required();
    sub->add_option("--M", *M)->required();
    sub->add_option("--save-prefix", *prefix, "write <prefix>{b,t,u}.json multiplier files");
    defer(sub, [&ctx, Q, lam2, d, M, prefix] {
      run_op(ctx, "composite", {{"Q", *Q}, {"lambda_sq", *lam2}, {"d", *d}, {"M", *M}}, [&] {
        auto cm = dsm::multiplier::composite_multipliers(*Q, *lam2, {*d, *M});
        double dev = 0, bmax = 0;
        for (size_t i = 0; i < cm.b.size(); ++i) {
          dev = std::max(dev, std::abs(cm.b.values[i] - cm.t.values[i] * cm.u.values[i]));
          bmax = std::max(bmax, std::abs(cm.b.values[i]));
        }
        if (!prefix->empty()) {
          for (auto [name, mult] : {std::pair{"b", &cm.b}, {"t", &cm.t}, {"u", &cm.u}}) {
            std::ofstream os(*prefix + name + ".json", std::ios::binary);
            if (!os) throw std::domain_error("cannot open multiplier output file");
            dsm::grid::save_json(*mult, os);
          }
        }
        return json{{"max_factorization_deviation", dev}, {"max_abs_b", bmax}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("kkernel", "mollified sphere kernel K_lambda summary");
    auto lam2 = std::make_shared<i64>(4);
    auto N = std::make_shared<i64>(2);
    auto d = std::make_shared<int>(5);
    auto width = std::make_shared<double>(0.0);
    sub->add_option("--lambda-sq", *lam2)->required();
    sub->add_option("--N", *N)->required();
    sub->add_option("--d", *d)->required();
    sub->add_option("--width", *width, "override width (default lambda/N)");
    defer(sub, [&ctx, lam2, N, d, width] {
      run_op(ctx, "kkernel", {{"lambda_sq", *lam2}, {"N", *N}, {"d", *d}, {"width", *width}},
             [&] {
               dsm::multiplier::KKernel k(*lam2, *N, *d, 1e-10, *width);
               return json{{"lattice_mass", k.lattice_mass()},
                           {"width", k.width()},
                           {"s_lo", k.s_lo()},
                           {"s_hi", k.s_hi()},
                           {"at_lambda_sq", k.at_radius_sq(*lam2)}};
             });
    });
  }
  {
    auto* sub = app.add_subcommand("m12", "hybrid kernel K * C_N summary");
    auto lam2 = std::make_shared<i64>(4);
    auto N = std::make_shared<i64>(2);
    auto d = std::make_shared<int>(5);
    sub->add_option("--lambda-sq", *lam2)->required();
    sub->add_option("--N", *N)->required();
    sub->add_option("--d", *d)->required();
    defer(sub, [&ctx, lam2, N, d] {
      run_op(ctx, "m12", {{"lambda_sq", *lam2}, {"N", *N}, {"d", *d}}, [&] {
        auto h = dsm::multiplier::m12_kernel(*lam2, *N, *d);
        double linf = 0;
        for (const auto& [s, v] : h.samples) linf = std::max(linf, std::abs(v));
        return json{{"sample_count", h.samples.size()}, {"linf", linf}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("psi2", "Psi_2 statistic");
    auto lam2 = std::make_shared<i64>(4);
    auto N = std::make_shared<i64>(2);
    auto j = std::make_shared<int>(4);
    auto d = std::make_shared<int>(5);
    sub->add_option("--lambda-sq", *lam2)->required();
    sub->add_option("--N", *N)->required();
    sub->add_option("--j", *j)->capture_default_str();
    sub->add_option("--d", *d)->required();
    defer(sub, [&ctx, lam2, N, j, d] {
      run_op(ctx, "psi2", {{"lambda_sq", *lam2}, {"N", *N}, {"j", *j}, {"d", *d}}, [&] {
        return moment_to_json(dsm::multiplier::psi2_statistic(*lam2, *N, *j, *d));
      });
    });
  }

  // --------------------------------------------------- grid / operators
  {
    auto* sub = app.add_subcommand("make-grid", "write a grid function file");
    auto d = std::make_shared<int>(2);
    auto M = std::make_shared<int>(8);
    auto kind = std::make_shared<std::string>("delta");
    auto out = std::make_shared<std::string>();
    auto density = std::make_shared<double>(0.5);
    sub->add_option("--d", *d)->required();
    sub->add_option("--M", *M)->required();
    sub->add_option("--kind", *kind, "delta | ones | random | indicator")
        ->check(CLI::IsMember({"delta", "ones", "random", "indicator"}));
    sub->add_option("--density", *density, "for indicator: site probability");
    sub->add_option("--grid-output", *out, "grid file path (.json or .bin)")->required();
    defer(sub, [&ctx, d, M, kind, out, density] {
      run_op(ctx, "make-grid",
             {{"d", *d}, {"M", *M}, {"kind", *kind}, {"density", *density}, {"seed", ctx.seed}},
             [&] {
               dsm::grid::GridFunction g(*d, *M);
               std::mt19937_64 rng(ctx.seed);
               if (*kind == "delta") {
                 g.values[0] = 1.0;
               } else if (*kind == "ones") {
                 for (auto& v : g.values) v = 1.0;
               } else if (*kind == "random") {
                 std::uniform_real_distribution<double> dist(0.0, 1.0);
                 for (auto& v : g.values) v = dist(rng);
               } else {
                 std::uniform_real_distribution<double> dist(0.0, 1.0);
                 for (auto& v : g.values) v = dist(rng) < *density ? 1.0 : 0.0;
                 g.flags = dsm::grid::GridFunction::kIndicator;
               }
               store_grid(g, *out);
               return json{{"path", *out}, {"sum", g.sum()}};
             });
    });
  }
  {
    auto* sub = app.add_subcommand("average", "discrete spherical average A_lambda f");
    auto input = std::make_shared<std::string>();
    auto lam2 = std::make_shared<i64>(1);
    auto nowrap = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>();
    sub->add_option("--input", *input)->required();
    sub->add_option("--lambda-sq", *lam2)->required();
    sub->add_flag("--no-wrap", *nowrap, "require M > 2 lambda (Z^d semantics)");
    sub->add_option("--grid-output", *out);
    defer(sub, [&ctx, input, lam2, nowrap, out] {
      run_op(ctx, "average",
             {{"input", *input}, {"lambda_sq", *lam2}, {"no_wrap", *nowrap}}, [&] {
               auto f = load_grid(*input);
               auto ks = kernels_of(f.d, {*lam2});
               auto g = dsm::operators::spherical_average(f, ks[0], *nowrap);
               if (!out->empty()) store_grid(g, *out);
               return json{{"sum", g.sum()},
                           {"linf", g.norm_linf()},
                           {"l2", g.norm_lp(2.0)}};
             });
    });
  }
  {
    auto* sub = app.add_subcommand("maximal", "maximal function over a radius list");
    auto input = std::make_shared<std::string>();
    auto lam2s = std::make_shared<std::vector<i64>>();
    auto out = std::make_shared<std::string>();
    sub->add_option("--input", *input)->required();
    sub->add_option("--lambda-sq-list", *lam2s)->required();
    sub->add_option("--grid-output", *out);
    defer(sub, [&ctx, input, lam2s, out] {
      run_op(ctx, "maximal", {{"input", *input}, {"lambda_sq_list", *lam2s}}, [&] {
        auto f = load_grid(*input);
        auto ks = kernels_of(f.d, *lam2s);
        auto g = dsm::operators::maximal_function(f, ks);
        if (!out->empty()) store_grid(g, *out);
        return json{{"sum", g.sum()}, {"linf", g.norm_linf()}, {"l2", g.norm_lp(2.0)}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("stopping-time",
                                   "argmax stopping time + linearized operator");
    auto input = std::make_shared<std::string>();
    auto lam2s = std::make_shared<std::vector<i64>>();
    sub->add_option("--input", *input)->required();
    sub->add_option("--lambda-sq-list", *lam2s)->required();
    defer(sub, [&ctx, input, lam2s] {
      run_op(ctx, "stopping-time", {{"input", *input}, {"lambda_sq_list", *lam2s}}, [&] {
        auto f = load_grid(*input);
        auto ks = kernels_of(f.d, *lam2s);
        auto tau = dsm::operators::argmax_stopping_time(f, ks);
        auto g = dsm::operators::stopping_time_apply(f, ks, tau);
        std::vector<i64> hist(lam2s->size(), 0);
        for (int idx : tau.k_index) hist[static_cast<size_t>(idx)]++;
        return json{{"index_histogram", hist}, {"linf", g.norm_linf()}};
      });
    });
  }
  {
    auto* sub = app.add_subcommand("pairing", "restricted weak-type pairing ratio");
    auto d = std::make_shared<int>(2);
    auto M = std::make_shared<int>(8);
    auto lam2s = std::make_shared<std::vector<i64>>();
    auto p = std::make_shared<double>(1.5);
    auto densF = std::make_shared<double>(0.3);
    auto densG = std::make_shared<double>(0.3);
    sub->add_option("--d", *d)->required();
    sub->add_option("--M", *M)->required();
    sub->add_option("--lambda-sq-list", *lam2s)->required();
    sub->add_option("--p", *p)->capture_default_str();
    sub->add_option("--density-f", *densF)->capture_default_str();
    sub->add_option("--density-g", *densG)->capture_default_str();
    defer(sub, [&ctx, d, M, lam2s, p, densF, densG] {
      run_op(ctx, "pairing",
             {{"d", *d},
              {"M", *M},
              {"lambda_sq_list", *lam2s},
              {"p", *p},
              {"density_f", *densF},
              {"density_g", *densG},
              {"seed", ctx.seed}},
             [&] {
               std::mt19937_64 rng(ctx.seed);
               std::uniform_real_distribution<double> dist(0.0, 1.0);
               dsm::grid::GridFunction F(*d, *M), G(*d, *M);
               for (auto& v : F.values) v = dist(rng) < *densF ? 1.0 : 0.0;
               for (auto& v : G.values) v = dist(rng) < *densG ? 1.0 : 0.0;
               F.flags = G.flags = dsm::grid::GridFunction::kIndicator;
               auto ks = kernels_of(*d, *lam2s);
               return moment_to_json(dsm::operators::pairing_ratio(F, G, ks, *p));
             });
    });
  }
  {
    auto* sub = app.add_subcommand("op-norm", "l2 norm of A_lambda via power iteration");
    auto d = std::make_shared<int>(2);
    auto M = std::make_shared<int>(8);
    auto lam2 = std::make_shared<i64>(1);
    sub->add_option("--d", *d)->required();
    sub->add_option("--M", *M)->required();
    sub->add_option("--lambda-sq", *lam2)->required();
    defer(sub, [&ctx, d, M, lam2] {
      run_op(ctx, "op-norm", {{"d", *d}, {"M", *M}, {"lambda_sq", *lam2}, {"seed", ctx.seed}},
             [&] {
               auto ks = kernels_of(*d, {*lam2});
               dsm::operators::LinearGridOp op{
                   [&](const dsm::grid::GridFunction& f) {
                     return dsm::operators::spherical_average(f, ks[0]);
                   },
                   nullptr};
               return moment_to_json(
                   dsm::operators::operator_norm_l2(op, *d, *M, 200, 1e-10, ctx.seed));
             });
    });
  }
  {
    auto* sub = app.add_subcommand("error-norm", "l2 norm of A_lambda - C_lambda");
    auto lam2 = std::make_shared<i64>(4);
    auto narcs = std::make_shared<i64>(2);
    auto d = std::make_shared<int>(5);
    auto M = std::make_shared<int>(16);
    sub->add_option("--lambda-sq", *lam2)->required();
    sub->add_option("--n-arcs", *narcs)->required();
    sub->add_option("--d", *d)->required();
    sub->add_option("--M", *M)->required();
    defer(sub, [&ctx, lam2, narcs, d, M] {
      run_op(ctx, "error-norm", {{"lambda_sq", *lam2}, {"n_arcs", *narcs}, {"d", *d}, {"M", *M}},
             [&] {
               return moment_to_json(dsm::operators::error_operator_norm(*lam2, *narcs, *d, *M));
             });
    });
  }

  // ------------------------------------------------------ sweep / verify
  {
    auto* sub = app.add_subcommand("sweep", "run a target over a value list and fit log-log");
    auto target = std::make_shared<std::string>();
    auto values = std::make_shared<std::vector<double>>();
    auto jobs = std::make_shared<int>(1);
    auto csv = std::make_shared<std::string>();
    auto d = std::make_shared<int>(5);
    auto j = std::make_shared<int>(2);
    sub->add_option("--target", *target,
                    "synthetic-cube | ramanujan-moment | rep-counts | lcm-moment | psi2 | "
                    "u-kernel | error-norm")
        ->required()
        ->check(CLI::IsMember({"synthetic-cube", "ramanujan-moment", "rep-counts", "lcm-moment",
                               "psi2", "u-kernel", "error-norm"}));
    sub->add_option("--values", *values, "sweep abscissas (>= 3)")->required();
    sub->add_option("--jobs", *jobs, "parallel points")->capture_default_str();
    sub->add_option("--csv", *csv, "also write points as CSV (columns x,y)");
    sub->add_option("--d", *d)->capture_default_str();
    sub->add_option("--j", *j)->capture_default_str();
    defer(sub, [&ctx, target, values, jobs, csv, d, j] {
      json config{{"target", *target}, {"values", *values}, {"jobs", *jobs},
                  {"d", *d},           {"j", *j},           {"seed", ctx.seed}};
      run_op(ctx, "sweep", config, [&] {
        SweepFn fn;
        const int dd = *d;
        const int jj = *j;
        const i64 budget = effective_budget(ctx, 0);
        if (*target == "synthetic-cube") {
          fn = [](double x) { return SweepPoint{x, x * x * x, {}}; };
        } else if (*target == "ramanujan-moment") {
          fn = [jj, budget](double x) {
            const i64 Q = static_cast<i64>(x);
            auto r = dsm::arith::ramanujan_moment(Q, jj, 2 * Q * Q,
                                                  budget > 0 ? budget : 200'000'000);
            return SweepPoint{x, r.value, moment_to_json(r)};
          };
        } else if (*target == "rep-counts") {
          fn = [dd](double x) {
            const i64 lam = static_cast<i64>(x);
            auto t = dsm::lattice::rep_counts(dd, lam * lam);
            return SweepPoint{x, static_cast<double>(t.at(lam * lam)), {}};
          };
        } else if (*target == "lcm-moment") {
          fn = [jj, budget](double x) {
            auto r = dsm::arith::lcm_moment(static_cast<i64>(x), jj,
                                            budget > 0 ? budget : 20'000'000);
            return SweepPoint{x, r.value, moment_to_json(r)};
          };
        } else if (*target == "psi2") {
          fn = [dd, jj](double x) {
            const i64 N = static_cast<i64>(x);
            i64 lam2 = 1;
            for (int i = 0; i < 6; ++i) lam2 *= N;  // lambda = N^3 >= N^2
            auto r = dsm::multiplier::psi2_statistic(lam2, N, jj, dd);
            return SweepPoint{x, r.value, moment_to_json(r)};
          };
        } else if (*target == "u-kernel") {
          fn = [dd](double x) {
            const auto& psi = dsm::multiplier::spatial_bump(dd, dsm::multiplier::standard_bump());
            auto r = dsm::gauss::u_kernel_l1(static_cast<i64>(x), dd, psi);
            return SweepPoint{x, r.value, moment_to_json(r)};
          };
        } else {  // error-norm: x = lambda, arcs q <= lambda, torus M = 32
          fn = [dd](double x) {
            const i64 lam = static_cast<i64>(x);
            auto r = dsm::operators::error_operator_norm(lam * lam, lam, dd, 32);
            return SweepPoint{x, r.value, moment_to_json(r)};
          };
        }
        return run_sweep(*target, *values, *jobs, fn, *csv);
      });
    });
  }
  {
    auto* sub = app.add_subcommand("verify", "run a named check suite");
    auto suite = std::make_shared<std::string>();
    sub->add_option("suite", *suite, "gauss-identities | dual-sum | empty")->required();
    defer(sub, [&ctx, suite] {
      run_op(ctx, "verify", {{"suite", *suite}, {"seed", ctx.seed}}, [&]() -> json {
        json out;
        if (*suite == "gauss-identities")
          out = verify_gauss_identities(ctx.seed);
        else if (*suite == "dual-sum")
          out = verify_dual_sum();
        else if (*suite == "empty")
          out = json{{"suite", "empty"}, {"checks", json::array()}, {"pass", true}};
        else
          throw std::domain_error("unknown suite: " + *suite);
        if (!out["pass"].get<bool>()) ctx.exit_code = 1;
        return out;
      });
    });
  }

  try {
    app.parse(argc, argv);
    for (auto& fn : actions) fn();
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    json err{{"error", {{"type", "validation"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 2;
  } catch (const dsm::budget_error& e) {
    json err{{"error", {{"type", "budget"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 3;
  } catch (const dsm::numerical_integrity_error& e) {
    json err{{"error", {{"type", "numerical-integrity"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 4;
  } catch (const dsm::precision_error& e) {
    json err{{"error", {{"type", "precision"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 4;
  } catch (const std::exception& e) {
    json err{{"error", {{"type", "validation"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 2;
  }
  return ctx.exit_code;
}
