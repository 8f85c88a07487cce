#include "dsm/bump.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_gamma.h>

#include <cmath>
#include <mutex>

namespace dsm::bump {

namespace {

// GSL's default handler aborts; convert to exceptions once, process-wide.
std::once_flag g_gsl_once;
void disable_gsl_abort() {
  std::call_once(g_gsl_once, [] { gsl_set_error_handler_off(); });
}

// gsl_sf_bessel_Jnu is unreliable at isolated points for half-integer
// orders (NaN at e.g. nu=1/2, x=3pi/2); integer and half-integer orders
// get exact closed forms instead.
double bessel_j(double nu, double x) {
  const long twice = std::lround(2.0 * nu);
  if (std::abs(2.0 * nu - twice) < 1e-12) {
    if (twice % 2 == 0) return gsl_sf_bessel_Jn(static_cast<int>(twice / 2), x);
    const double pref = std::sqrt(2.0 / (M_PI * x));
    if (twice == 1) return pref * std::sin(x);
    if (twice == 3) return pref * (std::sin(x) / x - std::cos(x));
    if (twice == 5) return pref * ((3.0 / (x * x) - 1.0) * std::sin(x) - 3.0 * std::cos(x) / x);
  }
  return gsl_sf_bessel_Jnu(nu, x);
}

double ramp(double t) {
  // exp(-1/t) cutoff: 0 for t <= 0, 1 for t >= 1, C^inf monotone between.
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

struct HankelParams {
  const BumpProfile* profile;
  int d;
  double r;
};

double hankel_integrand(double s, void* p) {
  const auto* hp = static_cast<HankelParams*>(p);
  const double nu = hp->d / 2.0 - 1.0;
  const double x = 2.0 * M_PI * hp->r * s;
  double j;
  if (x < 1e-8) {
    // J_nu(x) ~ (x/2)^nu / Gamma(nu+1) for small arguments
    j = std::pow(x / 2.0, nu) / gsl_sf_gamma(nu + 1.0);
  } else {
    j = bessel_j(nu, x);
  }
  return (*hp->profile)(s)*j * std::pow(s, hp->d / 2.0);
}

}  // namespace

double BumpProfile::operator()(double r) const {
  if (r < 0) throw std::domain_error("BumpProfile: negative radius");
  if (r <= 0.5) return 1.0;
  if (r >= support) return 0.0;
  return ramp((support - r) / (support - 0.5));
}

double sphere_ft(int d, double t) {
  if (d < 2) throw std::domain_error("sphere_ft: d must be >= 2");
  if (t < 0) throw std::domain_error("sphere_ft: negative |xi|");
  disable_gsl_abort();
  const double nu = d / 2.0 - 1.0;
  const double x = 2.0 * M_PI * t;
  if (x < 1e-6) {
    // Series through the quadratic term keeps full accuracy near zero.
    return 1.0 - x * x / (2.0 * d);
  }
  const double j = bessel_j(nu, x);
  return gsl_sf_gamma(d / 2.0) * std::pow(M_PI * t, -nu) * j;
}

double sphere_ft_quadrature(int d, double t) {
  // Int_0^pi cos(2 pi t cos theta) sin^{d-2} theta dtheta, normalized.
  const int n = 4000;  // Simpson; integrand is smooth and mildly oscillatory
  const double h = M_PI / n;
  double num = 0, den = 0;
  for (int i = 0; i <= n; ++i) {
    const double theta = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double s = std::pow(std::sin(theta), d - 2);
    num += w * s * std::cos(2.0 * M_PI * t * std::cos(theta));
    den += w * s;
  }
  return num / den;
}

double SpatialBump::quadrature(const BumpProfile& profile, int d, double r) {
  disable_gsl_abort();
  if (r < 1e-12) {
    // f(0) = surface(S^{d-1}) * Int profile(s) s^{d-1} ds
    const double sigma = 2.0 * std::pow(M_PI, d / 2.0) / gsl_sf_gamma(d / 2.0);
    const int n = 2000;
    const double h = profile.support / n;
    double acc = 0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += w * profile(i * h) * std::pow(i * h, d - 1);
    }
    return sigma * acc * h / 3.0;
  }

  HankelParams hp{&profile, d, r};
  gsl_function f;
  f.function = &hankel_integrand;
  f.params = &hp;

  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4000);
  double result = 0, abserr = 0;
  const int status = gsl_integration_qag(&f, 0.0, profile.support, 1e-13, 1e-11, 4000,
                                         GSL_INTEG_GAUSS61, ws, &result, &abserr);
  gsl_integration_workspace_free(ws);
  if (status != GSL_SUCCESS && status != GSL_EROUND)
    throw numerical_integrity_error("SpatialBump: Hankel quadrature failed");
  const double nu = d / 2.0 - 1.0;
  return 2.0 * M_PI * std::pow(r, -nu) * result;
}

SpatialBump::SpatialBump(const BumpProfile& profile, int d, double r_max, double step)
    : profile_(profile), d_(d), r_max_(r_max), step_(step) {
  const size_t n = static_cast<size_t>(std::ceil(r_max / step)) + 3;
  table_.resize(n);
  for (size_t i = 0; i < n; ++i) table_[i] = quadrature(profile_, d_, i * step_);
}

double SpatialBump::operator()(double r) const {
  if (r < 0) r = -r;
  if (r >= r_max_) return 0.0;
  const double u = r / step_;
  size_t i = static_cast<size_t>(u);
  if (i + 2 >= table_.size()) return table_.back();
  const double t = u - i;
  // Catmull-Rom through the four surrounding samples.
  const double p0 = (i == 0) ? table_[1] : table_[i - 1];  // even extension at 0
  const double p1 = table_[i];
  const double p2 = table_[i + 1];
  const double p3 = table_[i + 2];
  return 0.5 * ((2 * p1) + (-p0 + p2) * t + (2 * p0 - 5 * p1 + 4 * p2 - p3) * t * t +
                (-p0 + 3 * p1 - 3 * p2 + p3) * t * t * t);
}

}  // namespace dsm::bump
