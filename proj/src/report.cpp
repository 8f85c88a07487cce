#include "dsm/report.hpp"

#include <cmath>

namespace dsm {

double MomentReport::get(const std::string& name) const {
  for (const auto& [k, v] : params)
    if (k == name) return v;
  throw std::domain_error("MomentReport: no parameter named " + name);
}

FitResult loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::domain_error("loglog_fit: need at least two (x, y) pairs");
  const size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (size_t i = 0; i < n; ++i) {
    if (xs[i] <= 0 || ys[i] <= 0)
      throw std::domain_error("loglog_fit: nonpositive input");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::domain_error("loglog_fit: degenerate abscissae");
  FitResult r;
  r.slope = (n * sxy - sx * sy) / denom;
  r.intercept = (sy - r.slope * sx) / n;
  double ss = 0;
  for (size_t i = 0; i < n; ++i) {
    const double e = ly[i] - (r.intercept + r.slope * lx[i]);
    ss += e * e;
  }
  r.residual = std::sqrt(ss / n);
  return r;
}

}  // namespace dsm
