#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dsm {

// Error taxonomy shared by all modules.  Exit codes in the CLI map onto
// these types: validation 2, budget 3, numerical integrity 4.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct numerical_integrity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct precision_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Record of a moment/norm computation: parameters, value, optional fitted
// growth exponent, and whether an independent oracle confirmed the value.
struct MomentReport {
  std::vector<std::pair<std::string, double>> params;
  double value = 0.0;
  std::optional<double> fitted_exponent;
  bool oracle_checked = false;

  void set(const std::string& name, double v) { params.emplace_back(name, v); }
  double get(const std::string& name) const;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS residual of the least-squares fit
};

// Ordinary least squares on (log x, log y) pairs.  Throws std::domain_error
// on nonpositive inputs or fewer than two points.
FitResult loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace dsm
