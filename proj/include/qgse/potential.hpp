#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qgse/grid.hpp"

namespace qgse {

/// A potential V on [0,1]^d from the admissible class: 0 <= V <= 1 with
/// every first partial derivative bounded by 1 in magnitude.
struct PotentialSpec {
  std::string family;
  std::map<std::string, double> params;
  int d = 1;
  std::function<double(std::span<const double>)> eval;
  double sup_value = 1.0;  // declared bound on sup V
  double sup_grad = 1.0;   // declared bound on sup |dV/dx_j|

  double operator()(std::span<const double> x) const { return eval(x); }
};

/// Built-in families:
///   zero                         V = 0
///   constant   {value}           V = value, value in [0,1]
///   linear-mean                  V = (1/d) sum_j x_j
///   sep-trig                     V = prod_j (1/2 + sin(pi x_j)/pi)
///   sine       {amplitude}       V = a prod_j sin(pi x_j), a <= 1/pi
///   random-trig {seed[,terms]}   seeded low-order trig polynomial, rescaled
///                                into the admissible class
PotentialSpec make_potential(const std::string& family,
                             const std::map<std::string, double>& params, int d);

std::vector<std::string> potential_families();

/// Empirical admissibility check: samples all grid points of g for the value
/// bound and finite differences along each axis for the derivative bound.
struct AdmissibilityReport {
  bool value_ok = false;
  bool gradient_ok = false;
  double min_value = 0.0;
  double max_value = 0.0;
  double max_fd_gradient = 0.0;
  bool ok() const { return value_ok && gradient_ok; }
};
AdmissibilityReport check_admissible(const PotentialSpec& pot, const GridSpec& g,
                                     double tol = 1e-9);

/// Fixed-point truncation width for potential evaluations made by the
/// query oracle. Round-toward-zero; error of each evaluation <= 2^-bits.
struct QueryConfig {
  int bits = 0;
  static QueryConfig for_grid(const GridSpec& g) { return QueryConfig{g.q + 4}; }
  double truncate(double v) const;
};

}  // namespace qgse
