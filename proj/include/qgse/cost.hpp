#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qgse {

/// Per-run resource accounting. Queries follow the phase-kickback rule: each
/// H2 exponential costs two evaluations of the potential. "Other operations"
/// follow the abstract model: the initial state, each H1 exponential and the
/// inverse Fourier transform are charged d*b^2 operations (unit constant).
struct PowerFactorCount {
  int t = 0;
  std::int64_t h1 = 0;
  std::int64_t h2 = 0;
  std::int64_t steps = 0;
};

struct CostReport {
  std::vector<PowerFactorCount> per_power;
  std::int64_t h1_total = 0;
  std::int64_t h2_total = 0;
  std::int64_t queries = 0;      // 2 * h2_total
  double analytic_n = 0.0;       // closed-form total bound at the same k, instance norms
  double analytic_n_class = 0.0; // same bound with the class-wide ||H2|| <= 1/(2d)
  int k_used = 0;
  double k_star = 0.0;
  int qubits = 0;             // b + d*q
  double other_ops = 0.0;
  std::string mode;
};

double analytic_total(int d, double eps, int b, int k, double h1_norm, double h2_norm);

/// One row of a scaling table at h = eps = 2^-b, worst-case norms
/// ||H1|| = 2 eps^-2 and ||H2|| = 1/(2d).
struct ScalingRow {
  int d = 1;
  double epsilon = 0.0;
  int b = 0;
  int k = 1;
  double k_star = 0.0;
  double analytic_n = 0.0;
  double model_nstar = 0.0;  // eps^-3 exp(sqrt(ln(1/(d eps))))
  std::int64_t qubits = 0;   // b + d*b
};

std::vector<ScalingRow> nstar_scaling(const std::vector<std::pair<int, int>>& points_d_b);

/// Least-squares slope of ln(analytic_n) against ln(1/eps) over the rows.
double fit_epsilon_exponent(const std::vector<ScalingRow>& rows);

struct SlackReport {
  double empirical = 0.0;
  double analytic = 0.0;
  double ratio = 0.0;  // empirical / analytic
  bool within_bound = false;
};
SlackReport empirical_vs_analytic(const CostReport& run);

struct EmpiricalPoint {
  std::int64_t exponentials = 0;
  std::int64_t queries = 0;
};
std::string scaling_csv(const std::vector<ScalingRow>& rows,
                        const std::vector<EmpiricalPoint>& empirical = {});

}  // namespace qgse
