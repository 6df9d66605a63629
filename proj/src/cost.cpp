#include "qgse/cost.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qgse/splitting.hpp"

namespace qgse {

double analytic_total(int d, double eps, int b, int k, double h1_norm, double h2_norm) {
  if (d < 1 || eps <= 0.0) throw std::invalid_argument("analytic_total: bad parameters");
  return total_exponential_bound(b, k, h1_norm, h2_norm);
}

std::vector<ScalingRow> nstar_scaling(const std::vector<std::pair<int, int>>& points_d_b) {
  std::vector<ScalingRow> rows;
  rows.reserve(points_d_b.size());
  for (const auto& [d, b] : points_d_b) {
    ScalingRow row;
    row.d = d;
    row.b = b;
    row.epsilon = std::ldexp(1.0, -b);
    row.k_star = optimal_k_real(b, d);
    row.k = optimal_k_int(b, d);
    const double h1 = 2.0 / (row.epsilon * row.epsilon);
    const double h2 = 1.0 / (2.0 * d);
    row.analytic_n = total_exponential_bound(b, row.k, h1, h2);
    const double de = d * row.epsilon;
    if (de >= 1.0) throw std::domain_error("nstar_scaling: requires d*eps < 1");
    row.model_nstar = std::pow(row.epsilon, -3.0) * std::exp(std::sqrt(std::log(1.0 / de)));
    row.qubits = b + static_cast<std::int64_t>(d) * b;  // q = b when h = eps
    rows.push_back(row);
  }
  return rows;
}

double fit_epsilon_exponent(const std::vector<ScalingRow>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("fit_epsilon_exponent: need >= 2 rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = -std::log(r.epsilon);
    const double y = std::log(r.analytic_n);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SlackReport empirical_vs_analytic(const CostReport& run) {
  SlackReport rep;
  rep.empirical = static_cast<double>(run.h1_total + run.h2_total);
  // the instance-norm bound degenerates to 0 when ||H2|| = 0; fall back to the
  // class-wide bound the theorem itself uses
  rep.analytic = run.analytic_n > 0.0 ? run.analytic_n : run.analytic_n_class;
  rep.ratio = rep.analytic > 0.0 ? rep.empirical / rep.analytic : 0.0;
  rep.within_bound = rep.analytic > 0.0 && rep.empirical <= rep.analytic;
  return rep;
}

std::string scaling_csv(const std::vector<ScalingRow>& rows,
                        const std::vector<EmpiricalPoint>& empirical) {
  std::ostringstream os;
  os.precision(12);
  os << "d,epsilon,b,k,analyticN,empiricalN,queries,qubits\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::int64_t emp = i < empirical.size() ? empirical[i].exponentials : 0;
    const std::int64_t qry = i < empirical.size() ? empirical[i].queries : 0;
    os << r.d << ',' << r.epsilon << ',' << r.b << ',' << r.k << ',' << r.analytic_n << ','
       << emp << ',' << qry << ',' << r.qubits << '\n';
  }
  return os.str();
}

}  // namespace qgse
