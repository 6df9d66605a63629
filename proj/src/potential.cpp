#include "qgse/potential.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace qgse {

namespace {

constexpr double kPi = std::numbers::pi;

double param_or(const std::map<std::string, double>& p, const std::string& key, double dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

PotentialSpec random_trig(const std::map<std::string, double>& params, int d) {
  const auto seed = static_cast<std::uint64_t>(param_or(params, "seed", 1.0));
  const int terms = static_cast<int>(param_or(params, "terms", 3.0));
  if (terms < 1 || terms > 8) throw std::invalid_argument("random-trig: terms must be in [1,8]");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  // coefficients a[j][r] of sin((r+1) pi x_j), rescaled per axis so that
  // |f_j| <= 0.4 and |f_j'| <= d, which keeps V in [0.1, 0.9] and |dV| <= 1
  std::vector<std::vector<double>> a(static_cast<std::size_t>(d));
  double grad_bound = 0.0;
  for (int j = 0; j < d; ++j) {
    a[j].resize(static_cast<std::size_t>(terms));
    double s_abs = 0.0, s_der = 0.0;
    for (int r = 0; r < terms; ++r) {
      a[j][r] = unif(rng);
      s_abs += std::abs(a[j][r]);
      s_der += (r + 1) * kPi * std::abs(a[j][r]);
    }
    double scale = 0.95 * std::min(s_abs > 0 ? 0.4 / s_abs : 1.0,
                                   s_der > 0 ? static_cast<double>(d) / s_der : 1.0);
    double der = 0.0;
    for (int r = 0; r < terms; ++r) {
      a[j][r] *= scale;
      der += (r + 1) * kPi * std::abs(a[j][r]);
    }
    grad_bound = std::max(grad_bound, der / d);
  }

  PotentialSpec spec;
  spec.family = "random-trig";
  spec.params = {{"seed", static_cast<double>(seed)}, {"terms", static_cast<double>(terms)}};
  spec.d = d;
  spec.sup_value = 0.9;
  spec.sup_grad = grad_bound;
  spec.eval = [a, d](std::span<const double> x) {
    double tot = 0.0;
    for (int j = 0; j < d; ++j)
      for (std::size_t r = 0; r < a[static_cast<std::size_t>(j)].size(); ++r)
        tot += a[static_cast<std::size_t>(j)][r] *
               std::sin(static_cast<double>(r + 1) * kPi * x[static_cast<std::size_t>(j)]);
    return 0.5 + tot / d;
  };
  return spec;
}

}  // namespace

PotentialSpec make_potential(const std::string& family,
                             const std::map<std::string, double>& params, int d) {
  if (d < 1) throw std::invalid_argument("make_potential: d must be >= 1");
  PotentialSpec spec;
  spec.family = family;
  spec.d = d;

  if (family == "zero") {
    spec.sup_value = 0.0;
    spec.sup_grad = 0.0;
    spec.eval = [](std::span<const double>) { return 0.0; };
  } else if (family == "constant") {
    const double c = param_or(params, "value", 1.0);
    if (c < 0.0 || c > 1.0) throw std::invalid_argument("constant: value must be in [0,1]");
    spec.params = {{"value", c}};
    spec.sup_value = c;
    spec.sup_grad = 0.0;
    spec.eval = [c](std::span<const double>) { return c; };
  } else if (family == "linear-mean") {
    spec.sup_value = 1.0;
    spec.sup_grad = 1.0 / d;
    spec.eval = [d](std::span<const double> x) {
      double s = 0.0;
      for (double xi : x) s += xi;
      return s / d;
    };
  } else if (family == "sep-trig") {
    spec.sup_value = 0.5 + 1.0 / kPi;
    spec.sup_grad = 1.0;
    spec.eval = [](std::span<const double> x) {
      double p = 1.0;
      for (double xi : x) p *= 0.5 + std::sin(kPi * xi) / kPi;
      return p;
    };
  } else if (family == "sine") {
    const double a = param_or(params, "amplitude", 1.0 / kPi);
    if (a < 0.0 || a > 1.0 / kPi + 1e-12)
      throw std::invalid_argument("sine: amplitude must be in [0, 1/pi]");
    spec.params = {{"amplitude", a}};
    spec.sup_value = a;
    spec.sup_grad = a * kPi;
    spec.eval = [a](std::span<const double> x) {
      double p = a;
      for (double xi : x) p *= std::sin(kPi * xi);
      return p;
    };
  } else if (family == "random-trig") {
    return random_trig(params, d);
  } else {
    throw std::invalid_argument("unknown potential family: " + family);
  }
  return spec;
}

std::vector<std::string> potential_families() {
  return {"zero", "constant", "linear-mean", "sep-trig", "sine", "random-trig"};
}

AdmissibilityReport check_admissible(const PotentialSpec& pot, const GridSpec& g, double tol) {
  AdmissibilityReport rep;
  rep.min_value = 1e300;
  rep.max_value = -1e300;
  std::vector<double> x(static_cast<std::size_t>(g.d));
  std::vector<double> xs(static_cast<std::size_t>(g.d));
  const double delta = g.h;
  for (std::int64_t i = 0; i < g.points(); ++i) {
    grid_point(g, i, x);
    const double v = pot.eval(x);
    rep.min_value = std::min(rep.min_value, v);
    rep.max_value = std::max(rep.max_value, v);
    // forward difference along each axis (stays inside [0,1])
    for (int a = 0; a < g.d; ++a) {
      xs = x;
      xs[static_cast<std::size_t>(a)] += delta;
      if (xs[static_cast<std::size_t>(a)] > 1.0) continue;
      const double fd = std::abs(pot.eval(xs) - v) / delta;
      rep.max_fd_gradient = std::max(rep.max_fd_gradient, fd);
    }
  }
  rep.value_ok = rep.min_value >= -tol && rep.max_value <= 1.0 + tol;
  rep.gradient_ok = rep.max_fd_gradient <= 1.0 + tol;
  return rep;
}

double QueryConfig::truncate(double v) const {
  if (bits <= 0) return v;
  const double scale = std::ldexp(1.0, bits);
  return std::trunc(v * scale) / scale;
}

}  // namespace qgse
