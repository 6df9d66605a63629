#include "qgse/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgse {

namespace {
constexpr double kPi = std::numbers::pi;
}

double DiscretizedHamiltonian::smallest_laplacian_eigenvalue() const {
  const double s = std::sin(kPi * grid.h / 2.0);
  return 4.0 * grid.d * s * s / (grid.h * grid.h);
}

double DiscretizedHamiltonian::norm_bound() const {
  double vmax = 0.0;
  for (double vi : v) vmax = std::max(vmax, vi);
  const double s = std::sin(static_cast<double>(grid.m) * kPi * grid.h / 2.0);
  return 4.0 * grid.d * s * s / (grid.h * grid.h) + vmax;
}

DiscretizedHamiltonian discretize(const PotentialSpec& pot, const GridSpec& g, QueryConfig query) {
  if (pot.d != g.d)
    throw std::invalid_argument("discretize: potential dimension does not match grid");
  if (query.bits == 0) query = QueryConfig::for_grid(g);

  DiscretizedHamiltonian H;
  H.grid = g;
  H.v.resize(static_cast<std::size_t>(g.points()));
  std::vector<double> x(static_cast<std::size_t>(g.d));
  double vmax = 0.0;
  for (std::int64_t i = 0; i < g.points(); ++i) {
    grid_point(g, i, x);
    const double raw = pot.eval(x);
    if (raw < 0.0 || raw > 1.0)
      throw std::domain_error("discretize: potential leaves [0,1] at a grid point");
    const double t = query.truncate(raw);
    H.v[static_cast<std::size_t>(i)] = t;
    vmax = std::max(vmax, t);
  }
  const double s = std::sin(static_cast<double>(g.m) * kPi * g.h / 2.0);
  H.norm_h1 = 2.0 * s * s / (g.h * g.h);
  H.norm_h2 = vmax / (2.0 * g.d);
  return H;
}

double laplacian_axis_eigenvalue(const GridSpec& g, std::int64_t k) {
  if (k < 1 || k > g.m) throw std::out_of_range("laplacian eigenvalue index out of range");
  const double s = std::sin(static_cast<double>(k) * kPi * g.h / 2.0);
  return 4.0 * s * s / (g.h * g.h);
}

std::vector<double> LaplacianEigenpair::dense_vector() const {
  std::vector<double> out{1.0};
  for (const auto& ax : axis_vectors) {
    std::vector<double> next(out.size() * ax.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = 0; j < ax.size(); ++j) next[i * ax.size() + j] = out[i] * ax[j];
    out.swap(next);
  }
  return out;
}

LaplacianEigenpair laplacian_eigenpair(const GridSpec& g, std::span<const std::int64_t> k) {
  if (static_cast<int>(k.size()) != g.d)
    throw std::invalid_argument("laplacian_eigenpair: multi-index size != d");
  LaplacianEigenpair pair;
  const double amp = std::sqrt(2.0 * g.h);
  for (int a = 0; a < g.d; ++a) {
    const std::int64_t ka = k[static_cast<std::size_t>(a)];
    pair.value += laplacian_axis_eigenvalue(g, ka);
    std::vector<double> vec(static_cast<std::size_t>(g.m));
    for (std::int64_t j = 1; j <= g.m; ++j)
      vec[static_cast<std::size_t>(j - 1)] =
          amp * std::sin(static_cast<double>(j) * static_cast<double>(ka) * kPi * g.h);
    pair.axis_vectors.push_back(std::move(vec));
  }
  return pair;
}

std::vector<double> sine_ground_axis(const GridSpec& g) {
  std::vector<double> vec(static_cast<std::size_t>(g.m));
  const double amp = std::sqrt(2.0 * g.h);
  for (std::int64_t j = 1; j <= g.m; ++j)
    vec[static_cast<std::size_t>(j - 1)] = amp * std::sin(static_cast<double>(j) * kPi * g.h);
  return vec;
}

std::vector<double> sine_ground_tensor(const GridSpec& g) {
  std::vector<std::int64_t> ones(static_cast<std::size_t>(g.d), 1);
  return laplacian_eigenpair(g, ones).dense_vector();
}

Eigen::MatrixXd assemble_dense(const DiscretizedHamiltonian& H) {
  const GridSpec& g = H.grid;
  const std::int64_t n = g.points();
  if (n > 8192) throw std::length_error("assemble_dense: grid too large for dense assembly");
  const double hinv2 = 1.0 / (g.h * g.h);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::int64_t> strides(static_cast<std::size_t>(g.d), 1);
  for (int a = g.d - 2; a >= 0; --a)
    strides[static_cast<std::size_t>(a)] = strides[static_cast<std::size_t>(a + 1)] * g.m;
  std::vector<std::int64_t> mi(static_cast<std::size_t>(g.d));
  for (std::int64_t i = 0; i < n; ++i) {
    compact_multi_index(g, i, mi);
    M(i, i) = 2.0 * g.d * hinv2 + H.v[static_cast<std::size_t>(i)];
    for (int a = 0; a < g.d; ++a) {
      if (mi[static_cast<std::size_t>(a)] < g.m)
        M(i, i + strides[static_cast<std::size_t>(a)]) = -hinv2;
      if (mi[static_cast<std::size_t>(a)] > 1)
        M(i, i - strides[static_cast<std::size_t>(a)]) = -hinv2;
    }
  }
  return M;
}

void apply_mh(const DiscretizedHamiltonian& H, std::span<const double> x, std::span<double> y) {
  const GridSpec& g = H.grid;
  const std::int64_t n = g.points();
  const double hinv2 = 1.0 / (g.h * g.h);
  const double diag = 2.0 * g.d * hinv2;
  std::vector<std::int64_t> strides(static_cast<std::size_t>(g.d), 1);
  for (int a = g.d - 2; a >= 0; --a)
    strides[static_cast<std::size_t>(a)] = strides[static_cast<std::size_t>(a + 1)] * g.m;
  // incremental multi-index (1-based) to avoid per-point divisions
  std::vector<std::int64_t> mi(static_cast<std::size_t>(g.d), 1);
  for (std::int64_t i = 0; i < n; ++i) {
    double acc = (diag + H.v[static_cast<std::size_t>(i)]) * x[static_cast<std::size_t>(i)];
    for (int a = 0; a < g.d; ++a) {
      const std::int64_t s = strides[static_cast<std::size_t>(a)];
      if (mi[static_cast<std::size_t>(a)] < g.m) acc -= hinv2 * x[static_cast<std::size_t>(i + s)];
      if (mi[static_cast<std::size_t>(a)] > 1) acc -= hinv2 * x[static_cast<std::size_t>(i - s)];
    }
    y[static_cast<std::size_t>(i)] = acc;
    for (int a = g.d - 1; a >= 0; --a) {
      if (++mi[static_cast<std::size_t>(a)] <= g.m) break;
      mi[static_cast<std::size_t>(a)] = 1;
    }
  }
}

std::vector<double> laplacian_embedded_table(const GridSpec& g) {
  const std::int64_t M = g.m + 1;
  std::vector<double> axis(static_cast<std::size_t>(M), 0.0);
  for (std::int64_t k = 1; k <= g.m; ++k)
    axis[static_cast<std::size_t>(k - 1)] = laplacian_axis_eigenvalue(g, k);
  std::vector<double> table(static_cast<std::size_t>(g.embedded_states()), 0.0);
  // digit-sum over base-M digits of the embedded index
  for (std::int64_t e = 0; e < g.embedded_states(); ++e) {
    std::int64_t rem = e;
    double tot = 0.0;
    bool used = true;
    for (int a = 0; a < g.d; ++a) {
      const std::int64_t digit = rem % M;
      rem /= M;
      if (digit == M - 1) {
        used = false;
        break;
      }
      tot += axis[static_cast<std::size_t>(digit)];
    }
    table[static_cast<std::size_t>(e)] = used ? tot : 0.0;
  }
  return table;
}

std::vector<double> potential_embedded_table(const DiscretizedHamiltonian& H) {
  return embed<double>(H.grid, H.v);
}

}  // namespace qgse
