#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "qgse/hamiltonian.hpp"
#include "qgse/sine_transform.hpp"

using namespace qgse;

namespace {
constexpr double kPi = std::numbers::pi;

PotentialSpec custom_potential(int d, double (*f)(std::span<const double>)) {
  PotentialSpec p;
  p.family = "custom";
  p.d = d;
  p.eval = f;
  return p;
}
}  // namespace

TEST_CASE("build_grid basic shapes") {
  const GridSpec g1 = build_grid(1, 3);
  CHECK(g1.m == 7);
  CHECK(g1.h == 0.125);
  CHECK(g1.h * (g1.m + 1) == 1.0);  // exact in binary floating point

  const GridSpec g2 = build_grid(2, 2);
  CHECK(g2.m == 3);
  CHECK(g2.h == 0.25);
  CHECK(g2.points() == 9);
  CHECK(g2.embedded_states() == 16);

  CHECK_THROWS_AS(build_grid(1, 30), std::length_error);
  CHECK_THROWS_AS(build_grid(0, 3), std::invalid_argument);
}

TEST_CASE("compact/embedded index maps are inverse") {
  const GridSpec g = build_grid(3, 2);
  std::vector<double> compact(static_cast<std::size_t>(g.points()));
  for (std::size_t i = 0; i < compact.size(); ++i) compact[i] = static_cast<double>(i) + 1.0;
  const auto emb = embed<double>(g, compact);
  CHECK(static_cast<std::int64_t>(emb.size()) == g.embedded_states());
  const auto back = restrict_embedded<double>(g, emb);
  CHECK(back == compact);
  // unused register states hold zero
  double total = 0.0;
  for (double v : emb) total += v;
  double expect = 0.0;
  for (double v : compact) expect += v;
  CHECK(total == expect);
}

TEST_CASE("discretize: zero potential closed forms") {
  const GridSpec g = build_grid(1, 3);
  const auto H = discretize(make_potential("zero", {}, 1), g);
  for (double vi : H.v) CHECK(vi == 0.0);
  CHECK(H.norm_h2 == 0.0);
  CHECK(H.norm_h1 == doctest::Approx(123.12829008072235).epsilon(1e-13));
  CHECK(H.norm_h1 <= 2.0 / (g.h * g.h));
}

TEST_CASE("discretize: constant potential") {
  const GridSpec g = build_grid(2, 2);
  const auto H = discretize(make_potential("constant", {{"value", 1.0}}, 2), g);
  for (double vi : H.v) CHECK(vi == 1.0);
  CHECK(H.norm_h2 == 0.25);
}

TEST_CASE("discretize: linear potential values before truncation are dyadic") {
  const GridSpec g = build_grid(1, 3);
  const auto H = discretize(make_potential("linear-mean", {}, 1), g);
  for (std::int64_t j = 1; j <= 7; ++j)
    CHECK(H.v[static_cast<std::size_t>(j - 1)] == static_cast<double>(j) / 8.0);
}

TEST_CASE("discretize rejects a potential leaving [0,1]") {
  const GridSpec g = build_grid(1, 3);
  const auto bad = custom_potential(1, [](std::span<const double>) { return 1.2; });
  CHECK_THROWS_AS(discretize(bad, g), std::domain_error);
}

TEST_CASE("laplacian_eigenpair closed forms") {
  const GridSpec g = build_grid(1, 3);
  const std::int64_t k1[] = {1};
  CHECK(laplacian_eigenpair(g, k1).value == doctest::Approx(9.743419838555294).epsilon(1e-13));
  const std::int64_t k7[] = {7};
  CHECK(laplacian_eigenpair(g, k7).value == doctest::Approx(246.2565801614447).epsilon(1e-13));

  const GridSpec g2 = build_grid(2, 3);
  const std::int64_t k11[] = {1, 1};
  CHECK(laplacian_eigenpair(g2, k11).value ==
        doctest::Approx(2 * 9.743419838555294).epsilon(1e-13));

  const std::int64_t k0[] = {0};
  CHECK_THROWS_AS(laplacian_eigenpair(g, k0), std::out_of_range);
  const std::int64_t k8[] = {8};
  CHECK_THROWS_AS(laplacian_eigenpair(g, k8), std::out_of_range);
}

TEST_CASE("sine eigenvectors are orthonormal and diagonalize -Lap_h") {
  for (int q : {3, 4}) {
    const GridSpec g = build_grid(1, q);
    for (std::int64_t k = 1; k <= g.m; ++k) {
      const std::int64_t ki[] = {k};
      const auto pair = laplacian_eigenpair(g, ki);
      double norm2 = 0.0;
      for (double c : pair.axis_vectors[0]) norm2 += c * c;
      CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  // dense apply reproduces eigenvalue * eigenvector
  const GridSpec g = build_grid(2, 3);
  const auto H = discretize(make_potential("zero", {}, 2), g);
  const Eigen::MatrixXd M = assemble_dense(H);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const std::int64_t k[] = {static_cast<std::int64_t>(rng() % 7 + 1),
                              static_cast<std::int64_t>(rng() % 7 + 1)};
    const auto pair = laplacian_eigenpair(g, k);
    const auto vec = pair.dense_vector();
    Eigen::Map<const Eigen::VectorXd> x(vec.data(), static_cast<Eigen::Index>(vec.size()));
    const double err = (M * x - pair.value * x).norm() / (pair.value * x.norm());
    CHECK(err <= 1e-10);
  }
}

TEST_CASE("dense assembly agrees with the matrix-free stencil") {
  const GridSpec g = build_grid(3, 2);
  const auto H = discretize(make_potential("random-trig", {{"seed", 5.0}}, 3), g);
  const Eigen::MatrixXd M = assemble_dense(H);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd x(g.points());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);
  Eigen::VectorXd y(g.points());
  apply_mh(H, {x.data(), static_cast<std::size_t>(x.size())},
           {y.data(), static_cast<std::size_t>(y.size())});
  CHECK((M * x - y).norm() <= 1e-10 * y.norm());
}

TEST_CASE("norm bounds hold for random admissible potentials") {
  for (int d : {1, 2, 3}) {
    for (double seed : {1.0, 2.0, 9.0}) {
      const GridSpec g = build_grid(d, d == 3 ? 2 : 3);
      const auto pot = make_potential("random-trig", {{"seed", seed}}, d);
      CHECK(check_admissible(pot, g).ok());
      const auto H = discretize(pot, g);
      CHECK(H.norm_h1 <= 2.0 / (g.h * g.h));
      CHECK(H.norm_h2 <= 1.0 / (2.0 * d) + 1e-15);
    }
  }
}

TEST_CASE("query truncation error is below 2^-bits") {
  const GridSpec g = build_grid(2, 4);
  const auto pot = make_potential("random-trig", {{"seed", 3.0}}, 2);
  const QueryConfig query{8};
  const auto H = discretize(pot, g, query);
  std::vector<double> x(2);
  for (std::int64_t i = 0; i < g.points(); ++i) {
    grid_point(g, i, x);
    const double raw = pot.eval(x);
    const double diff = raw - H.v[static_cast<std::size_t>(i)];
    CHECK(diff >= 0.0);  // round toward zero on nonnegative values
    CHECK(diff <= std::ldexp(1.0, -8));
  }
}

TEST_CASE("built-in families are admissible") {
  for (int d : {1, 2}) {
    const GridSpec g = build_grid(d, 4);
    for (const auto& fam : potential_families()) {
      const auto pot = make_potential(fam, {}, d);
      const auto rep = check_admissible(pot, g);
      INFO(fam << " d=" << d << " max=" << rep.max_value << " grad=" << rep.max_fd_gradient);
      CHECK(rep.ok());
    }
  }
  CHECK_THROWS_AS(make_potential("nope", {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_potential("constant", {{"value", 1.5}}, 1), std::invalid_argument);
}

TEST_CASE("fft matches the naive transform") {
  const std::size_t n = 16;
  Fft fft(n);
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss;
  std::vector<cplx> x(n), ref(n);
  for (auto& v : x) v = {gauss(rng), gauss(rng)};
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * kPi * static_cast<double>(j * k % n) / static_cast<double>(n);
      acc += x[j] * cplx(std::cos(ang), std::sin(ang));
    }
    ref[k] = acc;
  }
  std::vector<cplx> y = x;
  fft.forward(y.data());
  for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(y[k] - ref[k]) <= 1e-12 * std::abs(ref[k]) + 1e-12);
  fft.inverse(y.data());
  for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(y[k] - x[k]) <= 1e-12);
}

TEST_CASE("sine transform is self-inverse and diagonalizes the Laplacian") {
  const GridSpec g = build_grid(2, 3);
  const SineTransform dst(g);
  TransformWorkspace ws;
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss;

  std::vector<cplx> state(static_cast<std::size_t>(g.embedded_states()), cplx(0));
  for (std::int64_t i = 0; i < g.points(); ++i)
    state[static_cast<std::size_t>(compact_to_embedded(g, i))] = {gauss(rng), gauss(rng)};
  const std::vector<cplx> orig = state;

  dst.apply_all_axes(state.data(), ws);
  dst.apply_all_axes(state.data(), ws);
  for (std::size_t i = 0; i < state.size(); ++i) CHECK(std::abs(state[i] - orig[i]) <= 1e-12);

  // DST -> eigenvalue multiply -> DST equals the dense -Lap_h
  const auto H = discretize(make_potential("zero", {}, 2), g);
  const Eigen::MatrixXd L = assemble_dense(H);
  const auto lam = laplacian_embedded_table(g);
  state = orig;
  dst.apply_all_axes(state.data(), ws);
  for (std::size_t i = 0; i < state.size(); ++i) state[i] *= lam[i];
  dst.apply_all_axes(state.data(), ws);

  Eigen::VectorXcd xc(g.points()), want(g.points());
  for (std::int64_t i = 0; i < g.points(); ++i)
    xc(i) = orig[static_cast<std::size_t>(compact_to_embedded(g, i))];
  want = L * xc;
  for (std::int64_t i = 0; i < g.points(); ++i) {
    const cplx got = state[static_cast<std::size_t>(compact_to_embedded(g, i))];
    CHECK(std::abs(got - want(i)) <= 1e-10 * want.norm());
  }
}
