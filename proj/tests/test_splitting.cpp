#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qgse/splitting.hpp"

using namespace qgse;

TEST_CASE("strang base step") {
  const auto s = suzuki_schedule(1, 1.0, 1);
  REQUIRE(s.factors.size() == 3);
  CHECK(s.factors[0].target == SplitTarget::H1);
  CHECK(s.factors[0].z == 0.5);
  CHECK(s.factors[1].target == SplitTarget::H2);
  CHECK(s.factors[1].z == 1.0);
  CHECK(s.factors[2].target == SplitTarget::H1);
  CHECK(s.factors[2].z == 0.5);
}

TEST_CASE("midpoint merging across steps") {
  const auto s = suzuki_schedule(1, 1.0, 2);
  REQUIRE(s.factors.size() == 5);
  const double want_z[] = {0.25, 0.5, 0.5, 0.5, 0.25};
  const SplitTarget want_t[] = {SplitTarget::H1, SplitTarget::H2, SplitTarget::H1,
                                SplitTarget::H2, SplitTarget::H1};
  for (int i = 0; i < 5; ++i) {
    CHECK(s.factors[static_cast<std::size_t>(i)].target == want_t[i]);
    CHECK(s.factors[static_cast<std::size_t>(i)].z == doctest::Approx(want_z[i]).epsilon(1e-15));
  }
}

TEST_CASE("recursion constant p2 and factor counts") {
  CHECK(suzuki_p(2) == doctest::Approx(0.4144907717943757).epsilon(1e-15));
  CHECK(factors_per_step(1) == 3);
  CHECK(factors_per_step(2) == 11);
  CHECK(factors_per_step(3) == 51);

  for (int k : {1, 2, 3}) {
    const std::int64_t n = 7;
    const auto s = suzuki_schedule(k, 2.0, n);
    std::int64_t fives = 1;
    for (int i = 1; i < k; ++i) fives *= 5;
    CHECK(s.h1_count() == n * fives + 1);
    CHECK(s.h2_count() == n * fives);
    CHECK(std::llabs(s.h1_count() - s.h2_count()) <= n);
    // negative coefficients appear from k = 2 on and are legitimate
    if (k >= 2) {
      bool has_negative = false;
      for (const auto& f : s.factors) has_negative = has_negative || f.z < 0.0;
      CHECK(has_negative);
    }
  }
}

TEST_CASE("coefficient sums and palindromes (property)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> tdist(0.25, 33.0);
  for (int trial = 0; trial < 12; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 3);
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 16);
    const double T = tdist(rng);
    const auto s = suzuki_schedule(k, T, n);

    CHECK(std::abs(s.coefficient_sum(SplitTarget::H1) - T) <= 1e-12 * T);
    CHECK(std::abs(s.coefficient_sum(SplitTarget::H2) - T) <= 1e-12 * T);

    for (std::size_t i = 0; i < s.factors.size(); ++i) {
      const auto& a = s.factors[i];
      const auto& b = s.factors[s.factors.size() - 1 - i];
      CHECK(a.target == b.target);
      CHECK(a.z == doctest::Approx(b.z).epsilon(1e-12));
    }
  }
}

TEST_CASE("error budget arithmetic") {
  const auto b3 = error_budget(3);
  CHECK(b3.epsilons == std::vector<double>{1.0 / 160, 1.0 / 80, 1.0 / 40});
  CHECK(b3.total() <= 1.0 / 20);

  const auto b1 = error_budget(1);
  REQUIRE(b1.epsilons.size() == 1);
  CHECK(b1.epsilons[0] == 1.0 / 40);

  for (int b = 1; b <= 12; ++b) CHECK(error_budget(b).total() <= 1.0 / 20);
  CHECK_THROWS_AS(error_budget(0), std::invalid_argument);
}

TEST_CASE("per-power bound formula") {
  const double h1 = 123.12829008072235;  // (2/h^2) sin^2(7 pi/16) at q = 3
  const auto bound = min_steps_for_error(1, 0, 0.25 / 40.0, h1, 0.5);
  CHECK(bound.n_t == doctest::Approx(223362.12918120265).epsilon(1e-12));
  CHECK(bound.steps == static_cast<std::int64_t>(std::ceil(bound.n_t / 3.0)));

  // scaling eps -> eps * 2^(2k) halves the bound exactly
  for (int k : {1, 2, 3}) {
    const double eps = 1e-3;
    const auto a = min_steps_for_error(k, 2, eps, h1, 0.5);
    const auto c = min_steps_for_error(k, 2, eps * std::ldexp(1.0, 2 * k), h1, 0.5);
    CHECK(c.n_t == doctest::Approx(a.n_t / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("total bound and optimal k") {
  const double h1 = 123.12829008072235;
  CHECK(total_exponential_bound(8, 2, h1, 0.5) ==
        doctest::Approx(175483844.64195478).epsilon(1e-12));
  // doubling 2^b multiplies the bound by 2^(1 + 1/(2k))
  for (int k : {1, 2}) {
    const double r = total_exponential_bound(9, k, h1, 0.5) /
                     total_exponential_bound(8, k, h1, 0.5);
    CHECK(r == doctest::Approx(std::pow(2.0, 1.0 + 0.5 / k)).epsilon(1e-12));
  }

  CHECK(optimal_k_real(8, 1) == doctest::Approx(1.6052571277903265).epsilon(1e-12));
  CHECK(optimal_k_int(8, 1) == 2);
  // monotonicity of k*
  CHECK(optimal_k_real(8, 2) < optimal_k_real(8, 1));
  CHECK(optimal_k_real(8, 4) < optimal_k_real(8, 2));
  CHECK(optimal_k_real(12, 1) > optimal_k_real(8, 1));
  CHECK_THROWS_AS(optimal_k_real(1, 1000), std::domain_error);
}

TEST_CASE("apply_schedule: exact for commuting split, unitary in general") {
  const GridSpec g = build_grid(1, 3);
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss;

  auto random_embedded = [&](const GridSpec& gr) {
    std::vector<cplx> s(static_cast<std::size_t>(gr.embedded_states()), cplx(0));
    for (std::int64_t i = 0; i < gr.points(); ++i)
      s[static_cast<std::size_t>(compact_to_embedded(gr, i))] = {gauss(rng), gauss(rng)};
    return s;
  };

  SUBCASE("zero potential: any schedule equals the exact propagator") {
    const auto H = discretize(make_potential("zero", {}, 1), g);
    const ExactPropagator prop(H);
    auto s = random_embedded(g);
    auto want = restrict_embedded<cplx>(g, s);
    prop.apply(2.0, want);
    apply_schedule(H, suzuki_schedule(2, 2.0, 3), s);
    const auto got = restrict_embedded<cplx>(g, s);
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-10);
  }

  SUBCASE("norm preservation and untouched embedding slots") {
    const GridSpec g2 = build_grid(2, 3);
    const auto H = discretize(make_potential("linear-mean", {}, 2), g2);
    auto s = random_embedded(g2);
    double n0 = 0.0;
    for (const auto& a : s) n0 += std::norm(a);
    apply_schedule(H, suzuki_schedule(2, 5.0, 4), s);
    double n1 = 0.0;
    for (const auto& a : s) n1 += std::norm(a);
    CHECK(std::sqrt(n1) == doctest::Approx(std::sqrt(n0)).epsilon(1e-12));

    // non-grid register states keep zero amplitude
    std::vector<bool> used(s.size(), false);
    for (std::int64_t i = 0; i < g2.points(); ++i)
      used[static_cast<std::size_t>(compact_to_embedded(g2, i))] = true;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!used[i]) CHECK(std::abs(s[i]) <= 1e-14);
  }

  SUBCASE("propagator inverse really inverts") {
    const auto H = discretize(make_potential("sep-trig", {}, 1), g);
    const auto sched = suzuki_schedule(2, 3.0, 2);
    const SchedulePropagator prop(H, sched);
    TransformWorkspace ws;
    auto s = random_embedded(g);
    const auto orig = s;
    prop.apply(s, ws);
    prop.apply_inverse(s, ws);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s[i] - orig[i]) <= 1e-11);
  }
}

TEST_CASE("measured error: convergence order and halving") {
  const GridSpec g = build_grid(1, 3);
  const auto H = discretize(make_potential("linear-mean", {}, 1), g);
  const ExactPropagator prop(H);

  auto err = [&](int k, std::int64_t n) {
    return schedule_error_norm(H, suzuki_schedule(k, 1.0, n), prop);
  };

  // doubling n cuts the Strang error by at least ~4x in the asymptotic range
  CHECK(err(1, 8) / err(1, 16) >= 2.5);
  CHECK(err(1, 16) / err(1, 32) >= 2.5);

  // global order >= 2k - 0.3 for k = 1, 2 over n in {4, 8, 16, 32}
  for (int k : {1, 2}) {
    std::vector<double> lx, ly;
    for (std::int64_t n : {4, 8, 16, 32}) {
      lx.push_back(std::log(1.0 / static_cast<double>(n)));
      ly.push_back(std::log(err(k, n)));
    }
    const double n4 = 4;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double slope = (n4 * sxy - sx * sy) / (n4 * sxx - sx * sx);
    CHECK(slope >= 2.0 * k - 0.3);
  }
}

TEST_CASE("zero potential: zero error, empirical search returns one step") {
  const GridSpec g = build_grid(1, 3);
  const auto H = discretize(make_potential("zero", {}, 1), g);
  const ExactPropagator prop(H);
  CHECK(schedule_error_norm(H, suzuki_schedule(1, 4.0, 5), prop) <= 1e-12);
  const auto c = min_steps_empirical(H, prop, 1, 4.0, 1e-6);
  CHECK(c.steps == 1);
  CHECK(c.measured_error <= 1e-6);
}

TEST_CASE("empirical bisection finds a minimal budget-satisfying step count") {
  const GridSpec g = build_grid(1, 3);
  const auto H = discretize(make_potential("linear-mean", {}, 1), g);
  const ExactPropagator prop(H);
  const double eps = 1e-3;
  const auto c = min_steps_empirical(H, prop, 1, 2.0, eps);
  CHECK(c.measured_error <= eps);
  if (c.steps > 1) {
    const double below = schedule_error_norm(H, suzuki_schedule(1, 2.0, c.steps - 1), prop);
    CHECK(below > eps);
  }
}

TEST_CASE("analytic step count satisfies the budget it was derived from") {
  const GridSpec g = build_grid(1, 3);
  const auto H = discretize(make_potential("linear-mean", {}, 1), g);
  const ExactPropagator prop(H);
  const auto budget = error_budget(3);
  const auto bound = min_steps_for_error(1, 0, budget.epsilons[0], H.norm_h1, H.norm_h2);
  const auto sched = suzuki_schedule(1, 1.0, bound.steps);
  CHECK(schedule_error_norm(H, sched, prop) <= budget.epsilons[0]);

  // actual factor totals over all powers stay below the Eq.-style total bound
  std::int64_t total = 0;
  for (int t = 0; t < 3; ++t) {
    const auto bt = min_steps_for_error(1, t, budget.epsilons[static_cast<std::size_t>(t)],
                                        H.norm_h1, H.norm_h2);
    total += static_cast<std::int64_t>(suzuki_schedule(1, std::ldexp(1.0, t), bt.steps)
                                           .factors.size());
  }
  CHECK(static_cast<double>(total) <= total_exponential_bound(3, 1, H.norm_h1, H.norm_h2));
}

TEST_CASE("refined-reference error measure tracks the exact one") {
  const GridSpec g = build_grid(1, 3);
  const auto H = discretize(make_potential("linear-mean", {}, 1), g);
  const ExactPropagator prop(H);
  for (std::int64_t n : {8, 16}) {
    const auto sched = suzuki_schedule(1, 1.0, n);
    const double exact = schedule_error_norm(H, sched, prop);
    const double refined = schedule_error_norm_refined(H, sched);
    // refining 4x leaves at most a 1/16 relative gap for the Strang formula
    CHECK(refined == doctest::Approx(exact).epsilon(0.2));
  }
}

TEST_CASE("schedule JSON round trip") {
  const auto s = suzuki_schedule(2, 4.0, 3);
  const auto back = schedule_from_json(schedule_to_json(s));
  CHECK(back.k == s.k);
  CHECK(back.total_time == s.total_time);
  CHECK(back.steps == s.steps);
  REQUIRE(back.factors.size() == s.factors.size());
  for (std::size_t i = 0; i < s.factors.size(); ++i) {
    CHECK(back.factors[i].target == s.factors[i].target);
    CHECK(back.factors[i].z == s.factors[i].z);
  }
  CHECK_THROWS(schedule_from_json("{\"k\": 1}"));
}

TEST_CASE("calibrated steps respect headroom") {
  const GridSpec g = build_grid(1, 3);
  const auto H = discretize(make_potential("linear-mean", {}, 1), g);
  const ExactPropagator prop(H);
  const double eps = 5e-3;
  const auto c = calibrate_steps(H, prop, 1, 4.0, eps, 0.5);
  CHECK(c.measured_error <= 0.5 * eps);
}
