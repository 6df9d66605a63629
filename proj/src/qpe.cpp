#include "qgse/qpe.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qgse/parallel.hpp"

namespace qgse {

namespace {
constexpr double kPi = std::numbers::pi;
}

void QpeConfig::validate() const {
  const int bb = clock_bits();
  if (bb < 1 || bb > 24) throw std::invalid_argument("QpeConfig: clock bits out of range");
  if (bb < grid.q)
    throw std::invalid_argument("QpeConfig: b must be >= q so the clock matches the mesh");
  if (potential.d != grid.d) throw std::invalid_argument("QpeConfig: potential dimension mismatch");
  const std::int64_t total = (std::int64_t(1) << bb) * grid.embedded_states();
  if (total > kMaxStateSize)
    throw std::length_error("QpeConfig: state of 2^b * (2^q)^d amplitudes exceeds the budget");
  if (mode == PropagatorMode::exact && grid.points() > kDenseThreshold)
    throw std::length_error("QpeConfig: exact mode needs the dense oracle (m^d <= 4096)");
  if (k < 0 || k > 8) throw std::invalid_argument("QpeConfig: k out of range");
}

double QpeState::norm() const {
  double s = 0.0;
  for (const cplx& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

std::span<cplx> QpeState::slice(std::int64_t x) {
  const std::int64_t G = grid_states();
  return {amplitudes.data() + x * G, static_cast<std::size_t>(G)};
}

QpeState prepare_initial_state(const QpeConfig& cfg) {
  cfg.validate();
  QpeState st;
  st.b = cfg.clock_bits();
  st.grid = cfg.grid;
  const std::int64_t G = st.grid_states();
  st.amplitudes.assign(static_cast<std::size_t>(st.clock_states() * G), cplx(0));

  const std::vector<double> psi = sine_ground_tensor(cfg.grid);
  for (std::int64_t i = 0; i < cfg.grid.points(); ++i)
    st.amplitudes[static_cast<std::size_t>(compact_to_embedded(cfg.grid, i))] =
        psi[static_cast<std::size_t>(i)];
  return st;
}

std::int64_t OutcomeDistribution::map_outcome() const {
  std::int64_t best = 0;
  for (std::int64_t j = 1; j < static_cast<std::int64_t>(p.size()); ++j)
    if (p[static_cast<std::size_t>(j)] > p[static_cast<std::size_t>(best)]) best = j;
  return best;
}

double OutcomeDistribution::success_mass(double phi) const {
  const double N = std::ldexp(1.0, b);
  double mass = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    double dist = std::abs(phi - static_cast<double>(j) / N);
    dist = std::min(dist, 1.0 - dist);  // phases wrap at [0,1)
    if (dist <= 1.0 / N + 1e-15) mass += p[j];
  }
  return mass;
}

OutcomeDistribution qpe_kernel(int b, std::int64_t G, std::span<const cplx> initial_grid,
                               const PowerApplier& apply_power, std::vector<double>* stage_norms) {
  if (static_cast<std::int64_t>(initial_grid.size()) != G)
    throw std::invalid_argument("qpe_kernel: initial grid state length mismatch");
  const std::int64_t N = std::int64_t(1) << b;
  std::vector<cplx> amps(static_cast<std::size_t>(N * G));

  auto record_norm = [&]() {
    if (!stage_norms) return;
    double s = 0.0;
    for (const cplx& a : amps) s += std::norm(a);
    stage_norms->push_back(std::sqrt(s));
  };

  // Hadamard layer on the clock register
  const double amp0 = 1.0 / std::sqrt(static_cast<double>(N));
  for (std::int64_t x = 0; x < N; ++x)
    for (std::int64_t g = 0; g < G; ++g)
      amps[static_cast<std::size_t>(x * G + g)] = amp0 * initial_grid[static_cast<std::size_t>(g)];
  record_norm();

  // controlled powers: slice x receives the t-th power iff bit t of x is set
  for (int t = 0; t < b; ++t) {
    parallel_for(N / 2, [&](std::int64_t idx) {
      // enumerate x with bit t set: insert a 1 at position t
      const std::int64_t low = idx & ((std::int64_t(1) << t) - 1);
      const std::int64_t high = idx >> t;
      const std::int64_t x = (high << (t + 1)) | (std::int64_t(1) << t) | low;
      TransformWorkspace ws;
      apply_power(t, {amps.data() + x * G, static_cast<std::size_t>(G)}, ws);
    });
    record_norm();
  }

  // inverse Fourier transform on the clock: out(j) = N^-1/2 sum_x e^{-2pi i jx/N} in(x),
  // computed as a radix-2 FFT whose elements are grid rows
  {
    std::vector<std::uint32_t> rev(static_cast<std::size_t>(N));
    std::uint32_t lg = 0;
    while ((std::int64_t(1) << lg) < N) ++lg;
    for (std::int64_t i = 0; i < N; ++i) {
      std::uint32_t r = 0;
      for (std::uint32_t bit = 0; bit < lg; ++bit)
        if (i & (std::int64_t(1) << bit)) r |= std::uint32_t(1) << (lg - 1 - bit);
      rev[static_cast<std::size_t>(i)] = r;
    }
    for (std::int64_t i = 0; i < N; ++i) {
      const std::int64_t r = rev[static_cast<std::size_t>(i)];
      if (i < r)
        for (std::int64_t g = 0; g < G; ++g)
          std::swap(amps[static_cast<std::size_t>(i * G + g)],
                    amps[static_cast<std::size_t>(r * G + g)]);
    }
    for (std::int64_t len = 2; len <= N; len <<= 1) {
      const std::int64_t half = len >> 1;
      for (std::int64_t start = 0; start < N; start += len) {
        for (std::int64_t j = 0; j < half; ++j) {
          const double ang = -2.0 * kPi * static_cast<double>(j) / static_cast<double>(len);
          const cplx w(std::cos(ang), std::sin(ang));
          cplx* rowa = amps.data() + (start + j) * G;
          cplx* rowb = amps.data() + (start + j + half) * G;
          for (std::int64_t g = 0; g < G; ++g) {
            const cplx u = rowa[g];
            const cplx v = rowb[g] * w;
            rowa[g] = u + v;
            rowb[g] = u - v;
          }
        }
      }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    for (cplx& a : amps) a *= scale;
  }
  record_norm();

  OutcomeDistribution dist;
  dist.b = b;
  dist.p.resize(static_cast<std::size_t>(N), 0.0);
  for (std::int64_t x = 0; x < N; ++x) {
    double s = 0.0;
    for (std::int64_t g = 0; g < G; ++g) s += std::norm(amps[static_cast<std::size_t>(x * G + g)]);
    dist.p[static_cast<std::size_t>(x)] = s;
  }
  return dist;
}

QpeRun run_qpe(const QpeConfig& cfg) {
  cfg.validate();
  const int b = cfg.clock_bits();
  const GridSpec& g = cfg.grid;
  const int d = g.d;

  QueryConfig query{cfg.query_bits > 0 ? cfg.query_bits : g.q + 4};
  const DiscretizedHamiltonian H = discretize(cfg.potential, g, query);

  // dense oracle where available; iterative eigenvalue + refined-splitting
  // error references past the threshold
  const bool dense_ok = g.points() <= kDenseThreshold;
  std::optional<ExactPropagator> prop;
  QpeRun run;
  if (dense_ok) {
    prop.emplace(H);
    run.oracle_e1 = prop->spectrum().values(0);
  } else {
    run.oracle_e1 = ground_state_iterative(H).e1;
  }
  run.phi1 = run.oracle_e1 / (4.0 * kPi * d);

  const int k = cfg.k > 0 ? cfg.k : optimal_k_int(b, d);
  run.cost.k_used = cfg.mode == PropagatorMode::splitting ? k : 0;
  run.cost.k_star = optimal_k_real(b, d);
  run.cost.qubits = b + d * g.q;
  run.cost.mode = cfg.mode == PropagatorMode::splitting ? "splitting" : "exact";

  const QpeState init = prepare_initial_state(cfg);
  std::span<const cplx> init_grid{init.amplitudes.data(),
                                  static_cast<std::size_t>(init.grid_states())};

  if (cfg.mode == PropagatorMode::exact) {
    // per-slice compact <-> embedded round trip around the dense propagator
    const std::int64_t n = g.points();
    std::vector<std::int64_t> map(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) map[static_cast<std::size_t>(i)] = compact_to_embedded(g, i);
    auto apply = [&](int t, std::span<cplx> slice, TransformWorkspace&) {
      std::vector<cplx> compact(static_cast<std::size_t>(n));
      for (std::int64_t i = 0; i < n; ++i)
        compact[static_cast<std::size_t>(i)] = slice[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])];
      prop->apply(std::ldexp(1.0, t), compact);
      for (std::int64_t i = 0; i < n; ++i)
        slice[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])] = compact[static_cast<std::size_t>(i)];
    };
    run.dist = qpe_kernel(b, g.embedded_states(), init_grid, apply, &run.stage_norms);
    run.cost.analytic_n = 0.0;
    return run;
  }

  // splitting mode: one schedule per power, each within its eps_t budget
  const ScheduleErrorMeasure measure =
      dense_ok ? propagator_error_measure(H, *prop) : refined_error_measure(H);
  const ErrorBudget budget = error_budget(b);
  std::vector<SchedulePropagator> propagators;
  propagators.reserve(static_cast<std::size_t>(b));
  for (int t = 0; t < b; ++t) {
    const double T = std::ldexp(1.0, t);
    const double eps_t = budget.epsilons[static_cast<std::size_t>(t)];
    std::int64_t steps = 0;
    double measured = 0.0;
    switch (cfg.step_policy) {
      case StepPolicy::calibrated: {
        const CalibratedSteps c = calibrate_steps(measure, k, T, eps_t, cfg.calibration_headroom);
        steps = c.steps;
        measured = c.measured_error;
        break;
      }
      case StepPolicy::empirical: {
        const CalibratedSteps c = min_steps_empirical(measure, k, T, eps_t);
        steps = c.steps;
        measured = c.measured_error;
        break;
      }
      case StepPolicy::analytic: {
        const CostBound bound = min_steps_for_error(k, t, eps_t, H.norm_h1, H.norm_h2);
        steps = bound.steps;
        measured = measure(k, T, steps);
        break;
      }
    }
    SplittingSchedule sched = suzuki_schedule(k, T, steps);
    run.power_errors.push_back({t, steps, measured, eps_t});
    run.cost.per_power.push_back({t, sched.h1_count(), sched.h2_count(), steps});
    propagators.emplace_back(H, sched);
  }
  for (const auto& pc : run.cost.per_power) {
    run.cost.h1_total += pc.h1;
    run.cost.h2_total += pc.h2;
  }
  run.cost.queries = 2 * run.cost.h2_total;
  run.cost.analytic_n = total_exponential_bound(b, k, H.norm_h1, H.norm_h2);
  run.cost.analytic_n_class = total_exponential_bound(b, k, H.norm_h1, 1.0 / (2.0 * d));
  // abstract operation model: initial state + inverse transform + each H1 factor
  run.cost.other_ops = static_cast<double>(run.cost.h1_total + 2) * d *
                       static_cast<double>(b) * static_cast<double>(b);

  auto apply = [&](int t, std::span<cplx> slice, TransformWorkspace& ws) {
    propagators[static_cast<std::size_t>(t)].apply(slice, ws);
  };
  run.dist = qpe_kernel(b, g.embedded_states(), init_grid, apply, &run.stage_norms);
  return run;
}

EnergyEstimate estimate_energy(const OutcomeDistribution& dist, const QpeConfig& cfg,
                               std::optional<double> oracle_phi, double reference_e1) {
  EnergyEstimate est;
  est.j = dist.map_outcome();
  est.e_hat = 4.0 * kPi * cfg.grid.d * static_cast<double>(est.j) *
              std::ldexp(1.0, -dist.b);
  est.reference_e1 = reference_e1;
  if (oracle_phi) est.success_probability = dist.success_mass(*oracle_phi);
  return est;
}

double exact_mode_threshold() {
  const double sep = 3.0 * kPi * kPi - 2.0;
  return 8.0 / (kPi * kPi) * (1.0 - 1.0 / (sep * sep));
}

double splitting_mode_threshold() { return 2.0 / 3.0; }

SuccessReport success_report(const OutcomeDistribution& dist, double oracle_e1,
                             const QpeConfig& cfg) {
  SuccessReport rep;
  rep.phi1 = oracle_e1 / (4.0 * kPi * cfg.grid.d);
  rep.success_mass = dist.success_mass(rep.phi1);
  const bool splitting = cfg.mode == PropagatorMode::splitting;
  rep.mode = splitting ? "splitting" : "exact";
  rep.threshold = splitting ? splitting_mode_threshold() : exact_mode_threshold();
  rep.pass = rep.success_mass >= rep.threshold;
  return rep;
}

}  // namespace qgse
