#include "qgse/splitting.hpp"

#include <json.hpp>

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

namespace qgse {

namespace {

constexpr double kE = std::numbers::e;

void append_merged(std::vector<SplitFactor>& out, SplitTarget t, double z) {
  if (!out.empty() && out.back().target == t)
    out.back().z += z;
  else
    out.push_back({t, z});
}

void build_suzuki(int k, double y, std::vector<SplitFactor>& out) {
  if (k == 1) {
    append_merged(out, SplitTarget::H1, y / 2.0);
    append_merged(out, SplitTarget::H2, y);
    append_merged(out, SplitTarget::H1, y / 2.0);
    return;
  }
  const double p = suzuki_p(k);
  build_suzuki(k - 1, p * y, out);
  build_suzuki(k - 1, p * y, out);
  build_suzuki(k - 1, (1.0 - 4.0 * p) * y, out);
  build_suzuki(k - 1, p * y, out);
  build_suzuki(k - 1, p * y, out);
}

}  // namespace

double suzuki_p(int k) {
  if (k < 2) throw std::invalid_argument("suzuki_p: defined for k >= 2");
  return 1.0 / (4.0 - std::pow(4.0, 1.0 / (2.0 * k - 1.0)));
}

std::int64_t factors_per_step(int k) {
  std::int64_t f = 2;
  for (int i = 1; i < k; ++i) f *= 5;
  return f + 1;
}

std::int64_t SplittingSchedule::h1_count() const {
  std::int64_t c = 0;
  for (const auto& f : factors) c += f.target == SplitTarget::H1;
  return c;
}

std::int64_t SplittingSchedule::h2_count() const {
  std::int64_t c = 0;
  for (const auto& f : factors) c += f.target == SplitTarget::H2;
  return c;
}

double SplittingSchedule::coefficient_sum(SplitTarget t) const {
  double s = 0.0;
  for (const auto& f : factors)
    if (f.target == t) s += f.z;
  return s;
}

SplittingSchedule suzuki_schedule(int k, double total_time, std::int64_t steps) {
  if (k < 1) throw std::invalid_argument("suzuki_schedule: k must be >= 1");
  if (steps < 1) throw std::invalid_argument("suzuki_schedule: steps must be >= 1");
  SplittingSchedule sched;
  sched.k = k;
  sched.total_time = total_time;
  sched.steps = steps;

  std::vector<SplitFactor> base;
  build_suzuki(k, total_time / static_cast<double>(steps), base);
  sched.factors.reserve(static_cast<std::size_t>(
      (factors_per_step(k) - 1) * steps + 1));
  for (std::int64_t s = 0; s < steps; ++s)
    for (const auto& f : base) append_merged(sched.factors, f.target, f.z);
  return sched;
}

ErrorBudget error_budget(int b) {
  if (b < 1) throw std::invalid_argument("error_budget: b must be >= 1");
  ErrorBudget budget;
  budget.b = b;
  budget.epsilons.resize(static_cast<std::size_t>(b));
  for (int t = 0; t < b; ++t)
    budget.epsilons[static_cast<std::size_t>(t)] = std::ldexp(1.0, t + 1 - b) / 40.0;
  return budget;
}

double ErrorBudget::total() const {
  double s = 0.0;
  for (double e : epsilons) s += e;
  return s;
}

CostBound min_steps_for_error(int k, int t, double eps_t, double h1_norm, double h2_norm) {
  if (k < 1 || t < 0 || eps_t <= 0.0 || h1_norm < 0.0 || h2_norm < 0.0)
    throw std::invalid_argument("min_steps_for_error: bad parameters");
  const double T = std::ldexp(1.0, t);
  CostBound bound;
  bound.k = k;
  bound.total_time = T;
  bound.eps = eps_t;
  bound.h1_norm = h1_norm;
  bound.h2_norm = h2_norm;
  bound.n_t = 16.0 * kE * h1_norm * T * std::pow(25.0 / 3.0, k - 1) *
              std::pow(8.0 * kE * T * h2_norm / eps_t, 1.0 / (2.0 * k));
  bound.steps = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(bound.n_t / static_cast<double>(factors_per_step(k)))));
  return bound;
}

double total_exponential_bound(int b, int k, double h1_norm, double h2_norm) {
  if (b < 1 || k < 1) throw std::invalid_argument("total_exponential_bound: bad parameters");
  const double B = std::ldexp(1.0, b);
  return 16.0 * kE * h1_norm * B * std::pow(25.0 / 3.0, k - 1) *
         std::pow(160.0 * kE * B * h2_norm, 1.0 / (2.0 * k));
}

double optimal_k_real(int b, int d) {
  const double arg = 80.0 * kE * std::ldexp(1.0, b) / static_cast<double>(d);
  if (arg <= 1.0) throw std::domain_error("optimal_k_real: 80 e 2^b / d must exceed 1");
  return std::sqrt(0.5 * std::log(arg) / std::log(25.0 / 3.0));
}

int optimal_k_int(int b, int d) {
  const double ks = optimal_k_real(b, d);
  const int lo = std::max(1, static_cast<int>(std::floor(ks)));
  const int hi = std::max(lo, static_cast<int>(std::ceil(ks)));
  const double h2 = 1.0 / (2.0 * d);  // the class-wide bound used for order selection
  const double f_lo = total_exponential_bound(b, lo, 1.0, h2);
  const double f_hi = total_exponential_bound(b, hi, 1.0, h2);
  return f_lo <= f_hi ? lo : hi;
}

SchedulePropagator::SchedulePropagator(const DiscretizedHamiltonian& H,
                                       const SplittingSchedule& sched)
    : grid_(H.grid), sched_(sched), dst_(H.grid) {
  const std::vector<double> lam = laplacian_embedded_table(grid_);
  const std::vector<double> pot = potential_embedded_table(H);
  const double two_d = 2.0 * grid_.d;
  const std::size_t G = static_cast<std::size_t>(grid_.embedded_states());

  // one phase table per distinct (target, z); schedules repeat coefficients
  std::unordered_map<std::uint64_t, std::size_t> index[2];
  std::vector<std::size_t> slots;
  slots.reserve(sched_.factors.size());
  std::vector<std::pair<bool, double>> pending;  // (is_h1, z) per table
  for (const auto& f : sched_.factors) {
    const bool is_h1 = f.target == SplitTarget::H1;
    auto& idx = index[is_h1 ? 0 : 1];
    const std::uint64_t key = std::bit_cast<std::uint64_t>(f.z);
    auto [it, fresh] = idx.try_emplace(key, pending.size());
    if (fresh) pending.emplace_back(is_h1, f.z);
    slots.push_back(it->second);
  }
  tables_.resize(pending.size());
  for (std::size_t s = 0; s < pending.size(); ++s) {
    const auto [is_h1, z] = pending[s];
    const std::vector<double>& diag = is_h1 ? lam : pot;
    tables_[s].resize(G);
    for (std::size_t g = 0; g < G; ++g) {
      const double ang = z * diag[g] / two_d;
      tables_[s][g] = {std::cos(ang), std::sin(ang)};
    }
  }
  steps_.reserve(sched_.factors.size());
  for (std::size_t i = 0; i < sched_.factors.size(); ++i)
    steps_.push_back({sched_.factors[i].target == SplitTarget::H1, slots[i]});
}

void SchedulePropagator::run(std::span<cplx> embedded, TransformWorkspace& ws,
                             bool inverse) const {
  const std::size_t G = static_cast<std::size_t>(grid_.embedded_states());
  if (embedded.size() != G) throw std::invalid_argument("SchedulePropagator: length mismatch");
  cplx* s = embedded.data();
  const std::size_t n = steps_.size();
  for (std::size_t pos = 0; pos < n; ++pos) {
    const Step& st = steps_[inverse ? n - 1 - pos : pos];
    const cplx* tab = tables_[st.table].data();
    if (st.is_h1) {
      dst_.apply_all_axes(s, ws);
      if (inverse)
        for (std::size_t g = 0; g < G; ++g) s[g] *= std::conj(tab[g]);
      else
        for (std::size_t g = 0; g < G; ++g) s[g] *= tab[g];
      dst_.apply_all_axes(s, ws);
    } else {
      if (inverse)
        for (std::size_t g = 0; g < G; ++g) s[g] *= std::conj(tab[g]);
      else
        for (std::size_t g = 0; g < G; ++g) s[g] *= tab[g];
    }
  }
}

void SchedulePropagator::apply(std::span<cplx> embedded, TransformWorkspace& ws) const {
  run(embedded, ws, false);
}

void SchedulePropagator::apply_inverse(std::span<cplx> embedded, TransformWorkspace& ws) const {
  run(embedded, ws, true);
}

void apply_schedule(const DiscretizedHamiltonian& H, const SplittingSchedule& sched,
                    std::span<cplx> embedded) {
  SchedulePropagator prop(H, sched);
  TransformWorkspace ws;
  prop.apply(embedded, ws);
}

namespace {

// out = (A - B) x in compact coordinates, where each operator is an applier
// on compact complex vectors
using CompactApplier = std::function<void(bool adjoint, Eigen::VectorXcd&)>;

void apply_operator_difference(bool adjoint, const CompactApplier& A, const CompactApplier& B,
                               const Eigen::VectorXcd& x, Eigen::VectorXcd& out) {
  out = x;
  A(adjoint, out);
  Eigen::VectorXcd bx = x;
  B(adjoint, bx);
  out -= bx;
}

// largest singular value of (A - B): dense SVD when n <= dense_cutoff, else
// deterministic seeded power iteration on D*D (underestimates slightly)
double operator_difference_norm(std::int64_t n, const CompactApplier& A, const CompactApplier& B,
                                std::int64_t dense_cutoff, int power_iters, int restarts) {
  if (n <= dense_cutoff) {
    Eigen::MatrixXcd D(n, n);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n), col;
    for (std::int64_t j = 0; j < n; ++j) {
      e.setZero();
      e(j) = 1.0;
      apply_operator_difference(false, A, B, e, col);
      D.col(j) = col;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(D);
    return svd.singularValues()(0);
  }

  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(0x51e9d3a7ull + static_cast<std::uint64_t>(r) * 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd x(n), Dx, y;
    for (std::int64_t i = 0; i < n; ++i) x(i) = cplx(gauss(rng), gauss(rng));
    x.normalize();
    double sigma = 0.0;
    for (int it = 0; it < power_iters; ++it) {
      apply_operator_difference(false, A, B, x, Dx);
      sigma = Dx.norm();
      if (sigma < 1e-13) break;  // numerically zero difference
      apply_operator_difference(true, A, B, Dx, y);
      x = y.normalized();
    }
    best = std::max(best, sigma);
  }
  return best;
}

CompactApplier schedule_applier(const GridSpec& g, const SchedulePropagator& S) {
  auto emb = std::make_shared<std::vector<cplx>>(static_cast<std::size_t>(g.embedded_states()));
  auto ws = std::make_shared<TransformWorkspace>();
  return [&g, &S, emb, ws](bool adjoint, Eigen::VectorXcd& x) {
    const std::int64_t n = g.points();
    std::fill(emb->begin(), emb->end(), cplx(0));
    for (std::int64_t i = 0; i < n; ++i)
      (*emb)[static_cast<std::size_t>(compact_to_embedded(g, i))] = x(i);
    if (adjoint)
      S.apply_inverse(*emb, *ws);
    else
      S.apply(*emb, *ws);
    for (std::int64_t i = 0; i < n; ++i)
      x(i) = (*emb)[static_cast<std::size_t>(compact_to_embedded(g, i))];
  };
}

}  // namespace

double schedule_error_norm(const DiscretizedHamiltonian& H, const SplittingSchedule& sched,
                           const ExactPropagator& prop, std::int64_t dense_cutoff,
                           int power_iters, int restarts) {
  const GridSpec& g = H.grid;
  const SchedulePropagator S(H, sched);
  const double T = sched.total_time;
  const CompactApplier exact = [&prop, T](bool adjoint, Eigen::VectorXcd& x) {
    prop.apply(adjoint ? -T : T, {x.data(), static_cast<std::size_t>(x.size())});
  };
  return operator_difference_norm(g.points(), schedule_applier(g, S), exact, dense_cutoff,
                                  power_iters, restarts);
}

double schedule_error_norm_refined(const DiscretizedHamiltonian& H,
                                   const SplittingSchedule& sched, int refine, int power_iters,
                                   int restarts) {
  if (refine < 2) throw std::invalid_argument("schedule_error_norm_refined: refine must be >= 2");
  const GridSpec& g = H.grid;
  const SchedulePropagator S(H, sched);
  const SplittingSchedule fine =
      suzuki_schedule(sched.k, sched.total_time, sched.steps * refine);
  const SchedulePropagator F(H, fine);
  // dense_cutoff 0: this path exists for grids past the dense oracle
  return operator_difference_norm(g.points(), schedule_applier(g, S), schedule_applier(g, F), 0,
                                  power_iters, restarts);
}

ScheduleErrorMeasure propagator_error_measure(const DiscretizedHamiltonian& H,
                                              const ExactPropagator& prop) {
  return [&H, &prop](int k, double total_time, std::int64_t steps) {
    return schedule_error_norm(H, suzuki_schedule(k, total_time, steps), prop);
  };
}

ScheduleErrorMeasure refined_error_measure(const DiscretizedHamiltonian& H) {
  return [&H](int k, double total_time, std::int64_t steps) {
    return schedule_error_norm_refined(H, suzuki_schedule(k, total_time, steps));
  };
}

CalibratedSteps calibrate_steps(const ScheduleErrorMeasure& measure, int k, double total_time,
                                double eps, double headroom) {
  const double target = headroom * eps;
  std::int64_t n = 1;
  for (;;) {
    const double err = measure(k, total_time, n);
    if (err <= target) return {n, err};
    if (n > (std::int64_t(1) << 24))
      throw std::runtime_error("calibrate_steps: step count exploded");
    n *= 2;
  }
}

CalibratedSteps calibrate_steps(const DiscretizedHamiltonian& H, const ExactPropagator& prop,
                                int k, double total_time, double eps, double headroom) {
  return calibrate_steps(propagator_error_measure(H, prop), k, total_time, eps, headroom);
}

std::string schedule_to_json(const SplittingSchedule& sched) {
  nlohmann::json j;
  j["k"] = sched.k;
  j["total_time"] = sched.total_time;
  j["steps"] = sched.steps;
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& f : sched.factors)
    factors.push_back({{"target", f.target == SplitTarget::H1 ? "H1" : "H2"}, {"z", f.z}});
  j["factors"] = factors;
  return j.dump(2);
}

SplittingSchedule schedule_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  SplittingSchedule sched;
  sched.k = j.at("k").get<int>();
  sched.total_time = j.at("total_time").get<double>();
  sched.steps = j.at("steps").get<std::int64_t>();
  for (const auto& f : j.at("factors")) {
    const std::string target = f.at("target").get<std::string>();
    if (target != "H1" && target != "H2")
      throw std::invalid_argument("schedule_from_json: bad target " + target);
    sched.factors.push_back({target == "H1" ? SplitTarget::H1 : SplitTarget::H2,
                             f.at("z").get<double>()});
  }
  return sched;
}

CalibratedSteps min_steps_empirical(const ScheduleErrorMeasure& measure, int k,
                                    double total_time, double eps) {
  auto err_at = [&](std::int64_t n) { return measure(k, total_time, n); };
  std::int64_t hi = 1;
  double err_hi = err_at(hi);
  while (err_hi > eps) {
    if (hi > (std::int64_t(1) << 24))
      throw std::runtime_error("min_steps_empirical: step count exploded");
    hi *= 2;
    err_hi = err_at(hi);
  }
  std::int64_t lo = hi / 2;  // lo fails (or hi == 1)
  while (hi - lo > 1 && lo >= 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    const double e = err_at(mid);
    if (e <= eps) {
      hi = mid;
      err_hi = e;
    } else {
      lo = mid;
    }
  }
  return {hi, err_hi};
}

CalibratedSteps min_steps_empirical(const DiscretizedHamiltonian& H, const ExactPropagator& prop,
                                    int k, double total_time, double eps) {
  return min_steps_empirical(propagator_error_measure(H, prop), k, total_time, eps);
}

}  // namespace qgse
