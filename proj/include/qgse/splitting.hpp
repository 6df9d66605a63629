#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "qgse/hamiltonian.hpp"
#include "qgse/sine_transform.hpp"
#include "qgse/spectral.hpp"

namespace qgse {

enum class SplitTarget : std::uint8_t { H1, H2 };

struct SplitFactor {
  SplitTarget target;
  double z;
};

/// Ordered product prod_l e^{i A_l z_l}, A_l in {H1, H2}, approximating
/// e^{i (H1 + H2) totalTime}. Symmetric (palindromic) with adjacent
/// same-target factors merged.
struct SplittingSchedule {
  int k = 1;               // order index; the formula has order 2k
  double total_time = 0.0;
  std::int64_t steps = 0;
  std::vector<SplitFactor> factors;

  std::int64_t h1_count() const;
  std::int64_t h2_count() const;
  double coefficient_sum(SplitTarget t) const;
};

/// Suzuki's fractal recursion over the Strang base step:
///   S_2(y)  = e^{iH1 y/2} e^{iH2 y} e^{iH1 y/2}
///   S_{2k}(y) = S_{2k-2}(p_k y)^2 S_{2k-2}((1-4p_k) y) S_{2k-2}(p_k y)^2
///   p_k = (4 - 4^{1/(2k-1)})^{-1}
/// The returned schedule is n repetitions of S_{2k}(totalTime/n), merged.
SplittingSchedule suzuki_schedule(int k, double total_time, std::int64_t steps);

double suzuki_p(int k);

/// Merged factors per step: 2*5^(k-1) + 1.
std::int64_t factors_per_step(int k);

/// Per-power error allowances eps_t = 2^(t+1-b)/40, t = 0..b-1; sum <= 1/20.
struct ErrorBudget {
  int b = 0;
  std::vector<double> epsilons;
  double total() const;
};
ErrorBudget error_budget(int b);

/// Closed-form bound on the number of exponentials needed to approximate
/// e^{i(H1+H2) 2^t} to error eps_t with the order-2k formula:
///   N_t <= 16 e ||H1|| 2^t (25/3)^(k-1) (8 e 2^t ||H2|| / eps_t)^(1/2k)
struct CostBound {
  double n_t = 0.0;          // the bound itself
  std::int64_t steps = 0;    // ceil(N_t / factors_per_step(k)), at least 1
  int k = 1;
  double total_time = 0.0;
  double eps = 0.0;
  double h1_norm = 0.0;
  double h2_norm = 0.0;
};
CostBound min_steps_for_error(int k, int t, double eps_t, double h1_norm, double h2_norm);

/// Total-N bound over t = 0..b-1 with the eps_t schedule:
///   N <= 16 e ||H1|| 2^b (25/3)^(k-1) (160 e 2^b ||H2||)^(1/2k)
double total_exponential_bound(int b, int k, double h1_norm, double h2_norm);

/// Real-valued optimal order parameter k* = sqrt(log_{25/3}(80 e 2^b / d) / 2)
/// and the integer k minimizing the total bound among {floor(k*), ceil(k*)}.
double optimal_k_real(int b, int d);
int optimal_k_int(int b, int d);

/// Applies a schedule to embedded register states. H2 factors are diagonal
/// phases e^{i v_g z/(2d)}; H1 factors are sine transform, diagonal phases
/// e^{i lambda_g z/(2d)}, sine transform. Phase tables are precomputed per
/// distinct coefficient, so application is read-only and thread-safe.
class SchedulePropagator {
 public:
  SchedulePropagator(const DiscretizedHamiltonian& H, const SplittingSchedule& sched);

  void apply(std::span<cplx> embedded, TransformWorkspace& ws) const;
  void apply_inverse(std::span<cplx> embedded, TransformWorkspace& ws) const;

  const SplittingSchedule& schedule() const { return sched_; }

 private:
  struct Step {
    bool is_h1;
    std::size_t table;
  };
  void run(std::span<cplx> embedded, TransformWorkspace& ws, bool inverse) const;

  GridSpec grid_;
  SplittingSchedule sched_;
  SineTransform dst_;
  std::vector<std::vector<cplx>> tables_;
  std::vector<Step> steps_;
};

/// Convenience wrapper: apply a schedule to one embedded state vector.
void apply_schedule(const DiscretizedHamiltonian& H, const SplittingSchedule& sched,
                    std::span<cplx> embedded);

/// Operator 2-norm of (schedule - exact propagator) on the grid subspace.
/// Exact dense SVD for m^d <= dense_cutoff, otherwise a seeded power-iteration
/// estimate on D*D (deterministic; a slight underestimate by construction).
double schedule_error_norm(const DiscretizedHamiltonian& H, const SplittingSchedule& sched,
                           const ExactPropagator& prop, std::int64_t dense_cutoff = 96,
                           int power_iters = 24, int restarts = 2);

/// Error measured against the same formula at `refine` times the step count,
/// for grids beyond the dense-oracle threshold. Underestimates the true error
/// by at most a factor 1/(1 - refine^-2k).
double schedule_error_norm_refined(const DiscretizedHamiltonian& H,
                                   const SplittingSchedule& sched, int refine = 4,
                                   int power_iters = 24, int restarts = 2);

/// Error of a candidate step count for e^{i(H1+H2)T}; backends above.
using ScheduleErrorMeasure = std::function<double(int k, double total_time, std::int64_t steps)>;
ScheduleErrorMeasure propagator_error_measure(const DiscretizedHamiltonian& H,
                                              const ExactPropagator& prop);
ScheduleErrorMeasure refined_error_measure(const DiscretizedHamiltonian& H);

/// Doubling search for a step count whose measured error is <= headroom*eps.
struct CalibratedSteps {
  std::int64_t steps = 1;
  double measured_error = 0.0;
};
CalibratedSteps calibrate_steps(const ScheduleErrorMeasure& measure, int k, double total_time,
                                double eps, double headroom = 0.5);
CalibratedSteps calibrate_steps(const DiscretizedHamiltonian& H, const ExactPropagator& prop,
                                int k, double total_time, double eps, double headroom = 0.5);

/// Minimal step count with measured error <= eps (doubling then bisection);
/// intended for dense-verifiable sizes.
CalibratedSteps min_steps_empirical(const ScheduleErrorMeasure& measure, int k,
                                    double total_time, double eps);
CalibratedSteps min_steps_empirical(const DiscretizedHamiltonian& H, const ExactPropagator& prop,
                                    int k, double total_time, double eps);

/// JSON export/import of schedules as ordered (target, z) lists, for
/// inspection and replay.
std::string schedule_to_json(const SplittingSchedule& sched);
SplittingSchedule schedule_from_json(const std::string& text);

}  // namespace qgse
