#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qgse/cost.hpp"
#include "qgse/potential.hpp"
#include "qgse/splitting.hpp"
#include "qgse/spectral.hpp"

namespace qgse {

enum class PropagatorMode { exact, splitting };
enum class StepPolicy { calibrated, empirical, analytic };

/// Phase estimation setup. b clock bits resolve the phase
/// phi_1 = E_{h,1}/(4 pi d) to |phi_1 - j 2^-b| <= 2^-b; the standard choice is
/// b = ceil(log2 h^-1) = q, and b >= q is required so the clock at least
/// matches the mesh resolution.
struct QpeConfig {
  GridSpec grid;
  PotentialSpec potential;
  int b = 0;                 // 0 = default b = q
  PropagatorMode mode = PropagatorMode::exact;
  int k = 0;                 // 0 = integer-optimal k* for (b, d)
  StepPolicy step_policy = StepPolicy::calibrated;
  int query_bits = 0;        // 0 = default q + 4
  double calibration_headroom = 0.5;

  int clock_bits() const { return b > 0 ? b : grid.q; }
  void validate() const;
};

// Budget for 2^b * (2^q)^d amplitudes.
inline constexpr std::int64_t kMaxStateSize = std::int64_t(1) << 26;

/// Unit-norm amplitudes over (clock x, grid g), clock-major, grid embedded.
struct QpeState {
  int b = 0;
  GridSpec grid;
  std::vector<cplx> amplitudes;  // length 2^b * (2^q)^d

  std::int64_t clock_states() const { return std::int64_t(1) << b; }
  std::int64_t grid_states() const { return grid.embedded_states(); }
  double norm() const;
  std::span<cplx> slice(std::int64_t x);
};

/// |0...0> clock tensor the sine ground state psi_1^{(x) d} on the grid register.
QpeState prepare_initial_state(const QpeConfig& cfg);

struct OutcomeDistribution {
  int b = 0;
  std::vector<double> p;

  std::int64_t map_outcome() const;  // argmax, ties to the smaller index
  // mass on { j : circular distance(phi, j 2^-b) <= 2^-b }
  double success_mass(double phi) const;
};

struct EnergyEstimate {
  std::int64_t j = 0;
  double e_hat = 0.0;              // 4 pi d j 2^-b
  double success_probability = -1.0;  // mass on the success set, when phi known
  double reference_e1 = 0.0;
};

struct PowerError {
  int t = 0;
  std::int64_t steps = 0;
  double measured = 0.0;
  double budget = 0.0;
};

struct QpeRun {
  OutcomeDistribution dist;
  CostReport cost;
  std::vector<PowerError> power_errors;  // splitting mode only
  std::vector<double> stage_norms;       // after each pipeline stage
  double oracle_e1 = 0.0;                // E_{h,1} from the spectral oracle
  double phi1 = 0.0;
};

/// Full pipeline: Hadamard layer, controlled powers of W = e^{i M_h/(2d)}
/// (exact or splitting approximations within the eps_t budget), inverse
/// Fourier transform on the clock, exact measurement distribution.
QpeRun run_qpe(const QpeConfig& cfg);

/// Pipeline over a caller-supplied controlled power: apply_power(t, slice, ws)
/// must effect the t-th power unitary on one grid slice. Used by run_qpe and
/// by tests that drive synthetic unitaries.
using PowerApplier = std::function<void(int t, std::span<cplx> slice, TransformWorkspace& ws)>;
OutcomeDistribution qpe_kernel(int b, std::int64_t grid_states,
                               std::span<const cplx> initial_grid, const PowerApplier& apply_power,
                               std::vector<double>* stage_norms = nullptr);

EnergyEstimate estimate_energy(const OutcomeDistribution& dist, const QpeConfig& cfg,
                               std::optional<double> oracle_phi = std::nullopt,
                               double reference_e1 = 0.0);

/// Threshold check per mode: exact-propagator runs must reach
/// 8/pi^2 (1 - (3 pi^2 - 2)^-2) ~ 0.8095; splitting runs within budget 2/3.
struct SuccessReport {
  double success_mass = 0.0;
  double threshold = 0.0;
  bool pass = false;
  double phi1 = 0.0;
  std::string mode;
};
SuccessReport success_report(const OutcomeDistribution& dist, double oracle_e1,
                             const QpeConfig& cfg);

double exact_mode_threshold();     // 8/pi^2 (1 - (3 pi^2 - 2)^-2)
double splitting_mode_threshold(); // 2/3

}  // namespace qgse
