#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgse/hamiltonian.hpp"

namespace qgse {

// Largest m^d handled by the dense eigensolver path (also the bound for exact
// propagators and overlap spectra).
inline constexpr std::int64_t kDenseThreshold = 4096;

/// Smallest eigenpair of M_h with the residual actually achieved.
struct SpectralResult {
  double e1 = 0.0;
  Eigen::VectorXd z1;      // unit norm, largest-magnitude entry positive
  std::string method;      // "dense" | "iterative"
  double residual = 0.0;   // ||M z - e z||
};

/// Full dense eigendecomposition of M_h (ascending eigenvalues).
struct DenseSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

DenseSpectrum dense_spectrum(const DiscretizedHamiltonian& H);

SpectralResult ground_state(const DiscretizedHamiltonian& H);

/// Forced iterative path (inverse iteration with CG inner solves); used above
/// the dense threshold and for cross-checks below it.
SpectralResult ground_state_iterative(const DiscretizedHamiltonian& H, int max_outer = 64);

/// Smallest eigenvalue only (dense eigenvalues-only up to 8192, else iterative).
double ground_energy_only(const DiscretizedHamiltonian& H);

/// Coefficients d_k = <z_{h,k} | psi_1^{(x) d}> for the lowest `count` eigenvectors.
struct OverlapSpectrum {
  std::vector<double> coefficients;
  double d1_squared = 0.0;
  double mass() const;  // sum of squares
};
OverlapSpectrum overlap_spectrum(const DiscretizedHamiltonian& H, int count = 16);
OverlapSpectrum overlap_spectrum(const DiscretizedHamiltonian& H, const DenseSpectrum& spec,
                                 int count = 16);

/// e^{i t M_h/(2d)} via the dense eigendecomposition; exact propagator oracle.
class ExactPropagator {
 public:
  ExactPropagator(const DiscretizedHamiltonian& H, const DenseSpectrum& spec);
  explicit ExactPropagator(const DiscretizedHamiltonian& H);

  // compact state of length m^d
  void apply(double t, std::span<std::complex<double>> state) const;
  const DenseSpectrum& spectrum() const { return spec_; }

 private:
  DenseSpectrum spec_;
  double two_d_;
};

/// Discrete first-order perturbation identity:
/// E1(V) - [E1(Vbar) + sum_i (v_i - vbar_i) z_i(Vbar)^2], which is
/// O(||V - Vbar||_inf^2).
struct PerturbationReport {
  double e1_v = 0.0;
  double e1_vbar = 0.0;
  double first_order = 0.0;   // sum_i (v_i - vbar_i) z_i^2
  double residual = 0.0;      // e1_v - e1_vbar - first_order
  double delta_inf = 0.0;     // ||v - vbar||_inf
};
PerturbationReport perturbation_check(const PotentialSpec& V, const PotentialSpec& Vbar,
                                      const GridSpec& g);

}  // namespace qgse
