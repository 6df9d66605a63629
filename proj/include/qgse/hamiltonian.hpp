#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "qgse/grid.hpp"
#include "qgse/potential.hpp"

namespace qgse {

/// Finite-difference discretization M_h = -Lap_h + V_h on the interior grid,
/// split as H1 = -Lap_h/(2d), H2 = V_h/(2d) for the propagator factorization.
struct DiscretizedHamiltonian {
  GridSpec grid;
  std::vector<double> v;  // potential values at grid points (compact, row-major), truncated
  double norm_h1 = 0.0;   // largest eigenvalue of -Lap_h/(2d) = (2/h^2) sin^2(m pi h / 2)
  double norm_h2 = 0.0;   // max_i v_i / (2d)

  // spectral bounds of M_h from the known Laplacian spectrum
  double smallest_laplacian_eigenvalue() const;  // 4 d h^-2 sin^2(pi h / 2)
  double norm_bound() const;                     // 4 d h^-2 sin^2(m pi h / 2) + max v
};

DiscretizedHamiltonian discretize(const PotentialSpec& pot, const GridSpec& g,
                                  QueryConfig query = QueryConfig{});

/// Eigenvalue of the 1-D discretized Laplacian for mode k: 4 h^-2 sin^2(k pi h / 2).
double laplacian_axis_eigenvalue(const GridSpec& g, std::int64_t k);

/// Eigenpair of the d-dimensional discretized Laplacian for the multi-index k:
/// eigenvalue sum_j 4 h^-2 sin^2(k_j pi h / 2), eigenvector the tensor product of
/// sine vectors sqrt(2h) sin(j k pi h).
struct LaplacianEigenpair {
  double value = 0.0;
  std::vector<std::vector<double>> axis_vectors;  // one orthonormal sine vector per axis

  // materialized tensor-product eigenvector over compact indices
  std::vector<double> dense_vector() const;
};
LaplacianEigenpair laplacian_eigenpair(const GridSpec& g, std::span<const std::int64_t> k);

/// Ground eigenvector of the 1-D discretized Laplacian, coordinates sqrt(2h) sin(j pi h).
std::vector<double> sine_ground_axis(const GridSpec& g);

/// d-fold tensor power of the axis sine state (compact indices); unit norm.
std::vector<double> sine_ground_tensor(const GridSpec& g);

/// Dense assembly of M_h over compact indices (guarded by size).
Eigen::MatrixXd assemble_dense(const DiscretizedHamiltonian& H);

/// Matrix-free y = M_h x over compact indices.
void apply_mh(const DiscretizedHamiltonian& H, std::span<const double> x, std::span<double> y);

/// Laplacian eigenvalues indexed over embedded register states: entry for the
/// sine mode whose (k_j - 1) digits equal the register digits; unused states 0.
std::vector<double> laplacian_embedded_table(const GridSpec& g);

/// Potential values over embedded register states (zero on unused states).
std::vector<double> potential_embedded_table(const DiscretizedHamiltonian& H);

}  // namespace qgse
