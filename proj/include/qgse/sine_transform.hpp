#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qgse/grid.hpp"

namespace qgse {

using cplx = std::complex<double>;

/// Radix-2 complex FFT, forward convention X[k] = sum_j x[j] e^{-2 pi i jk/n}.
class Fft {
 public:
  explicit Fft(std::size_t n);
  std::size_t size() const { return n_; }
  void forward(cplx* data) const;
  void inverse(cplx* data) const;  // includes the 1/n factor

 private:
  std::size_t n_ = 1;
  std::vector<std::uint32_t> rev_;
  std::vector<cplx> twiddle_;  // e^{-2 pi i j / n}, j < n/2
};

/// Per-call scratch for transforms; one per thread.
struct TransformWorkspace {
  std::vector<cplx> fiber;
};

/// Orthonormal type-I discrete sine transform applied per axis of the embedded
/// register space (axis size 2^q, grid point j at register state j-1, last
/// state untouched). The transform matrix sqrt(2h) sin(j k pi h) is symmetric
/// orthogonal, so it is its own inverse.
class SineTransform {
 public:
  explicit SineTransform(const GridSpec& g);

  const GridSpec& grid() const { return grid_; }

  // data has length grid.embedded_states()
  void apply_axis(cplx* data, int axis, TransformWorkspace& ws) const;
  void apply_all_axes(cplx* data, TransformWorkspace& ws) const;

 private:
  GridSpec grid_;
  Fft fft_;        // size 2(m+1)
  double scale_;   // 1/sqrt(2(m+1)) applied with the odd-extension trick
};

}  // namespace qgse
