#include "qgse/sine_transform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgse {

namespace {
constexpr double kPi = std::numbers::pi;
}

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("Fft: size must be a power of two");
  rev_.resize(n);
  std::uint32_t lg = 0;
  while ((std::size_t(1) << lg) < n) ++lg;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t r = 0;
    for (std::uint32_t b = 0; b < lg; ++b)
      if (i & (std::size_t(1) << b)) r |= std::uint32_t(1) << (lg - 1 - b);
    rev_[i] = r;
  }
  twiddle_.resize(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double ang = -2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    twiddle_[j] = {std::cos(ang), std::sin(ang)};
  }
}

void Fft::forward(cplx* data) const {
  for (std::size_t i = 0; i < n_; ++i)
    if (i < rev_[i]) std::swap(data[i], data[rev_[i]]);
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t twstep = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const cplx w = twiddle_[j * twstep];
        const cplx u = data[start + j];
        const cplx t = data[start + j + half] * w;
        data[start + j] = u + t;
        data[start + j + half] = u - t;
      }
    }
  }
}

void Fft::inverse(cplx* data) const {
  for (std::size_t i = 0; i < n_; ++i) data[i] = std::conj(data[i]);
  forward(data);
  const double inv = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) data[i] = std::conj(data[i]) * inv;
}

SineTransform::SineTransform(const GridSpec& g)
    : grid_(g), fft_(static_cast<std::size_t>(2 * (g.m + 1))) {
  scale_ = 1.0 / std::sqrt(static_cast<double>(2 * (g.m + 1)));
}

void SineTransform::apply_axis(cplx* data, int axis, TransformWorkspace& ws) const {
  const std::int64_t M = grid_.m + 1;
  const std::int64_t m = grid_.m;
  const std::size_t ext = static_cast<std::size_t>(2 * M);
  if (ws.fiber.size() < ext) ws.fiber.resize(ext);
  cplx* y = ws.fiber.data();

  // axis strides in the embedded base-M layout, axis 0 major
  std::int64_t stride = 1;
  for (int a = axis + 1; a < grid_.d; ++a) stride *= M;
  std::int64_t outer = 1;
  for (int a = 0; a < axis; ++a) outer *= M;
  const std::int64_t block = stride * M;

  for (std::int64_t o = 0; o < outer; ++o) {
    cplx* base = data + o * block;
    for (std::int64_t inner = 0; inner < stride; ++inner) {
      cplx* fiber = base + inner;
      // odd extension: y[0] = y[M] = 0, y[j] = x_j, y[2M-j] = -x_j
      y[0] = cplx(0.0, 0.0);
      y[static_cast<std::size_t>(M)] = cplx(0.0, 0.0);
      for (std::int64_t j = 1; j <= m; ++j) {
        const cplx xv = fiber[(j - 1) * stride];
        y[static_cast<std::size_t>(j)] = xv;
        y[static_cast<std::size_t>(2 * M - j)] = -xv;
      }
      fft_.forward(y);
      // c_k = i Y[k] / sqrt(2M), k = 1..m
      for (std::int64_t k = 1; k <= m; ++k) {
        const cplx Yk = y[static_cast<std::size_t>(k)];
        fiber[(k - 1) * stride] = cplx(-Yk.imag(), Yk.real()) * scale_;
      }
    }
  }
}

void SineTransform::apply_all_axes(cplx* data, TransformWorkspace& ws) const {
  for (int a = 0; a < grid_.d; ++a) apply_axis(data, a, ws);
}

}  // namespace qgse
