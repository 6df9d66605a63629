#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qgse {

/// Uniform interior grid on (0,1)^d with Dirichlet boundary.
/// Each axis has m = 2^q - 1 interior points at x = j*h, j = 1..m,
/// with mesh width h = 1/(m+1) = 2^-q, so every axis fits a q-qubit
/// register with one unused basis state.
struct GridSpec {
  int d = 1;            // number of state variables
  int q = 1;            // qubits per axis
  std::int64_t m = 1;   // interior points per axis, 2^q - 1
  double h = 0.5;       // mesh width, 1/(m+1)

  std::int64_t points() const;          // m^d
  std::int64_t axis_states() const { return m + 1; }  // 2^q
  std::int64_t embedded_states() const; // (2^q)^d
};

// Largest m^d accepted by build_grid.
inline constexpr std::int64_t kMaxGridPoints = std::int64_t(1) << 22;

GridSpec build_grid(int d, int q);

// Compact index <-> embedded index. Compact indices run over the m^d
// interior points in row-major order (axis 0 major); embedded indices run
// over (2^q)^d register states, grid point j on an axis at register state
// j-1, register state 2^q - 1 unused.
std::int64_t compact_to_embedded(const GridSpec& g, std::int64_t ci);

// Coordinates of a compact index, 1-based multi-index (j_1,...,j_d).
void compact_multi_index(const GridSpec& g, std::int64_t ci, std::span<std::int64_t> out);

// Physical coordinates j*h of a compact index.
void grid_point(const GridSpec& g, std::int64_t ci, std::span<double> out);

// Scatter a compact vector into the embedded register space (zeros elsewhere).
template <typename T>
std::vector<T> embed(const GridSpec& g, std::span<const T> compact) {
  std::vector<T> out(static_cast<std::size_t>(g.embedded_states()), T{});
  for (std::int64_t i = 0; i < g.points(); ++i)
    out[static_cast<std::size_t>(compact_to_embedded(g, i))] = compact[static_cast<std::size_t>(i)];
  return out;
}

template <typename T>
std::vector<T> restrict_embedded(const GridSpec& g, std::span<const T> embedded) {
  std::vector<T> out(static_cast<std::size_t>(g.points()));
  for (std::int64_t i = 0; i < g.points(); ++i)
    out[static_cast<std::size_t>(i)] = embedded[static_cast<std::size_t>(compact_to_embedded(g, i))];
  return out;
}

}  // namespace qgse
