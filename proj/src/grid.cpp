#include "qgse/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qgse {

std::int64_t GridSpec::points() const {
  std::int64_t n = 1;
  for (int a = 0; a < d; ++a) n *= m;
  return n;
}

std::int64_t GridSpec::embedded_states() const {
  std::int64_t n = 1;
  for (int a = 0; a < d; ++a) n *= (m + 1);
  return n;
}

GridSpec build_grid(int d, int q) {
  if (d < 1) throw std::invalid_argument("build_grid: d must be >= 1");
  if (q < 1 || q > 62) throw std::invalid_argument("build_grid: q must be in [1,62]");
  GridSpec g;
  g.d = d;
  g.q = q;
  g.m = (std::int64_t(1) << q) - 1;
  g.h = std::ldexp(1.0, -q);
  // overflow-safe budget check on m^d
  long double n = 1.0L;
  for (int a = 0; a < d; ++a) {
    n *= static_cast<long double>(g.m);
    if (n > static_cast<long double>(kMaxGridPoints))
      throw std::length_error("build_grid: m^d = (2^" + std::to_string(q) + "-1)^" +
                              std::to_string(d) + " exceeds the simulation budget");
  }
  return g;
}

std::int64_t compact_to_embedded(const GridSpec& g, std::int64_t ci) {
  std::int64_t out = 0;
  std::int64_t M = g.m + 1;
  // decode row-major coordinates (axis 0 major) and re-encode base M
  std::int64_t stride = 1;
  for (int a = 1; a < g.d; ++a) stride *= g.m;
  std::int64_t estride = 1;
  for (int a = 1; a < g.d; ++a) estride *= M;
  for (int a = 0; a < g.d; ++a) {
    std::int64_t c = ci / stride;
    ci %= stride;
    out += c * estride;
    if (a + 1 < g.d) {
      stride /= g.m;
      estride /= M;
    }
  }
  return out;
}

void compact_multi_index(const GridSpec& g, std::int64_t ci, std::span<std::int64_t> out) {
  std::int64_t stride = 1;
  for (int a = 1; a < g.d; ++a) stride *= g.m;
  for (int a = 0; a < g.d; ++a) {
    out[static_cast<std::size_t>(a)] = ci / stride + 1;
    ci %= stride;
    if (a + 1 < g.d) stride /= g.m;
  }
}

void grid_point(const GridSpec& g, std::int64_t ci, std::span<double> out) {
  std::int64_t stride = 1;
  for (int a = 1; a < g.d; ++a) stride *= g.m;
  for (int a = 0; a < g.d; ++a) {
    out[static_cast<std::size_t>(a)] = static_cast<double>(ci / stride + 1) * g.h;
    ci %= stride;
    if (a + 1 < g.d) stride /= g.m;
  }
}

}  // namespace qgse
