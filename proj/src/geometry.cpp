#include "formation/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace formation {

double signed_area(const Position& p_i, const Position& p_j, const Position& p_k) {
  const Position e_ij = p_j - p_i;
  const Position e_ik = p_k - p_i;
  return 0.5 * (e_ij.x() * e_ik.y() - e_ik.x() * e_ij.y());
}

double heron_area(double d_ij, double d_jk, double d_ki) {
  // Kahan's ordering keeps needle-shaped triangles accurate.
  std::array<double, 3> s{d_ij, d_jk, d_ki};
  std::sort(s.begin(), s.end(), std::greater<>());
  const double a = s[0];
  const double b = s[1];
  const double c = s[2];
  const double product = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  if (!(product > 0.0)) {
    return 0.0;
  }
  return 0.25 * std::sqrt(product);
}

bool strict_triangle_inequality(double d_ij, double d_jk, double d_ki) {
  return d_ij < d_jk + d_ki && d_jk < d_ki + d_ij && d_ki < d_ij + d_jk;
}

bool is_finite(const Position& p) { return std::isfinite(p.x()) && std::isfinite(p.y()); }

bool is_finite(const CollectiveState& state) {
  return std::all_of(state.begin(), state.end(), [](const Position& p) { return is_finite(p); });
}

}  // namespace formation
