// Planar geometry shared by every formation module.
//
// Agents are points in R^2. The collective state stacks one position per
// agent, indexed 1..n in the public API and 0..n-1 in storage.

#pragma once

#include <Eigen/Core>

#include <vector>

namespace formation {

using Position = Eigen::Vector2d;
using Matrix2 = Eigen::Matrix2d;

/// One position per agent; entry `i - 1` belongs to agent `i`.
using CollectiveState = std::vector<Position>;

/// Agents are numbered from 1, matching scenario files and reports.
using AgentIndex = int;

/// Quarter-turn [[0, 1], [-1, 0]]. The gradient of the signed area of
/// (p_i, p_j, p_k) with respect to p_k is 0.5 * kQuarterTurn * (p_i - p_j).
inline const Matrix2 kQuarterTurn = (Matrix2() << 0.0, 1.0, -1.0, 0.0).finished();

/// Half the determinant of [[1, 1, 1], [p_i, p_j, p_k]]. Positive when the
/// three points are in counterclockwise order.
double signed_area(const Position& p_i, const Position& p_j, const Position& p_k);

/// Area of a triangle from its side lengths. Returns 0 for degenerate or
/// unrealizable side triples.
double heron_area(double d_ij, double d_jk, double d_ki);

/// True when each side is strictly shorter than the sum of the other two.
bool strict_triangle_inequality(double d_ij, double d_jk, double d_ki);

bool is_finite(const Position& p);
bool is_finite(const CollectiveState& state);

}  // namespace formation
