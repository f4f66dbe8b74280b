// Pair and triangle potentials with their follower gradients and Hessians,
// and the per-agent control law of the layered scheme.
//
// Every gradient here is +dV/dp. Controllers negate it.

#pragma once

#include "formation/geometry.hpp"
#include "formation/layers.hpp"

namespace formation {

/// Two leaders pinned at (-c, 0) and (c, 0); the follower's target is (a, b).
struct CanonicalTriangleParams {
  double a = 0.0;
  double b = 1.0;
  double c = 1.0;
  double gain = kDefaultGain;

  /// Throws std::invalid_argument unless b, c, gain are positive and all
  /// four values are finite.
  void validate() const;

  Position leader_i() const { return {-c, 0.0}; }
  Position leader_j() const { return {c, 0.0}; }
  Position target() const { return {a, b}; }
  /// Largest of |a|, b, c. Used to scale tolerances.
  double length_scale() const;
  /// Potential term for agents (1, 2, 3) with agent 3 as follower.
  TrianglePotentialTerm term() const;
};

double pair_potential(const Position& p_i, const Position& p_j, double d_star);
/// Gradient with respect to p_j.
Position pair_gradient(const Position& p_i, const Position& p_j, double d_star);
/// Hessian with respect to p_j.
Matrix2 pair_hessian(const Position& p_i, const Position& p_j, double d_star);

double triangle_potential(const Position& p_i, const Position& p_j, const Position& p_k,
                          const TrianglePotentialTerm& term);

/// dV/dp_k: (|p_k - p_j|^2 - d_jk^2)(p_k - p_j) + (|p_k - p_i|^2 - d_ki^2)(p_k - p_i)
///          + K/2 (Z - Z*) R90 (p_i - p_j)
Position triangle_gradient_follower(const Position& p_i, const Position& p_j, const Position& p_k,
                                    const TrianglePotentialTerm& term);

/// d^2V/dp_k^2. The area term is linear in p_k, so it contributes the rank-one
/// matrix K g g^T with g = dZ/dp_k.
Matrix2 triangle_hessian_follower(const Position& p_i, const Position& p_j, const Position& p_k,
                                  const TrianglePotentialTerm& term);

/// Follower-only views of the canonical problem.
double canonical_potential(const CanonicalTriangleParams& params, const Position& p_k);
Position canonical_gradient(const CanonicalTriangleParams& params, const Position& p_k);
Matrix2 canonical_hessian(const CanonicalTriangleParams& params, const Position& p_k);

/// Value of one term at the collective state.
double term_potential(const PotentialTerm& term, const CollectiveState& state);
/// Gradient of one term with respect to its owner.
Position term_gradient(const PotentialTerm& term, const CollectiveState& state);

/// V_i: sum of the terms owned by `agent`. Zero for the stationary agent.
double agent_potential(AgentIndex agent, const CollectiveState& state, const LayerAssignment& assignment);

/// u_i = -dV_i/dp_i.
Position agent_control(AgentIndex agent, const CollectiveState& state, const LayerAssignment& assignment);

}  // namespace formation
