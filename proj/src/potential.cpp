#include "formation/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace formation {
namespace {

const Position& at(const CollectiveState& state, AgentIndex a) { return state.at(static_cast<std::size_t>(a - 1)); }

// d/dq of (|q|^2 - d^2) q.
Matrix2 spring_jacobian(const Position& q, double d_star) {
  return (q.squaredNorm() - d_star * d_star) * Matrix2::Identity() + 2.0 * q * q.transpose();
}

}  // namespace

void CanonicalTriangleParams::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(gain)) {
    throw std::invalid_argument("canonical parameters must be finite");
  }
  if (b <= 0.0 || c <= 0.0 || gain <= 0.0) {
    throw std::invalid_argument("canonical parameters need b > 0, c > 0, K > 0");
  }
}

double CanonicalTriangleParams::length_scale() const { return std::max({std::abs(a), b, c}); }

TrianglePotentialTerm CanonicalTriangleParams::term() const {
  TrianglePotentialTerm t;
  t.leader_i = 1;
  t.leader_j = 2;
  t.follower_k = 3;
  t.d_ij = 2.0 * c;
  t.d_jk = std::hypot(a - c, b);
  t.d_ki = std::hypot(a + c, b);
  t.z_star = b * c;
  t.gain = gain;
  return t;
}

double pair_potential(const Position& p_i, const Position& p_j, double d_star) {
  const double e = (p_i - p_j).squaredNorm() - d_star * d_star;
  return 0.25 * e * e;
}

Position pair_gradient(const Position& p_i, const Position& p_j, double d_star) {
  const Position q = p_j - p_i;
  return (q.squaredNorm() - d_star * d_star) * q;
}

Matrix2 pair_hessian(const Position& p_i, const Position& p_j, double d_star) {
  return spring_jacobian(p_j - p_i, d_star);
}

double triangle_potential(const Position& p_i, const Position& p_j, const Position& p_k,
                          const TrianglePotentialTerm& term) {
  auto sq = [](double v) { return v * v; };
  const double e_ij = (p_i - p_j).squaredNorm() - sq(term.d_ij);
  const double e_jk = (p_j - p_k).squaredNorm() - sq(term.d_jk);
  const double e_ki = (p_k - p_i).squaredNorm() - sq(term.d_ki);
  const double area_error = signed_area(p_i, p_j, p_k) - term.z_star;
  return 0.25 * (sq(e_ij) + sq(e_jk) + sq(e_ki)) + 0.5 * term.gain * sq(area_error);
}

Position triangle_gradient_follower(const Position& p_i, const Position& p_j, const Position& p_k,
                                    const TrianglePotentialTerm& term) {
  const Position from_j = p_k - p_j;
  const Position from_i = p_k - p_i;
  const double area_error = signed_area(p_i, p_j, p_k) - term.z_star;
  return (from_j.squaredNorm() - term.d_jk * term.d_jk) * from_j +
         (from_i.squaredNorm() - term.d_ki * term.d_ki) * from_i +
         0.5 * term.gain * area_error * (kQuarterTurn * (p_i - p_j));
}

Matrix2 triangle_hessian_follower(const Position& p_i, const Position& p_j, const Position& p_k,
                                  const TrianglePotentialTerm& term) {
  const Position area_grad = 0.5 * (kQuarterTurn * (p_i - p_j));
  Matrix2 H = spring_jacobian(p_k - p_j, term.d_jk) + spring_jacobian(p_k - p_i, term.d_ki) +
              term.gain * area_grad * area_grad.transpose();
  H(1, 0) = H(0, 1);
  return H;
}

double canonical_potential(const CanonicalTriangleParams& params, const Position& p_k) {
  return triangle_potential(params.leader_i(), params.leader_j(), p_k, params.term());
}

Position canonical_gradient(const CanonicalTriangleParams& params, const Position& p_k) {
  return triangle_gradient_follower(params.leader_i(), params.leader_j(), p_k, params.term());
}

Matrix2 canonical_hessian(const CanonicalTriangleParams& params, const Position& p_k) {
  return triangle_hessian_follower(params.leader_i(), params.leader_j(), p_k, params.term());
}

double term_potential(const PotentialTerm& term, const CollectiveState& state) {
  if (const auto* p = std::get_if<PairTerm>(&term)) {
    return pair_potential(at(state, p->leader), at(state, p->follower), p->distance);
  }
  const auto& t = std::get<TrianglePotentialTerm>(term);
  return triangle_potential(at(state, t.leader_i), at(state, t.leader_j), at(state, t.follower_k), t);
}

Position term_gradient(const PotentialTerm& term, const CollectiveState& state) {
  if (const auto* p = std::get_if<PairTerm>(&term)) {
    return pair_gradient(at(state, p->leader), at(state, p->follower), p->distance);
  }
  const auto& t = std::get<TrianglePotentialTerm>(term);
  return triangle_gradient_follower(at(state, t.leader_i), at(state, t.leader_j), at(state, t.follower_k), t);
}

double agent_potential(AgentIndex agent, const CollectiveState& state, const LayerAssignment& assignment) {
  double total = 0.0;
  for (const auto& term : assignment.terms(agent)) {
    total += term_potential(term, state);
  }
  return total;
}

Position agent_control(AgentIndex agent, const CollectiveState& state, const LayerAssignment& assignment) {
  Position u = Position::Zero();
  for (const auto& term : assignment.terms(agent)) {
    u -= term_gradient(term, state);
  }
  return u;
}

}  // namespace formation
