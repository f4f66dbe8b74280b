// Gradient-flow integration for a pinned follower and for a layered
// formation, basin-of-attraction sampling and trajectory auditing.

#pragma once

#include "formation/equilibria.hpp"
#include "formation/layers.hpp"
#include "formation/spec.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace formation {

enum class IntegrationMethod { FixedRK4, AdaptiveRK45 };

const char* to_string(IntegrationMethod m);
/// Accepts "rk4" and "rk45". Throws std::invalid_argument otherwise.
IntegrationMethod parse_integration_method(const std::string& name);

struct IntegratorConfig {
  IntegrationMethod method = IntegrationMethod::FixedRK4;
  double step = 1e-3;  // fixed step, or initial step for AdaptiveRK45
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  double t_max = 100.0;
  double gradient_stop = 1e-10;  // on the stacked velocity norm
  int sample_stride = 1;

  /// Throws std::invalid_argument on non-positive settings.
  void validate() const;
};

enum class TerminalReason { GradientStop, TimeLimit, NonFinite };

const char* to_string(TerminalReason r);

struct Trajectory {
  std::vector<double> times;
  std::vector<CollectiveState> states;
  TerminalReason terminal_reason = TerminalReason::TimeLimit;
  /// Velocity norm at the last stored state.
  double final_velocity_norm = 0.0;
  std::size_t steps = 0;

  const CollectiveState& terminal_state() const { return states.back(); }
};

/// Three-agent spec (1, 2, 3) with the leaders at (-c, 0), (c, 0) and the
/// target of agent 3 at (a, b).
FormationSpec canonical_spec(const CanonicalTriangleParams& params);
LayerAssignment canonical_assignment(const CanonicalTriangleParams& params);

/// Single follower under p_k' = -dV/dp_k with the leaders pinned. States hold
/// all three agents; only agent 3 moves.
Trajectory integrate_follower(const CanonicalTriangleParams& params, const Position& p0,
                              const IntegratorConfig& cfg);

/// All agents at once, each with velocity agent_control. Throws
/// std::invalid_argument if the state does not match the assignment or is not
/// finite.
Trajectory integrate_hierarchy(const FormationSpec& spec, const LayerAssignment& assignment,
                               const CollectiveState& state0, const IntegratorConfig& cfg);

struct GridSpec {
  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = -1.0;
  double y_max = 1.0;
  int resolution = 1;

  std::vector<Position> nodes() const { return seed_grid(x_min, x_max, y_min, y_max, resolution); }
};

struct BasinMap {
  static constexpr int kNonConvergent = -1;

  GridSpec grid;
  std::vector<EquilibriumRecord> equilibria;
  std::vector<Position> nodes;
  /// Index into `equilibria`, or kNonConvergent.
  std::vector<int> labels;
  std::vector<Position> terminal;
  std::vector<TerminalReason> reasons;
  std::vector<double> final_velocity_norm;

  /// Node count per equilibrium, then the non-convergent count last.
  std::vector<std::size_t> counts() const;
};

/// Integrates from every grid node and labels it with the equilibrium its
/// terminal state reached (within 1e-3 of the length scale). Nodes that stop
/// for any reason other than GradientStop, or land far from every listed
/// equilibrium, are non-convergent. Nodes run on worker threads; results are
/// stored in grid order.
BasinMap basin_sample(const CanonicalTriangleParams& params, const GridSpec& grid, const IntegratorConfig& cfg,
                      const std::vector<EquilibriumRecord>& equilibria, unsigned threads = 0);

/// Relative radius used to match a terminal state to an equilibrium.
inline constexpr double kBasinMatchRadius = 1e-3;

struct LyapunovAudit {
  /// Relative tolerance per step, against the starting potential.
  static constexpr double kTolerance = 1e-9;

  std::vector<double> initial;       // V_i(0), index agent - 1
  std::vector<double> max_increase;  // largest single-step rise of V_i
  std::vector<AgentIndex> rising_agents;
  double total_initial = 0.0;
  double total_max_increase = 0.0;
  bool per_agent_nonincreasing = true;
  bool total_nonincreasing = true;
};

/// Checks each V_i and their sum over consecutive stored states.
LyapunovAudit lyapunov_audit(const Trajectory& traj, const LayerAssignment& assignment);

struct ConvergenceReport {
  MembershipReport membership;
  LyapunovAudit audit;
  TerminalReason terminal_reason = TerminalReason::TimeLimit;
};

ConvergenceReport convergence_report(const Trajectory& traj, const FormationSpec& spec,
                                     const LayerAssignment& assignment, double tol);

/// CSV: comment header, then `t,x1,y1,...,xn,yn` rows.
void write_trajectory(std::ostream& os, const Trajectory& traj);
/// CSV: comment header with the equilibria, then one row per node.
void write_basin(std::ostream& os, const BasinMap& map);

}  // namespace formation
