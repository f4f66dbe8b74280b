// Formation specification: agents, desired distances, desired signed areas.

#pragma once

#include "formation/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace formation {

/// Default signed-area gain for cliques that do not set one.
inline constexpr double kDefaultGain = 4.0;

/// Relative tolerance between |Z*| and the Heron area of the clique sides.
inline constexpr double kHeronTolerance = 1e-9;

struct Edge {
  AgentIndex i = 0;
  AgentIndex j = 0;
  double distance = 0.0;
};

/// Ordered triple with a desired signed area. The order fixes the sign of Z*.
struct Clique {
  AgentIndex i = 0;
  AgentIndex j = 0;
  AgentIndex k = 0;
  double signed_area = 0.0;
  double gain = kDefaultGain;
};

struct FormationSpec {
  int agent_count = 0;
  std::vector<Edge> edges;
  std::vector<Clique> cliques;

  /// Desired distance of the undirected edge {i, j}, if present.
  std::optional<double> distance(AgentIndex i, AgentIndex j) const;
  bool has_edge(AgentIndex i, AgentIndex j) const;
};

enum class ViolationKind {
  BadAgentCount,
  AgentOutOfRange,
  SelfLoop,
  DuplicateEdge,
  NonPositiveDistance,
  NonFiniteValue,
  RepeatedCliqueAgent,
  CliqueEdgeMissing,
  TriangleInequality,
  ZeroSignedArea,
  HeronMismatch,
  NonPositiveGain,
  LamanCount,
  NotTriangleConnected,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

/// Collects every problem with the spec; never throws.
ValidationReport validate_spec(const FormationSpec& spec);

struct EdgeResidual {
  Edge edge;
  double actual = 0.0;
  double residual = 0.0;  // actual - desired
};

struct CliqueResidual {
  Clique clique;
  double actual = 0.0;
  double residual = 0.0;  // actual - desired
};

struct MembershipReport {
  bool member = false;
  double max_residual = 0.0;
  std::vector<EdgeResidual> edges;
  std::vector<CliqueResidual> cliques;
};

/// Checks desired distances and desired signed areas against `state`.
/// Throws std::invalid_argument if the state length does not match.
MembershipReport target_membership(const CollectiveState& state, const FormationSpec& spec, double tol);

}  // namespace formation
