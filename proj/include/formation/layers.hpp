// Hierarchical layering of a triangulated formation.
//
// Agent 1 of the root edge is stationary, agent 2 keeps a distance to it, and
// every later agent follows two agents that were placed before it. Each agent
// owns the potential terms in which it is the last index.

#pragma once

#include "formation/spec.hpp"

#include <stdexcept>
#include <variant>
#include <vector>

namespace formation {

/// V_(i,j) = 1/4 (|p_i - p_j|^2 - d^2)^2, owned by `follower`.
struct PairTerm {
  AgentIndex leader = 0;
  AgentIndex follower = 0;
  double distance = 0.0;
};

/// Distance errors on all three sides plus 1/2 K (Z - Z*)^2, owned by
/// `follower_k`. Side names follow the ordered triple (i, j, k).
struct TrianglePotentialTerm {
  AgentIndex leader_i = 0;
  AgentIndex leader_j = 0;
  AgentIndex follower_k = 0;
  double d_ij = 0.0;
  double d_jk = 0.0;
  double d_ki = 0.0;
  double z_star = 0.0;
  double gain = kDefaultGain;
};

using PotentialTerm = std::variant<PairTerm, TrianglePotentialTerm>;

AgentIndex owner(const PotentialTerm& term);

struct LayerAssignment {
  /// 1-based layer of each agent, stored at index agent - 1.
  std::vector<int> layer_of;
  /// Terms owned by each agent, stored at index agent - 1.
  std::vector<std::vector<PotentialTerm>> terms_of;

  int agent_count() const { return static_cast<int>(layer_of.size()); }
  int layer(AgentIndex agent) const { return layer_of.at(static_cast<std::size_t>(agent - 1)); }
  const std::vector<PotentialTerm>& terms(AgentIndex agent) const {
    return terms_of.at(static_cast<std::size_t>(agent - 1));
  }
  int layer_count() const;
  /// Agents of each layer in ascending index order; element 0 is layer 1.
  std::vector<std::vector<AgentIndex>> layers() const;
};

class NotTriangulatedFromRoot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grows the hierarchy outward from `root`. The first endpoint becomes the
/// stationary agent. Each step attaches the unassigned agent that reaches the
/// lowest layer, breaking ties by agent index and then by clique order.
///
/// Throws std::invalid_argument if `root` is not an edge of `spec`, and
/// NotTriangulatedFromRoot if some agent can never be attached.
LayerAssignment extract_layers(const FormationSpec& spec, AgentIndex root_first, AgentIndex root_second);

/// Empty when `assignment` satisfies the hierarchy invariants; otherwise a
/// description of the first problem found.
std::string check_layer_invariants(const LayerAssignment& assignment);

}  // namespace formation
