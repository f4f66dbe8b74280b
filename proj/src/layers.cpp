#include "formation/layers.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

namespace formation {
namespace {

// Rotates the clique so that `follower` is last; cyclic shifts keep Z*.
TrianglePotentialTerm rotated_term(const FormationSpec& spec, const Clique& c, AgentIndex follower) {
  AgentIndex i = c.i;
  AgentIndex j = c.j;
  AgentIndex k = c.k;
  while (k != follower) {
    const AgentIndex first = i;
    i = j;
    j = k;
    k = first;
  }
  TrianglePotentialTerm term;
  term.leader_i = i;
  term.leader_j = j;
  term.follower_k = k;
  term.d_ij = spec.distance(i, j).value();
  term.d_jk = spec.distance(j, k).value();
  term.d_ki = spec.distance(k, i).value();
  term.z_star = c.signed_area;
  term.gain = c.gain;
  return term;
}

}  // namespace

AgentIndex owner(const PotentialTerm& term) {
  return std::visit(
      [](const auto& t) -> AgentIndex {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, PairTerm>) {
          return t.follower;
        } else {
          return t.follower_k;
        }
      },
      term);
}

int LayerAssignment::layer_count() const {
  return layer_of.empty() ? 0 : *std::max_element(layer_of.begin(), layer_of.end());
}

std::vector<std::vector<AgentIndex>> LayerAssignment::layers() const {
  std::vector<std::vector<AgentIndex>> out(static_cast<std::size_t>(layer_count()));
  for (AgentIndex a = 1; a <= agent_count(); ++a) {
    out[static_cast<std::size_t>(layer(a) - 1)].push_back(a);
  }
  return out;
}

LayerAssignment extract_layers(const FormationSpec& spec, AgentIndex root_first, AgentIndex root_second) {
  const auto root_distance = spec.distance(root_first, root_second);
  if (!root_distance || root_first == root_second) {
    std::ostringstream os;
    os << "root edge (" << root_first << "," << root_second << ") is not an edge of the formation";
    throw std::invalid_argument(os.str());
  }
  const auto n = static_cast<std::size_t>(spec.agent_count);
  LayerAssignment out;
  out.layer_of.assign(n, 0);
  out.terms_of.assign(n, {});
  auto layer = [&out](AgentIndex a) -> int& { return out.layer_of.at(static_cast<std::size_t>(a - 1)); };

  layer(root_first) = 1;
  layer(root_second) = 2;
  out.terms_of[static_cast<std::size_t>(root_second - 1)].push_back(
      PairTerm{root_first, root_second, *root_distance});

  for (std::size_t placed = 2; placed < n; ++placed) {
    int best_layer = std::numeric_limits<int>::max();
    AgentIndex best_agent = 0;
    std::optional<std::size_t> best_clique;
    for (std::size_t ci = 0; ci < spec.cliques.size(); ++ci) {
      const Clique& c = spec.cliques[ci];
      for (const AgentIndex k : {c.i, c.j, c.k}) {
        if (layer(k) != 0) {
          continue;
        }
        int max_leader_layer = 0;
        bool leaders_ready = true;
        for (const AgentIndex other : {c.i, c.j, c.k}) {
          if (other == k) {
            continue;
          }
          leaders_ready = leaders_ready && layer(other) != 0;
          max_leader_layer = std::max(max_leader_layer, layer(other));
        }
        if (!leaders_ready) {
          continue;
        }
        const int candidate = max_leader_layer + 1;
        if (candidate < best_layer || (candidate == best_layer && k < best_agent)) {
          best_layer = candidate;
          best_agent = k;
          best_clique = ci;
        }
      }
    }
    if (!best_clique) {
      std::ostringstream os;
      os << "growth from root edge (" << root_first << "," << root_second << ") stalled after " << placed
         << " of " << n << " agents";
      throw NotTriangulatedFromRoot(os.str());
    }
    layer(best_agent) = best_layer;
    out.terms_of[static_cast<std::size_t>(best_agent - 1)].push_back(
        rotated_term(spec, spec.cliques[*best_clique], best_agent));
  }
  return out;
}

std::string check_layer_invariants(const LayerAssignment& assignment) {
  const auto layers = assignment.layers();
  if (layers.size() < 2 || layers[0].size() != 1 || layers[1].size() != 1) {
    return "layers 1 and 2 must each hold exactly one agent";
  }
  const AgentIndex root = layers[0][0];
  const AgentIndex second = layers[1][0];
  if (!assignment.terms(root).empty()) {
    return "layer-1 agent owns potential terms";
  }
  const auto& second_terms = assignment.terms(second);
  if (second_terms.size() != 1 || !std::holds_alternative<PairTerm>(second_terms[0]) ||
      std::get<PairTerm>(second_terms[0]).leader != root) {
    return "layer-2 agent must own a single pair term on the layer-1 agent";
  }
  for (AgentIndex a = 1; a <= assignment.agent_count(); ++a) {
    for (const auto& term : assignment.terms(a)) {
      if (owner(term) != a) {
        return "agent " + std::to_string(a) + " owns a term whose last index is another agent";
      }
      std::vector<AgentIndex> leaders;
      if (const auto* p = std::get_if<PairTerm>(&term)) {
        leaders = {p->leader};
      } else {
        const auto& t = std::get<TrianglePotentialTerm>(term);
        leaders = {t.leader_i, t.leader_j};
      }
      for (const AgentIndex l : leaders) {
        if (assignment.layer(l) >= assignment.layer(a)) {
          return "agent " + std::to_string(a) + " depends on agent " + std::to_string(l) +
                 " which is not in a higher layer";
        }
      }
    }
    if (assignment.layer(a) > 1 && assignment.terms(a).empty()) {
      return "agent " + std::to_string(a) + " has no potential term";
    }
  }
  return {};
}

}  // namespace formation
