#include "formation/spec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace formation {
namespace {

std::pair<AgentIndex, AgentIndex> key(AgentIndex i, AgentIndex j) { return {std::min(i, j), std::max(i, j)}; }

std::string clique_name(const Clique& c) {
  std::ostringstream os;
  os << "(" << c.i << "," << c.j << "," << c.k << ")";
  return os.str();
}

int shared_agents(const Clique& a, const Clique& b) {
  const std::set<AgentIndex> sa{a.i, a.j, a.k};
  return static_cast<int>(sa.count(b.i) + sa.count(b.j) + sa.count(b.k));
}

}  // namespace

std::optional<double> FormationSpec::distance(AgentIndex i, AgentIndex j) const {
  const auto wanted = key(i, j);
  for (const auto& e : edges) {
    if (key(e.i, e.j) == wanted) {
      return e.distance;
    }
  }
  return std::nullopt;
}

bool FormationSpec::has_edge(AgentIndex i, AgentIndex j) const { return distance(i, j).has_value(); }

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::BadAgentCount: return "bad agent count";
    case ViolationKind::AgentOutOfRange: return "agent out of range";
    case ViolationKind::SelfLoop: return "self loop";
    case ViolationKind::DuplicateEdge: return "duplicate edge";
    case ViolationKind::NonPositiveDistance: return "non-positive distance";
    case ViolationKind::NonFiniteValue: return "non-finite value";
    case ViolationKind::RepeatedCliqueAgent: return "repeated clique agent";
    case ViolationKind::CliqueEdgeMissing: return "clique edge missing";
    case ViolationKind::TriangleInequality: return "triangle inequality";
    case ViolationKind::ZeroSignedArea: return "zero signed area";
    case ViolationKind::HeronMismatch: return "heron mismatch";
    case ViolationKind::NonPositiveGain: return "non-positive gain";
    case ViolationKind::LamanCount: return "laman count";
    case ViolationKind::NotTriangleConnected: return "not triangle connected";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate_spec(const FormationSpec& spec) {
  ValidationReport report;
  auto add = [&report](ViolationKind kind, std::string message) {
    report.violations.push_back({kind, std::move(message)});
  };
  const int n = spec.agent_count;
  if (n < 1) {
    add(ViolationKind::BadAgentCount, "agent count must be positive, got " + std::to_string(n));
  }
  auto in_range = [n](AgentIndex a) { return a >= 1 && a <= n; };

  std::set<std::pair<AgentIndex, AgentIndex>> seen;
  for (const auto& e : spec.edges) {
    std::ostringstream name;
    name << "edge (" << e.i << "," << e.j << ")";
    if (!in_range(e.i) || !in_range(e.j)) {
      add(ViolationKind::AgentOutOfRange, name.str() + " references an agent outside 1.." + std::to_string(n));
    }
    if (e.i == e.j) {
      add(ViolationKind::SelfLoop, name.str() + " joins an agent to itself");
    }
    if (!seen.insert(key(e.i, e.j)).second) {
      add(ViolationKind::DuplicateEdge, name.str() + " listed more than once");
    }
    if (!std::isfinite(e.distance)) {
      add(ViolationKind::NonFiniteValue, name.str() + " has a non-finite distance");
    } else if (e.distance <= 0.0) {
      add(ViolationKind::NonPositiveDistance, name.str() + " has non-positive distance");
    }
  }

  for (const auto& c : spec.cliques) {
    const std::string name = "clique " + clique_name(c);
    if (!in_range(c.i) || !in_range(c.j) || !in_range(c.k)) {
      add(ViolationKind::AgentOutOfRange, name + " references an agent outside 1.." + std::to_string(n));
    }
    if (c.i == c.j || c.j == c.k || c.k == c.i) {
      add(ViolationKind::RepeatedCliqueAgent, name + " repeats an agent");
      continue;
    }
    if (!std::isfinite(c.signed_area) || !std::isfinite(c.gain)) {
      add(ViolationKind::NonFiniteValue, name + " has a non-finite area or gain");
      continue;
    }
    if (c.gain <= 0.0) {
      add(ViolationKind::NonPositiveGain, name + " has non-positive gain");
    }
    if (c.signed_area == 0.0) {
      add(ViolationKind::ZeroSignedArea, name + " has zero desired signed area");
    }
    const auto d_ij = spec.distance(c.i, c.j);
    const auto d_jk = spec.distance(c.j, c.k);
    const auto d_ki = spec.distance(c.k, c.i);
    bool complete = true;
    for (const auto& [edge, d] : {std::pair{key(c.i, c.j), d_ij}, std::pair{key(c.j, c.k), d_jk},
                                  std::pair{key(c.k, c.i), d_ki}}) {
      if (!d) {
        std::ostringstream os;
        os << name << ": clique edge missing (" << edge.first << "," << edge.second << ")";
        add(ViolationKind::CliqueEdgeMissing, os.str());
        complete = false;
      }
    }
    if (!complete || *d_ij <= 0.0 || *d_jk <= 0.0 || *d_ki <= 0.0) {
      continue;
    }
    if (!strict_triangle_inequality(*d_ij, *d_jk, *d_ki)) {
      add(ViolationKind::TriangleInequality, name + " sides violate the strict triangle inequality");
      continue;
    }
    const double area = heron_area(*d_ij, *d_jk, *d_ki);
    if (c.signed_area != 0.0 && std::abs(std::abs(c.signed_area) - area) > kHeronTolerance * area) {
      std::ostringstream os;
      os.precision(12);
      os << name << ": heron mismatch, |Z*| = " << std::abs(c.signed_area) << " but the sides give area " << area;
      add(ViolationKind::HeronMismatch, os.str());
    }
  }

  if (n >= 2 && static_cast<int>(spec.edges.size()) != 2 * n - 3) {
    std::ostringstream os;
    os << "laman count: |E| = " << spec.edges.size() << " but 2n - 3 = " << 2 * n - 3;
    add(ViolationKind::LamanCount, os.str());
  }

  if (n >= 3) {
    // Triangles glued along shared edges must form one component covering every agent.
    const std::size_t m = spec.cliques.size();
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&parent](std::size_t x) {
      while (parent[x] != x) {
        x = parent[x] = parent[parent[x]];
      }
      return x;
    };
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        if (shared_agents(spec.cliques[a], spec.cliques[b]) >= 2) {
          parent[find(a)] = find(b);
        }
      }
    }
    std::set<std::size_t> roots;
    std::set<AgentIndex> covered;
    for (std::size_t a = 0; a < m; ++a) {
      roots.insert(find(a));
      covered.insert({spec.cliques[a].i, spec.cliques[a].j, spec.cliques[a].k});
    }
    if (m == 0) {
      add(ViolationKind::NotTriangleConnected, "no cliques: a triangulated graph needs at least one triangle");
    } else if (roots.size() > 1) {
      add(ViolationKind::NotTriangleConnected,
          "cliques split into " + std::to_string(roots.size()) + " components with no shared edge");
    }
    for (AgentIndex a = 1; a <= n && m > 0; ++a) {
      if (!covered.count(a)) {
        add(ViolationKind::NotTriangleConnected, "agent " + std::to_string(a) + " belongs to no clique");
      }
    }
  }
  return report;
}

MembershipReport target_membership(const CollectiveState& state, const FormationSpec& spec, double tol) {
  if (static_cast<int>(state.size()) != spec.agent_count) {
    throw std::invalid_argument("state has " + std::to_string(state.size()) + " positions but the spec has " +
                                std::to_string(spec.agent_count) + " agents");
  }
  auto at = [&state](AgentIndex a) -> const Position& { return state.at(static_cast<std::size_t>(a - 1)); };
  MembershipReport report;
  for (const auto& e : spec.edges) {
    const double actual = (at(e.i) - at(e.j)).norm();
    report.edges.push_back({e, actual, actual - e.distance});
  }
  for (const auto& c : spec.cliques) {
    const double actual = signed_area(at(c.i), at(c.j), at(c.k));
    report.cliques.push_back({c, actual, actual - c.signed_area});
  }
  double worst = 0.0;
  for (const auto& r : report.edges) {
    worst = std::max(worst, std::abs(r.residual));
  }
  for (const auto& r : report.cliques) {
    worst = std::max(worst, std::abs(r.residual));
  }
  if (!is_finite(state)) {
    worst = std::numeric_limits<double>::infinity();
  }
  report.max_residual = worst;
  report.member = worst <= tol;
  return report;
}

}  // namespace formation
