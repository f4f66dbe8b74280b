// Scenario files: a formation, optional start state, layering root and
// integrator overrides, stored as JSON.
//
//   {
//     "description": "free text",                       (optional)
//     "agent_count": 3,
//     "edges":   [{"i": 1, "j": 2, "distance": 2.0}, ...],
//     "cliques": [{"i": 1, "j": 2, "k": 3, "signed_area": 6.0, "gain": 4.0}, ...],
//     "initial": [[x1, y1], [x2, y2], ...],               (optional)
//     "root_edge": [1, 2],                                (optional)
//     "integrator": {"method": "rk4", "step": 1e-3, "abs_tol": 1e-9,
//                    "rel_tol": 1e-9, "t_max": 100, "gradient_stop": 1e-10,
//                    "sample_stride": 1}                  (optional, every key optional)
//   }
//
// "gain" defaults to 4. Unknown keys are rejected.

#pragma once

#include "formation/simulator.hpp"
#include "formation/spec.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace formation {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegratorOverrides {
  std::optional<IntegrationMethod> method;
  std::optional<double> step;
  std::optional<double> abs_tol;
  std::optional<double> rel_tol;
  std::optional<double> t_max;
  std::optional<double> gradient_stop;
  std::optional<int> sample_stride;

  IntegratorConfig apply(IntegratorConfig base) const;
  bool operator==(const IntegratorOverrides&) const = default;
};

struct Scenario {
  std::string description;
  FormationSpec formation;
  std::optional<CollectiveState> initial;
  std::optional<std::pair<AgentIndex, AgentIndex>> root_edge;
  IntegratorOverrides integrator;

  /// The declared root edge, or the first listed edge.
  std::pair<AgentIndex, AgentIndex> layer_root() const;
};

bool operator==(const Scenario& lhs, const Scenario& rhs);

/// Throws ScenarioError with the line/column or the offending field.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

std::string dump_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

}  // namespace formation
