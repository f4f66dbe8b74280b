// The eight-agent formation used throughout the tests, built in code so the
// tests do not depend on the scenario parser.

#pragma once

#include "formation/spec.hpp"

#include <cmath>
#include <string>

namespace fixtures {

inline formation::FormationSpec eight_agent_spec(double gain = 4.0) {
  const double leg = 3.0 * std::sqrt(2.0);
  formation::FormationSpec s;
  s.agent_count = 8;
  s.edges = {{1, 2, 6.0}, {1, 3, leg}, {1, 4, leg}, {2, 3, leg}, {2, 4, leg}, {1, 5, 3.0}, {1, 8, 3.0},
             {2, 6, 3.0}, {2, 7, 3.0}, {3, 7, 3.0}, {3, 8, 3.0}, {4, 5, 3.0}, {4, 6, 3.0}};
  s.cliques = {{2, 1, 3, 9.0, gain}, {1, 2, 4, 9.0, gain}, {1, 4, 5, 4.5, gain},
               {4, 2, 6, 4.5, gain}, {2, 3, 7, 4.5, gain}, {3, 1, 8, 4.5, gain}};
  return s;
}

/// A configuration in the target set: agents 1 and 2 on the x-axis, 3 below,
/// 4 above, and the outer agents at the corners of the 6 x 6 square.
inline formation::CollectiveState eight_agent_desired() {
  return {{-3.0, 0.0}, {3.0, 0.0}, {0.0, -3.0}, {0.0, 3.0}, {-3.0, 3.0}, {3.0, 3.0}, {3.0, -3.0}, {-3.0, -3.0}};
}

/// Two vertical columns: agents 1-4 on the left and 5-8 on the right, top to bottom.
inline formation::CollectiveState eight_agent_columns() {
  return {{-2.0, 3.0}, {-2.0, 1.0}, {-2.0, -1.0}, {-2.0, -3.0}, {2.0, 3.0}, {2.0, 1.0}, {2.0, -1.0}, {2.0, -3.0}};
}

inline std::string source_path(const std::string& relative) { return std::string(FORMATION_SOURCE_DIR) + "/" + relative; }

}  // namespace fixtures
