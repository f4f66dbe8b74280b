#include "formation/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace formation {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ScenarioError(where + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    fail(where, "expected an object");
  }
  for (const auto& [key, value] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&key](const char* a) { return key == a; });
    if (!known) {
      fail(where, "unknown field '" + key + "'");
    }
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) {
    fail(where, std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) {
    fail(where, "expected a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    fail(where, "expected a finite number");
  }
  return d;
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) {
    fail(where, "expected an integer");
  }
  return v.get<int>();
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

IntegratorOverrides parse_integrator(const json& obj) {
  const std::string where = "integrator";
  reject_unknown(obj, where, {"method", "step", "abs_tol", "rel_tol", "t_max", "gradient_stop", "sample_stride"});
  IntegratorOverrides o;
  if (obj.contains("method")) {
    if (!obj["method"].is_string()) {
      fail(where + ".method", "expected \"rk4\" or \"rk45\"");
    }
    try {
      o.method = parse_integration_method(obj["method"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(where + ".method", e.what());
    }
  }
  auto positive = [&](const char* key, std::optional<double>& slot) {
    if (obj.contains(key)) {
      const double v = number(obj[key], where + "." + key);
      if (v <= 0.0) {
        fail(where + "." + key, "must be positive");
      }
      slot = v;
    }
  };
  positive("step", o.step);
  positive("abs_tol", o.abs_tol);
  positive("rel_tol", o.rel_tol);
  positive("t_max", o.t_max);
  positive("gradient_stop", o.gradient_stop);
  if (obj.contains("sample_stride")) {
    const int stride = integer(obj["sample_stride"], where + ".sample_stride");
    if (stride < 1) {
      fail(where + ".sample_stride", "must be at least 1");
    }
    o.sample_stride = stride;
  }
  return o;
}

}  // namespace

IntegratorConfig IntegratorOverrides::apply(IntegratorConfig base) const {
  if (method) base.method = *method;
  if (step) base.step = *step;
  if (abs_tol) base.abs_tol = *abs_tol;
  if (rel_tol) base.rel_tol = *rel_tol;
  if (t_max) base.t_max = *t_max;
  if (gradient_stop) base.gradient_stop = *gradient_stop;
  if (sample_stride) base.sample_stride = *sample_stride;
  return base;
}

std::pair<AgentIndex, AgentIndex> Scenario::layer_root() const {
  if (root_edge) {
    return *root_edge;
  }
  if (formation.edges.empty()) {
    throw ScenarioError("scenario has no edges to root the layering at");
  }
  return {formation.edges.front().i, formation.edges.front().j};
}

bool operator==(const Scenario& lhs, const Scenario& rhs) {
  auto same_edges = [](const std::vector<Edge>& a, const std::vector<Edge>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const Edge& x, const Edge& y) {
      return x.i == y.i && x.j == y.j && x.distance == y.distance;
    });
  };
  auto same_cliques = [](const std::vector<Clique>& a, const std::vector<Clique>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const Clique& x, const Clique& y) {
      return x.i == y.i && x.j == y.j && x.k == y.k && x.signed_area == y.signed_area && x.gain == y.gain;
    });
  };
  auto same_state = [](const std::optional<CollectiveState>& a, const std::optional<CollectiveState>& b) {
    if (a.has_value() != b.has_value()) {
      return false;
    }
    return !a || std::equal(a->begin(), a->end(), b->begin(), b->end(),
                            [](const Position& p, const Position& q) { return p == q; });
  };
  return lhs.description == rhs.description && lhs.formation.agent_count == rhs.formation.agent_count &&
         same_edges(lhs.formation.edges, rhs.formation.edges) &&
         same_cliques(lhs.formation.cliques, rhs.formation.cliques) && same_state(lhs.initial, rhs.initial) &&
         lhs.root_edge == rhs.root_edge && lhs.integrator == rhs.integrator;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": malformed JSON";
    throw ScenarioError(os.str());
  }
  reject_unknown(doc, "scenario",
                 {"description", "agent_count", "edges", "cliques", "initial", "root_edge", "integrator"});

  Scenario s;
  if (doc.contains("description")) {
    if (!doc["description"].is_string()) {
      fail("description", "expected a string");
    }
    s.description = doc["description"].get<std::string>();
  }
  s.formation.agent_count = integer(require(doc, "scenario", "agent_count"), "agent_count");
  if (s.formation.agent_count < 1) {
    fail("agent_count", "must be positive");
  }

  const json& edges = require(doc, "scenario", "edges");
  if (!edges.is_array()) {
    fail("edges", "expected an array");
  }
  for (std::size_t n = 0; n < edges.size(); ++n) {
    const std::string where = "edges[" + std::to_string(n) + "]";
    const json& e = edges[n];
    reject_unknown(e, where, {"i", "j", "distance"});
    s.formation.edges.push_back({integer(require(e, where, "i"), where + ".i"),
                                 integer(require(e, where, "j"), where + ".j"),
                                 number(require(e, where, "distance"), where + ".distance")});
  }

  if (doc.contains("cliques")) {
    const json& cliques = doc["cliques"];
    if (!cliques.is_array()) {
      fail("cliques", "expected an array");
    }
    for (std::size_t n = 0; n < cliques.size(); ++n) {
      const std::string where = "cliques[" + std::to_string(n) + "]";
      const json& c = cliques[n];
      reject_unknown(c, where, {"i", "j", "k", "signed_area", "gain"});
      Clique clique;
      clique.i = integer(require(c, where, "i"), where + ".i");
      clique.j = integer(require(c, where, "j"), where + ".j");
      clique.k = integer(require(c, where, "k"), where + ".k");
      clique.signed_area = number(require(c, where, "signed_area"), where + ".signed_area");
      if (c.contains("gain")) {
        clique.gain = number(c["gain"], where + ".gain");
        if (clique.gain <= 0.0) {
          fail(where + ".gain", "must be positive");
        }
      }
      s.formation.cliques.push_back(clique);
    }
  }

  if (doc.contains("initial")) {
    const json& init = doc["initial"];
    if (!init.is_array() || static_cast<int>(init.size()) != s.formation.agent_count) {
      fail("initial", "expected one [x, y] pair per agent");
    }
    CollectiveState state;
    for (std::size_t n = 0; n < init.size(); ++n) {
      const std::string where = "initial[" + std::to_string(n) + "]";
      if (!init[n].is_array() || init[n].size() != 2) {
        fail(where, "expected [x, y]");
      }
      state.emplace_back(number(init[n][0], where), number(init[n][1], where));
    }
    s.initial = std::move(state);
  }

  if (doc.contains("root_edge")) {
    const json& root = doc["root_edge"];
    if (!root.is_array() || root.size() != 2) {
      fail("root_edge", "expected [i, j]");
    }
    s.root_edge = std::pair{integer(root[0], "root_edge[0]"), integer(root[1], "root_edge[1]")};
  }

  if (doc.contains("integrator")) {
    s.integrator = parse_integrator(doc["integrator"]);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError(path + ": cannot open file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scenario(buffer.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path + ": " + e.what());
  }
}

std::string dump_scenario(const Scenario& s) {
  json doc = json::object();
  if (!s.description.empty()) {
    doc["description"] = s.description;
  }
  doc["agent_count"] = s.formation.agent_count;
  doc["edges"] = json::array();
  for (const auto& e : s.formation.edges) {
    doc["edges"].push_back({{"i", e.i}, {"j", e.j}, {"distance", e.distance}});
  }
  doc["cliques"] = json::array();
  for (const auto& c : s.formation.cliques) {
    doc["cliques"].push_back({{"i", c.i}, {"j", c.j}, {"k", c.k}, {"signed_area", c.signed_area}, {"gain", c.gain}});
  }
  if (s.initial) {
    doc["initial"] = json::array();
    for (const auto& p : *s.initial) {
      doc["initial"].push_back({p.x(), p.y()});
    }
  }
  if (s.root_edge) {
    doc["root_edge"] = {s.root_edge->first, s.root_edge->second};
  }
  const auto& o = s.integrator;
  json integ = json::object();
  if (o.method) integ["method"] = to_string(*o.method);
  if (o.step) integ["step"] = *o.step;
  if (o.abs_tol) integ["abs_tol"] = *o.abs_tol;
  if (o.rel_tol) integ["rel_tol"] = *o.rel_tol;
  if (o.t_max) integ["t_max"] = *o.t_max;
  if (o.gradient_stop) integ["gradient_stop"] = *o.gradient_stop;
  if (o.sample_stride) integ["sample_stride"] = *o.sample_stride;
  if (!integ.empty()) {
    doc["integrator"] = integ;
  }
  return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ScenarioError(path + ": cannot write file");
  }
  out << dump_scenario(scenario);
}

}  // namespace formation
