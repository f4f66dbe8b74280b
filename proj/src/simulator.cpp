#include "formation/simulator.hpp"
#include "formation/potential.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace formation {
namespace {

namespace odeint = boost::numeric::odeint;
using FlatState = std::vector<double>;
using Field = std::function<void(const FlatState&, FlatState&)>;
using Sampler = std::function<CollectiveState(const FlatState&)>;

bool all_finite(const FlatState& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

double l2(const FlatState& v) {
  double s = 0.0;
  for (double e : v) {
    s += e * e;
  }
  return std::sqrt(s);
}

// Shared driver. `field` writes the velocity; `sample` expands the flat state
// into the stored CollectiveState.
Trajectory integrate_flow(const Field& field, const Sampler& sample, FlatState x, const IntegratorConfig& cfg) {
  cfg.validate();
  auto system = [&field](const FlatState& s, FlatState& dsdt, double /*t*/) { field(s, dsdt); };

  Trajectory traj;
  FlatState dxdt(x.size());
  field(x, dxdt);
  double t = 0.0;
  traj.times.push_back(t);
  traj.states.push_back(sample(x));
  bool last_stored = true;

  odeint::runge_kutta4<FlatState> rk4;
  auto rk45 = odeint::make_controlled(cfg.abs_tol, cfg.rel_tol, odeint::runge_kutta_dopri5<FlatState>());
  double dt = cfg.step;
  std::size_t n = 0;
  const double t_end_slack = 1e-12 * cfg.t_max;

  for (;;) {
    const double speed = l2(dxdt);
    if (!std::isfinite(speed)) {
      traj.terminal_reason = TerminalReason::NonFinite;
      break;
    }
    if (speed < cfg.gradient_stop) {
      traj.terminal_reason = TerminalReason::GradientStop;
      break;
    }
    if (t >= cfg.t_max - t_end_slack) {
      traj.terminal_reason = TerminalReason::TimeLimit;
      break;
    }
    FlatState next = x;
    double t_next = t;
    if (cfg.method == IntegrationMethod::FixedRK4) {
      t_next = std::min(static_cast<double>(n + 1) * cfg.step, cfg.t_max);
      rk4.do_step(system, next, dxdt, t, t_next - t);
    } else {
      dt = std::min(dt, cfg.t_max - t);
      odeint::controlled_step_result res = odeint::fail;
      for (int attempt = 0; attempt < 500 && res == odeint::fail; ++attempt) {
        next = x;
        t_next = t;
        res = rk45.try_step(system, next, t_next, dt);
      }
      if (res == odeint::fail) {
        traj.terminal_reason = TerminalReason::NonFinite;
        break;
      }
    }
    if (!all_finite(next)) {
      traj.terminal_reason = TerminalReason::NonFinite;
      break;
    }
    x.swap(next);
    t = t_next;
    ++n;
    field(x, dxdt);
    last_stored = false;
    if (n % static_cast<std::size_t>(cfg.sample_stride) == 0) {
      traj.times.push_back(t);
      traj.states.push_back(sample(x));
      last_stored = true;
    }
  }
  if (!last_stored) {
    traj.times.push_back(t);
    traj.states.push_back(sample(x));
  }
  traj.final_velocity_norm = l2(dxdt);
  traj.steps = n;
  return traj;
}

}  // namespace

const char* to_string(IntegrationMethod m) {
  return m == IntegrationMethod::FixedRK4 ? "rk4" : "rk45";
}

IntegrationMethod parse_integration_method(const std::string& name) {
  if (name == "rk4") {
    return IntegrationMethod::FixedRK4;
  }
  if (name == "rk45") {
    return IntegrationMethod::AdaptiveRK45;
  }
  throw std::invalid_argument("unknown integration method '" + name + "' (expected rk4 or rk45)");
}

void IntegratorConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(step) || !positive(t_max) || !positive(gradient_stop) || !positive(abs_tol) ||
      !positive(rel_tol)) {
    throw std::invalid_argument("integrator step, tolerances, t_max and gradient_stop must be positive");
  }
  if (sample_stride < 1) {
    throw std::invalid_argument("sample_stride must be at least 1");
  }
}

const char* to_string(TerminalReason r) {
  switch (r) {
    case TerminalReason::GradientStop: return "GradientStop";
    case TerminalReason::TimeLimit: return "TimeLimit";
    case TerminalReason::NonFinite: return "NonFinite";
  }
  return "?";
}

FormationSpec canonical_spec(const CanonicalTriangleParams& params) {
  params.validate();
  const auto term = params.term();
  FormationSpec spec;
  spec.agent_count = 3;
  spec.edges = {{1, 2, term.d_ij}, {2, 3, term.d_jk}, {3, 1, term.d_ki}};
  spec.cliques = {{1, 2, 3, term.z_star, params.gain}};
  return spec;
}

LayerAssignment canonical_assignment(const CanonicalTriangleParams& params) {
  return extract_layers(canonical_spec(params), 1, 2);
}

Trajectory integrate_follower(const CanonicalTriangleParams& params, const Position& p0,
                              const IntegratorConfig& cfg) {
  params.validate();
  if (!is_finite(p0)) {
    throw std::invalid_argument("initial follower position must be finite");
  }
  const Position p_i = params.leader_i();
  const Position p_j = params.leader_j();
  const TrianglePotentialTerm term = params.term();
  Field field = [&](const FlatState& s, FlatState& v) {
    const Position g = triangle_gradient_follower(p_i, p_j, Position(s[0], s[1]), term);
    v[0] = -g.x();
    v[1] = -g.y();
  };
  Sampler sample = [&](const FlatState& s) { return CollectiveState{p_i, p_j, Position(s[0], s[1])}; };
  return integrate_flow(field, sample, {p0.x(), p0.y()}, cfg);
}

Trajectory integrate_hierarchy(const FormationSpec& spec, const LayerAssignment& assignment,
                               const CollectiveState& state0, const IntegratorConfig& cfg) {
  const int n = spec.agent_count;
  if (assignment.agent_count() != n || static_cast<int>(state0.size()) != n) {
    throw std::invalid_argument("state, spec and layer assignment disagree on the agent count");
  }
  if (!is_finite(state0)) {
    throw std::invalid_argument("initial state must be finite");
  }
  auto unpack = [n](const FlatState& s) {
    CollectiveState st(static_cast<std::size_t>(n));
    for (std::size_t a = 0; a < st.size(); ++a) {
      st[a] = Position(s[2 * a], s[2 * a + 1]);
    }
    return st;
  };
  Field field = [&](const FlatState& s, FlatState& v) {
    const CollectiveState st = unpack(s);
    for (AgentIndex a = 1; a <= n; ++a) {
      const Position u = agent_control(a, st, assignment);
      v[2 * static_cast<std::size_t>(a - 1)] = u.x();
      v[2 * static_cast<std::size_t>(a - 1) + 1] = u.y();
    }
  };
  FlatState x0;
  x0.reserve(2 * state0.size());
  for (const auto& p : state0) {
    x0.push_back(p.x());
    x0.push_back(p.y());
  }
  return integrate_flow(field, unpack, std::move(x0), cfg);
}

std::vector<std::size_t> BasinMap::counts() const {
  std::vector<std::size_t> out(equilibria.size() + 1, 0);
  for (int label : labels) {
    ++out[label == kNonConvergent ? equilibria.size() : static_cast<std::size_t>(label)];
  }
  return out;
}

BasinMap basin_sample(const CanonicalTriangleParams& params, const GridSpec& grid, const IntegratorConfig& cfg,
                      const std::vector<EquilibriumRecord>& equilibria, unsigned threads) {
  params.validate();
  cfg.validate();
  if (equilibria.empty()) {
    throw std::invalid_argument("basin sampling needs at least one equilibrium to match against");
  }
  BasinMap map;
  map.grid = grid;
  map.equilibria = equilibria;
  map.nodes = grid.nodes();
  const std::size_t count = map.nodes.size();
  map.labels.assign(count, BasinMap::kNonConvergent);
  map.terminal.assign(count, Position::Zero());
  map.reasons.assign(count, TerminalReason::TimeLimit);
  map.final_velocity_norm.assign(count, 0.0);
  const double radius = kBasinMatchRadius * params.length_scale();

  IntegratorConfig node_cfg = cfg;
  node_cfg.sample_stride = std::numeric_limits<int>::max();

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < count; i = next++) {
      const Trajectory traj = integrate_follower(params, map.nodes[i], node_cfg);
      const Position end = traj.terminal_state()[2];
      map.terminal[i] = end;
      map.reasons[i] = traj.terminal_reason;
      map.final_velocity_norm[i] = traj.final_velocity_norm;
      if (traj.terminal_reason != TerminalReason::GradientStop) {
        continue;
      }
      double best = radius;
      for (std::size_t e = 0; e < equilibria.size(); ++e) {
        const double dist = (equilibria[e].position - end).norm();
        if (dist <= best) {
          best = dist;
          map.labels[i] = static_cast<int>(e);
        }
      }
    }
  };
  unsigned n_threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, std::max<std::size_t>(count, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& th : pool) {
    th.join();
  }
  return map;
}

LyapunovAudit lyapunov_audit(const Trajectory& traj, const LayerAssignment& assignment) {
  const int n = assignment.agent_count();
  LyapunovAudit audit;
  audit.initial.assign(static_cast<std::size_t>(n), 0.0);
  audit.max_increase.assign(static_cast<std::size_t>(n), 0.0);
  if (traj.states.empty()) {
    return audit;
  }
  auto potentials = [&](const CollectiveState& st) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (AgentIndex a = 1; a <= n; ++a) {
      v[static_cast<std::size_t>(a - 1)] = agent_potential(a, st, assignment);
    }
    return v;
  };
  std::vector<double> prev = potentials(traj.states.front());
  audit.initial = prev;
  double prev_total = 0.0;
  for (double v : prev) {
    prev_total += v;
  }
  audit.total_initial = prev_total;
  for (std::size_t s = 1; s < traj.states.size(); ++s) {
    const std::vector<double> cur = potentials(traj.states[s]);
    double total = 0.0;
    for (std::size_t a = 0; a < cur.size(); ++a) {
      audit.max_increase[a] = std::max(audit.max_increase[a], cur[a] - prev[a]);
      total += cur[a];
    }
    audit.total_max_increase = std::max(audit.total_max_increase, total - prev_total);
    prev = cur;
    prev_total = total;
  }
  for (std::size_t a = 0; a < audit.initial.size(); ++a) {
    if (audit.max_increase[a] > LyapunovAudit::kTolerance * audit.initial[a]) {
      audit.per_agent_nonincreasing = false;
      audit.rising_agents.push_back(static_cast<AgentIndex>(a + 1));
    }
  }
  audit.total_nonincreasing = audit.total_max_increase <= LyapunovAudit::kTolerance * audit.total_initial;
  return audit;
}

ConvergenceReport convergence_report(const Trajectory& traj, const FormationSpec& spec,
                                     const LayerAssignment& assignment, double tol) {
  ConvergenceReport report;
  report.membership = target_membership(traj.terminal_state(), spec, tol);
  report.audit = lyapunov_audit(traj, assignment);
  report.terminal_reason = traj.terminal_reason;
  return report;
}

void write_trajectory(std::ostream& os, const Trajectory& traj) {
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  os << std::setprecision(12);
  os << "# formation trajectory\n";
  os << "# agents: " << n << "\n";
  os << "# samples: " << traj.times.size() << "\n";
  os << "# terminal: " << to_string(traj.terminal_reason) << "\n";
  os << "t";
  for (std::size_t a = 1; a <= n; ++a) {
    os << ",x" << a << ",y" << a;
  }
  os << "\n";
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    os << traj.times[s];
    for (const auto& p : traj.states[s]) {
      os << "," << p.x() << "," << p.y();
    }
    os << "\n";
  }
}

void write_basin(std::ostream& os, const BasinMap& map) {
  os << std::setprecision(12);
  os << "# formation basin map\n";
  os << "# grid: x " << map.grid.x_min << " " << map.grid.x_max << " y " << map.grid.y_min << " "
     << map.grid.y_max << " resolution " << map.grid.resolution << "\n";
  for (std::size_t e = 0; e < map.equilibria.size(); ++e) {
    os << "# equilibrium " << e << ": " << describe(map.equilibria[e]) << "\n";
  }
  os << "# label -1: non-convergent\n";
  os << "x0,y0,label,x_end,y_end,terminal\n";
  for (std::size_t i = 0; i < map.nodes.size(); ++i) {
    os << map.nodes[i].x() << "," << map.nodes[i].y() << "," << map.labels[i] << "," << map.terminal[i].x()
       << "," << map.terminal[i].y() << "," << to_string(map.reasons[i]) << "\n";
  }
}

}  // namespace formation
