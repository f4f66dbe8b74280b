#include "commands.hpp"

#include "formation/equilibria.hpp"
#include "formation/scenario.hpp"
#include "formation/simulator.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace formation::cli {
namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegratorFlags {
  std::optional<std::string> method;
  std::optional<double> step;
  std::optional<double> t_max;
  std::optional<double> gradient_stop;
  std::optional<int> stride;

  void attach(CLI::App* cmd) {
    cmd->add_option("--method", method, "Integrator: rk4 or rk45");
    cmd->add_option("--step", step, "Fixed (rk4) or initial (rk45) step");
    cmd->add_option("--t-max", t_max, "Integration horizon");
    cmd->add_option("--gradient-stop", gradient_stop, "Stop once the velocity norm drops below this");
    cmd->add_option("--stride", stride, "Store every n-th step");
  }

  IntegratorConfig apply(IntegratorConfig cfg) const {
    if (method) cfg.method = parse_integration_method(*method);
    if (step) cfg.step = *step;
    if (t_max) cfg.t_max = *t_max;
    if (gradient_stop) cfg.gradient_stop = *gradient_stop;
    if (stride) cfg.sample_stride = *stride;
    cfg.validate();
    return cfg;
  }
};

std::string fmt_position(const Position& p) {
  std::ostringstream os;
  os << std::setprecision(12) << "[" << p.x() << ", " << p.y() << "]";
  return os.str();
}

void print_equilibria(std::ostream& out, const std::vector<EquilibriumRecord>& records) {
  out << "equilibria: " << records.size() << "\n";
  for (const auto& r : records) {
    out << "  " << describe(r) << "\n";
  }
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const Scenario scenario = load_scenario(path);
  const ValidationReport report = validate_spec(scenario.formation);
  out << "agents: " << scenario.formation.agent_count << ", edges: " << scenario.formation.edges.size()
      << ", cliques: " << scenario.formation.cliques.size() << "\n";
  if (report.valid()) {
    out << "valid: yes\n";
    return kOk;
  }
  out << "valid: no (" << report.violations.size() << " violations)\n";
  for (const auto& v : report.violations) {
    out << "  " << to_string(v.kind) << ": " << v.message << "\n";
  }
  return kFailure;
}

void analyze_isosceles(const CanonicalTriangleParams& params, std::ostream& out) {
  const CaseReport report = case_table(params);
  out << "K_* = " << report.k_star << "\n";
  if (report.k_zero) {
    out << "K_0 = " << *report.k_zero << "\n";
  } else {
    out << "K_0: absent (b^2/c^2 < 2)\n";
  }
  print_equilibria(out, report.equilibria);
  const double K = params.gain;
  std::string relation;
  if (std::abs(K - report.k_star) <= 1e-12 * report.k_star) {
    relation = "K = K_* = ";
  } else if (K > report.k_star) {
    relation = "K > K_* = ";
  } else {
    relation = "K < K_* = ";
  }
  std::ostringstream threshold;
  threshold << std::setprecision(12) << relation << report.k_star;
  out << "globally convergent: " << (report.globally_convergent ? "yes" : "no") << " (" << threshold.str()
      << ")\n";
  out << "almost globally convergent: " << (report.almost_globally_convergent ? "yes" : "no") << "\n";
  for (const auto& r : report.equilibria) {
    if (r.stability == Stability::Degenerate) {
      out << "boundary: " << to_string(r.label) << " " << fmt_position(r.position) << " is Degenerate ("
          << threshold.str() << ")\n";
    }
  }
}

void analyze_large_gain(const CanonicalTriangleParams& params, bool has_gain, std::ostream& out) {
  const double ratio = params.a * params.a / (params.c * params.c);
  out << "large-K limit equilibria:\n";
  for (const auto& r : enumerate_general_large_k(params.a, params.b, params.c)) {
    out << "  " << to_string(r.label) << " " << fmt_position(r.position) << " " << to_string(r.stability)
        << " (x-curvature " << r.eigenvalues[0] << ")\n";
  }
  if (std::abs(ratio - 8.0) <= 1e-12 * 8.0) {
    out << "a²/c² = " << ratio << " = 8: boundary, Degenerate double root at large K\n";
  } else if (ratio > 8.0) {
    out << "a²/c² = " << ratio << " > 8: incorrect stable equilibrium exists at large K\n";
  } else {
    out << "a²/c² = " << ratio << " < 8: globally convergent at large K\n";
  }
  if (has_gain) {
    const auto numeric = refine_numeric(params, default_seeds(params));
    out << "numeric equilibria at K = " << params.gain << ": " << numeric.equilibria.size() << "\n";
    for (const auto& r : numeric.equilibria) {
      out << "  " << describe(r) << "\n";
    }
    const auto stable = std::count_if(numeric.equilibria.begin(), numeric.equilibria.end(),
                                      [](const EquilibriumRecord& r) { return r.stability == Stability::Stable; });
    out << "stable equilibria at K = " << params.gain << ": " << stable << "\n";
  }
}

int cmd_analyze(const std::optional<double>& a, double b, double c, const std::optional<double>& K,
                std::ostream& out) {
  if (!(b > 0.0) || !(c > 0.0) || (K && !(*K > 0.0))) {
    throw UsageError("analyze needs positive --b, --c and --K");
  }
  CanonicalTriangleParams params{a.value_or(0.0), b, c, K.value_or(1.0)};
  params.validate();
  out << "parameters: a = " << params.a << ", b = " << b << ", c = " << c;
  if (K) {
    out << ", K = " << *K;
  }
  out << "\n";
  if (K && params.a == 0.0) {
    analyze_isosceles(params, out);
  } else {
    analyze_large_gain(params, K.has_value(), out);
  }
  return kOk;
}

int cmd_simulate(const std::string& path, const std::optional<std::string>& out_path, const IntegratorFlags& flags,
                 double tol, std::ostream& out, std::ostream& err) {
  const Scenario scenario = load_scenario(path);
  const ValidationReport report = validate_spec(scenario.formation);
  if (!report.valid()) {
    err << path << ": invalid formation\n";
    for (const auto& v : report.violations) {
      err << "  " << to_string(v.kind) << ": " << v.message << "\n";
    }
    return kUsage;
  }
  if (!scenario.initial) {
    err << path << ": simulate needs an 'initial' state\n";
    return kUsage;
  }
  const auto [root_a, root_b] = scenario.layer_root();
  const LayerAssignment layers = extract_layers(scenario.formation, root_a, root_b);
  const IntegratorConfig cfg = flags.apply(scenario.integrator.apply(IntegratorConfig{}));
  const Trajectory traj = integrate_hierarchy(scenario.formation, layers, *scenario.initial, cfg);

  if (out_path) {
    std::ofstream file(*out_path);
    if (!file) {
      err << *out_path << ": cannot write trajectory\n";
      return kUsage;
    }
    write_trajectory(file, traj);
  }

  const ConvergenceReport rep = convergence_report(traj, scenario.formation, layers, tol);
  out << "terminal: " << to_string(traj.terminal_reason) << " at t = " << traj.times.back() << " after "
      << traj.steps << " steps\n";
  out << "final velocity norm: " << traj.final_velocity_norm << "\n";
  for (const auto& e : rep.membership.edges) {
    out << "  edge (" << e.edge.i << "," << e.edge.j << ") distance " << e.actual << " residual " << e.residual
        << "\n";
  }
  for (const auto& c : rep.membership.cliques) {
    out << "  clique (" << c.clique.i << "," << c.clique.j << "," << c.clique.k << ") signed area " << c.actual
        << " residual " << c.residual << (std::abs(c.residual) > tol ? "  <-- violated" : "") << "\n";
  }
  out << "max residual: " << rep.membership.max_residual << "\n";
  out << "total potential nonincreasing: " << (rep.audit.total_nonincreasing ? "yes" : "no")
      << " (largest step rise " << rep.audit.total_max_increase << ")\n";
  out << "per-agent potentials nonincreasing: " << (rep.audit.per_agent_nonincreasing ? "yes" : "no");
  if (!rep.audit.rising_agents.empty()) {
    out << " (rising:";
    for (AgentIndex a : rep.audit.rising_agents) {
      out << " " << a;
    }
    out << ")";
  }
  out << "\n";
  out << "target formation reached: " << (rep.membership.member ? "yes" : "no") << " (tolerance " << tol << ")\n";
  return rep.membership.member ? kOk : kFailure;
}

int cmd_basin(const CanonicalTriangleParams& params, const std::vector<double>& grid, int resolution,
              const std::optional<std::string>& out_path, const IntegratorFlags& flags, unsigned threads,
              std::ostream& out, std::ostream& err) {
  if (!(params.b > 0.0) || !(params.c > 0.0) || !(params.gain > 0.0)) {
    throw UsageError("basin needs positive --b, --c and --K");
  }
  if (grid.size() != 4 || !(grid[0] <= grid[1]) || !(grid[2] <= grid[3])) {
    throw UsageError("--grid expects x_min x_max y_min y_max");
  }
  if (resolution < 1) {
    throw UsageError("--res must be at least 1");
  }
  const IntegratorConfig cfg = flags.apply(IntegratorConfig{});
  const std::vector<EquilibriumRecord> equilibria =
      params.a == 0.0 ? enumerate_isosceles(params) : refine_numeric(params, default_seeds(params)).equilibria;
  const GridSpec spec{grid[0], grid[1], grid[2], grid[3], resolution};
  const BasinMap map = basin_sample(params, spec, cfg, equilibria, threads);

  if (out_path) {
    std::ofstream file(*out_path);
    if (!file) {
      err << *out_path << ": cannot write basin map\n";
      return kUsage;
    }
    write_basin(file, map);
  }
  const auto counts = map.counts();
  out << "nodes: " << map.nodes.size() << "\n";
  for (std::size_t e = 0; e < map.equilibria.size(); ++e) {
    const auto& r = map.equilibria[e];
    out << "label " << e << " " << to_string(r.label) << " " << fmt_position(r.position) << " "
        << to_string(r.stability) << ": " << counts[e] << "\n";
  }
  out << "non-convergent: " << counts.back() << "\n";
  return kOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Signed-area formation control: analysis, simulation and basin sampling"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario's formation");
  validate->add_option("scenario", validate_path, "Scenario file")->required();

  std::optional<double> an_a;
  double an_b = 0.0;
  double an_c = 0.0;
  std::optional<double> an_k;
  auto* analyze = app.add_subcommand("analyze", "Equilibria and gain thresholds of one follower");
  analyze->add_option("--a", an_a, "Target x (omit or 0 for isosceles)");
  analyze->add_option("--b", an_b, "Target y")->required();
  analyze->add_option("--c", an_c, "Half the leader distance")->required();
  analyze->add_option("--K", an_k, "Signed-area gain");

  std::string sim_path;
  std::optional<std::string> sim_out;
  double sim_tol = 1e-3;
  IntegratorFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "Integrate a scenario and report convergence");
  simulate->add_option("scenario", sim_path, "Scenario file")->required();
  simulate->add_option("--out", sim_out, "Trajectory CSV output");
  simulate->add_option("--tol", sim_tol, "Residual tolerance for the target check");
  sim_flags.attach(simulate);

  CanonicalTriangleParams basin_params{0.0, 0.0, 0.0, 0.0};
  std::vector<double> basin_grid;
  int basin_res = 21;
  unsigned basin_threads = 0;
  std::optional<std::string> basin_out;
  IntegratorFlags basin_flags;
  auto* basin = app.add_subcommand("basin", "Sample the basin of attraction of one follower");
  basin->add_option("--a", basin_params.a, "Target x");
  basin->add_option("--b", basin_params.b, "Target y")->required();
  basin->add_option("--c", basin_params.c, "Half the leader distance")->required();
  basin->add_option("--K", basin_params.gain, "Signed-area gain")->required();
  basin->add_option("--grid", basin_grid, "x_min x_max y_min y_max")->expected(4)->required();
  basin->add_option("--res", basin_res, "Nodes per axis");
  basin->add_option("--out", basin_out, "Basin CSV output");
  basin->add_option("--threads", basin_threads, "Worker threads (0 = hardware)");
  basin_flags.attach(basin);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  out << std::setprecision(12);
  try {
    if (*validate) {
      return cmd_validate(validate_path, out);
    }
    if (*analyze) {
      return cmd_analyze(an_a, an_b, an_c, an_k, out);
    }
    if (*simulate) {
      return cmd_simulate(sim_path, sim_out, sim_flags, sim_tol, out, err);
    }
    if (*basin) {
      return cmd_basin(basin_params, basin_grid, basin_res, basin_out, basin_flags, basin_threads, out, err);
    }
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotTriangulatedFromRoot& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace formation::cli
