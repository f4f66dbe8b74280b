#include "formation/equilibria.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace formation {
namespace {

void require_positive_bc(double b, double c) {
  if (!(b > 0.0) || !(c > 0.0) || !std::isfinite(b) || !std::isfinite(c)) {
    throw InvalidParams("b and c must be positive and finite");
  }
}

bool lexicographic_less(const Position& p, const Position& q) {
  return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
}

}  // namespace

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "Stable";
    case Stability::Saddle: return "Saddle";
    case Stability::Unstable: return "Unstable";
    case Stability::Degenerate: return "Degenerate";
  }
  return "?";
}

const char* to_string(EquilibriumLabel l) {
  switch (l) {
    case EquilibriumLabel::Pa: return "Pa";
    case EquilibriumLabel::Pb: return "Pb";
    case EquilibriumLabel::Pc: return "Pc";
    case EquilibriumLabel::Pd: return "Pd";
    case EquilibriumLabel::Pe: return "Pe";
    case EquilibriumLabel::Numeric: return "Numeric";
  }
  return "?";
}

Classification classify(const Matrix2& hessian) {
  const Matrix2 sym = 0.5 * (hessian + hessian.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix2> solver(sym, Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues()(0);
  const double hi = solver.eigenvalues()(1);
  const double tol = kDegenerateTolerance * std::max(std::abs(lo), std::abs(hi));
  Classification out;
  out.eigenvalues = {lo, hi};
  if (std::abs(lo) <= tol || std::abs(hi) <= tol) {
    out.stability = Stability::Degenerate;
  } else if (lo > 0.0) {
    out.stability = Stability::Stable;
  } else if (hi < 0.0) {
    out.stability = Stability::Unstable;
  } else {
    out.stability = Stability::Saddle;
  }
  return out;
}

EquilibriumRecord make_record(const CanonicalTriangleParams& params, const Position& position,
                              EquilibriumLabel label) {
  EquilibriumRecord r;
  r.position = position;
  r.hessian = canonical_hessian(params, position);
  const auto cls = classify(r.hessian);
  r.eigenvalues = cls.eigenvalues;
  r.stability = cls.stability;
  r.label = label;
  return r;
}

double k_star(double b, double c) {
  require_positive_bc(b, c);
  return b * b / (2.0 * c * c);
}

std::optional<double> k_zero(double b, double c) {
  require_positive_bc(b, c);
  const double h = b / c;
  double excess = h * h - 2.0;
  if (excess < -1e-12) {
    return std::nullopt;
  }
  excess = std::max(excess, 0.0);
  return 2.0 * h * std::sqrt(excess) - 2.0 * excess;
}

std::vector<EquilibriumRecord> enumerate_isosceles(const CanonicalTriangleParams& params) {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw InvalidParams(e.what());
  }
  if (params.a != 0.0) {
    throw InvalidParams("closed-form enumeration needs an isosceles target (a = 0)");
  }
  const double b = params.b;
  const double c = params.c;
  const double K = params.gain;
  const double root_tol = 1e-12 * b * b;

  std::vector<EquilibriumRecord> out;
  out.push_back(make_record(params, {0.0, b}, EquilibriumLabel::Pa));

  // On the axis: (2y^2 + 2by + Kc^2)(y - b) = 0.
  const double disc = b * b - 2.0 * K * c * c;
  if (std::abs(disc) <= root_tol) {
    auto r = make_record(params, {0.0, -0.5 * b}, EquilibriumLabel::Pb);
    r.stability = Stability::Degenerate;
    out.push_back(r);
  } else if (disc > 0.0) {
    const double s = std::sqrt(disc);
    out.push_back(make_record(params, {0.0, 0.5 * (-b + s)}, EquilibriumLabel::Pb));
    out.push_back(make_record(params, {0.0, 0.5 * (-b - s)}, EquilibriumLabel::Pc));
  }

  // Off the axis: x^2 + y^2 = b^2 - 2c^2 and y = Kb / (K - 4). No solution at K = 4.
  if (K < 4.0 && b * b > 2.0 * c * c) {
    const double y = K * b / (K - 4.0);
    const double x_sq = b * b - 2.0 * c * c - y * y;
    if (x_sq > root_tol) {
      const double x = std::sqrt(x_sq);
      out.push_back(make_record(params, {x, y}, EquilibriumLabel::Pd));
      out.push_back(make_record(params, {-x, y}, EquilibriumLabel::Pe));
    }
  }
  return out;
}

CaseReport case_table(const CanonicalTriangleParams& params) {
  CaseReport report;
  report.params = params;
  report.equilibria = enumerate_isosceles(params);
  report.k_star = k_star(params.b, params.c);
  report.k_zero = k_zero(params.b, params.c);
  const auto& eq = report.equilibria;
  report.globally_convergent = eq.size() == 1 && eq.front().label == EquilibriumLabel::Pa &&
                               eq.front().stability == Stability::Stable;
  report.almost_globally_convergent = std::all_of(eq.begin(), eq.end(), [](const EquilibriumRecord& r) {
    return r.label == EquilibriumLabel::Pa || r.stability == Stability::Saddle ||
           r.stability == Stability::Unstable;
  });
  return report;
}

std::vector<EquilibriumRecord> enumerate_general_large_k(double a, double b, double c) {
  require_positive_bc(b, c);
  if (!std::isfinite(a)) {
    throw InvalidParams("a must be finite");
  }
  // Gain-free Hessian; the area term only adds K c^2 to the y-y entry.
  const CanonicalTriangleParams shape{a, b, c, 0.0};
  auto limit_record = [&](double x, EquilibriumLabel label) {
    EquilibriumRecord r;
    r.position = {x, b};
    r.hessian = canonical_hessian(shape, r.position);
    const double curvature = r.hessian(0, 0);
    const double tol = kDegenerateTolerance * std::max(r.hessian.cwiseAbs().maxCoeff(), c * c);
    r.eigenvalues = {curvature, std::numeric_limits<double>::infinity()};
    if (std::abs(curvature) <= tol) {
      r.stability = Stability::Degenerate;
    } else {
      r.stability = curvature > 0.0 ? Stability::Stable : Stability::Saddle;
    }
    r.label = label;
    return r;
  };

  std::vector<EquilibriumRecord> out;
  out.push_back(limit_record(a, EquilibriumLabel::Pa));
  // On y = b: (x - a)(x^2 + a x + 2c^2) = 0.
  const double disc = a * a - 8.0 * c * c;
  const double root_tol = 1e-12 * std::max(a * a, c * c);
  if (std::abs(disc) <= root_tol) {
    auto r = limit_record(-0.5 * a, EquilibriumLabel::Pb);
    r.stability = Stability::Degenerate;
    out.push_back(r);
  } else if (disc > 0.0) {
    const double s = std::sqrt(disc);
    out.push_back(limit_record(0.5 * (-a + s), EquilibriumLabel::Pb));
    out.push_back(limit_record(0.5 * (-a - s), EquilibriumLabel::Pc));
  }
  return out;
}

double gradient_scale(const CanonicalTriangleParams& params) {
  const double L = params.length_scale();
  return L * L * L * (1.0 + params.gain);
}

NumericEquilibria refine_numeric(const CanonicalTriangleParams& params, const std::vector<Position>& seeds,
                                 const NewtonOptions& options) {
  params.validate();
  const double g_tol = options.gradient_tolerance * gradient_scale(params);
  const double merge = options.merge_radius * params.length_scale();

  NumericEquilibria result;
  std::vector<Position> roots;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    Position p = seeds[s];
    Position g = canonical_gradient(params, p);
    double g_norm = g.norm();
    bool converged = g_norm < g_tol;
    for (int it = 0; it < options.max_iterations && !converged; ++it) {
      const Eigen::FullPivLU<Matrix2> lu(canonical_hessian(params, p));
      if (!lu.isInvertible()) {
        break;
      }
      const Position step = lu.solve(g);
      double scale = 1.0;
      bool improved = false;
      for (int h = 0; h <= options.max_halvings; ++h, scale *= 0.5) {
        const Position trial = p - scale * step;
        const Position g_trial = canonical_gradient(params, trial);
        if (g_trial.norm() < g_norm) {
          p = trial;
          g = g_trial;
          g_norm = g_trial.norm();
          improved = true;
          break;
        }
      }
      if (!improved) {
        break;
      }
      converged = g_norm < g_tol;
    }
    if (!converged || !is_finite(p)) {
      result.nonconverged_seeds.push_back(s);
      continue;
    }
    // Polish: full Newton steps while they still reduce the residual.
    for (int polish = 0; polish < 3; ++polish) {
      const Eigen::FullPivLU<Matrix2> lu(canonical_hessian(params, p));
      if (!lu.isInvertible()) {
        break;
      }
      const Position trial = p - lu.solve(g);
      const Position g_trial = canonical_gradient(params, trial);
      if (!(g_trial.norm() < g_norm)) {
        break;
      }
      p = trial;
      g = g_trial;
      g_norm = g_trial.norm();
    }
    roots.push_back(p);
  }

  std::sort(roots.begin(), roots.end(), lexicographic_less);
  std::vector<Position> unique;
  for (const auto& r : roots) {
    const bool seen = std::any_of(unique.begin(), unique.end(), [&](const Position& u) { return (u - r).norm() <= merge; });
    if (!seen) {
      unique.push_back(r);
    }
  }
  for (const auto& r : unique) {
    result.equilibria.push_back(make_record(params, r, EquilibriumLabel::Numeric));
  }
  return result;
}

std::vector<Position> seed_grid(double x_min, double x_max, double y_min, double y_max, int resolution) {
  if (resolution < 1) {
    throw std::invalid_argument("grid resolution must be at least 1");
  }
  std::vector<Position> out;
  out.reserve(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution));
  auto coord = [resolution](double lo, double hi, int idx) {
    return resolution == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * idx / (resolution - 1);
  };
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      out.emplace_back(coord(x_min, x_max, ix), coord(y_min, y_max, iy));
    }
  }
  return out;
}

std::vector<Position> default_seeds(const CanonicalTriangleParams& params, int resolution) {
  const double L = 2.0 * params.length_scale();
  return seed_grid(-L, L, -L, L, resolution);
}

std::string describe(const EquilibriumRecord& record) {
  std::ostringstream os;
  os << std::setprecision(12) << to_string(record.label) << " [" << record.position.x() << ", "
     << record.position.y() << "] " << to_string(record.stability) << " eigenvalues (" << record.eigenvalues[0]
     << ", " << record.eigenvalues[1] << ")";
  return os.str();
}

}  // namespace formation
