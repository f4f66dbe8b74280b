// Equilibria of the single-follower problem with both leaders pinned.
//
// The isosceles case (a = 0) is enumerated in closed form for every gain.
// For a general target only the large-gain limit has a closed form; finite
// gains go through the damped Newton search in refine_numeric, which also
// serves as an independent check of the closed forms.

#pragma once

#include "formation/potential.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace formation {

enum class Stability { Stable, Saddle, Unstable, Degenerate };
enum class EquilibriumLabel { Pa, Pb, Pc, Pd, Pe, Numeric };

const char* to_string(Stability s);
const char* to_string(EquilibriumLabel l);

/// Relative eigenvalue tolerance (times the spectral norm) for Degenerate.
inline constexpr double kDegenerateTolerance = 1e-9;

struct EquilibriumRecord {
  Position position = Position::Zero();
  Matrix2 hessian = Matrix2::Zero();
  std::array<double, 2> eigenvalues{};  // ascending
  Stability stability = Stability::Degenerate;
  EquilibriumLabel label = EquilibriumLabel::Numeric;
};

struct Classification {
  std::array<double, 2> eigenvalues{};
  Stability stability = Stability::Degenerate;
};

/// Eigenvalue signs of a symmetric 2x2 matrix.
Classification classify(const Matrix2& hessian);

/// Builds a record at `position` from the canonical Hessian.
EquilibriumRecord make_record(const CanonicalTriangleParams& params, const Position& position,
                              EquilibriumLabel label);

/// K_* = b^2 / (2 c^2). Above it the isosceles follower has one equilibrium.
double k_star(double b, double c);

/// Gain at which the off-axis pair P_d, P_e meets the y-axis. Absent when
/// b^2 / c^2 < 2.
std::optional<double> k_zero(double b, double c);

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every equilibrium of the isosceles follower (a = 0). Throws InvalidParams
/// when a != 0 or the parameters are not positive.
std::vector<EquilibriumRecord> enumerate_isosceles(const CanonicalTriangleParams& params);

struct CaseReport {
  CanonicalTriangleParams params;
  double k_star = 0.0;
  std::optional<double> k_zero;
  std::vector<EquilibriumRecord> equilibria;
  bool globally_convergent = false;
  bool almost_globally_convergent = false;
};

CaseReport case_table(const CanonicalTriangleParams& params);

/// Equilibria in the K -> infinity limit for target (a, b). Records carry the
/// gain-free part of the Hessian; the second eigenvalue is +infinity because
/// the area term stiffens the y direction without bound, so the class follows
/// the sign of the x-x curvature on the line y = b.
std::vector<EquilibriumRecord> enumerate_general_large_k(double a, double b, double c);

struct NumericEquilibria {
  std::vector<EquilibriumRecord> equilibria;  // sorted lexicographically
  std::vector<std::size_t> nonconverged_seeds;
};

struct NewtonOptions {
  int max_iterations = 200;
  int max_halvings = 50;
  double gradient_tolerance = 1e-12;  // relative to gradient_scale()
  double merge_radius = 1e-8;         // relative to the length scale
};

/// Magnitude of the gradient field on the scale of the problem.
double gradient_scale(const CanonicalTriangleParams& params);

/// Damped Newton on the follower gradient from every seed. Converged roots
/// are sorted, merged within the merge radius, labelled Numeric and
/// classified by the Hessian.
NumericEquilibria refine_numeric(const CanonicalTriangleParams& params, const std::vector<Position>& seeds,
                                 const NewtonOptions& options = {});

/// Regular seed lattice over [x_min, x_max] x [y_min, y_max], row-major in y.
std::vector<Position> seed_grid(double x_min, double x_max, double y_min, double y_max, int resolution);

/// Lattice over [-2L, 2L]^2 around the leaders, L the length scale.
std::vector<Position> default_seeds(const CanonicalTriangleParams& params, int resolution = 41);

std::string describe(const EquilibriumRecord& record);

}  // namespace formation
