#pragma once

#include <vector>

#include "elastica/families.hpp"
#include "elastica/solver.hpp"

// Clamped problems with chord ell close to the length L: boundary layers of
// width eps around the ends, each converging after rescaling to a borderline
// elastica.

namespace elastica::straighten {

struct StraighteningCase {
  double L = 1.0;
  double ell = 0.99;
  double theta0 = 0.0;
  double theta1 = 0.0;
};

// 0 < ell < L and theta0, theta1 in (-pi, pi) \ {0}; DomainError otherwise.
void validate(const StraighteningCase& c);

// (L - ell) / (4 sqrt2 (sin^2(theta0/4) + sin^2(theta1/4)))
double epsilon_scale(const StraighteningCase& c);

// 4 sqrt2 (sin^2(theta0/4) + sin^2(theta1/4)), the limit of (L(eps) - ell)/eps.
double length_slope(double theta0, double theta1);

// phi(u) = 4 atan(exp(-u / sqrt2)).
double phi(double u);
// u0 = -sqrt2 log(tan(|theta0|/4)), the positive root of phi(u0) = |theta0|.
double profile_shift(double theta0);
// sgn(theta0) phi(s + u0): the tangent angle of the profile.
double profile_angle(double theta0, double s);

// Borderline elastica starting at the origin with angle theta0 and tangent
// tending to (1, 0): sqrt2-scaled borderline curve with shift u0 and an
// isometry. Angles from families::eval agree with profile_angle mod 2 pi.
// Multiplier 1. Throws DomainError for theta0 = 0 or |theta0| >= pi.
families::PlacedCurve borderline_profile(double theta0);

enum class Shape { MonotoneAngle, MonotoneCurvatureOneInflection, Other };
std::string_view to_string(Shape shape);

// Monotonicity is tested up to rel_tol * max|.|: in the flat middle of a
// straightening minimiser the curvature sits below round-off.
Shape classify(const solver::DiscreteCurve& curve, double rel_tol = 1e-6);

struct StraightenResult {
  solver::SolveReport report;
  Shape shape = Shape::Other;
  double epsilon = 0.0;
  int N = 0;  // grid actually used
};

// Fixed-length clamped solve with ell = (ell, 0). The grid is refined to at
// least points_per_eps segments per boundary-layer width. Throws
// NonConvergenceError when the solver does not converge.
StraightenResult straighten_solve(const StraighteningCase& c, const solver::SolverConfig& config,
                                  double points_per_eps = 40.0);

struct RescaledRow {
  double gap = 0.0;  // (L - ell) / L
  double epsilon = 0.0;
  double sup_error = 0.0;  // rescaled units, over s in [0, window]
};

// gamma_hat(s) = gamma(eps s) / eps against borderline_profile(theta0) on
// [0, window], one row per relative gap.
std::vector<RescaledRow> rescaled_convergence_check(double theta0, double theta1, double L,
                                                    const std::vector<double>& gaps,
                                                    double window,
                                                    const solver::SolverConfig& config,
                                                    double points_per_eps = 40.0);

// Sup distance between the rescaled discrete curve and the profile on
// [0, window]; exposed for direct use on existing solves.
double rescaled_error(const solver::DiscreteCurve& curve, double epsilon, double theta0,
                      double window);

struct ScanRow {
  double epsilon = 0.0;
  double length = 0.0;
  double ratio = 0.0;  // (length - ell) / epsilon
  double energy = 0.0;
  bool converged = false;
};

struct LengthScan {
  std::vector<ScanRow> rows;  // in grid order
  double limit = 0.0;         // length_slope(theta0, theta1)
  bool strictly_increasing = false;  // length increases with epsilon, margin 1e-8 ell
  int N = 0;
};

// Penalised solves with lambda = 1/eps^2, warm-started along the grid. The
// grid must be strictly decreasing. Throws NonConvergenceError on the first
// failed solve.
LengthScan length_map_scan(double theta0, double theta1, double ell,
                           const std::vector<double>& eps_grid,
                           const solver::SolverConfig& config, double points_per_eps = 40.0);

}  // namespace elastica::straighten
