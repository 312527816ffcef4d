#include "elastica/straighten.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "elastica/error.hpp"

namespace elastica::straighten {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

void check_angle(double theta, const char* what) {
  if (!std::isfinite(theta) || theta == 0.0 || std::abs(theta) >= kPi) {
    std::ostringstream os;
    os << what << " must lie in (-pi, pi) without 0, got " << theta;
    throw DomainError(os.str());
  }
}

int grid_size(int base, double length, double epsilon, double points_per_eps) {
  const double want = std::ceil(points_per_eps * length / epsilon);
  if (!(want < 5e6)) throw DomainError("straighten: boundary layer too thin for the grid");
  return std::max(base, static_cast<int>(want));
}

}  // namespace

void validate(const StraighteningCase& c) {
  if (!(c.L > 0) || !(c.ell > 0) || !(c.ell < c.L)) {
    throw DomainError("straighten: need 0 < ell < L");
  }
  check_angle(c.theta0, "theta0");
  check_angle(c.theta1, "theta1");
}

double length_slope(double theta0, double theta1) {
  const double a = std::sin(theta0 / 4), b = std::sin(theta1 / 4);
  return 4 * kSqrt2 * (a * a + b * b);
}

double epsilon_scale(const StraighteningCase& c) {
  validate(c);
  return (c.L - c.ell) / length_slope(c.theta0, c.theta1);
}

double phi(double u) { return 4 * std::atan(std::exp(-u / kSqrt2)); }

double profile_shift(double theta0) {
  check_angle(theta0, "theta0");
  return -kSqrt2 * std::log(std::tan(std::abs(theta0) / 4));
}

double profile_angle(double theta0, double s) {
  return std::copysign(phi(s + profile_shift(theta0)), theta0);
}

families::PlacedCurve borderline_profile(double theta0) {
  const double u0 = profile_shift(theta0);
  families::PlacedCurve c;
  c.family = families::FamilyKind::borderline();
  c.placement.scale = kSqrt2;
  c.placement.shift = u0;
  // Base: (2 tanh t - t, -2 sech t). Mirror x so the tangent tends to (1, 0);
  // for negative angles also mirror y.
  families::Isometry iso;
  iso.A = theta0 > 0 ? Eigen::Matrix2d(Eigen::Vector2d(-1, 1).asDiagonal())
                     : Eigen::Matrix2d(-Eigen::Matrix2d::Identity());
  c.placement.general_isometry = iso;
  c.s_min = 0.0;
  c.s_max = std::numeric_limits<double>::infinity();
  const auto start = families::eval(c, 0.0);
  c.placement.general_isometry->b = -start.position;
  return c;
}

std::string_view to_string(Shape shape) {
  switch (shape) {
    case Shape::MonotoneAngle: return "monotone-angle";
    case Shape::MonotoneCurvatureOneInflection: return "monotone-curvature-one-inflection";
    case Shape::Other: return "other";
  }
  return "other";
}

Shape classify(const solver::DiscreteCurve& curve, double rel_tol) {
  const int N = curve.segments();
  std::vector<double> d(N);
  double dmax = 0.0;
  for (int i = 0; i < N; ++i) {
    d[i] = curve.theta[i + 1] - curve.theta[i];
    dmax = std::max(dmax, std::abs(d[i]));
  }
  if (dmax == 0.0) return Shape::Other;
  const double tol = rel_tol * dmax;

  // Angle: every increment of one sign.
  bool up = true, down = true;
  for (double v : d) {
    if (v < -tol) up = false;
    if (v > tol) down = false;
  }
  if (up != down) return Shape::MonotoneAngle;

  // Curvature per segment is d_i / h; compare increments in the same units.
  bool inc = true, dec = true;
  double ddmax = 0.0;
  for (int i = 0; i + 1 < N; ++i) ddmax = std::max(ddmax, std::abs(d[i + 1] - d[i]));
  const double dtol = rel_tol * std::max(ddmax, tol);
  for (int i = 0; i + 1 < N; ++i) {
    const double dd = d[i + 1] - d[i];
    if (dd < -dtol) inc = false;
    if (dd > dtol) dec = false;
  }
  int changes = 0, last = 0;
  for (double v : d) {
    if (std::abs(v) <= tol) continue;
    const int s = v > 0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  if (inc != dec && changes == 1) return Shape::MonotoneCurvatureOneInflection;
  return Shape::Other;
}

StraightenResult straighten_solve(const StraighteningCase& c, const solver::SolverConfig& config,
                                  double points_per_eps) {
  StraightenResult out;
  out.epsilon = epsilon_scale(c);
  solver::ClampedProblem p;
  p.ell_x = c.ell;
  p.theta0 = c.theta0;
  p.theta1 = c.theta1;
  p.mode = solver::FixedLength{c.L};
  solver::SolverConfig cfg = config;
  cfg.N = grid_size(config.N, c.L, out.epsilon, points_per_eps);
  out.N = cfg.N;
  out.report = solver::solve(p, cfg);
  if (!out.report.converged) {
    std::ostringstream os;
    os << "straighten: solver did not converge (N = " << cfg.N << ", gradient "
       << out.report.gradient_norm << ", closure " << out.report.constraint_residual << ")";
    throw NonConvergenceError(os.str());
  }
  out.shape = classify(out.report.curve);
  return out;
}

double rescaled_error(const solver::DiscreteCurve& curve, double epsilon, double theta0,
                      double window) {
  if (!(epsilon > 0) || !(window >= 0)) throw DomainError("rescaled_error: bad epsilon or window");
  const auto profile = borderline_profile(theta0);
  const auto pts = solver::positions(curve);
  double err = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double s = curve.h * static_cast<double>(i) / epsilon;
    if (s > window * (1 + 1e-12)) break;
    err = std::max(err, (pts[i] / epsilon - families::eval(profile, s).position).norm());
  }
  return err;
}

std::vector<RescaledRow> rescaled_convergence_check(double theta0, double theta1, double L,
                                                    const std::vector<double>& gaps,
                                                    double window,
                                                    const solver::SolverConfig& config,
                                                    double points_per_eps) {
  std::vector<RescaledRow> rows;
  for (double gap : gaps) {
    const StraighteningCase c{L, L * (1 - gap), theta0, theta1};
    const auto r = straighten_solve(c, config, points_per_eps);
    rows.push_back({gap, r.epsilon, rescaled_error(r.report.curve, r.epsilon, theta0, window)});
  }
  return rows;
}

LengthScan length_map_scan(double theta0, double theta1, double ell,
                           const std::vector<double>& eps_grid,
                           const solver::SolverConfig& config, double points_per_eps) {
  check_angle(theta0, "theta0");
  check_angle(theta1, "theta1");
  if (!(ell > 0)) throw DomainError("length_map_scan: ell must be positive");
  if (eps_grid.empty()) throw DomainError("length_map_scan: empty grid");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0)) throw DomainError("length_map_scan: epsilon must be positive");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) {
      throw DomainError("length_map_scan: epsilon grid must be strictly decreasing");
    }
  }
  LengthScan scan;
  scan.limit = length_slope(theta0, theta1);
  const double longest = ell + 2 * scan.limit * eps_grid.front();
  scan.N = grid_size(config.N, longest, eps_grid.back(), points_per_eps);
  solver::SolverConfig cfg = config;
  cfg.N = scan.N;

  solver::ClampedProblem p;
  p.ell_x = ell;
  p.theta0 = theta0;
  p.theta1 = theta1;
  std::optional<solver::DiscreteCurve> warm;
  for (double eps : eps_grid) {
    p.mode = solver::Penalised{1.0 / (eps * eps)};
    const auto r = solver::solve(p, cfg, warm);
    if (!r.converged) {
      std::ostringstream os;
      os << "length_map_scan: no convergence at eps = " << eps;
      throw NonConvergenceError(os.str());
    }
    const double len = r.curve.length();
    scan.rows.push_back({eps, len, (len - ell) / eps, r.energy, r.converged});
    warm = r.curve;
  }
  scan.strictly_increasing = true;
  for (std::size_t i = 1; i < scan.rows.size(); ++i) {
    // Grid decreases, so lengths must decrease too.
    if (!(scan.rows[i - 1].length - scan.rows[i].length > 1e-8 * ell)) {
      scan.strictly_increasing = false;
    }
  }
  return scan;
}

}  // namespace elastica::straighten
