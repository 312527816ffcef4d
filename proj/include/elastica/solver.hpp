#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "elastica/families.hpp"
#include "elastica/fbp.hpp"

// Discrete clamped elastica solver.
//
// A curve is a uniform arc-length grid of N segments with node angles
// theta_0..theta_N; positions are cumulative sums of h (cos, sin) of the
// midpoint angles. theta_0 and theta_N are clamped as real numbers, which
// also fixes the winding between the ends.
//
//   energy      sum_i (theta_{i+1} - theta_i)^2 / h   (+ lambda N h)
//   closure     sum_i h cos(mid_i) = ell_x,  sum_i h sin(mid_i) = ell_y
//
// Fixed length keeps h = L/N. Penalised problems add t = log(N h) as one more
// unknown. Constraints are enforced by an augmented Lagrangian whose inner
// problems are solved with preconditioned L-BFGS.

namespace elastica::solver {

using fbp::FixedLength;
using fbp::Penalised;

struct ClampedProblem {
  double ell_x = 0.0;
  double ell_y = 0.0;
  double theta0 = 0.0;
  double theta1 = 0.0;
  std::variant<FixedLength, Penalised> mode = FixedLength{1.0};
  // Support-line variant: the end point may slide vertically, only the
  // horizontal closure is imposed.
  bool free_vertical = false;

  bool penalised() const { return std::holds_alternative<Penalised>(mode); }
  double lambda() const;  // 0 for fixed length
};

struct DiscreteCurve {
  std::vector<double> theta;  // N + 1 node angles
  double h = 0.0;

  int segments() const { return static_cast<int>(theta.size()) - 1; }
  double length() const { return h * segments(); }
};

struct SolverConfig {
  int N = 400;
  int restarts = 1;
  double grad_tol = 1e-7;        // max_i |dPhi/dtheta_i| / h
  double constraint_tol = 1e-8;  // relative to the length
  int max_outer = 40;
  int max_inner = 20000;
  std::uint64_t seed = 7;
};

struct SolveReport {
  DiscreteCurve curve;
  double energy = 0.0;               // bending (+ lambda L when penalised)
  double bending = 0.0;
  double constraint_residual = 0.0;  // Euclidean norm of the closure defect
  double gradient_norm = 0.0;        // Lagrangian gradient, same measure as grad_tol
  double multiplier_x = 0.0;
  double multiplier_y = 0.0;
  int iterations = 0;                // inner iterations summed over outer loops
  int outer_iterations = 0;
  bool converged = false;
  bool monotone_descent = true;
};

// Throws InfeasibleError for fixed-length problems with L below the chord,
// DomainError for non-positive lambda or N < 8.
void validate(const ClampedProblem& problem, const SolverConfig& config);

DiscreteCurve initial_curve(const ClampedProblem& problem, int N, double length,
                            std::optional<std::uint64_t> noise_seed);

// Points p_0 = 0, p_{i+1} = p_i + h (cos mid_i, sin mid_i).
std::vector<Eigen::Vector2d> positions(const DiscreteCurve& curve);

// Curvature at interior nodes by central differences, one-sided at the ends.
std::vector<double> curvature(const DiscreteCurve& curve);

double discrete_bending(const DiscreteCurve& curve);
double discrete_energy(const DiscreteCurve& curve, const ClampedProblem& problem);

// Closure defect (c_x, c_y); c_y = 0 for the support-line variant.
Eigen::Vector2d closure_defect(const DiscreteCurve& curve, const ClampedProblem& problem);

// Augmented Lagrangian E - mu.c + rho/2 |c|^2 and its gradient with respect to
// the free unknowns: theta_1..theta_{N-1}, followed by log-length when
// penalised.
struct Augmentation {
  double mu_x = 0.0;
  double mu_y = 0.0;
  double rho = 0.0;
};
double augmented_value(const ClampedProblem& problem, const DiscreteCurve& curve,
                       const Augmentation& aug, Eigen::VectorXd* gradient);

// Unknown vector <-> curve.
Eigen::VectorXd pack(const ClampedProblem& problem, const DiscreteCurve& curve);
DiscreteCurve unpack(const ClampedProblem& problem, const Eigen::VectorXd& x, int N, double h_fixed);

// Single solve from the deterministic start (or from `start` when given).
// Non-convergence is reported through SolveReport::converged.
SolveReport solve(const ClampedProblem& problem, const SolverConfig& config,
                  const std::optional<DiscreteCurve>& start = std::nullopt);

struct UniquenessResult {
  int cluster_count = 0;
  SolveReport best;
  double spread = 0.0;  // largest theta distance inside any cluster
  int failed = 0;       // restarts that did not converge
  std::vector<double> cluster_energies;  // ascending
};

// config.restarts solves: restart 0 is the deterministic start, the rest add
// seeded smooth noise. Throws NonConvergenceError if every restart fails.
UniquenessResult uniqueness_probe(const ClampedProblem& problem, const SolverConfig& config);

struct Comparison {
  double sup_distance;  // relative to the length
  double energy_gap;    // relative bending difference
};
// Throws DomainError when the lengths differ by more than 2%.
Comparison compare_to_analytic(const DiscreteCurve& curve, const families::PlacedCurve& placed);

// Competitors for negative lambda: a segment of length ell with n full loops
// of radius n inserted. E_n = 2 pi + lambda (ell + 2 pi n^2).
struct LoopDemo {
  std::vector<int> loops;
  std::vector<double> energies;           // closed form
  std::vector<double> discrete_energies;  // same curves on a theta grid
  double segment_energy = 0.0;            // lambda * ell
  std::optional<int> crossover;           // first n with E_n < segment_energy
};
LoopDemo negative_lambda_demo(double lambda, double ell, int max_loops = 10);

}  // namespace elastica::solver
