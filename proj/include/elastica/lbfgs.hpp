#pragma once

#include <Eigen/Dense>
#include <functional>

// Limited-memory BFGS with a strong-Wolfe line search and a user-supplied
// initial inverse Hessian (preconditioner).

namespace elastica::lbfgs {

using Vector = Eigen::VectorXd;

// Returns f(x) and writes the gradient into g.
using Objective = std::function<double(const Vector& x, Vector& g)>;

// r = H0 q. Must be symmetric positive definite.
using Preconditioner = std::function<void(const Vector& q, Vector& r)>;

// Returns true when the gradient is small enough to stop.
using GradientTest = std::function<bool(const Vector& x, const Vector& g)>;

struct Options {
  int memory = 12;
  int max_iterations = 2000;
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_line_search = 40;
  // Relative size of the evaluation noise in f. Within this band of f(x)
  // steps are accepted on slope information alone.
  double round_off = 1e-11;
};

struct Result {
  Vector x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  bool monotone = true;  // f never rose by more than round_off across accepted steps
  const char* message = "";
};

Result minimize(const Objective& fun, Vector x0, const GradientTest& done,
                const Preconditioner& precondition = {}, const Options& opts = {});

}  // namespace elastica::lbfgs
