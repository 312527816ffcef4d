#include "elastica/lbfgs.hpp"

#include <gtest/gtest.h>

using namespace elastica::lbfgs;

namespace {

bool small_gradient(const Vector&, const Vector& g) { return g.lpNorm<Eigen::Infinity>() < 1e-10; }

}  // namespace

TEST(Lbfgs, Rosenbrock) {
  auto fun = [](const Vector& x, Vector& g) {
    const double a = 1 - x[0], b = x[1] - x[0] * x[0];
    g[0] = -2 * a - 400 * x[0] * b;
    g[1] = 200 * b;
    return a * a + 100 * b * b;
  };
  Vector x0(2);
  x0 << -1.2, 1.0;
  const auto r = minimize(fun, x0, small_gradient);
  ASSERT_TRUE(r.converged) << r.message;
  EXPECT_NEAR(r.x[0], 1.0, 1e-8);
  EXPECT_NEAR(r.x[1], 1.0, 1e-8);
  EXPECT_TRUE(r.monotone);
}

TEST(Lbfgs, PreconditionedQuadratic) {
  // Badly scaled diagonal quadratic; the exact inverse as preconditioner
  // solves it in one step.
  const int n = 50;
  Vector d(n), b(n);
  for (int i = 0; i < n; ++i) {
    d[i] = std::pow(10.0, 6.0 * i / (n - 1));
    b[i] = std::sin(i + 1.0);
  }
  auto fun = [&](const Vector& x, Vector& g) {
    g = d.cwiseProduct(x) - b;
    return 0.5 * x.dot(d.cwiseProduct(x)) - b.dot(x);
  };
  auto pre = [&](const Vector& q, Vector& r) { r = q.cwiseQuotient(d); };
  const auto r = minimize(fun, Vector::Zero(n), small_gradient, pre);
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 2);
  EXPECT_LT((r.x - b.cwiseQuotient(d)).norm(), 1e-10);

  // Without it, 200 iterations are not enough at condition number 1e6.
  Options o;
  o.max_iterations = 200;
  const auto plain = minimize(fun, Vector::Zero(n), small_gradient, {}, o);
  EXPECT_FALSE(plain.converged);
  EXPECT_TRUE(plain.monotone);
  EXPECT_LT(plain.f, 0.0);
}

TEST(Lbfgs, IterationLimit) {
  auto fun = [](const Vector& x, Vector& g) {
    g = 2 * x;
    return x.squaredNorm();
  };
  Options o;
  o.max_iterations = 0;
  const auto r = minimize(fun, Vector::Ones(3), small_gradient, {}, o);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 0);
}
