#include "elastica/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "elastica/elliptic.hpp"
#include "elastica/error.hpp"
#include "elastica/families.hpp"
#include "elastica/fbp.hpp"
#include "elastica/maps.hpp"

using namespace elastica;
using namespace elastica::solver;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kM0 = 0.826114765984970336;
constexpr double kFigureEight = 28.10990243533034734;

ClampedProblem half_figure_eight() {
  const double lam = 1 / (2 * elliptic::complete_K(kM0));
  ClampedProblem p;
  p.ell_y = 4 * std::sqrt(kM0) * lam;
  p.mode = FixedLength{1.0};
  return p;
}

families::PlacedCurve analytic_half_figure_eight() {
  return fbp::minimiser({0.0, FixedLength{1.0}, fbp::Orientation::SameTangent});
}

DiscreteCurve from_samples(const families::SampledCurve& s) { return {s.theta, s.h}; }

int sign_changes(const std::vector<double>& k) {
  double kmax = 0;
  for (double v : k) kmax = std::max(kmax, std::abs(v));
  int changes = 0, last = 0;
  for (double v : k) {
    if (std::abs(v) <= 1e-9 * kmax) continue;
    const int s = v > 0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Fixed-length clamped data read off a sub-arc of a placed curve.
ClampedProblem problem_from_arc(const families::PlacedCurve& arc) {
  const auto a = families::eval(arc, arc.s_min), b = families::eval(arc, arc.s_max);
  ClampedProblem p;
  p.ell_x = b.position.x() - a.position.x();
  p.ell_y = b.position.y() - a.position.y();
  p.theta0 = a.angle;
  p.theta1 = b.angle;
  p.mode = FixedLength{arc.length()};
  return p;
}

Eigen::VectorXd finite_difference(const ClampedProblem& p, const Eigen::VectorXd& x, int N,
                                  double h_fixed, const Augmentation& aug) {
  Eigen::VectorXd g(x.size());
  const double d = 1e-6;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a[i] += d;
    b[i] -= d;
    g[i] = (augmented_value(p, unpack(p, a, N, h_fixed), aug, nullptr) -
            augmented_value(p, unpack(p, b, N, h_fixed), aug, nullptr)) /
           (2 * d);
  }
  return g;
}

}  // namespace

TEST(DiscreteEnergy, Examples) {
  DiscreteCurve circle;
  circle.h = 2 * kPi / 100;
  for (int i = 0; i <= 100; ++i) circle.theta.push_back(2 * kPi * i / 100);
  EXPECT_NEAR(discrete_bending(circle), 2 * kPi, 0.02 * 2 * kPi);

  const DiscreteCurve flat{std::vector<double>(33, 0.3), 0.1};
  EXPECT_EQ(discrete_bending(flat), 0.0);
  ClampedProblem pen;
  pen.mode = Penalised{2.5};
  EXPECT_NEAR(discrete_energy(flat, pen), 2.5 * 3.2, 1e-14);

  const double K = elliptic::complete_K(0.7);
  const families::PlacedCurve wave{families::FamilyKind::wavelike(0.7), {}, 0.0, 2 * K};
  const auto s = families::sample_segments(wave, 400);
  const double quad = fbp::bending_energy(families::sample_segments(wave, 20000));
  EXPECT_NEAR(discrete_bending(from_samples(s)) / quad, 1.0, 0.005);
}

TEST(Gradient, ConstantThetaIsStationary) {
  ClampedProblem p;
  p.theta0 = p.theta1 = 0.4;
  const DiscreteCurve c{std::vector<double>(65, 0.4), 1.0 / 64};
  Eigen::VectorXd g;
  augmented_value(p, c, {}, &g);
  EXPECT_EQ(g.lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(Gradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int N = 64;
  for (int trial = 0; trial < 20; ++trial) {
    for (bool penalised : {false, true}) {
      ClampedProblem p;
      p.ell_x = 0.6 + 0.2 * u(rng);
      p.ell_y = 0.2 * u(rng);
      p.theta0 = u(rng);
      p.theta1 = u(rng);
      p.free_vertical = trial % 5 == 4;
      if (penalised) p.mode = Penalised{1.0 + 5.0 * std::abs(u(rng))};
      else p.mode = FixedLength{1.0};
      const double L = 1.0 + 0.3 * std::abs(u(rng));
      DiscreteCurve c;
      c.h = L / N;
      for (int i = 0; i <= N; ++i) c.theta.push_back(0.8 * u(rng) + std::sin(3.0 * i / N));
      c.theta.front() = p.theta0;
      c.theta.back() = p.theta1;
      const Augmentation aug{u(rng) * 10, u(rng) * 10, 50.0 * std::abs(u(rng))};
      const auto x = pack(p, c);
      Eigen::VectorXd g;
      augmented_value(p, c, aug, &g);
      const auto fd = finite_difference(p, x, N, c.h, aug);
      const double rel = (g - fd).lpNorm<Eigen::Infinity>() / g.lpNorm<Eigen::Infinity>();
      EXPECT_LT(rel, 1e-6) << "trial " << trial << " penalised " << penalised;
    }
  }
}

TEST(Gradient, AnalyticMinimiserIsCritical) {
  const auto p = half_figure_eight();
  const auto c = from_samples(families::sample_segments(analytic_half_figure_eight(), 400));
  Eigen::VectorXd g, gx, gy;
  augmented_value(p, c, {}, &g);
  augmented_value(p, c, {1.0, 0.0, 0.0}, &gx);
  augmented_value(p, c, {0.0, 1.0, 0.0}, &gy);
  // Remove the component in the span of the constraint gradients.
  Eigen::MatrixXd J(g.size(), 2);
  J.col(0) = g - gx;
  J.col(1) = g - gy;
  const Eigen::VectorXd mu = J.colPivHouseholderQr().solve(g);
  const Eigen::VectorXd r = g - J * mu;
  const double scale = discrete_bending(c) / c.length();
  EXPECT_LT(r.lpNorm<Eigen::Infinity>() / c.h / scale, 1e-3);
}

TEST(Solve, StraightSegment) {
  ClampedProblem p;
  p.ell_x = 1.0;
  const auto r = solve(p, {});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.energy, 1e-12);
}

TEST(Solve, HalfFigureEightMatchesAnalytic) {
  const auto p = half_figure_eight();
  SolverConfig cfg;
  cfg.N = 400;
  const auto r = solve(p, cfg);
  ASSERT_TRUE(r.converged);
  EXPECT_TRUE(r.monotone_descent);
  EXPECT_LT(r.constraint_residual, cfg.constraint_tol * r.curve.length());
  EXPECT_LT(r.gradient_norm, cfg.grad_tol);
  EXPECT_NEAR(r.energy / kFigureEight, 1.0, 0.01);
  const auto cmp = compare_to_analytic(r.curve, analytic_half_figure_eight());
  EXPECT_LT(cmp.sup_distance, 1e-2);
  EXPECT_LT(cmp.energy_gap, 0.01);

  cfg.N = 800;
  const auto fine = solve(p, cfg);
  ASSERT_TRUE(fine.converged);
  const auto cmp2 = compare_to_analytic(fine.curve, analytic_half_figure_eight());
  const double ratio = cmp.energy_gap / cmp2.energy_gap;
  EXPECT_GE(ratio, 3.0);
  EXPECT_LE(ratio, 5.0);
}

TEST(Solve, PenalisedOneInflection) {
  ClampedProblem p;
  p.ell_x = 0.5;
  p.theta0 = p.theta1 = 0.8;
  p.mode = Penalised{100.0};
  const auto r = solve(p, {});
  ASSERT_TRUE(r.converged);
  EXPECT_TRUE(r.monotone_descent);
  EXPECT_EQ(sign_changes(curvature(r.curve)), 1);
  EXPECT_LT(r.constraint_residual, 1e-8 * r.curve.length());
}

TEST(Solve, Preconditions) {
  ClampedProblem p;
  p.ell_x = 2.0;
  EXPECT_THROW(solve(p, {}), InfeasibleError);
  p.mode = Penalised{0.0};
  EXPECT_THROW(solve(p, {}), DomainError);
  p.mode = FixedLength{3.0};
  SolverConfig cfg;
  cfg.N = 4;
  EXPECT_THROW(solve(p, cfg), DomainError);
}

TEST(Solve, SupportLineVariantHasNoFlux) {
  ClampedProblem p;
  p.free_vertical = true;
  SolverConfig cfg;
  cfg.N = 800;
  const auto r = solve(p, cfg);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.energy / kFigureEight, 1.0, 1e-3);
  EXPECT_NEAR(r.multiplier_y, 0.0, 0.0);
  // k' at both ends from segment curvatures by quadratic extrapolation.
  const auto& t = r.curve.theta;
  const double h = r.curve.h;
  const int N = r.curve.segments();
  auto kseg = [&](int i) { return (t[i + 1] - t[i]) / h; };
  const double k0 = (-2 * kseg(0) + 3 * kseg(1) - kseg(2)) / h;
  const double k1 = (2 * kseg(N - 1) - 3 * kseg(N - 2) + kseg(N - 3)) / h;
  double kmax = 0;
  for (int i = 0; i < N; ++i) kmax = std::max(kmax, std::abs(kseg(i)));
  EXPECT_LT(std::abs(k0) / kmax, 1e-3);
  EXPECT_LT(std::abs(k1) / kmax, 1e-3);
}

TEST(Solve, RandomCompetitorsDoNotBeatMinimiser) {
  // Admissible curves for the support-line problem at ell = 0, L = 1.
  ClampedProblem p;
  p.free_vertical = true;
  SolverConfig cfg;
  cfg.N = 200;
  const double analytic = fbp::exact_bending_energy(analytic_half_figure_eight());
  int at_minimiser = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto start = initial_curve(p, cfg.N, 1.0, seed);
    const auto r = solve(p, cfg, start);
    ASSERT_LT(closure_defect(r.curve, p).norm(), 1e-6);
    const double e = discrete_bending(r.curve);
    EXPECT_GE(e, analytic);
    if (e > analytic * (1 + 1e-3)) continue;
    ++at_minimiser;
  }
  EXPECT_GE(at_minimiser, 1);
}

TEST(Uniqueness, SegmentAndMonotoneWavelike) {
  SolverConfig cfg;
  cfg.N = 200;
  cfg.restarts = 6;
  ClampedProblem seg;
  seg.ell_x = 1.0;
  const auto a = uniqueness_probe(seg, cfg);
  EXPECT_EQ(a.cluster_count, 1);
  EXPECT_EQ(a.failed, 0);

  const double K = elliptic::complete_K(0.9);
  const families::PlacedCurve arc{families::FamilyKind::wavelike(0.9), {}, 0.3 * K, 1.6 * K};
  const auto b = uniqueness_probe(problem_from_arc(arc), cfg);
  EXPECT_EQ(b.cluster_count, 1);
  EXPECT_LT(b.spread, 1e-3);
  EXPECT_LT(compare_to_analytic(b.best.curve, arc).sup_distance, 1e-3);
}

TEST(Uniqueness, FullPeriodIsRecordedOnly) {
  const double K = elliptic::complete_K(0.7);
  const families::PlacedCurve arc{families::FamilyKind::wavelike(0.7), {}, 0.0, 4 * K};
  SolverConfig cfg;
  cfg.N = 200;
  cfg.restarts = 4;
  const auto r = uniqueness_probe(problem_from_arc(arc), cfg);
  EXPECT_GE(r.cluster_count, 1);
  EXPECT_EQ(r.cluster_energies.size(), static_cast<std::size_t>(r.cluster_count));
  for (std::size_t i = 1; i < r.cluster_energies.size(); ++i) {
    EXPECT_LE(r.cluster_energies[i - 1], r.cluster_energies[i]);
  }
}

TEST(Compare, IdenticalAndReflected) {
  const auto an = analytic_half_figure_eight();
  const auto same = from_samples(families::sample_segments(an, 400));
  const auto c = compare_to_analytic(same, an);
  // Midpoint-chord positions differ from the exact curve at O(h^2).
  EXPECT_LT(c.sup_distance, 5e-5);
  EXPECT_LT(c.energy_gap, 1e-4);

  DiscreteCurve mirrored = same;
  for (double& t : mirrored.theta) t = -t;
  EXPECT_GT(compare_to_analytic(mirrored, an).sup_distance, 0.1);

  DiscreteCurve shorter = same;
  shorter.h *= 0.9;
  EXPECT_THROW(compare_to_analytic(shorter, an), DomainError);
}

TEST(NegativeLambda, LoopsLowerTheEnergy) {
  const auto d = negative_lambda_demo(-1.0, 1.0);
  ASSERT_EQ(d.energies.size(), 10u);
  for (std::size_t i = 1; i < d.energies.size(); ++i) EXPECT_LT(d.energies[i], d.energies[i - 1]);
  EXPECT_LT(d.energies.back(), -600.0);
  for (std::size_t i = 0; i < d.energies.size(); ++i) {
    EXPECT_NEAR(d.discrete_energies[i], d.energies[i], 1e-3 * std::abs(d.energies[i]));
  }

  const auto up = negative_lambda_demo(1.0, 1.0);
  for (std::size_t i = 1; i < up.energies.size(); ++i) EXPECT_GT(up.energies[i], up.energies[i - 1]);
  EXPECT_FALSE(up.crossover.has_value());

  const auto slow = negative_lambda_demo(-0.01, 1.0, 15);
  ASSERT_TRUE(slow.crossover.has_value());
  EXPECT_EQ(*slow.crossover, 11);
  EXPECT_THROW(negative_lambda_demo(-1.0, 0.0), DomainError);
}
