#include "elastica/families.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "elastica/elliptic.hpp"
#include "elastica/error.hpp"
#include "elastica/maps.hpp"

using namespace elastica::families;
using elastica::DomainError;

namespace {

constexpr double kPi = std::numbers::pi;

PlacedCurve on(FamilyKind f, double a, double b, Placement p = {}) { return {f, p, a, b}; }

double K(double m) { return elastica::elliptic::complete_K(m); }

// One representative per family with its base multiplier.
struct Case {
  PlacedCurve curve;
  double lambda;
};
std::vector<Case> all_cases(double scale) {
  Placement p;
  p.scale = scale;
  const double kw = K(0.7), ko = K(0.4);
  return {
      {on(FamilyKind::linear(), 0, 3 * scale, p), 0.3},
      {on(FamilyKind::wavelike(0.7), 0, 4 * kw * scale, p), 0.8 / (scale * scale)},
      {on(FamilyKind::borderline(), -5 * scale, 5 * scale, p), 2 / (scale * scale)},
      {on(FamilyKind::orbitlike(0.4), 0, 4 * ko * scale, p), 3.2 / (scale * scale)},
      {on(FamilyKind::circular(), 0, 2 * kPi * scale, p), 1 / (scale * scale)},
  };
}

double trapezoid_k2(const SampledCurve& c) {
  double sum = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) sum += 0.5 * (c.k[i] * c.k[i] + c.k[i + 1] * c.k[i + 1]);
  return sum * c.h;
}

}  // namespace

TEST(Families, BaseExamples) {
  auto c = eval(on(FamilyKind::circular(), 0, 1), 0.0);
  EXPECT_NEAR(c.position.x(), 1.0, 1e-15);
  EXPECT_NEAR(c.position.y(), 0.0, 1e-15);
  EXPECT_EQ(c.curvature, 1.0);

  auto b = eval(on(FamilyKind::borderline(), -1, 1), 0.0);
  EXPECT_NEAR(b.position.x(), 0.0, 1e-15);
  EXPECT_NEAR(b.position.y(), -2.0, 1e-15);
  EXPECT_NEAR(b.curvature, 2.0, 1e-15);

  auto w = eval(on(FamilyKind::wavelike(0.7), 0, 1), 0.0);
  EXPECT_NEAR(w.curvature, 2 * std::sqrt(0.7), 1e-15);
}

TEST(Families, ParameterValidation) {
  EXPECT_THROW(FamilyKind::wavelike(0.0), DomainError);
  EXPECT_THROW(FamilyKind::orbitlike(1.0), DomainError);
  EXPECT_THROW(eval(on(FamilyKind::linear(), 0, 1), 1.5), DomainError);
  EXPECT_EQ(parse_family_tag("orbitlike"), FamilyTag::Orbitlike);
  EXPECT_FALSE(parse_family_tag("spiral"));
}

TEST(Families, Multipliers) {
  EXPECT_EQ(*multiplier(FamilyKind::borderline()), 2.0);
  EXPECT_EQ(*multiplier(FamilyKind::wavelike(0.5)), 0.0);
  EXPECT_NEAR(*multiplier(FamilyKind::borderline(), std::sqrt(2.0)), 1.0, 1e-15);
  EXPECT_NEAR(*multiplier(FamilyKind::orbitlike(0.3), 2.0), 2 * 1.7 / 4, 1e-15);
  EXPECT_EQ(*multiplier(FamilyKind::circular(), 0.5), 4.0);
  EXPECT_FALSE(multiplier(FamilyKind::linear(), 3.0).has_value());
  for (double s : {0.1, 0.7, 3.0, 11.0}) {
    EXPECT_NEAR(*multiplier(FamilyKind::wavelike(0.9), s) * s * s, 1.6, 1e-14);
  }
}

TEST(Families, ResidualOfEveryFamily) {
  for (double scale : {1.0, 0.5, 2.5}) {
    for (const auto& c : all_cases(scale)) {
      const auto s = sample(c.curve, 1e-3 * scale);
      EXPECT_LT(elastica_residual(s, c.lambda), 1e-5)
          << to_string(c.curve.family.tag) << " scale " << scale;
    }
  }
}

TEST(Families, ResidualDetectsWrongMultiplier) {
  const auto s = sample(on(FamilyKind::borderline(), -5, 5), 1e-3);
  EXPECT_GT(elastica_residual(s, 1.0), 0.1);
  EXPECT_THROW(elastica_residual(sample(on(FamilyKind::linear(), 0, 1), 0.3), 0.0), DomainError);
}

TEST(Families, UnitSpeedAndFrenet) {
  const double h = 1e-3;
  for (double scale : {1.0, 1.7}) {
    for (const auto& c : all_cases(scale)) {
      for (bool reflect : {false, true}) {
        PlacedCurve pc = c.curve;
        pc.placement.vertical_reflect = reflect;
        pc.placement.vertical_offset = 0.3;
        pc.placement.shift = 0.2;
        pc.s_max -= 0.2;
        const auto s = sample(pc, h);
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
          const Eigen::Vector2d d = (s.points[i + 1] - s.points[i - 1]) / (2 * h);
          ASSERT_NEAR(d.norm(), 1.0, 1e-6);
          ASSERT_NEAR(d.x(), std::cos(s.theta[i]), 1e-6);
          ASSERT_NEAR(d.y(), std::sin(s.theta[i]), 1e-6);
          ASSERT_NEAR((s.theta[i + 1] - s.theta[i - 1]) / (2 * h), s.k[i], 1e-5);
        }
      }
    }
  }
}

TEST(Families, GeneralIsometryKeepsFrenetRelations) {
  Placement p;
  const double r = 0.9;
  Isometry iso;
  iso.A << std::cos(r), std::sin(r), std::sin(r), -std::cos(r);  // a line reflection
  iso.b = Eigen::Vector2d(1.0, -2.0);
  p.general_isometry = iso;
  const auto s = sample(on(FamilyKind::orbitlike(0.6), 0, 3, p), 1e-3);
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const Eigen::Vector2d d = (s.points[i + 1] - s.points[i - 1]) / 2e-3;
    ASSERT_NEAR(d.x(), std::cos(s.theta[i]), 1e-6);
    ASSERT_NEAR(d.y(), std::sin(s.theta[i]), 1e-6);
    ASSERT_NEAR((s.theta[i + 1] - s.theta[i - 1]) / 2e-3, s.k[i], 1e-5);
  }
}

TEST(Families, ScalingLaw) {
  for (const auto& c1 : all_cases(1.0)) {
    if (c1.curve.family.tag == FamilyTag::Linear) continue;
    const double b1 = trapezoid_k2(sample_segments(c1.curve, 20000));
    for (double scale : {0.3, 4.0}) {
      PlacedCurve cs = c1.curve;
      cs.placement.scale = scale;
      cs.s_min *= scale;
      cs.s_max *= scale;
      const auto s = sample_segments(cs, 20000);
      EXPECT_NEAR(s.length() / c1.curve.length(), scale, 1e-12);
      EXPECT_NEAR(trapezoid_k2(s) * scale / b1, 1.0, 1e-8) << to_string(c1.curve.family.tag);
    }
  }
}

TEST(Families, WavelikeVertexStructure) {
  for (double m : {0.3, 0.7, 0.95}) {
    const double k = K(m);
    const auto s = sample(on(FamilyKind::wavelike(m), -k, k), k / 500);
    const std::size_t mid = s.size() / 2;
    for (std::size_t i = 1; i <= mid; ++i) EXPECT_GT(std::abs(s.k[i]), std::abs(s.k[i - 1]));
    for (std::size_t i = mid + 1; i < s.size(); ++i) EXPECT_LT(std::abs(s.k[i]), std::abs(s.k[i - 1]));
  }
}

TEST(Families, Sampling) {
  auto lin = sample(on(FamilyKind::linear(), 0, 1), 0.5);
  ASSERT_EQ(lin.size(), 3u);
  EXPECT_DOUBLE_EQ(lin.points[1].x(), 0.5);
  EXPECT_DOUBLE_EQ(lin.points[2].x(), 1.0);

  auto circ = sample(on(FamilyKind::circular(), 0, 2 * kPi), kPi / 2);
  ASSERT_EQ(circ.size(), 5u);
  for (std::size_t i = 0; i + 1 < circ.size(); ++i) {
    EXPECT_NEAR(circ.points[i].dot(circ.points[i + 1]), 0.0, 1e-15);
    EXPECT_NEAR(circ.points[i].norm(), 1.0, 1e-15);
  }

  // Half-period displacement 2(2E - K), frozen from mpmath at m = 0.7.
  const double kw = 2.07536313529246907840;
  auto w = sample_segments(on(FamilyKind::wavelike(0.7), 0, 2 * kw), 1000);
  EXPECT_NEAR(w.points.back().x(), 0.815956001198352952, 1e-12);
  EXPECT_NEAR(w.points.back().y(), -w.points.front().y(), 1e-12);  // cn(2K) = -1

  PlacedCurve inf{FamilyKind::borderline(), {}, 0.0, std::numeric_limits<double>::infinity()};
  EXPECT_TRUE(inf.infinite());
  EXPECT_THROW(sample(inf, 0.1), DomainError);
  EXPECT_EQ(sample(inf, 0.5, Window{0, 8}).size(), 17u);
}

TEST(Families, WavelikeDisplacementMatchesQuadrature) {
  // Independent check of the x-coordinate: Simpson quadrature of cos(theta).
  const double m = 0.7, L = 2 * K(m);
  const int n = 4000;
  const double h = L / n;
  double sum = 0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    sum += w * std::cos(eval_base(FamilyKind::wavelike(m), i * h).angle);
  }
  EXPECT_NEAR(sum * h / 3, 0.815956001198352952, 1e-11);
}

TEST(Families, Classification) {
  EXPECT_EQ(classify_wavelike(0.5), Criticality::Subcritical);
  EXPECT_EQ(classify_wavelike(elastica::maps::m_zero()), Criticality::Critical);
  EXPECT_EQ(classify_wavelike(0.9), Criticality::Supercritical);
  EXPECT_THROW(classify_wavelike(1.0), DomainError);
}

TEST(Families, ReflectionNegatesAngleAndCurvature) {
  Placement p;
  p.vertical_reflect = true;
  p.vertical_offset = 1.5;
  const auto a = eval(on(FamilyKind::wavelike(0.8), 0, 3), 1.1);
  const auto b = eval(on(FamilyKind::wavelike(0.8), 0, 3, p), 1.1);
  EXPECT_EQ(b.position.x(), a.position.x());
  EXPECT_NEAR(b.position.y(), 1.5 - a.position.y(), 1e-15);
  EXPECT_EQ(b.angle, -a.angle);
  EXPECT_EQ(b.curvature, -a.curvature);
}
