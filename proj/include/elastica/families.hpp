#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string_view>
#include <vector>

// The five similarity classes of planar elasticae and their placement in the
// plane.
//
// Base parametrisations (unit speed, d theta/ds = k):
//   Linear      (s, 0)                                theta = 0               k = 0
//   Wavelike    (2E(am s) - s, -2 sqrt(m) cn s)       theta = 2 asin(sqrt(m) sn s)  k = 2 sqrt(m) cn s
//   Borderline  (2 tanh s - s, -2 sech s)             theta = 2 atan(sinh s)  k = 2 sech s
//   Orbitlike   ((2E(am s) + (m-2)s)/m, -2 dn(s)/m)   theta = 2 am s          k = 2 dn s
//   Circular    (cos s, sin s)                        theta = s + pi/2        k = 1
//
// A placed curve is gamma(s) = I(Lambda * base((s + s0) / Lambda)) where I is
// either an admissible free-boundary isometry (vertical reflection then
// vertical translation) or a general isometry.

namespace elastica::families {

enum class FamilyTag { Linear, Wavelike, Borderline, Orbitlike, Circular };

std::string_view to_string(FamilyTag tag);
std::optional<FamilyTag> parse_family_tag(std::string_view text);

struct FamilyKind {
  FamilyTag tag = FamilyTag::Linear;
  double m = 0.0;  // used only for Wavelike and Orbitlike, in (0, 1)

  static FamilyKind linear() { return {FamilyTag::Linear, 0.0}; }
  static FamilyKind wavelike(double m);
  static FamilyKind borderline() { return {FamilyTag::Borderline, 0.0}; }
  static FamilyKind orbitlike(double m);
  static FamilyKind circular() { return {FamilyTag::Circular, 0.0}; }
};

// x -> A x + b with A orthogonal.
struct Isometry {
  Eigen::Matrix2d A = Eigen::Matrix2d::Identity();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
};

struct Placement {
  double scale = 1.0;  // Lambda
  double shift = 0.0;  // s0, in placed arc-length units
  double vertical_offset = 0.0;
  bool vertical_reflect = false;
  std::optional<Isometry> general_isometry;

  // True when only the free-boundary invariances (vertical reflection and
  // translation) are used.
  bool is_admissible() const { return !general_isometry.has_value(); }
};

struct PlacedCurve {
  FamilyKind family;
  Placement placement;
  double s_min = 0.0;
  double s_max = 1.0;  // may be +infinity for Borderline

  bool infinite() const;
  double length() const { return s_max - s_min; }
};

struct CurvePoint {
  Eigen::Vector2d position;
  double angle;      // unwrapped
  double curvature;  // signed
};

// Base curve at intrinsic parameter u (no placement).
CurvePoint eval_base(const FamilyKind& family, double u);

// Throws DomainError for s outside [s_min, s_max].
CurvePoint eval(const PlacedCurve& placed, double s);

struct SampledCurve {
  double h = 0.0;
  double s_start = 0.0;
  std::vector<Eigen::Vector2d> points;
  std::vector<double> theta;
  std::vector<double> k;

  std::size_t size() const { return points.size(); }
  double length() const { return h * static_cast<double>(points.size() - 1); }
};

// Uniform samples s_min + i h, count floor((s_max - s_min)/h) + 1. Infinite
// domains need an explicit window, which replaces [s_min, s_max].
struct Window {
  double from;
  double to;
};
SampledCurve sample(const PlacedCurve& placed, double h, std::optional<Window> window = {});

// N + 1 samples including both endpoints exactly (h = length / N).
SampledCurve sample_segments(const PlacedCurve& placed, int segments);

// Multiplier lambda of the placed curve, base / Lambda^2. Linear curves are
// lambda-elasticae for every lambda and return nullopt.
std::optional<double> multiplier(const FamilyKind& family, double scale = 1.0);

// max |2k'' + k^3 - lambda k| over interior nodes, divided by max(1, max|k|^3).
double elastica_residual(const SampledCurve& curve, double lambda);

enum class Criticality { Subcritical, Critical, Supercritical };
std::string_view to_string(Criticality c);
Criticality classify_wavelike(double m);

}  // namespace elastica::families
