#include "elastica/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "elastica/elliptic.hpp"
#include "elastica/error.hpp"
#include "elastica/maps.hpp"

namespace elastica::families {
namespace {

constexpr double kPi = std::numbers::pi;

void require_open_unit(double m, const char* what) {
  if (!(m > 0.0 && m < 1.0)) {
    std::ostringstream os;
    os << what << ": m = " << m << " outside (0, 1)";
    throw DomainError(os.str());
  }
}

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

std::string_view to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::Linear: return "linear";
    case FamilyTag::Wavelike: return "wavelike";
    case FamilyTag::Borderline: return "borderline";
    case FamilyTag::Orbitlike: return "orbitlike";
    case FamilyTag::Circular: return "circular";
  }
  return "unknown";
}

std::optional<FamilyTag> parse_family_tag(std::string_view text) {
  for (auto t : {FamilyTag::Linear, FamilyTag::Wavelike, FamilyTag::Borderline,
                 FamilyTag::Orbitlike, FamilyTag::Circular}) {
    if (text == to_string(t)) return t;
  }
  return std::nullopt;
}

FamilyKind FamilyKind::wavelike(double m) {
  require_open_unit(m, "wavelike");
  return {FamilyTag::Wavelike, m};
}

FamilyKind FamilyKind::orbitlike(double m) {
  require_open_unit(m, "orbitlike");
  return {FamilyTag::Orbitlike, m};
}

bool PlacedCurve::infinite() const { return std::isinf(s_max); }

CurvePoint eval_base(const FamilyKind& family, double u) {
  using namespace elliptic;
  switch (family.tag) {
    case FamilyTag::Linear:
      return {{u, 0.0}, 0.0, 0.0};
    case FamilyTag::Wavelike: {
      const double m = family.m;
      const double phi = jacobi_am(u, m);
      const double sn = std::sin(phi), cn = std::cos(phi);
      const double rm = std::sqrt(m);
      return {{2 * incomplete_E(phi, m) - u, -2 * rm * cn}, 2 * std::asin(rm * sn), 2 * rm * cn};
    }
    case FamilyTag::Borderline: {
      const double sh = sech(u);
      return {{2 * std::tanh(u) - u, -2 * sh}, 2 * std::atan(std::sinh(u)), 2 * sh};
    }
    case FamilyTag::Orbitlike: {
      const double m = family.m;
      const double phi = jacobi_am(u, m);
      const double sn = std::sin(phi);
      const double dn = std::sqrt(1 - m * sn * sn);
      return {{(2 * incomplete_E(phi, m) + (m - 2) * u) / m, -2 * dn / m}, 2 * phi, 2 * dn};
    }
    case FamilyTag::Circular:
      return {{std::cos(u), std::sin(u)}, u + kPi / 2, 1.0};
  }
  return {{0.0, 0.0}, 0.0, 0.0};
}

CurvePoint eval(const PlacedCurve& placed, double s) {
  if (!(s >= placed.s_min && s <= placed.s_max)) {
    std::ostringstream os;
    os << "eval: s = " << s << " outside [" << placed.s_min << ", " << placed.s_max << "]";
    throw DomainError(os.str());
  }
  const Placement& p = placed.placement;
  const double lam = p.scale;
  CurvePoint c = eval_base(placed.family, (s + p.shift) / lam);
  c.position *= lam;
  c.curvature /= lam;
  if (p.vertical_reflect) {
    c.position.y() = -c.position.y();
    c.angle = -c.angle;
    c.curvature = -c.curvature;
  }
  c.position.y() += p.vertical_offset;
  if (p.general_isometry) {
    const auto& iso = *p.general_isometry;
    c.position = iso.A * c.position + iso.b;
    const double rho = std::atan2(iso.A(1, 0), iso.A(0, 0));
    if (iso.A.determinant() > 0) {
      c.angle += rho;
    } else {
      c.angle = rho - c.angle;
      c.curvature = -c.curvature;
    }
  }
  return c;
}

namespace {

SampledCurve sample_grid(const PlacedCurve& placed, double from, double h, std::size_t count) {
  SampledCurve out;
  out.h = h;
  out.s_start = from;
  out.points.reserve(count);
  out.theta.reserve(count);
  out.k.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = std::min(from + h * static_cast<double>(i), placed.s_max);
    const auto c = eval(placed, s);
    out.points.push_back(c.position);
    out.theta.push_back(c.angle);
    out.k.push_back(c.curvature);
  }
  return out;
}

}  // namespace

SampledCurve sample(const PlacedCurve& placed, double h, std::optional<Window> window) {
  if (!(h > 0) || !std::isfinite(h)) throw DomainError("sample: step must be positive");
  double from = placed.s_min, to = placed.s_max;
  if (window) {
    from = window->from;
    to = window->to;
    if (!(from >= placed.s_min && to <= placed.s_max && from < to)) {
      throw DomainError("sample: window outside the curve's domain");
    }
  }
  if (!std::isfinite(to)) throw DomainError("sample: infinite domain needs a truncation window");
  // Tolerate rounding in (to - from)/h for steps that divide the domain.
  const double ratio = (to - from) / h;
  const auto count = static_cast<std::size_t>(std::floor(ratio + 1e-9)) + 1;
  return sample_grid(placed, from, h, count);
}

SampledCurve sample_segments(const PlacedCurve& placed, int segments) {
  if (segments < 1) throw DomainError("sample_segments: need at least one segment");
  if (placed.infinite()) throw DomainError("sample_segments: infinite domain");
  const double h = placed.length() / segments;
  auto out = sample_grid(placed, placed.s_min, h, static_cast<std::size_t>(segments) + 1);
  // Land exactly on the right endpoint.
  const auto c = eval(placed, placed.s_max);
  out.points.back() = c.position;
  out.theta.back() = c.angle;
  out.k.back() = c.curvature;
  return out;
}

std::optional<double> multiplier(const FamilyKind& family, double scale) {
  if (!(scale > 0)) throw DomainError("multiplier: scale must be positive");
  double base = 0.0;
  switch (family.tag) {
    case FamilyTag::Linear: return std::nullopt;
    case FamilyTag::Wavelike: base = 2 * (2 * family.m - 1); break;
    case FamilyTag::Borderline: base = 2.0; break;
    case FamilyTag::Orbitlike: base = 2 * (2 - family.m); break;
    case FamilyTag::Circular: base = 1.0; break;
  }
  return base / (scale * scale);
}

double elastica_residual(const SampledCurve& curve, double lambda) {
  const std::size_t n = curve.k.size();
  if (n < 5) throw DomainError("elastica_residual: need at least 5 samples");
  const double h2 = curve.h * curve.h;
  double kmax = 0.0;
  for (double k : curve.k) kmax = std::max(kmax, std::abs(k));
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double k = curve.k[i];
    const double kss = (curve.k[i + 1] - 2 * k + curve.k[i - 1]) / h2;
    worst = std::max(worst, std::abs(2 * kss + k * k * k - lambda * k));
  }
  return worst / std::max(1.0, kmax * kmax * kmax);
}

std::string_view to_string(Criticality c) {
  switch (c) {
    case Criticality::Subcritical: return "subcritical";
    case Criticality::Critical: return "critical";
    case Criticality::Supercritical: return "supercritical";
  }
  return "unknown";
}

Criticality classify_wavelike(double m) {
  require_open_unit(m, "classify_wavelike");
  const double m0 = maps::m_zero();
  if (std::abs(m - m0) <= 1e-12) return Criticality::Critical;
  return m > m0 ? Criticality::Supercritical : Criticality::Subcritical;
}

}  // namespace elastica::families
