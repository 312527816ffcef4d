#include "elastica/fbp.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "elastica/elliptic.hpp"
#include "elastica/error.hpp"
#include "elastica/maps.hpp"

namespace elastica::fbp {
namespace {

using families::FamilyKind;
using families::FamilyTag;
using families::PlacedCurve;
using families::SampledCurve;

constexpr double kPi = std::numbers::pi;

PlacedCurve canonical(FamilyKind family, double scale, double shift, double s_max) {
  PlacedCurve c;
  c.family = family;
  c.placement.scale = scale;
  c.placement.shift = shift;
  c.s_min = 0.0;
  c.s_max = s_max;
  return c;
}

PlacedCurve half_circle(double radius) {
  // theta = s/r + pi/2 - pi/2 runs from 0 to pi.
  return canonical(FamilyKind::circular(), radius, -radius * kPi / 2, kPi * radius);
}

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be positive and finite, got " << v;
    throw DomainError(os.str());
  }
}

// Antiderivative of k^2 in the intrinsic variable of the base curve.
double k2_antiderivative(const FamilyKind& f, double u) {
  using namespace elliptic;
  switch (f.tag) {
    case FamilyTag::Linear: return 0.0;
    case FamilyTag::Wavelike:
      // 4m cn^2 integrates to 4 (E(am u) - (1-m) u).
      return 4 * (incomplete_E(jacobi_am(u, f.m), f.m) - (1 - f.m) * u);
    case FamilyTag::Borderline: return 4 * std::tanh(u);
    case FamilyTag::Orbitlike: return 4 * incomplete_E(jacobi_am(u, f.m), f.m);
    case FamilyTag::Circular: return u;
  }
  return 0.0;
}

void require_samples(const SampledCurve& c, std::size_t n, const char* what) {
  if (c.size() < n) {
    std::ostringstream os;
    os << what << ": need at least " << n << " samples, got " << c.size();
    throw DomainError(os.str());
  }
}

}  // namespace

std::string_view to_string(Orientation o) {
  return o == Orientation::SameTangent ? "same" : "opposite";
}

PlacedCurve minimiser(const FreeBoundarySpec& spec) {
  const double ell = spec.ell;
  if (!std::isfinite(ell)) throw DomainError("minimiser: ell must be finite");
  const bool same = spec.orientation == Orientation::SameTangent;

  if (const auto* fixed = std::get_if<FixedLength>(&spec.mode)) {
    const double L = fixed->L;
    require_positive(L, "L");
    if (same) {
      if (!(std::abs(ell) < L)) throw DomainError("minimiser: need -L < ell < L");
      const double m = maps::invert(maps::MapKind::WaveFixed, ell / L);
      const double K = elliptic::complete_K(m);
      return canonical(FamilyKind::wavelike(m), L / (2 * K), 0.0, L);
    }
    if (ell == 0.0) return half_circle(L / kPi);
    if (!(ell < 0 && ell > -L)) throw DomainError("minimiser: opposite tangents need -L < ell <= 0");
    const double m = maps::invert(maps::MapKind::OrbitFixed, ell / L);
    const double K = elliptic::complete_K(m);
    return canonical(FamilyKind::orbitlike(m), L / K, 0.0, L);
  }

  const double lambda = std::get<Penalised>(spec.mode).lambda;
  require_positive(lambda, "lambda");
  const double target = ell * std::sqrt(lambda);
  if (same) {
    if (ell > 0) return canonical(FamilyKind::linear(), 1.0, 0.0, ell);
    const double m = maps::invert(maps::MapKind::WavePenalised, target);
    const double scale = std::sqrt((4 * m - 2) / lambda);
    return canonical(FamilyKind::wavelike(m), scale, 0.0, 2 * elliptic::complete_K(m) * scale);
  }
  if (ell == 0.0) return half_circle(1 / std::sqrt(lambda));
  if (ell > 0) throw DomainError("minimiser: opposite tangents need ell <= 0");
  const double m = maps::invert(maps::MapKind::OrbitPenalised, target);
  const double scale = std::sqrt((4 - 2 * m) / lambda);
  return canonical(FamilyKind::orbitlike(m), scale, 0.0, elliptic::complete_K(m) * scale);
}

PlacedCurve borderline_minimiser(double lambda) {
  require_positive(lambda, "lambda");
  return canonical(FamilyKind::borderline(), std::sqrt(2 / lambda), 0.0,
                   std::numeric_limits<double>::infinity());
}

double bending_energy(const SampledCurve& c) {
  require_samples(c, 2, "bending_energy");
  double sum = 0.5 * (c.k.front() * c.k.front() + c.k.back() * c.k.back());
  for (std::size_t i = 1; i + 1 < c.size(); ++i) sum += c.k[i] * c.k[i];
  return sum * c.h;
}

double length(const SampledCurve& c) {
  require_samples(c, 2, "length");
  return c.length();
}

double modified_energy(const SampledCurve& c, double lambda) {
  return bending_energy(c) + lambda * length(c);
}

double adapted_energy(const SampledCurve& c, double lambda) {
  require_positive(lambda, "lambda");
  const double dx = c.points.back().x() - c.points.front().x();
  return modified_energy(c, lambda) + lambda * dx;
}

double exact_bending_energy(const PlacedCurve& c) {
  const auto& p = c.placement;
  const double ua = (c.s_min + p.shift) / p.scale;
  if (c.infinite()) {
    if (c.family.tag != FamilyTag::Borderline) {
      throw DomainError("exact_bending_energy: infinite domain has infinite energy");
    }
    return (4 - k2_antiderivative(c.family, ua)) / p.scale;
  }
  const double ub = (c.s_max + p.shift) / p.scale;
  return (k2_antiderivative(c.family, ub) - k2_antiderivative(c.family, ua)) / p.scale;
}

double adapted_energy(const PlacedCurve& c, double lambda) {
  require_positive(lambda, "lambda");
  if (!c.infinite()) {
    const double dx = families::eval(c, c.s_max).position.x() - families::eval(c, c.s_min).position.x();
    return exact_bending_energy(c) + lambda * (c.length() + dx);
  }
  auto integrand = [&](double s) {
    const auto pt = families::eval(c, s);
    return pt.curvature * pt.curvature + lambda * (1 + std::cos(pt.angle));
  };
  const double scale = c.placement.scale;
  for (double far : {40.0, 80.0}) {
    const double v = integrand(c.s_min + far * scale);
    if (!(std::abs(v) < 1e-10)) {
      std::ostringstream os;
      os << "adapted_energy: integrand does not decay (value " << v << " at s = "
         << c.s_min + far * scale << ")";
      throw DomainError(os.str());
    }
  }
  boost::math::quadrature::exp_sinh<double> integrator;
  // exp_sinh integrates over [a, inf) after a change of variables that
  // expects the decay scale near 1; rescale the argument accordingly.
  auto scaled = [&](double t) { return scale * integrand(c.s_min + scale * t); };
  return integrator.integrate(scaled, 0.0, std::numeric_limits<double>::infinity());
}

EnergyReport energy_report(const SampledCurve& c, std::optional<double> lambda) {
  EnergyReport r;
  r.bending = bending_energy(c);
  r.length = length(c);
  if (lambda) {
    r.modified = r.bending + *lambda * r.length;
    if (*lambda > 0) r.adapted = adapted_energy(c, *lambda);
  }
  return r;
}

NoFlux noflux_check(const SampledCurve& c) {
  require_samples(c, 4, "noflux_check");
  const auto& k = c.k;
  const std::size_t n = k.size() - 1;
  return {(-3 * k[0] + 4 * k[1] - k[2]) / (2 * c.h),
          (3 * k[n] - 4 * k[n - 1] + k[n - 2]) / (2 * c.h)};
}

ZeroEllCandidates penalised_zero_candidates(double lambda) {
  require_positive(lambda, "lambda");
  const auto curve = minimiser({0.0, Penalised{lambda}, Orientation::SameTangent});
  return {exact_bending_energy(curve) + lambda * curve.length(), 0.0};
}

}  // namespace elastica::fbp
