#pragma once

#include <optional>
#include <string_view>
#include <variant>

#include "elastica/families.hpp"

// Free-boundary minimisers. Admissible curves start on the line x = 0 with
// tangent e1 and end on the line x = ell with tangent +e1 (same) or -e1
// (opposite). The minimisers are returned in canonical placement: no vertical
// reflection, zero vertical offset, left endpoint at arc length 0.

namespace elastica::fbp {

enum class Orientation { SameTangent, OppositeTangent };
std::string_view to_string(Orientation o);

struct FixedLength {
  double L;
};
struct Penalised {
  double lambda;
};

struct FreeBoundarySpec {
  double ell = 0.0;
  std::variant<FixedLength, Penalised> mode = FixedLength{1.0};
  Orientation orientation = Orientation::SameTangent;
};

// Throws DomainError when the spec is outside the cases listed below, or
// when ell is so far out that the parameter is not resolvable in double
// precision.
//
//   fixed, same,      |ell| < L : wavelike, Lambda = L/(2K), on [0, L]
//   fixed, opposite,  -L < ell < 0 : orbitlike, Lambda = L/K, on [0, L]
//   fixed, opposite,  ell = 0 : half circle of radius L/pi
//   penalised, same,  ell <= 0 : wavelike, Lambda = sqrt((4m-2)/lambda), on [0, 2K Lambda]
//   penalised, same,  ell > 0 : segment [0, ell]
//   penalised, opposite, ell < 0 : orbitlike, Lambda = sqrt((4-2m)/lambda), on [0, K Lambda]
//   penalised, opposite, ell = 0 : half circle of radius 1/sqrt(lambda)
families::PlacedCurve minimiser(const FreeBoundarySpec& spec);

// Half-line minimiser of the adapted energy: sqrt(2/lambda) gamma_b(s sqrt(lambda/2))
// on [0, inf).
families::PlacedCurve borderline_minimiser(double lambda);

// Trapezoid on the sample grid.
double bending_energy(const families::SampledCurve& curve);
double length(const families::SampledCurve& curve);
double modified_energy(const families::SampledCurve& curve, double lambda);

// B + lambda * int (1 + cos theta) ds. On a finite sampled curve the cosine
// integral is x_end - x_start, so adapted = modified + lambda (x_end - x_start).
double adapted_energy(const families::SampledCurve& curve, double lambda);

// Same functional on a placed curve; infinite domains are integrated with
// double-exponential quadrature after checking that the integrand decays.
// Throws DomainError if it does not.
double adapted_energy(const families::PlacedCurve& curve, double lambda);

// Bending energy of a placed curve from the closed-form antiderivatives of
// k^2 (no quadrature). Infinite domains are allowed for Borderline.
double exact_bending_energy(const families::PlacedCurve& curve);

struct EnergyReport {
  double bending = 0.0;
  double length = 0.0;
  std::optional<double> modified;
  std::optional<double> adapted;
};
EnergyReport energy_report(const families::SampledCurve& curve, std::optional<double> lambda);

// One-sided second-order estimates of k' at the two ends.
struct NoFlux {
  double start;
  double end;
};
NoFlux noflux_check(const families::SampledCurve& curve);

// At ell = 0 with penalisation and same tangents the minimiser switches
// discontinuously: the figure-eight half for ell <= 0, a segment of energy
// lambda * ell -> 0 for ell > 0. Both values are reported.
struct ZeroEllCandidates {
  double figure_eight;   // energy of the ell = 0 minimiser
  double segment_limit;  // limit of lambda * ell as ell -> 0+
};
ZeroEllCandidates penalised_zero_candidates(double lambda);

}  // namespace elastica::fbp
