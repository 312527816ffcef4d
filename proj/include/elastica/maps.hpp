#pragma once

#include <optional>
#include <string_view>
#include <vector>

// Monotone parameter maps between free-boundary data and the elliptic
// parameter m.
//
//   WaveFixed       m -> 2E/K - 1                        (ell/L,  m in (0,1))
//   OrbitFixed      m -> 2E/(mK) + 1 - 2/m               (ell/L,  m in (0,1))
//   WavePenalised   m -> 2(2E - K) sqrt(4m - 2)          (ell sqrt(lambda), m in [m0,1))
//   OrbitPenalised  m -> (2E + (m-2)K) sqrt(4 - 2m) / m  (ell sqrt(lambda), m in (0,1))
//
// All four are strictly decreasing on their branch (checked numerically in
// the tests). For WaveFixed this is the opposite orientation to the one
// usually quoted for the inverse map; the numbers are what the code trusts:
// forward(WaveFixed, 0.5) ~ +0.457 and forward(WaveFixed, 0.9) ~ -0.143.

namespace elastica::maps {

enum class MapKind { WaveFixed, OrbitFixed, WavePenalised, OrbitPenalised };

std::string_view to_string(MapKind kind);
std::optional<MapKind> parse_map_kind(std::string_view text);

// Parameter interval on which the map is defined and monotone.
struct Branch {
  double m_lo;
  double m_hi;
  bool lo_included;
};
Branch branch(MapKind kind);

double forward(MapKind kind, double m);

// Closed-form d/dm of forward(kind, .).
double derivative(MapKind kind, double m);

// Inverse on the monotone branch: bracketing bisection in q = -log(1-m)
// refined by Newton steps. Returns m with |forward(m) - target| < 1e-11, or
// the correctly rounded m when the map is steeper than double spacing allows.
// Throws DomainError for targets outside the map's image (including targets
// whose preimage is indistinguishable from m = 1 in double precision) and
// NonConvergenceError if the iteration cap is hit.
double invert(MapKind kind, double target);

// Root of m -> 2E(m) - K(m) (the figure-eight parameter, ~0.8261).
// Computed once; initialization is thread-safe.
double m_zero();

// Maximum of f(m) = 2(2E - K) sqrt(4m - 2) on (1/2, m0).
struct Extremum {
  double m_star;
  double M_star;
};
Extremum wave_pen_extremum();

struct PinnedRoot {
  double m;
  int multiplicity;  // 2 for a tangential root at m_star
};

struct PinnedModes {
  std::vector<PinnedRoot> roots;  // ascending in m
  // Set when target == 0: f also vanishes at the excluded endpoint m = 1/2.
  bool degenerate_subcritical_endpoint = false;
};

// All m in (1/2, 1) with |2(2E - K) sqrt(4m - 2)| = ell_sqrt_lambda / n_mode.
PinnedModes pinned_modes(double ell_sqrt_lambda, int n_mode);

}  // namespace elastica::maps
