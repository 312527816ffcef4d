#include "elastica/maps.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "elastica/elliptic.hpp"
#include "elastica/error.hpp"

namespace elastica::maps {
namespace {

using elliptic::complete_integrals;

constexpr int kMaxIter = 400;
// Largest double strictly below one.
constexpr double kMaxParameter = 1.0 - std::numeric_limits<double>::epsilon() / 2;

double to_q(double m) { return -std::log1p(-m); }
double from_q(double q) { return -std::expm1(-q); }

struct Sample {
  double K, E, D;  // D = K - E
};
Sample integrals(double m) {
  const auto ci = complete_integrals(m);
  return {ci.K, ci.E, ci.K_minus_E};
}

double dK(const Sample& s, double m) { return (m * s.K - s.D) / (2 * m * (1 - m)); }
double dE(const Sample& s, double m) { return -s.D / (2 * m); }

void require_in(double m, double lo, bool lo_closed, double hi, const char* what) {
  const bool ok = (lo_closed ? m >= lo : m > lo) && m < hi;
  if (!ok) {
    std::ostringstream os;
    os << what << ": m = " << m << " outside " << (lo_closed ? "[" : "(") << lo << ", " << hi
       << ")";
    throw DomainError(os.str());
  }
}

// Safeguarded Newton on a monotone function of x, with m = to_m(x). `value`
// returns f(m) - target and `slope` returns d/dx of the same. The bracket
// [xa, xb] must satisfy sign(value(xa)) != sign(value(xb)) (endpoint values
// may be supplied as limits). Stops on |value| <= tol or when the bracket
// collapses to adjacent doubles in m.
double safeguarded_root(const std::function<double(double)>& to_m,
                        const std::function<double(double)>& value,
                        const std::function<double(double)>& slope, double xa, double fa,
                        double xb, double fb, double tol) {
  if (fa == 0.0) return to_m(xa);
  if (fb == 0.0) return to_m(xb);
  if ((fa > 0) == (fb > 0)) throw DomainError("root not bracketed");
  // Orient so that value(xlo) < 0 < value(xhi).
  double xlo = fa < 0 ? xa : xb;
  double xhi = fa < 0 ? xb : xa;
  double x = 0.5 * (xa + xb);
  double dx_old = std::abs(xb - xa);
  double dx = dx_old;
  double best_m = to_m(x);
  double best_abs = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kMaxIter; ++it) {
    const double m = to_m(x);
    const double f = value(m);
    if (std::abs(f) < best_abs) {
      best_abs = std::abs(f);
      best_m = m;
    }
    if (std::abs(f) <= tol) return m;
    if (f < 0) xlo = x; else xhi = x;
    const double mlo = to_m(std::min(xlo, xhi));
    const double mhi = to_m(std::max(xlo, xhi));
    if (std::nextafter(mlo, 2.0) >= mhi) return best_m;
    const double d = slope(m);
    const double newton = x - f / d;
    const bool outside = !std::isfinite(newton) || (newton - xlo) * (newton - xhi) >= 0;
    if (outside || std::abs(2 * f) > std::abs(dx_old * d)) {
      dx_old = dx;
      dx = 0.5 * (xhi - xlo);
      x = xlo + dx;
    } else {
      dx_old = dx;
      dx = newton - x;
      x = newton;
    }
  }
  std::ostringstream os;
  os << "root finder did not converge (best residual " << best_abs << ")";
  throw NonConvergenceError(os.str());
}

double identity(double x) { return x; }

// f(m) = 2(2E - K) sqrt(4m - 2), defined on [1/2, 1).
double wave_pen(double m) {
  const auto s = integrals(m);
  return 2 * (2 * s.E - s.K) * std::sqrt(4 * m - 2);
}

double wave_pen_slope(double m) {
  const auto s = integrals(m);
  const double r = std::sqrt(4 * m - 2);
  return 2 * (2 * dE(s, m) - dK(s, m)) * r + 4 * (2 * s.E - s.K) / r;
}

}  // namespace

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::WaveFixed: return "wave-fixed";
    case MapKind::OrbitFixed: return "orbit-fixed";
    case MapKind::WavePenalised: return "wave-penalised";
    case MapKind::OrbitPenalised: return "orbit-penalised";
  }
  return "unknown";
}

std::optional<MapKind> parse_map_kind(std::string_view text) {
  for (auto kind : {MapKind::WaveFixed, MapKind::OrbitFixed, MapKind::WavePenalised,
                    MapKind::OrbitPenalised}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

Branch branch(MapKind kind) {
  switch (kind) {
    case MapKind::WaveFixed:
    case MapKind::OrbitFixed:
    case MapKind::OrbitPenalised:
      return {0.0, 1.0, false};
    case MapKind::WavePenalised:
      return {m_zero(), 1.0, true};
  }
  return {0.0, 1.0, false};
}

double forward(MapKind kind, double m) {
  switch (kind) {
    case MapKind::WaveFixed: {
      require_in(m, 0.0, true, 1.0, "forward(wave-fixed)");
      const auto s = integrals(m);
      return 2 * s.E / s.K - 1;
    }
    case MapKind::OrbitFixed: {
      require_in(m, 0.0, false, 1.0, "forward(orbit-fixed)");
      // 2E/(mK) + 1 - 2/m = 1 - 2(K - E)/(mK)
      const auto s = integrals(m);
      return 1 - 2 * s.D / (m * s.K);
    }
    case MapKind::WavePenalised:
      require_in(m, 0.5, true, 1.0, "forward(wave-penalised)");
      return wave_pen(m);
    case MapKind::OrbitPenalised: {
      require_in(m, 0.0, false, 1.0, "forward(orbit-penalised)");
      // (2E + (m-2)K)/m = K - 2(K - E)/m
      const auto s = integrals(m);
      return (s.K - 2 * s.D / m) * std::sqrt(4 - 2 * m);
    }
  }
  return 0.0;
}

double derivative(MapKind kind, double m) {
  switch (kind) {
    case MapKind::WaveFixed: {
      require_in(m, 0.0, false, 1.0, "derivative(wave-fixed)");
      const auto s = integrals(m);
      return 2 * (dE(s, m) * s.K - s.E * dK(s, m)) / (s.K * s.K);
    }
    case MapKind::OrbitFixed: {
      require_in(m, 0.0, false, 1.0, "derivative(orbit-fixed)");
      const auto s = integrals(m);
      const double g = (1 - m) * s.K * s.K - s.E * s.E;
      return g / (m * m * s.K * s.K * (1 - m));
    }
    case MapKind::WavePenalised:
      require_in(m, 0.5, false, 1.0, "derivative(wave-penalised)");
      return wave_pen_slope(m);
    case MapKind::OrbitPenalised: {
      require_in(m, 0.0, false, 1.0, "derivative(orbit-penalised)");
      const auto s = integrals(m);
      const double num = (m * m - 8 * m + 8) * s.E - (4 * m * m - 12 * m + 8) * s.K;
      return -num / ((1 - m) * m * m * std::sqrt(4 - 2 * m));
    }
  }
  return 0.0;
}

double invert(MapKind kind, double target) {
  if (!std::isfinite(target)) throw DomainError("invert: non-finite target");
  const Branch br = branch(kind);
  // Value (or limit) at the lower end of the branch.
  double f_lo = 0.0;
  bool lo_open_image = true;
  switch (kind) {
    case MapKind::WaveFixed: f_lo = 1.0; break;
    case MapKind::OrbitFixed: f_lo = 0.0; break;
    case MapKind::WavePenalised: f_lo = 0.0; lo_open_image = false; break;
    case MapKind::OrbitPenalised: f_lo = 0.0; break;
  }
  if (target > f_lo || (lo_open_image && target == f_lo)) {
    std::ostringstream os;
    os << "invert(" << to_string(kind) << "): target " << target << " outside image";
    throw DomainError(os.str());
  }
  if (!lo_open_image && target == f_lo) return br.m_lo;
  const double f_hi = forward(kind, kMaxParameter);
  if (target < f_hi) {
    std::ostringstream os;
    os << "invert(" << to_string(kind) << "): target " << target
       << " needs m closer to 1 than double precision resolves (limit " << f_hi << ")";
    throw DomainError(os.str());
  }
  const double tol = 1e-13 * std::max(1.0, std::abs(target));
  return safeguarded_root(
      from_q, [&](double m) { return forward(kind, m) - target; },
      [&](double m) { return derivative(kind, m) * (1 - m); }, to_q(br.m_lo), f_lo - target,
      to_q(kMaxParameter), f_hi - target, tol);
}

double m_zero() {
  static const double value = [] {
    auto g = [](double m) {
      const auto s = integrals(m);
      return 2 * s.E - s.K;
    };
    auto dg = [](double m) {
      const auto s = integrals(m);
      return 2 * dE(s, m) - dK(s, m);
    };
    return safeguarded_root(identity, g, dg, 0.5, g(0.5), 0.99, g(0.99), 1e-15);
  }();
  return value;
}

Extremum wave_pen_extremum() {
  static const Extremum value = [] {
    // Golden-section search for the bracket, then Newton on f' = 0 with a
    // central-difference second derivative.
    const double invphi = (std::sqrt(5.0) - 1) / 2;
    double a = 0.5, b = m_zero();
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = wave_pen(c), fd = wave_pen(d);
    while (b - a > 1e-6) {
      if (fc > fd) {
        b = d; d = c; fd = fc;
        c = b - invphi * (b - a);
        fc = wave_pen(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + invphi * (b - a);
        fd = wave_pen(d);
      }
    }
    double m = 0.5 * (a + b);
    for (int it = 0; it < 20; ++it) {
      const double g = wave_pen_slope(m);
      const double h = 1e-6;
      const double dg = (wave_pen_slope(m + h) - wave_pen_slope(m - h)) / (2 * h);
      const double step = g / dg;
      m -= step;
      if (std::abs(step) < 1e-15) break;
    }
    return Extremum{m, wave_pen(m)};
  }();
  return value;
}

PinnedModes pinned_modes(double ell_sqrt_lambda, int n_mode) {
  if (!(ell_sqrt_lambda >= 0) || !std::isfinite(ell_sqrt_lambda)) {
    throw DomainError("pinned_modes: ell*sqrt(lambda) must be finite and >= 0");
  }
  if (n_mode < 1) throw DomainError("pinned_modes: mode number must be >= 1");
  const double t = ell_sqrt_lambda / n_mode;
  const double m0 = m_zero();
  const auto [m_star, M_star] = wave_pen_extremum();

  PinnedModes out;
  if (t == 0.0) {
    out.roots.push_back({m0, 1});
    out.degenerate_subcritical_endpoint = true;
    return out;
  }
  const double tol = 1e-13 * std::max(1.0, t);
  auto value = [t](double m) { return wave_pen(m) - t; };
  if (std::abs(t - M_star) < 1e-9) {
    out.roots.push_back({m_star, 2});
  } else if (t < M_star) {
    out.roots.push_back({safeguarded_root(identity, value, wave_pen_slope, 0.5, -t, m_star,
                                          M_star - t, tol),
                         1});
    out.roots.push_back({safeguarded_root(identity, value, wave_pen_slope, m_star, M_star - t,
                                          m0, -t, tol),
                         1});
  }
  out.roots.push_back({invert(MapKind::WavePenalised, -t), 1});
  return out;
}

}  // namespace elastica::maps
