#include "elastica/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "elastica/error.hpp"

namespace elastica::elliptic {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;
constexpr int kMaxAgm = 40;  // quadratic convergence; ~6 steps for m < 1 - 1e-12

void require_parameter(double m, bool allow_one, const char* what) {
  if (!(m >= 0.0) || m > 1.0 || (!allow_one && m == 1.0)) {
    throw DomainError(std::string(what) + ": parameter m = " +
                      std::to_string(m) +
                      (allow_one ? " outside [0, 1]" : " outside [0, 1)"));
  }
}

// Carlson's RF (DLMF 19.36.1), following the duplication algorithm.
double carlson_rf(double x, double y, double z) {
  static const double tol = std::pow(3.0 * kEps * 0.01, 1.0 / 8.0);
  const double a0 = (x + y + z) / 3.0;
  double an = a0;
  const double q = std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)}) / tol;
  double x0 = x, y0 = y, z0 = z, mul = 1.0;
  while (q >= mul * std::abs(an)) {
    const double lam = std::sqrt(x0) * std::sqrt(y0) + std::sqrt(y0) * std::sqrt(z0) +
                       std::sqrt(z0) * std::sqrt(x0);
    an = (an + lam) / 4.0;
    x0 = (x0 + lam) / 4.0;
    y0 = (y0 + lam) / 4.0;
    z0 = (z0 + lam) / 4.0;
    mul *= 4.0;
  }
  const double X = (a0 - x) / (mul * an);
  const double Y = (a0 - y) / (mul * an);
  const double Z = -(X + Y);
  const double e2 = X * Y - Z * Z;
  const double e3 = X * Y * Z;
  return (e3 * (6930 * e3 + e2 * (15015 * e2 - 16380) + 17160) +
          e2 * ((10010 - 5775 * e2) * e2 - 24024) + 240240) /
         (240240 * std::sqrt(an));
}

// Carlson's RD (DLMF 19.36.2).
double carlson_rd(double x, double y, double z) {
  static const double tol = std::pow(0.2 * kEps * 0.01, 1.0 / 8.0);
  const double a0 = (x + y + 3 * z) / 5.0;
  double an = a0;
  const double q = std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)}) / tol;
  double x0 = x, y0 = y, z0 = z, mul = 1.0, s = 0.0;
  while (q >= mul * std::abs(an)) {
    const double lam = std::sqrt(x0) * std::sqrt(y0) + std::sqrt(y0) * std::sqrt(z0) +
                       std::sqrt(z0) * std::sqrt(x0);
    s += 1.0 / (mul * std::sqrt(z0) * (z0 + lam));
    an = (an + lam) / 4.0;
    x0 = (x0 + lam) / 4.0;
    y0 = (y0 + lam) / 4.0;
    z0 = (z0 + lam) / 4.0;
    mul *= 4.0;
  }
  const double X = (a0 - x) / (mul * an);
  const double Y = (a0 - y) / (mul * an);
  const double Z = -(X + Y) / 3.0;
  const double e2 = X * Y - 6 * Z * Z;
  const double e3 = (3 * X * Y - 8 * Z * Z) * Z;
  const double e4 = 3 * (X * Y - Z * Z) * Z * Z;
  const double e5 = X * Y * Z * Z * Z;
  return ((471240 - 540540 * e2) * e5 + (612612 * e2 - 540540 * e3 - 556920) * e4 +
          e3 * (306306 * e3 + e2 * (675675 * e2 - 706860) + 680680) +
          e2 * ((417690 - 255255 * e2) * e2 - 875160) + 4084080) /
             (4084080 * mul * an * std::sqrt(an)) +
         3 * s;
}

// Splits x = n*pi + r with r in [-pi/2, pi/2).
struct Reduced {
  double n;
  double r;
};
Reduced reduce_amplitude(double x) {
  const double n = std::floor((x + kPi / 2) / kPi);
  return {n, x - n * kPi};
}

}  // namespace

CompleteIntegrals complete_integrals(double m) {
  require_parameter(m, false, "complete_integrals");
  if (m == 0.0) return {kPi / 2, kPi / 2, 0.0};
  // a_0 = 1, b_0 = sqrt(1-m), c_0^2 = m.
  // K = pi / (2 a_N),  K - E = K * sum_n 2^(n-1) c_n^2.
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  double sum = 0.5 * m;
  double pow2 = 0.5;
  for (int n = 0; n < kMaxAgm; ++n) {
    const double c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
    if (std::abs(c) <= kEps * a) break;
  }
  const double K = kPi / (2.0 * a);
  const double k_minus_e = K * sum;
  return {K, K - k_minus_e, k_minus_e};
}

double complete_K(double m) {
  require_parameter(m, false, "complete_K");
  return complete_integrals(m).K;
}

double complete_E(double m) {
  require_parameter(m, true, "complete_E");
  if (m == 1.0) return 1.0;
  return complete_integrals(m).E;
}

double incomplete_F(double x, double m) {
  require_parameter(m, false, "incomplete_F");
  if (!std::isfinite(x)) throw DomainError("incomplete_F: non-finite amplitude");
  if (m == 0.0) return x;
  const auto [n, r] = reduce_amplitude(x);
  const double s = std::sin(r);
  const double c = std::cos(r);
  const double partial = s * carlson_rf(c * c, 1.0 - m * s * s, 1.0);
  return n == 0.0 ? partial : 2.0 * n * complete_K(m) + partial;
}

double incomplete_E(double x, double m) {
  require_parameter(m, true, "incomplete_E");
  if (!std::isfinite(x)) throw DomainError("incomplete_E: non-finite amplitude");
  if (m == 0.0) return x;
  const auto [n, r] = reduce_amplitude(x);
  const double s = std::sin(r);
  if (m == 1.0) return 2.0 * n + s;
  const double c = std::cos(r);
  const double d2 = 1.0 - m * s * s;
  const double partial =
      s * carlson_rf(c * c, d2, 1.0) - m / 3.0 * s * s * s * carlson_rd(c * c, d2, 1.0);
  return n == 0.0 ? partial : 2.0 * n * complete_E(m) + partial;
}

double jacobi_am(double u, double m) {
  require_parameter(m, true, "jacobi_am");
  if (!std::isfinite(u)) throw DomainError("jacobi_am: non-finite argument");
  if (m == 0.0) return u;
  if (m == 1.0) return std::atan(std::sinh(u));
  // Descending AGM: phi_N = 2^N a_N u, phi_{n-1} = (phi_n + asin(c_n/a_n sin phi_n))/2.
  std::array<double, kMaxAgm + 1> a{};
  std::array<double, kMaxAgm + 1> c{};
  a[0] = 1.0;
  double b = std::sqrt(1.0 - m);
  c[0] = std::sqrt(m);
  int n = 0;
  while (n < kMaxAgm && std::abs(c[n]) > kEps * a[n]) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  for (int j = n; j > 0; --j) {
    phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
  }
  return phi;
}

SnCnDn jacobi_sn_cn_dn(double u, double m) {
  require_parameter(m, true, "jacobi_sn_cn_dn");
  if (m == 1.0) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }
  const double phi = jacobi_am(u, m);
  const double sn = std::sin(phi);
  return {sn, std::cos(phi), std::sqrt(1.0 - m * sn * sn)};
}

double dK_dm(double m) {
  if (!(m > 0.0 && m < 1.0)) throw DomainError("dK_dm: requires 0 < m < 1");
  const auto ci = complete_integrals(m);
  // E - (1-m)K = mK - (K - E)
  return (m * ci.K - ci.K_minus_E) / (2.0 * m * (1.0 - m));
}

double dE_dm(double m) {
  if (!(m > 0.0 && m < 1.0)) throw DomainError("dE_dm: requires 0 < m < 1");
  const auto ci = complete_integrals(m);
  return -ci.K_minus_E / (2.0 * m);
}

}  // namespace elastica::elliptic
