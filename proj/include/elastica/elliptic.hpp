#pragma once

// Complete and incomplete elliptic integrals and Jacobi elliptic functions.
//
// Everything here takes the *parameter* m (the squared modulus, m = k^2);
// the modulus k itself is never used in the public interface.
//
//   K(m)   = F(pi/2, m),   F(x, m) = int_0^x (1 - m sin^2 t)^(-1/2) dt
//   E(m)   = E(pi/2, m),   E(x, m) = int_0^x (1 - m sin^2 t)^(1/2) dt
//   am     = F^{-1},  sn = sin(am),  cn = cos(am),  dn = sqrt(1 - m sn^2)
//
// Complete integrals use the arithmetic-geometric mean; incomplete integrals
// use Carlson's symmetric forms after reducing the amplitude to
// [-pi/2, pi/2); the amplitude function uses the descending AGM (Landen)
// recurrence, which yields a continuous, unwrapped am(u, m) for all real u.
//
// All functions are pure and thread-safe. Domain violations throw
// elastica::DomainError.

namespace elastica::elliptic {

// 0 <= m < 1.
double complete_K(double m);

// 0 <= m <= 1; E(1) = 1.
double complete_E(double m);

// K, E and the difference K - E from a single AGM pass. The difference is
// accumulated directly from the AGM correction sum, so it keeps full relative
// precision as m -> 0 where K and E agree to leading order.
struct CompleteIntegrals {
  double K;
  double E;
  double K_minus_E;
};
CompleteIntegrals complete_integrals(double m);  // 0 <= m < 1

// F(x, m) for real x, 0 <= m < 1. Quasi-periodic: F(x + pi) = F(x) + 2K.
double incomplete_F(double x, double m);

// E(x, m) for real x, 0 <= m <= 1. Quasi-periodic: E(x + pi) = E(x) + 2E.
double incomplete_E(double x, double m);

// Amplitude am(u, m), 0 <= m <= 1. For m = 1 this is the Gudermannian.
double jacobi_am(double u, double m);

struct SnCnDn {
  double sn;
  double cn;
  double dn;
};
SnCnDn jacobi_sn_cn_dn(double u, double m);

// dK/dm = (E - (1-m)K) / (2m(1-m)),  dE/dm = (E - K) / (2m);  0 < m < 1.
double dK_dm(double m);
double dE_dm(double m);

}  // namespace elastica::elliptic
