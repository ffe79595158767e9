#pragma once

#include <cmath>
#include <complex>

#include "wpair/core.hpp"

namespace wpair {

namespace detail {
inline double abs_of(double x) { return std::abs(x); }
inline double abs_of(const cplx& x) { return std::abs(x); }
}  // namespace detail

/// Carlson's symmetric integral R_F(x, y, z) by duplication. Works for real
/// non-negative arguments and for complex arguments off the closed negative real
/// axis (principal branch), at most one of them zero.
template <typename Scalar>
Scalar carlson_rf(Scalar x, Scalar y, Scalar z) {
  using std::sqrt;
  const double tol = 1e-16;
  const Scalar x0 = x, y0 = y;
  Scalar a0 = (x + y + z) / 3.0;
  double q = std::pow(3.0 * tol, -1.0 / 6.0) *
             std::max({detail::abs_of(a0 - x), detail::abs_of(a0 - y), detail::abs_of(a0 - z)});
  Scalar a = a0;
  double scale = 1.0;
  for (int it = 0; it < 200 && q * scale >= detail::abs_of(a); ++it) {
    const Scalar sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
    const Scalar lambda = sx * sy + sy * sz + sz * sx;
    x = (x + lambda) / 4.0;
    y = (y + lambda) / 4.0;
    z = (z + lambda) / 4.0;
    a = (a + lambda) / 4.0;
    scale /= 4.0;
  }
  const Scalar dx = (a0 - x0) * scale / a;
  const Scalar dy = (a0 - y0) * scale / a;
  const Scalar dz = -(dx + dy);
  const Scalar e2 = dx * dy - dz * dz;
  const Scalar e3 = dx * dy * dz;
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / sqrt(a);
}

/// Arithmetic-geometric mean of two positive reals.
double agm(double a, double b);

/// Complete elliptic integral of the first kind K(k) = pi / (2 agm(1, k')), 0 <= k < 1.
double complete_k(double k);

/// Incomplete integral F(x; k) = x R_F(1 - x^2, 1 - k^2 x^2, 1), i.e. the inverse of sn.
template <typename Scalar>
Scalar inverse_sn(Scalar x, double k) {
  return x * carlson_rf<Scalar>(Scalar(1.0) - x * x, Scalar(1.0) - k * k * x * x, Scalar(1.0));
}

struct JacobiTriple {
  double sn = 0, cn = 1, dn = 1;
};

/// sn, cn, dn for real argument by descending Landen (AGM) recursion.
JacobiTriple jacobi_real(double u, double k);

/// sn, cn, dn for complex argument as numerators over a common real denominator,
/// so that points near a pole stay representable: sn(u) = sn_num / den, etc.
struct JacobiComplex {
  cplx sn_num, cn_num, dn_num;
  double den = 1;
  cplx sn() const { return sn_num / den; }
  cplx cn() const { return cn_num / den; }
  cplx dn() const { return dn_num / den; }
};

JacobiComplex jacobi_complex(cplx u, double k);

/// Modulus k from the nome q = exp(-pi K'/K) via theta functions: k = (theta2 / theta3)^2.
double modulus_from_nome(double q);

/// K(k) together with sn(., k).
struct EllipticKernel {
  double k = 0;
  double kp = 1;  // complementary modulus
  double K = 0;
  double Kp = 0;  // K(k')
  cplx sn(cplx u) const { return jacobi_complex(u, k).sn(); }
  double sn(double u) const { return jacobi_real(u, k).sn; }
};

/// Throws InputError unless 0 < k < 1.
EllipticKernel elliptic_kernel(double k);

}  // namespace wpair
