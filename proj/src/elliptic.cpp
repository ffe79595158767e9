#include "wpair/elliptic.hpp"

#include <array>
#include <sstream>

namespace wpair {

double agm(double a, double b) {
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * std::abs(a); ++it) {
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return 0.5 * (a + b);
}

double complete_k(double k) {
  if (!(k >= 0 && k < 1)) throw InputError("confmap: complete_k requires 0 <= k < 1");
  return kPi / (2.0 * agm(1.0, std::sqrt((1.0 - k) * (1.0 + k))));
}

JacobiTriple jacobi_real(double u, double k) {
  if (k == 0) return {std::sin(u), std::cos(u), 1.0};
  std::array<double, 32> a{}, c{};
  a[0] = 1.0;
  c[0] = k;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  int n = 0;
  while (n + 1 < static_cast<int>(a.size()) && std::abs(c[static_cast<size_t>(n)]) > 1e-17) {
    const double an = a[static_cast<size_t>(n)];
    a[static_cast<size_t>(n + 1)] = 0.5 * (an + b);
    c[static_cast<size_t>(n + 1)] = 0.5 * (an - b);
    b = std::sqrt(an * b);
    ++n;
  }
  double phi = std::ldexp(a[static_cast<size_t>(n)] * u, n);
  for (int j = n; j >= 1; --j) {
    phi = 0.5 * (phi + std::asin(c[static_cast<size_t>(j)] / a[static_cast<size_t>(j)] * std::sin(phi)));
  }
  JacobiTriple out;
  out.sn = std::sin(phi);
  out.cn = std::cos(phi);
  // k'^2 + k^2 cn^2 avoids the cancellation in 1 - k^2 sn^2 near u = K.
  out.dn = std::sqrt((1.0 - k) * (1.0 + k) + k * k * out.cn * out.cn);
  return out;
}

JacobiComplex jacobi_complex(cplx u, double k) {
  const double kp = std::sqrt((1.0 - k) * (1.0 + k));
  const JacobiTriple re = jacobi_real(u.real(), k);
  const JacobiTriple im = jacobi_real(u.imag(), kp);
  const double s = re.sn, c = re.cn, d = re.dn;
  const double s1 = im.sn, c1 = im.cn, d1 = im.dn;
  JacobiComplex out;
  out.den = c1 * c1 + k * k * s * s * s1 * s1;
  out.sn_num = cplx(s * d1, c * d * s1 * c1);
  out.cn_num = cplx(c * c1, -s * d * s1 * d1);
  out.dn_num = cplx(d * c1 * d1, -k * k * s * c * s1);
  return out;
}

namespace {

double theta_ratio_squared(double q) {
  double t2 = 0, t3 = 0;
  for (int n = 0; n < 10000; ++n) {
    const double term2 = std::pow(q, static_cast<double>(n) * (n + 1));
    const double term3 = n == 0 ? 0.0 : std::pow(q, static_cast<double>(n) * n);
    t2 += term2;
    t3 += term3;
    if (term2 < 1e-18 && n > 0) break;
  }
  t2 *= 2.0 * std::pow(q, 0.25);
  t3 = 1.0 + 2.0 * t3;
  const double r = t2 / t3;
  return r * r;
}

}  // namespace

double modulus_from_nome(double q) {
  if (!(q > 0 && q < 1)) throw InputError("confmap: nome must lie in (0, 1)");
  if (q <= 0.5) return theta_ratio_squared(q);
  // Complementary nome exp(pi^2 / ln q) converges faster here.
  const double kp = theta_ratio_squared(std::exp(kPi * kPi / std::log(q)));
  return std::sqrt((1.0 - kp) * (1.0 + kp));
}

EllipticKernel elliptic_kernel(double k) {
  if (!(k > 0 && k < 1)) {
    std::ostringstream os;
    os << "confmap: elliptic modulus must lie in (0, 1), got " << k;
    throw InputError(os.str());
  }
  EllipticKernel out;
  out.k = k;
  out.kp = std::sqrt((1.0 - k) * (1.0 + k));
  out.K = complete_k(k);
  out.Kp = complete_k(out.kp);
  return out;
}

}  // namespace wpair
