#pragma once

#include <functional>
#include <vector>

#include "wpair/core.hpp"

namespace wpair {

enum class Basis { monomial, chebyshev };

/// Polynomial p(z) = sum_k c_k phi_k((z - center) / scale), coefficients in
/// ascending degree. phi_k is x^k for the monomial basis and the Chebyshev
/// polynomial T_k(x) otherwise. The default (center 0, scale 1, monomial) is the
/// plain power form used by the JSON interchange format.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<cplx> coeffs, Basis basis = Basis::monomial, cplx center = 0.0,
                double scale = 1.0);

  static Poly constant(cplx c) { return Poly({c}); }
  static Poly identity() { return Poly({0.0, 1.0}); }

  const std::vector<cplx>& coeffs() const { return coeffs_; }
  Basis basis() const { return basis_; }
  cplx center() const { return center_; }
  double scale() const { return scale_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  cplx operator()(cplx z) const;
  /// Same basis, constant term shifted so that the value changes by `delta` everywhere.
  Poly shifted(cplx delta) const;
  Poly scaled(cplx factor) const;

 private:
  void trim();
  std::vector<cplx> coeffs_;
  Basis basis_ = Basis::monomial;
  cplx center_ = 0.0;
  double scale_ = 1.0;
};

/// Plain power-basis coefficients of p (center 0, scale 1).
Poly to_monomial(const Poly& p);
Poly operator*(const Poly& p, const Poly& q);
Poly operator+(const Poly& p, const Poly& q);

/// Roots of a power-form polynomial via companion-matrix eigenvalues.
std::vector<cplx> poly_roots(const Poly& p);

class RationalFn {
 public:
  /// Cancels common roots within `cancel_tol`. The denominator must not vanish identically.
  RationalFn(Poly numerator, Poly denominator, double cancel_tol = 1e-10);
  explicit RationalFn(Poly numerator) : RationalFn(std::move(numerator), Poly::constant(1.0)) {}

  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }
  std::vector<cplx> poles() const { return poly_roots(den_); }
  cplx operator()(cplx z) const { return num_(z) / den_(z); }

 private:
  Poly num_;
  Poly den_;
};

using ScalarFn = std::function<cplx(cplx)>;

/// Horner (power basis) or Clenshaw (Chebyshev basis) evaluation at a matrix.
Matrix poly_apply(const Poly& p, const Matrix& t);

/// q(T)^{-1} p(T). Throws PoleError if a pole lies within `pole_margin` of sigma(T).
Matrix rational_apply(const RationalFn& f, const Matrix& t, double pole_margin = kTol.pole_margin);

/// (I + e^{-i theta} T)(I - e^{-i theta} T)^{-1}.
Matrix mobius_halfplane(const Matrix& t, double theta, double pole_margin = kTol.pole_margin);

/// The disk automorphism phi(z) = (a - z) / (1 - conj(a) z); an involution
/// exchanging 0 and a. Requires |a| < 1.
RationalFn mobius_exchange(cplx a);

}  // namespace wpair
