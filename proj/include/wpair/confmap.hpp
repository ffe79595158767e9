#pragma once

#include <memory>
#include <vector>

#include "wpair/core.hpp"
#include "wpair/domain.hpp"
#include "wpair/elliptic.hpp"
#include "wpair/funcalc.hpp"

namespace wpair {

/// Riemann map g of a supported domain onto the unit disk, normalized by
/// g(z0) = 0 and g'(z0) > 0, with its inverse.
///
/// disk:      Moebius map, exact.
/// ellipse:   g(z) = sqrt(k) sn((2K/pi) asin(z/c); k), c the focal distance and
///            k the modulus of nome ((a-b)/(a+b))^2. Requires z0 = 0.
/// rectangle: sn maps the rectangle onto the upper half-plane (K'/K = 2h/w),
///            followed by the half-plane-to-disk Moebius map. Requires z0 = 0.
class ConformalAtlas {
 public:
  const Domain& domain() const { return domain_; }

  cplx forward(cplx z) const;
  cplx inverse(cplx w) const;
  /// g^{-1}(e^{i theta}).
  cplx boundary_param(double theta) const { return inverse(std::polar(1.0, theta)); }

  /// Polynomial basis in which approximants of g are well conditioned.
  Poly basis_template() const;

  /// Elliptic data for the ellipse and rectangle maps (k = 0 for the disk).
  const EllipticKernel& kernel() const { return kernel_; }

 private:
  friend ConformalAtlas build_atlas(const Domain& domain);
  explicit ConformalAtlas(Domain domain) : domain_(std::move(domain)) {}
  cplx inverse_rectangle(cplx w) const;

  Domain domain_;
  EllipticKernel kernel_{};
  double focal_ = 0;   // ellipse
  cplx disk_a_ = 0.0;  // disk: normalized base point
};

ConformalAtlas build_atlas(const Domain& domain);

/// Nodes zeta_j = g^{-1}(e^{2 pi i j/m}) with uniform weights: discrete harmonic measure at z0.
struct BoundaryQuadrature {
  std::vector<cplx> nodes;
  std::vector<cplx> images;  // g(zeta_j) = e^{2 pi i j/m}, exact
  std::vector<double> angles;
  std::vector<double> weights;
  int m = 0;
};

BoundaryQuadrature quadrature(const ConformalAtlas& atlas, int m);

/// h_zeta(z) = (g(zeta) + g(z)) / (g(zeta) - g(z)).
cplx h_family(const ConformalAtlas& atlas, cplx zeta, cplx z);
/// Matrix form given g(zeta) on the unit circle and G = g(T).
Matrix h_family(cplx g_zeta, const Matrix& g_of_t, double pole_margin = kTol.pole_margin);

/// Samples |f| along the geometric boundary (max(samples, 1024) points plus
/// corners), then refines the largest local maxima by golden-section search.
double boundary_sup(const Domain& domain, const ScalarFn& f, int samples);

/// (p - p(z0)) / sup_{boundary} |p - p(z0)|; a constant p becomes the zero polynomial.
Poly normalize_on_boundary(const Poly& p, const Domain& domain, int samples);

/// Degree-d boundary least-squares approximant of g with p(z0) = 0 and boundary sup 1.
/// Throws DegreeTooHighError when the fit's condition number exceeds 1e12.
struct Approximant {
  Poly poly;
  double sup_error = 0;      // max |p - g| over 8d boundary samples (after normalization)
  double condition = 1;      // least-squares condition estimate
  double raw_sup = 1;        // boundary sup before the final division
};
Approximant poly_approx(const ConformalAtlas& atlas, int degree);

/// Throws DomainError unless every eigenvalue of T sits `margin` inside the domain.
void require_spectrum_inside(const Matrix& t, const Domain& domain, double margin = kTol.spectrum_margin);

struct GOfMatrix {
  Matrix value;
  Approximant approximant;
};

/// p_d(T) for the degree-d approximant of g.
GOfMatrix g_of_matrix(const ConformalAtlas& atlas, const Matrix& t, int degree);

}  // namespace wpair
