#include "wpair/confmap.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/SVD>

#include "wpair/matcore.hpp"

namespace wpair {

ConformalAtlas build_atlas(const Domain& domain) {
  ConformalAtlas atlas(domain);
  const Shape& shape = domain.shape();
  if (const auto* d = std::get_if<Disk>(&shape)) {
    atlas.disk_a_ = (domain.base() - d->center) / d->radius;
    return atlas;
  }
  if (domain.base() != cplx(0))
    throw DomainError("confmap: " + domain.kind() + " maps are only supported with base point 0");
  if (const auto* e = std::get_if<Ellipse>(&shape)) {
    const double ratio = (e->a - e->b) / (e->a + e->b);
    atlas.focal_ = e->focal();
    atlas.kernel_ = elliptic_kernel(modulus_from_nome(ratio * ratio));
    return atlas;
  }
  const auto& r = std::get<Rectangle>(shape);
  atlas.kernel_ = elliptic_kernel(modulus_from_nome(std::exp(-kPi * 2.0 * r.half_height / r.half_width)));
  return atlas;
}

cplx ConformalAtlas::forward(cplx z) const {
  const Shape& shape = domain_.shape();
  if (const auto* d = std::get_if<Disk>(&shape)) {
    const cplx w = (z - d->center) / d->radius;
    return (w - disk_a_) / (1.0 - std::conj(disk_a_) * w);
  }
  const double k = kernel_.k;
  if (std::holds_alternative<Ellipse>(shape)) {
    const cplx u = (2.0 * kernel_.K / kPi) * std::asin(z / focal_);
    return std::sqrt(k) * jacobi_complex(u, k).sn();
  }
  const auto& r = std::get<Rectangle>(shape);
  const cplx u = (kernel_.K / r.half_width) * (z + kI * r.half_height);
  const JacobiComplex jc = jacobi_complex(u, k);
  const cplx s0 = kI / std::sqrt(k);
  const cplx num = jc.sn_num - s0 * jc.den;
  const cplx den = jc.sn_num - std::conj(s0) * jc.den;
  if (den == cplx(0)) return kI;  // sn pole: top midpoint
  return kI * num / den;
}

cplx ConformalAtlas::inverse(cplx w) const {
  const Shape& shape = domain_.shape();
  if (const auto* d = std::get_if<Disk>(&shape)) {
    const cplx v = (w + disk_a_) / (1.0 + std::conj(disk_a_) * w);
    return d->center + d->radius * v;
  }
  if (std::holds_alternative<Ellipse>(shape)) {
    const cplx x = w / std::sqrt(kernel_.k);
    const cplx u = inverse_sn(x, kernel_.k);
    return focal_ * std::sin(kPi * u / (2.0 * kernel_.K));
  }
  return inverse_rectangle(w);
}

cplx ConformalAtlas::inverse_rectangle(cplx w) const {
  const auto& r = std::get<Rectangle>(domain_.shape());
  const double k = kernel_.k, kp = kernel_.kp;
  if (std::abs(w - kI) < 1e-15) return kI * r.half_height;
  const cplx s0 = kI / std::sqrt(k);
  const cplx s = (w * std::conj(s0) - kI * s0) / (w - kI);
  cplx u;
  if (std::abs(s.imag()) <= 1e-13 * (1.0 + std::abs(s))) {
    // Boundary: s is real and the branch of sn^{-1} is chosen side by side.
    const double x = s.real();
    const double ax = std::abs(x);
    const double sign = x < 0 ? -1.0 : 1.0;
    if (ax <= 1.0) {
      u = inverse_sn(x, k);
    } else if (ax <= 1.0 / k) {
      const double y = std::min(1.0, std::sqrt(std::max(0.0, 1.0 - 1.0 / (x * x))) / kp);
      u = cplx(sign * kernel_.K, inverse_sn(y, kp));
    } else {
      u = cplx(inverse_sn(1.0 / (k * x), k), kernel_.Kp);
    }
  } else {
    u = inverse_sn(s, k);
  }
  return (r.half_width / kernel_.K) * u - kI * r.half_height;
}

Poly ConformalAtlas::basis_template() const {
  const Shape& shape = domain_.shape();
  if (const auto* d = std::get_if<Disk>(&shape)) return Poly({}, Basis::monomial, d->center, d->radius);
  if (std::holds_alternative<Ellipse>(shape)) return Poly({}, Basis::chebyshev, 0.0, focal_);
  const auto& r = std::get<Rectangle>(shape);
  return Poly({}, Basis::monomial, 0.0, std::hypot(r.half_width, r.half_height));
}

BoundaryQuadrature quadrature(const ConformalAtlas& atlas, int m) {
  if (m < 4) throw InputError("confmap: quadrature needs at least 4 nodes");
  BoundaryQuadrature q;
  q.m = m;
  q.nodes.reserve(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double theta = 2 * kPi * j / m;
    const cplx image = std::polar(1.0, theta);
    q.angles.push_back(theta);
    q.images.push_back(image);
    q.nodes.push_back(atlas.inverse(image));
    q.weights.push_back(1.0 / m);
  }
  return q;
}

cplx h_family(const ConformalAtlas& atlas, cplx zeta, cplx z) {
  const cplx gz = atlas.forward(zeta);
  const cplx g = atlas.forward(z);
  if (gz == g) throw PoleError("confmap: h_zeta evaluated at its pole", z, zeta);
  return (gz + g) / (gz - g);
}

Matrix h_family(cplx g_zeta, const Matrix& g_of_t, double pole_margin) {
  for (const cplx lambda : gen_eig(g_of_t).points)
    if (std::abs(lambda - g_zeta) < pole_margin) {
      std::ostringstream os;
      os << "confmap: g(zeta) = " << format_complex(g_zeta) << " is within " << pole_margin
         << " of the spectrum of g(T)";
      throw PoleError(os.str(), lambda, g_zeta);
    }
  const Matrix id = Matrix::Identity(g_of_t.rows(), g_of_t.cols());
  return solve(g_zeta * id - g_of_t, g_zeta * id + g_of_t);
}

namespace {

double golden_max(const std::function<double(double)>& f, double lo, double hi, int iterations) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  double best = std::max(f1, f2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

}  // namespace

double boundary_sup(const Domain& domain, const ScalarFn& f, int samples) {
  const int n = std::max(samples, 1024);
  auto value = [&](double t) { return std::abs(f(domain.boundary_point(t))); };
  std::vector<double> v(static_cast<size_t>(n));
  double best = 0;
  for (int k = 0; k < n; ++k) {
    v[static_cast<size_t>(k)] = value(2 * kPi * k / n);
    best = std::max(best, v[static_cast<size_t>(k)]);
  }
  for (double t : domain.corner_parameters()) best = std::max(best, value(t));
  std::vector<int> peaks;
  for (int k = 0; k < n; ++k) {
    const double here = v[static_cast<size_t>(k)];
    if (here >= v[static_cast<size_t>((k + n - 1) % n)] && here >= v[static_cast<size_t>((k + 1) % n)])
      peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(),
            [&](int a, int b) { return v[static_cast<size_t>(a)] > v[static_cast<size_t>(b)]; });
  const double step = 2 * kPi / n;
  for (size_t p = 0; p < peaks.size() && p < 8; ++p) {
    if (v[static_cast<size_t>(peaks[p])] < 0.5 * best) break;
    const double centre = step * peaks[p];
    best = std::max(best, golden_max(value, centre - step, centre + step, 60));
  }
  return best;
}

Poly normalize_on_boundary(const Poly& p, const Domain& domain, int samples) {
  const Poly centred = p.shifted(-p(domain.base()));
  const double sup = boundary_sup(domain, [&](cplx z) { return centred(z); }, samples);
  if (!(sup > 0)) return centred;
  return centred.scaled(1.0 / sup);
}

Approximant poly_approx(const ConformalAtlas& atlas, int degree) {
  const Domain& domain = atlas.domain();
  const Poly tmpl = atlas.basis_template();
  Approximant out;
  if (const auto* d = std::get_if<Disk>(&domain.shape()); d && domain.base() == d->center) {
    if (degree < 1) throw InputError("confmap: approximant degree must be positive");
    out.poly = Poly({0.0, 1.0}, Basis::monomial, d->center, d->radius);
    return out;
  }
  if (degree < 4) throw InputError("confmap: approximant degree must be at least 4");
  if (degree > kTol.max_degree) throw InputError("confmap: approximant degree exceeds 128");

  const int samples = 4 * degree;
  Matrix a(samples, degree + 1);
  Vector b(samples);
  // Nodes are equally spaced in the geometric parameter: harmonic measure from
  // z0 starves the tips of elongated domains.
  for (int j = 0; j < samples; ++j) {
    const cplx z = domain.boundary_point(2 * kPi * j / samples);
    const cplx x = (z - tmpl.center()) / tmpl.scale();
    b(j) = atlas.forward(z);
    if (tmpl.basis() == Basis::monomial) {
      cplx power = 1.0;
      for (int k = 0; k <= degree; ++k) {
        a(j, k) = power;
        power *= x;
      }
    } else {
      cplx prev = 1.0, cur = x;
      a(j, 0) = prev;
      for (int k = 1; k <= degree; ++k) {
        a(j, k) = cur;
        const cplx next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
      }
    }
  }
  // Column equilibration: basis functions grow geometrically along the boundary.
  RealVector column_scale(degree + 1);
  for (int k = 0; k <= degree; ++k) {
    column_scale(k) = a.col(k).cwiseAbs().maxCoeff();
    a.col(k) /= column_scale(k);
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  out.condition = sv(0) / sv(sv.size() - 1);
  if (!(out.condition <= 1e12)) {
    std::ostringstream os;
    os << "confmap: degree " << degree << " fit is ill-conditioned (condition " << out.condition << ")";
    throw DegreeTooHighError(os.str(), out.condition);
  }
  const Vector coeffs = svd.solve(b).cwiseQuotient(column_scale.cast<cplx>());
  const Poly fit(std::vector<cplx>(coeffs.data(), coeffs.data() + coeffs.size()), tmpl.basis(), tmpl.center(),
                 tmpl.scale());
  const Poly centred = fit.shifted(-fit(domain.base()));
  out.raw_sup = boundary_sup(domain, [&](cplx z) { return centred(z); }, 8 * degree);
  out.poly = centred.scaled(1.0 / out.raw_sup);

  const int checks = 8 * degree;
  for (int j = 0; j < checks; ++j) {
    const cplx z = domain.boundary_point(2 * kPi * (j + 0.5) / checks);
    out.sup_error = std::max(out.sup_error, std::abs(out.poly(z) - atlas.forward(z)));
  }
  return out;
}

void require_spectrum_inside(const Matrix& t, const Domain& domain, double margin) {
  for (const cplx lambda : gen_eig(t).points) {
    const double d = domain.signed_distance(lambda);
    if (!(d < -margin)) {
      std::ostringstream os;
      os << "confmap: spectrum point " << format_complex(lambda) << " is not strictly inside "
         << domain.describe() << " (signed distance " << d << ")";
      throw DomainError(os.str());
    }
  }
}

GOfMatrix g_of_matrix(const ConformalAtlas& atlas, const Matrix& t, int degree) {
  require_square(t, "confmap");
  require_finite(t, "confmap");
  require_spectrum_inside(t, atlas.domain());
  GOfMatrix out;
  out.approximant = poly_approx(atlas, degree);
  out.value = poly_apply(out.approximant.poly, t);
  return out;
}

}  // namespace wpair
