#include "wpair/funcalc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wpair/matcore.hpp"

namespace wpair {

namespace {

using Coeffs = std::vector<cplx>;

Coeffs add(const Coeffs& a, const Coeffs& b) {
  Coeffs r(std::max(a.size(), b.size()), 0.0);
  for (size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (size_t k = 0; k < b.size(); ++k) r[k] += b[k];
  return r;
}

Coeffs mul(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Coeffs scale_by(const Coeffs& a, cplx s) {
  Coeffs r = a;
  for (auto& c : r) c *= s;
  return r;
}

}  // namespace

Poly::Poly(std::vector<cplx> coeffs, Basis basis, cplx center, double scale)
    : coeffs_(std::move(coeffs)), basis_(basis), center_(center), scale_(scale) {
  if (!(scale_ > 0) || !std::isfinite(scale_)) throw InputError("funcalc: polynomial scale must be positive");
  for (const auto& c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw InputError("funcalc: polynomial coefficient is not finite");
  trim();
  if (degree() > kTol.max_degree) throw InputError("funcalc: polynomial degree exceeds 128");
}

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == cplx(0)) coeffs_.pop_back();
}

cplx Poly::operator()(cplx z) const {
  if (coeffs_.empty()) return 0.0;
  const cplx x = (z - center_) / scale_;
  const int d = degree();
  if (basis_ == Basis::monomial) {
    cplx acc = coeffs_[static_cast<size_t>(d)];
    for (int k = d - 1; k >= 0; --k) acc = acc * x + coeffs_[static_cast<size_t>(k)];
    return acc;
  }
  cplx b1 = 0.0, b2 = 0.0;
  for (int k = d; k >= 1; --k) {
    const cplx b0 = coeffs_[static_cast<size_t>(k)] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs_[0] + x * b1 - b2;
}

Poly Poly::shifted(cplx delta) const {
  std::vector<cplx> c = coeffs_;
  if (c.empty()) c.push_back(0.0);
  c[0] += delta;
  return Poly(std::move(c), basis_, center_, scale_);
}

Poly Poly::scaled(cplx factor) const { return Poly(scale_by(coeffs_, factor), basis_, center_, scale_); }

Poly to_monomial(const Poly& p) {
  if (p.is_zero()) return Poly();
  // x = alpha z + beta
  const Coeffs x = {-p.center() / p.scale(), cplx(1.0 / p.scale())};
  const auto& c = p.coeffs();
  const int d = p.degree();
  if (p.basis() == Basis::monomial) {
    Coeffs acc = {c[static_cast<size_t>(d)]};
    for (int k = d - 1; k >= 0; --k) acc = add(mul(acc, x), {c[static_cast<size_t>(k)]});
    return Poly(acc);
  }
  Coeffs b1, b2;
  for (int k = d; k >= 1; --k) {
    Coeffs b0 = add(add({c[static_cast<size_t>(k)]}, scale_by(mul(x, b1), 2.0)), scale_by(b2, -1.0));
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  return Poly(add(add({c[0]}, mul(x, b1)), scale_by(b2, -1.0)));
}

Poly operator*(const Poly& p, const Poly& q) {
  return Poly(mul(to_monomial(p).coeffs(), to_monomial(q).coeffs()));
}

Poly operator+(const Poly& p, const Poly& q) {
  return Poly(add(to_monomial(p).coeffs(), to_monomial(q).coeffs()));
}

std::vector<cplx> poly_roots(const Poly& input) {
  const Poly p = to_monomial(input);
  const int d = p.degree();
  if (d < 1) return {};
  const auto& c = p.coeffs();
  Matrix companion = Matrix::Zero(d, d);
  for (int k = 1; k < d; ++k) companion(k, k - 1) = 1.0;
  for (int k = 0; k < d; ++k) companion(k, d - 1) = -c[static_cast<size_t>(k)] / c[static_cast<size_t>(d)];
  return gen_eig(companion).points;
}

RationalFn::RationalFn(Poly numerator, Poly denominator, double cancel_tol)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) throw InputError("funcalc: rational function with zero denominator");
  if (num_.is_zero() || den_.degree() < 1 || num_.degree() < 1) return;
  auto num_roots = poly_roots(num_);
  auto den_roots = poly_roots(den_);
  Coeffs nc = to_monomial(num_).coeffs();
  Coeffs dc = to_monomial(den_).coeffs();
  auto deflate = [](Coeffs& a, cplx r) {
    const size_t d = a.size() - 1;
    Coeffs q(d);
    cplx carry = a[d];
    for (size_t k = d; k-- > 0;) {
      q[k] = carry;
      carry = a[k] + r * carry;
    }
    a = std::move(q);
  };
  bool changed = false;
  for (const cplx r : den_roots) {
    auto it = std::find_if(num_roots.begin(), num_roots.end(),
                           [&](cplx s) { return std::abs(s - r) <= cancel_tol * (1.0 + std::abs(r)); });
    if (it == num_roots.end()) continue;
    const cplx mid = 0.5 * (*it + r);
    deflate(nc, mid);
    deflate(dc, mid);
    num_roots.erase(it);
    changed = true;
  }
  if (changed) {
    num_ = Poly(nc);
    den_ = Poly(dc);
  }
}

Matrix poly_apply(const Poly& p, const Matrix& t) {
  require_square(t, "funcalc");
  const Eigen::Index n = t.rows();
  const Matrix id = Matrix::Identity(n, n);
  if (p.is_zero()) return Matrix::Zero(n, n);
  const Matrix x = (t - p.center() * id) / p.scale();
  const auto& c = p.coeffs();
  const int d = p.degree();
  if (p.basis() == Basis::monomial) {
    Matrix acc = c[static_cast<size_t>(d)] * id;
    for (int k = d - 1; k >= 0; --k) {
      acc = acc * x;
      acc.diagonal().array() += c[static_cast<size_t>(k)];
    }
    return acc;
  }
  Matrix b1 = Matrix::Zero(n, n), b2 = Matrix::Zero(n, n);
  for (int k = d; k >= 1; --k) {
    Matrix b0 = 2.0 * (x * b1) - b2;
    b0.diagonal().array() += c[static_cast<size_t>(k)];
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  Matrix out = x * b1 - b2;
  out.diagonal().array() += c[0];
  return out;
}

Matrix rational_apply(const RationalFn& f, const Matrix& t, double pole_margin) {
  require_square(t, "funcalc");
  require_finite(t, "funcalc");
  const auto poles = f.poles();
  if (!poles.empty()) {
    const auto spectrum = gen_eig(t).points;
    for (const cplx pole : poles)
      for (const cplx lambda : spectrum)
        if (std::abs(pole - lambda) < pole_margin) {
          std::ostringstream os;
          os << "funcalc: pole " << format_complex(pole) << " is within " << pole_margin
             << " of spectrum point " << format_complex(lambda);
          throw PoleError(os.str(), lambda, pole);
        }
  }
  return solve(poly_apply(f.denominator(), t), poly_apply(f.numerator(), t));
}

Matrix mobius_halfplane(const Matrix& t, double theta, double pole_margin) {
  require_square(t, "funcalc");
  const cplx pole = std::polar(1.0, theta);
  for (const cplx lambda : gen_eig(t).points)
    if (std::abs(lambda - pole) < pole_margin) {
      std::ostringstream os;
      os << "funcalc: e^{i theta} = " << format_complex(pole) << " is within " << pole_margin
         << " of spectrum point " << format_complex(lambda);
      throw PoleError(os.str(), lambda, pole);
    }
  const Matrix x = std::conj(pole) * t;
  const Matrix id = Matrix::Identity(t.rows(), t.cols());
  return solve(id - x, id + x);
}

RationalFn mobius_exchange(cplx a) {
  if (!(std::abs(a) < 1.0)) throw InputError("funcalc: mobius_exchange requires |a| < 1");
  return RationalFn(Poly({a, -1.0}), Poly({1.0, -std::conj(a)}));
}

}  // namespace wpair
