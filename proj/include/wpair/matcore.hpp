#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "wpair/core.hpp"

namespace wpair {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct HermEigResult {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> eigenvalues;  // ascending
  DenseMatrix<Scalar> eigenvectors;                    // orthonormal columns
};

struct Spectrum {
  std::vector<cplx> points;  // with multiplicity
  bool from_fallback = false;
};

void require_square(const Matrix& a, const char* who);
void require_finite(const Matrix& a, const char* who);

namespace detail {

template <typename Scalar>
Scalar unit_phase(const Scalar& x) {
  if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
    const auto r = std::abs(x);
    return r == 0 ? Scalar(1) : x / r;
  } else {
    return x < 0 ? Scalar(-1) : Scalar(1);
  }
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for real symmetric or complex Hermitian matrices.
///
/// Each rotation first removes the phase of a_pq with a diagonal unitary, then
/// applies the real symmetric Jacobi rotation; the composite is unitary.
/// Throws InputError for non-square input or when ||A - A*|| exceeds
/// `hermitian_tol * ||A||_F`.
template <typename Derived>
HermEigResult<typename Derived::Scalar> herm_eig(const Eigen::MatrixBase<Derived>& input,
                                                 double hermitian_tol = kTol.hermitian) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  if (input.rows() != input.cols() || input.rows() < 1)
    throw InputError("matcore: herm_eig requires a non-empty square matrix");
  const Eigen::Index n = input.rows();
  DenseMatrix<Scalar> a = input;
  const Real fro = a.norm();
  if (!std::isfinite(fro)) throw InputError("matcore: herm_eig input has non-finite entries");
  const Real asym = (a - a.adjoint()).norm();
  if (asym > hermitian_tol * fro) {
    std::ostringstream os;
    os << "matcore: herm_eig input is not Hermitian (||A-A*|| = " << asym << ")";
    throw InputError(os.str());
  }
  a = (a + a.adjoint()) * Real(0.5);
  DenseMatrix<Scalar> v = DenseMatrix<Scalar>::Identity(n, n);

  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real target = eps * eps * fro * fro;
  for (int sweep = 0; sweep < 100; ++sweep) {
    Real off = 0;
    for (Eigen::Index q = 1; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) off += std::norm(a(p, q));
    if (off <= target || off == Real(0)) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Real mag = std::abs(a(p, q));
        if (mag == Real(0)) continue;
        const Real app = std::real(a(p, p));
        const Real aqq = std::real(a(q, q));
        if (mag <= eps * Real(1e-3) * (std::abs(app) + std::abs(aqq)) ) {
          a(p, q) = Scalar(0);
          a(q, p) = Scalar(0);
          continue;
        }
        const Scalar e = detail::unit_phase(a(p, q));
        const Real theta = (aqq - app) / (Real(2) * mag);
        const Real t = (theta >= 0 ? Real(1) : Real(-1)) /
                       (std::abs(theta) + std::sqrt(theta * theta + Real(1)));
        const Real c = Real(1) / std::sqrt(t * t + Real(1));
        const Real s = t * c;
        // J restricted to (p,q) = [[c, s], [-s*conj(e), c*conj(e)]]
        const Scalar j_pp = c, j_pq = s;
        const Scalar j_qp = -s * Eigen::numext::conj(e), j_qq = c * Eigen::numext::conj(e);
        for (Eigen::Index k = 0; k < n; ++k) {  // A <- A J
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * j_pp + akq * j_qp;
          a(k, q) = akp * j_pq + akq * j_qq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // A <- J* A
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = Eigen::numext::conj(j_pp) * apk + Eigen::numext::conj(j_qp) * aqk;
          a(q, k) = Eigen::numext::conj(j_pq) * apk + Eigen::numext::conj(j_qq) * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // V <- V J
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * j_pp + vkq * j_qp;
          v(k, q) = vkp * j_pq + vkq * j_qq;
        }
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        a(p, p) = Scalar(std::real(a(p, p)));
        a(q, q) = Scalar(std::real(a(q, q)));
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return std::real(a(i, i)) < std::real(a(j, j));
  });
  HermEigResult<Scalar> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = std::real(a(order[k], order[k]));
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

/// Eigenvalues of a general complex matrix (Hessenberg reduction + shifted QR),
/// with a characteristic-polynomial fallback for n <= 4.
Spectrum gen_eig(const Matrix& a);

/// Roots of det(zI - A) through the Faddeev-LeVerrier coefficients and
/// Durand-Kerner iteration. Intended for n <= 4.
std::vector<cplx> characteristic_roots(const Matrix& a);

/// Smallest singular value of A - lambda I; zero at an exact eigenvalue.
double eigen_residual(const Matrix& a, cplx lambda);

/// Solves A X = B by LU with partial pivoting. Throws SingularMatrixError when a
/// pivot falls below `pivot_tol * ||A||_inf`.
Matrix solve(const Matrix& a, const Matrix& b, double pivot_tol = kTol.pivot);

/// (T + T*) / 2, exactly Hermitian.
Matrix re_part(const Matrix& t);

/// Hermitian square root of a PSD matrix. Eigenvalues in [-clamp, 0) are set
/// to zero; anything more negative throws NotPsdError.
Matrix psd_sqrt(const Matrix& a, double clamp = kTol.psd_clamp);

/// Operator 2-norm.
double op_norm(const Matrix& a);

/// Smallest eigenvalue of a Hermitian matrix.
double lambda_min(const Matrix& hermitian);
double lambda_max(const Matrix& hermitian);

}  // namespace wpair
