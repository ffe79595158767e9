#include "wpair/matcore.hpp"

#include <cstdio>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace wpair {

std::string format_complex(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

void require_square(const Matrix& a, const char* who) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    std::ostringstream os;
    os << who << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    throw InputError(os.str());
  }
}

void require_finite(const Matrix& a, const char* who) {
  if (!a.allFinite()) throw InputError(std::string(who) + ": matrix has non-finite entries");
}

std::vector<cplx> characteristic_roots(const Matrix& a) {
  require_square(a, "matcore");
  const Eigen::Index n = a.rows();
  // Faddeev-LeVerrier: det(zI - A) = sum_k c_k z^k with c_n = 1.
  std::vector<cplx> c(static_cast<size_t>(n) + 1);
  c[static_cast<size_t>(n)] = 1.0;
  Matrix m = Matrix::Zero(n, n);
  const Matrix id = Matrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[static_cast<size_t>(n - k + 1)] * id;
    c[static_cast<size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
  }
  auto eval = [&](cplx z) {
    cplx acc = c[static_cast<size_t>(n)];
    for (Eigen::Index k = n - 1; k >= 0; --k) acc = acc * z + c[static_cast<size_t>(k)];
    return acc;
  };
  double radius = 0;
  for (Eigen::Index k = 0; k < n; ++k) radius = std::max(radius, std::abs(c[static_cast<size_t>(k)]));
  radius = 1.0 + radius;
  std::vector<cplx> roots(static_cast<size_t>(n));
  const cplx seed(0.4, 0.9);
  for (Eigen::Index k = 0; k < n; ++k) roots[static_cast<size_t>(k)] = std::pow(seed, static_cast<double>(k)) * (0.5 * radius);
  for (int it = 0; it < 2000; ++it) {
    double change = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      cplx denom = 1.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) denom *= roots[static_cast<size_t>(i)] - roots[static_cast<size_t>(j)];
      if (denom == cplx(0)) denom = 1e-300;
      const cplx step = eval(roots[static_cast<size_t>(i)]) / denom;
      roots[static_cast<size_t>(i)] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change <= 1e-15 * radius) break;
  }
  return roots;
}

Spectrum gen_eig(const Matrix& a) {
  require_square(a, "matcore");
  require_finite(a, "matcore");
  Eigen::ComplexEigenSolver<Matrix> solver(a, false);
  Spectrum out;
  if (solver.info() == Eigen::Success) {
    const auto& ev = solver.eigenvalues();
    out.points.assign(ev.data(), ev.data() + ev.size());
    return out;
  }
  if (a.rows() <= 4) {
    out.points = characteristic_roots(a);
    out.from_fallback = true;
    return out;
  }
  throw ConvergenceError("matcore: gen_eig QR iteration did not converge");
}

double eigen_residual(const Matrix& a, cplx lambda) {
  const Matrix shifted = a - lambda * Matrix::Identity(a.rows(), a.cols());
  Eigen::JacobiSVD<Matrix> svd(shifted);
  return svd.singularValues().minCoeff();
}

Matrix solve(const Matrix& a, const Matrix& b, double pivot_tol) {
  require_square(a, "matcore");
  if (b.rows() != a.rows()) throw InputError("matcore: solve dimension mismatch");
  const Eigen::Index n = a.rows();
  Matrix lu = a;
  Matrix x = b;
  const double scale = a.cwiseAbs().rowwise().sum().maxCoeff();
  const double threshold = pivot_tol * scale;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    double best = std::abs(lu(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double v = std::abs(lu(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (!(best > threshold)) {
      std::ostringstream os;
      os << "matcore: singular matrix in solve (pivot " << best << " at column " << k << ")";
      throw SingularMatrixError(os.str(), best);
    }
    if (piv != k) {
      lu.row(k).swap(lu.row(piv));
      x.row(k).swap(x.row(piv));
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const cplx f = lu(i, k) / lu(k, k);
      if (f == cplx(0)) continue;
      lu.row(i).tail(n - k - 1) -= f * lu.row(k).tail(n - k - 1);
      x.row(i) -= f * x.row(k);
    }
  }
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (k + 1 < n) x.row(k) -= lu.row(k).tail(n - k - 1) * x.bottomRows(n - k - 1);
    x.row(k) /= lu(k, k);
  }
  return x;
}

Matrix re_part(const Matrix& t) {
  require_square(t, "matcore");
  Matrix r = 0.5 * (t + t.adjoint());
  const Eigen::Index n = r.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    r(j, j) = r(j, j).real();
    for (Eigen::Index i = j + 1; i < n; ++i) r(j, i) = std::conj(r(i, j));
  }
  return r;
}

Matrix psd_sqrt(const Matrix& a, double clamp) {
  const auto eig = herm_eig(a);
  const double lo = eig.eigenvalues(0);
  if (lo < -clamp) {
    std::ostringstream os;
    os << "matcore: psd_sqrt input is not positive semidefinite (lambda_min = " << lo << ")";
    throw NotPsdError(os.str(), lo);
  }
  const RealVector roots = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const Matrix r = eig.eigenvectors * roots.cast<cplx>().asDiagonal() * eig.eigenvectors.adjoint();
  return re_part(r);
}

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const Matrix gram = a.adjoint() * a;
  const auto eig = herm_eig(gram, 1e-10);
  return std::sqrt(std::max(0.0, eig.eigenvalues(eig.eigenvalues.size() - 1)));
}

double lambda_min(const Matrix& hermitian) { return herm_eig(hermitian).eigenvalues(0); }

double lambda_max(const Matrix& hermitian) {
  const auto ev = herm_eig(hermitian).eigenvalues;
  return ev(ev.size() - 1);
}

}  // namespace wpair
