// Reference values computed by routes that share no code with the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
inline constexpr double pi = 3.14159265358979323846;

/// K(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t); the trapezoid rule is
/// spectrally accurate for this periodic integrand.
inline double complete_k_trapezoid(double k, int n = 4000) {
  double sum = 0;
  for (int j = 0; j < n; ++j) {
    const double t = 2 * pi * (j + 0.5) / n;
    const double s = std::sin(t);
    sum += 1.0 / std::sqrt(1.0 - k * k * s * s);
  }
  return sum / n * (pi / 2);
}

inline double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 100; ++it) {
    if (f1 < f2) {
      lo = x1; x1 = x2; f1 = f2; x2 = lo + r * (hi - lo); f2 = f(x2);
    } else {
      hi = x2; x2 = x1; f2 = f1; x1 = hi - r * (hi - lo); f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

/// lambda_max(Re(e^{-i theta} T)) through Eigen's tridiagonal QR solver.
inline double support(const Matrix& t, double theta) {
  const Matrix x = std::polar(1.0, -theta) * t;
  const Matrix h = 0.5 * (x + x.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

/// w(T) = max_theta support(theta), dense grid plus golden refinement.
inline double numerical_radius(const Matrix& t, int grid = 4096) {
  std::vector<double> h(static_cast<size_t>(grid));
  for (int k = 0; k < grid; ++k) h[static_cast<size_t>(k)] = support(t, 2 * pi * k / grid);
  double best = *std::max_element(h.begin(), h.end());
  const double step = 2 * pi / grid;
  for (int k = 0; k < grid; ++k) {
    const double here = h[static_cast<size_t>(k)];
    if (here < best - 1e-3 * (1 + std::abs(best))) continue;
    best = std::max(best, golden_max([&](double th) { return support(t, th); }, step * (k - 1), step * (k + 1)));
  }
  return best;
}

/// Largest singular value of a 2x2 matrix in closed form.
inline double op_norm_2x2(const Matrix& t) {
  const double f2 = t.squaredNorm();
  const double det = std::abs(t(0, 0) * t(1, 1) - t(0, 1) * t(1, 0));
  return std::sqrt(0.5 * (f2 + std::sqrt(std::max(0.0, f2 * f2 - 4 * det * det))));
}

/// |g(z)| for the Riemann map of the ellipse x^2/a^2 + y^2/b^2 < 1 with g(0) = 0.
/// log|g(z)| = log|z| + h(z) where h is harmonic with boundary values -log|z|.
/// On z = c cosh(rho + i phi) the Chebyshev polynomials T_n(z/c) have real part
/// cosh(n rho) cos(n phi), so the cosine coefficients of the boundary data give h.
inline double ellipse_abs_g(double a, double b, cplx z, int samples = 512, int terms = 80) {
  const double c = std::sqrt(a * a - b * b);
  const double rho = std::acosh(a / c);
  std::vector<double> data(static_cast<size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    const double phi = 2 * pi * j / samples;
    data[static_cast<size_t>(j)] = -std::log(std::abs(c * std::cosh(cplx(rho, phi))));
  }
  const cplx w = z / c;
  cplx t_prev = 1.0, t_cur = w;
  double h = 0;
  for (int n = 0; n < terms; ++n) {
    double coef = 0;
    for (int j = 0; j < samples; ++j) coef += data[static_cast<size_t>(j)] * std::cos(2 * pi * n * j / samples);
    coef *= (n == 0 ? 1.0 : 2.0) / samples;
    const cplx tn = n == 0 ? cplx(1.0) : t_cur;
    h += coef / std::cosh(n * rho) * tn.real();
    if (n >= 1) {
      const cplx next = 2.0 * w * t_cur - t_prev;
      t_prev = t_cur;
      t_cur = next;
    }
  }
  return std::abs(z) * std::exp(h);
}

/// g'(0) for the square (-1, 1)^2: B(1/4, 1/2) / (4 sqrt 2).
inline double square_derivative_at_zero() {
  const double beta = std::tgamma(0.25) * std::tgamma(0.5) / std::tgamma(0.75);
  return beta / (4.0 * std::sqrt(2.0));
}

/// Brute-force unitarity and power-dilation defects of a block matrix U over
/// the first n coordinates.
inline double power_dilation_defect(const Matrix& u, const Matrix& t, int steps) {
  const Eigen::Index n = t.rows();
  Matrix up = Matrix::Identity(u.rows(), u.cols());
  Matrix tp = Matrix::Identity(n, n);
  double worst = 0;
  for (int k = 1; k <= steps; ++k) {
    up = up * u;
    tp = tp * t;
    worst = std::max(worst, (up.topLeftCorner(n, n) - tp).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace oracle
