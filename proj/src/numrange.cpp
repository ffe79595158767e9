#include "wpair/numrange.hpp"

#include <algorithm>
#include <cmath>

#include "wpair/matcore.hpp"

namespace wpair {

namespace {

double support_value(const Matrix& t, double theta) {
  return lambda_max(re_part(std::polar(1.0, -theta) * t));
}

double golden_max(const Matrix& t, double lo, double hi, int iterations) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = support_value(t, x1), f2 = support_value(t, x2);
  double best = std::max(f1, f2);
  for (int it = 0; it < iterations && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = support_value(t, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = support_value(t, x1);
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

}  // namespace

SupportPoint support_point(const Matrix& t, double theta) {
  require_square(t, "numrange");
  const auto eig = herm_eig(re_part(std::polar(1.0, -theta) * t));
  const Eigen::Index top = eig.eigenvalues.size() - 1;
  SupportPoint sp;
  sp.value = eig.eigenvalues(top);
  sp.vector = eig.eigenvectors.col(top);
  sp.point = sp.vector.dot(t * sp.vector);  // x* T x
  return sp;
}

RangeBoundary boundary(const Matrix& t, int samples) {
  require_square(t, "numrange");
  if (samples < 8) throw InputError("numrange: boundary needs at least 8 samples");
  RangeBoundary out;
  out.points.reserve(static_cast<size_t>(samples));
  out.angles.reserve(static_cast<size_t>(samples));
  out.support_values.reserve(static_cast<size_t>(samples));
  out.vectors.resize(t.rows(), samples);
  for (int k = 0; k < samples; ++k) {
    const double theta = 2 * kPi * k / samples;
    const SupportPoint sp = support_point(t, theta);
    out.points.push_back(sp.point);
    out.angles.push_back(theta);
    out.support_values.push_back(sp.value);
    out.vectors.col(k) = sp.vector;
  }
  return out;
}

double RangeBoundary::residual(const Matrix& t) const {
  double worst = 0;
  for (size_t k = 0; k < points.size(); ++k) {
    const Vector x = vectors.col(static_cast<Eigen::Index>(k));
    worst = std::max(worst, std::abs(x.dot(t * x) - points[k]));
  }
  return worst;
}

bool RangeBoundary::is_convex(double tol) const {
  const size_t m = points.size();
  if (m < 3) return true;
  double scale = 0;
  for (const auto& p : points) scale = std::max(scale, std::abs(p));
  scale = std::max(scale, 1.0);
  for (size_t k = 0; k < m; ++k) {
    const cplx e1 = points[(k + 1) % m] - points[k];
    const cplx e2 = points[(k + 2) % m] - points[(k + 1) % m];
    const double cross = e1.real() * e2.imag() - e1.imag() * e2.real();
    if (cross < -tol * scale * scale) return false;
  }
  return true;
}

double numerical_radius(const Matrix& t, const RadiusOptions& options) {
  require_square(t, "numrange");
  const int m = std::max(8, options.coarse_samples);
  std::vector<double> h(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) h[static_cast<size_t>(k)] = support_value(t, 2 * kPi * k / m);
  double best = *std::max_element(h.begin(), h.end());

  std::vector<int> peaks;
  for (int k = 0; k < m; ++k) {
    const double prev = h[static_cast<size_t>((k + m - 1) % m)];
    const double next = h[static_cast<size_t>((k + 1) % m)];
    const double here = h[static_cast<size_t>(k)];
    if (here >= prev && here >= next) peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(),
            [&](int a, int b) { return h[static_cast<size_t>(a)] > h[static_cast<size_t>(b)]; });
  const double step = 2 * kPi / m;
  const int n_refine = std::min<int>(options.refine_candidates, static_cast<int>(peaks.size()));
  for (int p = 0; p < n_refine; ++p) {
    const double centre = step * peaks[static_cast<size_t>(p)];
    best = std::max(best, golden_max(t, centre - step, centre + step, options.refine_iterations));
  }
  return best;
}

ContainmentReport range_in_domain(const Matrix& t, const Domain& domain, double tol, int samples) {
  const RangeBoundary b = boundary(t, samples);
  ContainmentReport report;
  report.worst_violation = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < b.points.size(); ++k) {
    const double d = domain.signed_distance(b.points[k]);
    if (d > report.worst_violation) {
      report.worst_violation = d;
      report.worst_point = b.points[k];
      report.worst_angle = b.angles[k];
    }
  }
  report.inside = report.worst_violation <= tol;
  return report;
}

}  // namespace wpair
