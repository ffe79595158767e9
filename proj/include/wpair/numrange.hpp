#pragma once

#include <vector>

#include "wpair/core.hpp"
#include "wpair/domain.hpp"

namespace wpair {

struct SupportPoint {
  double value = 0;   // lambda_max(Re(e^{-i theta} T))
  cplx point;         // <T x, x> for the top unit eigenvector x
  Vector vector;      // x
};

/// Boundary polyline of W(T), counterclockwise in the sweep angle.
struct RangeBoundary {
  std::vector<cplx> points;
  std::vector<double> angles;
  std::vector<double> support_values;
  Matrix vectors;  // column k is the unit vector realizing points[k]

  /// max_k |<T x_k, x_k> - points[k]|.
  double residual(const Matrix& t) const;
  /// Cross products of consecutive edges are >= -tol * scale^2.
  bool is_convex(double tol = kTol.convexity) const;
};

SupportPoint support_point(const Matrix& t, double theta);

/// W(T) boundary from `samples` equally spaced sweep angles (samples >= 8).
RangeBoundary boundary(const Matrix& t, int samples);

struct RadiusOptions {
  int coarse_samples = 720;
  int refine_iterations = 60;
  int refine_candidates = 4;
};

/// w(T): coarse sweep of the support function, then golden-section refinement
/// around the best local maxima.
double numerical_radius(const Matrix& t, const RadiusOptions& options = {});

struct ContainmentReport {
  bool inside = true;
  double worst_violation = 0;  // max signed distance over the boundary samples
  cplx worst_point;
  double worst_angle = 0;
};

/// Tests W(T) against the closed domain inflated by `tol`.
ContainmentReport range_in_domain(const Matrix& t, const Domain& domain, double tol, int samples = 720);

}  // namespace wpair
