#pragma once

#include <vector>

#include "wpair/confmap.hpp"
#include "wpair/core.hpp"
#include "wpair/funcalc.hpp"

namespace wpair {

/// F_j = (Re h_{zeta_j}(T) + I) / (2m), renormalized so that sum_j F_j = I.
struct PovmDiscretization {
  std::vector<Matrix> elements;
  std::vector<cplx> nodes;
  int m = 0;
  double min_eigenvalue_raw = 0;  // min_j lambda_min(F_j) before clamping
  double mass_defect_raw = 0;     // ||sum_j F_j - I|| before renormalization
  double approx_error = 0;        // sup error of the g approximant
};

/// Throws NotPsdError (with the node index) when lambda_min(Re H_j + I) < -tol,
/// which is exactly a failure of condition (ii) at that node.
PovmDiscretization povm_discretize(const Matrix& t, const ConformalAtlas& atlas, int m, int degree,
                                   double tol = 1e-8);

/// Finite Naimark dilation: V stacks the blocks F_j^{1/2}, Q_j is the j-th
/// coordinate block and N = sum_j zeta_j Q_j. N is kept as its diagonal.
struct NaimarkModel {
  Matrix V;  // (m n) x n
  std::vector<cplx> nodes;
  int n = 0;
  int m = 0;

  auto block(int j) const { return V.middleRows(static_cast<Eigen::Index>(j) * n, n); }
  Vector normal_diagonal() const;
  Matrix normal_dense() const;
  Matrix projection(int j) const;
  /// V* (sum_j values_j Q_j) V.
  Matrix compress(const std::vector<cplx>& values) const;
};

NaimarkModel naimark_dilate(const PovmDiscretization& povm);

struct NaimarkDiagnostics {
  double isometry_defect = 0;   // ||V*V - I||
  double naimark_defect = 0;    // max_j ||V* Q_j V - F_j||
  int worst_node = -1;
  double boundary_distance = 0; // max_j |signed distance of zeta_j|
};

NaimarkDiagnostics verify(const NaimarkModel& model, const PovmDiscretization& povm, const Domain& domain);

/// ||f(T) - 2 V* f(N) V||, with no hypothesis on f. Used to exhibit the base-point caveat.
double dilation_defect(const Matrix& f_of_t, const NaimarkModel& model, const ScalarFn& f);

/// As dilation_defect, but refuses (HypothesisError) unless |f(z0)| <= 1e-10.
double dilation_calculus_check(const Matrix& t, const NaimarkModel& model, const Poly& f, const Domain& domain);
double dilation_calculus_check(const Matrix& t, const NaimarkModel& model, const RationalFn& f,
                               const Domain& domain);

struct ResolventReport {
  bool positive = false;
  double lambda_min = 0;        // lambda_min(Re (I - alpha f(T))^{-1})
  double model_lambda_min = 0;  // same operator through the model: I + 2 V* [alpha f/(1 - alpha f)](N) V
  double discrepancy = 0;       // operator norm of the difference of the two
};

/// Positivity of Re (I - alpha f(T))^{-1} for |alpha| < 1, f(z0) = 0, sup |f| <= 1.
ResolventReport resolvent_positivity_check(const Matrix& t, const NaimarkModel& model, const Poly& f, cplx alpha,
                                           const Domain& domain);

/// Unitary U on C^{(steps+1) n} whose compression to the first block gives
/// T^k for 1 <= k <= steps:
///   row 0: [T,   0 ... 0, D_{T*}]
///   row 1: [D_T, 0 ... 0, -T*   ]
///   rows 2..steps: identity blocks on the subdiagonal.
/// Throws HypothesisError if ||T|| > 1 + 1e-10.
Matrix egervary_dilation(const Matrix& t, int steps);

}  // namespace wpair
