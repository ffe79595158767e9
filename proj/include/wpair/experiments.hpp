#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wpair/core.hpp"
#include "wpair/domain.hpp"
#include "wpair/wspec.hpp"

namespace wpair {

struct EllipseParams {
  EllipseParams(double a, double b);
  double a;
  double b;
  double c() const { return std::sqrt((a - b) * (a + b)); }
};

/// [[c, 2b], [0, -c]]: W(T) is the closed ellipse with semi-axes a, b and T^2 = c^2 I.
Matrix crouzeix_matrix(const EllipseParams& p);

struct DegreeResult {
  int degree = 0;
  double w = 0;                 // w(f_d(T))
  double structure_defect = 0;  // ||f_d(T) - (f_d(c)/c) T||
  double sup_error = 0;         // approximant error on the boundary
  bool skipped = false;         // fit too ill-conditioned
};

struct EllipseViolation {
  double a = 0, b = 0, c = 0;
  double w_t = 0;
  cplx g_at_c;
  double ratio = 0;          // |g(c)| a / c
  double schwarz_lower = 0;  // c / a
  std::vector<DegreeResult> degrees;
  std::optional<int> first_violating_degree;
};

EllipseViolation ellipse_violation(const EllipseParams& p, const std::vector<int>& degrees);

/// Condition (i) for the Crouzeix matrix on its own numerical range with base point 0.
PairCheckReport pair_refutation(const EllipseParams& p, int trials = 16, std::uint64_t seed = 0);

struct InvolutionReport {
  std::uint64_t seed = 0;
  int attempts = 0;
  double s_condition = 0;
  Matrix t;
  double fit_residual = 0;  // max |A x^2 + B xy + C y^2 + D x + E y - 1| over the boundary
  cplx center;
  double a = 0, b = 0;      // fitted semi-axes
  double rotation = 0;      // major-axis angle
  PairCheckReport refutation;
};

/// T = S diag(1, -1) S^{-1} for random S; fits W(T) to a conic and refutes
/// (W(T), 0) as a W-spectral pair. S is resampled when cond(S) > 1e6, when T is
/// numerically Hermitian, or when the fitted minor semi-axis leaves [0.25, 4].
InvolutionReport involution_demo(std::uint64_t seed, int trials = 8);

struct BskReport {
  int trials = 0;
  std::uint64_t seed = 0;
  double max_w = 0;               // max w(f(T)), f(0) = 0
  int worst_trial = -1;
  double max_teardrop_excess = 0; // max signed distance of W(f(T)) to t(f(0))
  int worst_teardrop_trial = -1;
  bool passed = false;
};

/// Random T (n <= 6) with w(T) = 1 and random f on the disk: w(f(T)) <= 1 + 1e-7
/// when f(0) = 0 and W(f(T)) inside t(f(0)) + 1e-6 for Moebius-shifted f.
BskReport bsk_fuzz(int trials, std::uint64_t seed);

struct SearchCandidate {
  Matrix t;
  double penalty = 0;    // max(0, violation of W(T) inside the domain)
  double objective = 0;  // max_d w(f_d(T))
  int best_degree = 0;
};

struct SearchOptions {
  int budget = 2000;
  std::uint64_t seed = 7;
  std::vector<int> degrees{8, 16, 32};
  double rho = 10.0;
  int evaluations_per_restart = 400;
  std::optional<Matrix> start;  // first restart begins here
};

struct SearchReport {
  SearchCandidate best;
  bool feasible = false;   // best has penalty <= 1e-8
  bool violates = false;   // feasible and objective > 1
  int evaluations = 0;
  int restarts = 0;
  SearchOptions options;
  std::string domain;
};

/// Penalty of W(T) against the closed domain: exact for rectangles, sampled support functions otherwise.
double containment_penalty(const Matrix& t, const Domain& domain);

/// Nelder-Mead with random restarts on the 18 real parameters of a 3x3 matrix,
/// maximizing max_d w(f_d(T)) - rho * penalty.
SearchReport square_search(const Domain& domain, const SearchOptions& options);

}  // namespace wpair
