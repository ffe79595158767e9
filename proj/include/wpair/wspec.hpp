#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wpair/confmap.hpp"
#include "wpair/core.hpp"
#include "wpair/funcalc.hpp"

namespace wpair {

enum class PairCondition {
  ii,             // Re h(T) >= -I over the half-plane family
  i_sampled,      // w(f(T)) <= 1 over a sampled family with f(z0) = 0, sup |f| <= 1
  spectral_disk,  // Re (I + X)(I - X)^{-1} >= 0, X = e^{-i theta} T
};

std::string to_string(PairCondition condition);

/// The node or test function at which the margin is attained.
struct Witness {
  std::string label;  // "node 17", "approximant d=32", "trial 4"
  int index = -1;
  cplx node;                     // zeta_j (node witnesses)
  double value = 0;              // lambda_min(Re H_j) + 1, or w(f(T))
  std::optional<Poly> function;  // test-function witnesses
};

struct PairCheckReport {
  PairCondition condition = PairCondition::ii;
  bool passed = false;
  /// (ii): min_j lambda_min(Re H_j) + 1. (i): 1 - max w(f(T)).
  double margin = 0;
  std::optional<Witness> witness;
  int m = 0;
  int degree = 0;
  double approx_error = 0;  // sup error of the g approximant used for (ii)
  int trials = 0;
  double max_w = 0;
  std::optional<std::uint64_t> seed;
};

/// Condition (ii) at the quadrature nodes zeta_j with g(T) replaced by its
/// degree-d approximant. Throws DomainError if sigma(T) is not inside and a
/// PoleError naming the node if g(zeta_j) is too close to sigma(g(T)).
PairCheckReport check_condition_ii(const Matrix& t, const ConformalAtlas& atlas, int m, int degree,
                                   double tol);

/// The spectral-set analogue on the unit disk: the margin is
/// min_j lambda_min(Re (I + X_j)(I - X_j)^{-1}), whose sign is that of 1 - ||T||.
PairCheckReport check_spectral_disk(const Matrix& t, int m, double tol);

struct SampledFamily {
  int max_random_degree = 24;
  std::vector<int> approximant_degrees{8, 16, 32};
  int boundary_samples = 1024;
};

/// Condition (i) against random Gaussian polynomials (in the atlas basis) and
/// the approximants of g, each normalized to f(z0) = 0 and boundary sup 1.
/// Evidence only when it passes; a failure carries an explicit witness.
PairCheckReport check_condition_i_sampled(const Matrix& t, const ConformalAtlas& atlas, int trials,
                                          double tol, std::uint64_t seed,
                                          const SampledFamily& family = {});

/// (1/m) sum_j h_{zeta_j}(T) Re f(zeta_j). Requires |Im f(z0)| <= 1e-10
/// (HypothesisError otherwise).
Matrix herglotz_apply(const ScalarFn& f, const Matrix& t, const ConformalAtlas& atlas, int m,
                      int degree = 32);
/// As above; also rejects poles of f in the closed domain.
Matrix herglotz_apply(const RationalFn& f, const Matrix& t, const ConformalAtlas& atlas, int m,
                      int degree = 32);

/// hull(D(0, 1) u D(a, 1 - |a|^2)) for |a| <= 1.
class Teardrop {
 public:
  explicit Teardrop(cplx apex);
  cplx apex() const { return apex_; }
  /// min_{t in [0,1]} |p - t a| - (1 - t |a|^2): the Euclidean distance outside,
  /// negative inside.
  double signed_distance(cplx p) const;
  bool contains(cplx p, double tol = 0) const { return signed_distance(p) <= tol; }

 private:
  cplx apex_;
};

struct TeardropOptions {
  double tol = 1e-7;
  bool verify_pair = true;  // run check_condition_ii first
  int m = 256;
  int degree = 32;
  int boundary_samples = 1024;
};

struct TeardropReport {
  bool inside = false;
  double max_excess = 0;  // max signed distance of sampled W(f(T)) to t(f(z0))
  cplx worst_point;
  cplx apex;
  double f_sup = 0;
  int samples = 0;
};

/// Samples W(f(T)) and tests it against the teardrop t(f(z0)). Throws
/// HypothesisError if (ii) fails or if sup |f| over the boundary exceeds 1 + 1e-9.
TeardropReport teardrop_check(const Matrix& t, const ConformalAtlas& atlas, const RationalFn& f,
                              int range_samples, const TeardropOptions& options = {});

}  // namespace wpair
