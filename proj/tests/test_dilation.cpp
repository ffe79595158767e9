#include <doctest.h>

#include "oracles.hpp"
#include "wpair/dilation.hpp"
#include "wpair/matcore.hpp"
#include "wpair/random.hpp"

using namespace wpair;

namespace {

Matrix mat2(cplx a, cplx b, cplx c, cplx d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix nilp(double s) { return mat2(0, s, 0, 0); }

Poly monomial(int k) {
  std::vector<cplx> c(static_cast<size_t>(k + 1), 0.0);
  c.back() = 1.0;
  return Poly(c);
}

}  // namespace

TEST_CASE("POVM of a scalar operator") {
  auto ell = build_atlas(Domain::ellipse(2, 1));
  auto povm = povm_discretize(Matrix::Zero(2, 2), ell, 16, 16);
  REQUIRE(povm.elements.size() == 16);
  for (const auto& f : povm.elements) CHECK((f - Matrix::Identity(2, 2) / 16.0).norm() < 1e-14);
}

TEST_CASE("POVM on the disk at the boundary case") {
  auto disk = build_atlas(Domain::disk());
  auto povm = povm_discretize(nilp(2), disk, 64, 8);
  Matrix total = Matrix::Zero(2, 2);
  for (const auto& f : povm.elements) {
    CHECK(lambda_min(f) >= -1e-10);
    total += f;
  }
  CHECK((total - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK(povm.min_eigenvalue_raw > -1e-10);

  try {
    povm_discretize(nilp(2.2), disk, 64, 8);
    FAIL("expected a PSD failure");
  } catch (const NotPsdError& e) {
    CHECK(e.min_eigenvalue() < -1e-3);
    CHECK(e.index() >= 0);
    CHECK(e.index() < 64);
  }
}

TEST_CASE("Naimark dilation: trivial models") {
  PovmDiscretization one;
  one.elements = {Matrix::Identity(3, 3)};
  one.nodes = {cplx(0.6, 0.8)};
  one.m = 1;
  auto m1 = naimark_dilate(one);
  CHECK((m1.V - Matrix::Identity(3, 3)).norm() < 1e-15);
  CHECK((m1.normal_dense() - cplx(0.6, 0.8) * Matrix::Identity(3, 3)).norm() < 1e-15);

  PovmDiscretization uniform;
  uniform.m = 5;
  for (int j = 0; j < 5; ++j) {
    uniform.elements.push_back(Matrix::Identity(2, 2) / 5.0);
    uniform.nodes.push_back(std::polar(1.0, 2 * kPi * j / 5));
  }
  auto m5 = naimark_dilate(uniform);
  for (int j = 0; j < 5; ++j)
    CHECK((m5.block(j) - Matrix::Identity(2, 2) / std::sqrt(5.0)).norm() < 1e-15);
  CHECK((m5.V.adjoint() * m5.V - Matrix::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("Naimark identity and model invariants on the ellipse") {
  auto ell = build_atlas(Domain::ellipse(2, 1));
  Matrix t(2, 2);
  t << std::sqrt(3.0), 2.0, 0.0, -std::sqrt(3.0);
  t *= 0.3;
  auto povm = povm_discretize(t, ell, 128, 32);
  auto model = naimark_dilate(povm);
  CHECK((model.V.adjoint() * model.V - Matrix::Identity(2, 2)).norm() < 1e-10);

  const Matrix n = model.normal_dense();
  CHECK((n * n.adjoint() - n.adjoint() * n).norm() < 1e-12);
  Matrix sum_q = Matrix::Zero(n.rows(), n.cols());
  for (int j = 0; j < model.m; ++j) {
    const Matrix q = model.projection(j);
    CHECK((q * q - q).norm() == 0.0);
    // Brute force: V* Q_j V with the dense projection.
    CHECK((model.V.adjoint() * q * model.V - povm.elements[static_cast<size_t>(j)]).norm() < 1e-10);
    sum_q += q;
    CHECK(std::abs(ell.domain().signed_distance(model.nodes[static_cast<size_t>(j)])) < 1e-8);
  }
  CHECK((sum_q - Matrix::Identity(n.rows(), n.cols())).norm() == 0.0);
  for (int j = 0; j + 1 < model.m; ++j) CHECK((model.projection(j) * model.projection(j + 1)).norm() == 0.0);

  auto diag = verify(model, povm, ell.domain());
  CHECK(diag.isometry_defect < 1e-10);
  CHECK(diag.naimark_defect < 1e-10);
  CHECK(diag.boundary_distance < 1e-8);
}

TEST_CASE("dilation calculus on the disk") {
  auto disk = build_atlas(Domain::disk());
  auto model = naimark_dilate(povm_discretize(nilp(2), disk, 256, 8));
  CHECK(dilation_calculus_check(nilp(2), model, Poly(), disk.domain()) == 0.0);
  for (int k = 1; k <= 3; ++k) CHECK(dilation_calculus_check(nilp(2), model, monomial(k), disk.domain()) < 1e-8);
  CHECK_THROWS_AS(dilation_calculus_check(nilp(2), model, Poly({1.0, 1.0}), disk.domain()), HypothesisError);
  CHECK_THROWS_AS(
      dilation_calculus_check(nilp(2), model, RationalFn(Poly({1.0}), Poly({2.0, -1.0})), disk.domain()),
      HypothesisError);
  CHECK(dilation_calculus_check(nilp(2), model, RationalFn(Poly::identity(), Poly({2.0, -1.0})), disk.domain()) <
        1e-8);
}

TEST_CASE("base point caveat") {
  auto disk = build_atlas(Domain::disk());
  for (int m : {8, 64, 256}) {
    auto model = naimark_dilate(povm_discretize(nilp(2), disk, m, 8));
    const double delta = dilation_defect(Matrix::Identity(2, 2), model, [](cplx) { return cplx(1.0); });
    CHECK(delta > 0.5);
    CHECK(std::abs(delta - 1.0) < 1e-10);
  }
}

TEST_CASE("dilation calculus on the ellipse") {
  auto ell = build_atlas(Domain::ellipse(2, 1));
  Matrix t(2, 2);
  t << std::sqrt(3.0), 2.0, 0.0, -std::sqrt(3.0);
  t *= 0.3;
  auto model = naimark_dilate(povm_discretize(t, ell, 512, 32));
  const Poly g32 = poly_approx(ell, 32).poly;
  CHECK(dilation_calculus_check(t, model, g32, ell.domain()) < 1e-5);

  // The error shrinks with m for fixed analytic data.
  double previous = 1e300;
  for (int m : {32, 64, 128, 256}) {
    auto mm = naimark_dilate(povm_discretize(t, ell, m, 32));
    const double e = dilation_calculus_check(t, mm, monomial(3), ell.domain());
    if (previous > 1e-9) CHECK(e < 0.5 * previous);
    previous = e;
  }
}

TEST_CASE("resolvent positivity") {
  auto disk = build_atlas(Domain::disk());
  auto model = naimark_dilate(povm_discretize(nilp(2), disk, 256, 8));
  CHECK(resolvent_positivity_check(nilp(2), model, Poly(), 0.5, disk.domain()).positive);
  CHECK(resolvent_positivity_check(nilp(2), model, Poly::identity(), 0.0, disk.domain()).positive);
  // (I - aT)^{-1} = I + aT since T^2 = 0; Re has eigenvalues 1 +- a.
  auto r = resolvent_positivity_check(nilp(2), model, Poly::identity(), 0.9, disk.domain());
  CHECK(r.positive);
  CHECK(std::abs(r.lambda_min - 0.1) < 1e-12);
  CHECK(std::abs(r.model_lambda_min - 0.1) < 1e-6);
  CHECK(r.discrepancy < 1e-6);
}

TEST_CASE("Egervary dilation examples") {
  Matrix u = egervary_dilation(Matrix::Zero(1, 1), 1);
  CHECK((u - mat2(0, 1, 1, 0)).norm() < 1e-15);

  Matrix rot = mat2(std::cos(0.3), -std::sin(0.3), std::sin(0.3), std::cos(0.3));
  Matrix ur = egervary_dilation(rot, 4);
  CHECK(oracle::power_dilation_defect(ur, rot, 4) < 1e-14);
  CHECK(ur.block(0, 8, 2, 2).norm() < 1e-7);
  CHECK_THROWS_AS(egervary_dilation(nilp(1.01), 3), HypothesisError);
}

TEST_CASE("Egervary dilation on random contractions") {
  auto rng = make_rng(211);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    Matrix t = ginibre(n, rng);
    t *= (trial % 5 == 0 ? 1.0 : 0.95) / op_norm(t);
    const int steps = 5;
    Matrix u = egervary_dilation(t, steps);
    const Eigen::Index big = u.rows();
    CHECK(big == (steps + 1) * n);
    CHECK((u.adjoint() * u - Matrix::Identity(big, big)).norm() < 1e-10);
    CHECK((u * u.adjoint() - Matrix::Identity(big, big)).norm() < 1e-10);
    CHECK(oracle::power_dilation_defect(u, t, steps) < 1e-9);
  }
}
