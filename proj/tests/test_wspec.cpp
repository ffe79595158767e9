#include <doctest.h>

#include "oracles.hpp"
#include "wpair/matcore.hpp"
#include "wpair/numrange.hpp"
#include "wpair/parallel.hpp"
#include "wpair/random.hpp"
#include "wpair/wspec.hpp"

using namespace wpair;

namespace {

Matrix mat2(cplx a, cplx b, cplx c, cplx d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix nilp(double s) { return mat2(0, s, 0, 0); }
Matrix crouzeix21() { return mat2(std::sqrt(3.0), 2.0, 0.0, -std::sqrt(3.0)); }

// Membership in hull(D(0,1) u D(a, 1-|a|^2)) through its support function.
bool teardrop_contains_oracle(cplx a, cplx p, double slack) {
  for (int k = 0; k < 4096; ++k) {
    const cplx u = std::polar(1.0, 2 * oracle::pi * k / 4096);
    const double h = std::max(1.0, (std::conj(u) * a).real() + 1 - std::norm(a));
    if ((std::conj(u) * p).real() > h + slack) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("condition (ii) on the disk") {
  auto disk = build_atlas(Domain::disk());
  auto edge = check_condition_ii(nilp(2), disk, 256, 32, 1e-8);
  CHECK(std::abs(edge.margin) < 1e-6);
  CHECK(edge.m == 256);
  CHECK(edge.degree == 32);
  REQUIRE(edge.witness);

  // Closed form: Re h_zeta(T) = I + 2 Re(conj(zeta) T) has lambda_min = 1 - s.
  auto out = check_condition_ii(nilp(2.2), disk, 256, 32, 1e-8);
  CHECK_FALSE(out.passed);
  CHECK(std::abs(out.margin - (2 - 2.2)) < 1e-12);
  REQUIRE(out.witness);
  CHECK(std::abs(std::abs(out.witness->node) - 1) < 1e-12);
  CHECK(std::abs(out.witness->value - out.margin) < 1e-15);

  auto zero = check_condition_ii(Matrix::Zero(3, 3), disk, 64, 8, 1e-8);
  CHECK(zero.passed);
  CHECK(std::abs(zero.margin - 2) < 1e-14);
}

TEST_CASE("condition (ii) with T = z0 I on every domain") {
  for (const Domain& d : {Domain::disk(0.0, 1.0, cplx(0.2, -0.1)), Domain::ellipse(2, 1), Domain::square()}) {
    auto atlas = build_atlas(d);
    auto r = check_condition_ii(d.base() * Matrix::Identity(2, 2), atlas, 64, 16, 1e-8);
    CHECK(r.passed);
    CHECK(std::abs(r.margin - 2) < 1e-9);
  }
}

TEST_CASE("condition (ii) rejects spectra outside the domain") {
  auto ell = build_atlas(Domain::ellipse(2, 1));
  CHECK_THROWS_AS(check_condition_ii(3.0 * Matrix::Identity(2, 2), ell, 64, 16, 1e-8), DomainError);
}

TEST_CASE("condition (ii) refutes the Crouzeix matrix and accepts a scaled copy") {
  auto ell = build_atlas(Domain::ellipse(2, 1));
  auto bad = check_condition_ii(crouzeix21(), ell, 256, 32, 1e-8);
  CHECK_FALSE(bad.passed);
  CHECK(bad.margin < -1);
  CHECK(bad.approx_error < 1e-6);
  auto good = check_condition_ii(0.3 * crouzeix21(), ell, 256, 32, 1e-8);
  CHECK(good.passed);
  CHECK(good.margin > 1);
}

TEST_CASE("disk condition (ii) tracks the numerical radius") {
  auto disk = build_atlas(Domain::disk());
  auto rng = make_rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix t = ginibre(2 + trial % 5, rng);
    const double target = std::array{0.9, 1.0, 1.1}[static_cast<size_t>(trial % 3)];
    t *= target / oracle::numerical_radius(t);
    auto spec = gen_eig(t).points;
    if (std::any_of(spec.begin(), spec.end(), [](cplx z) { return std::abs(z) > 1 - 1e-3; })) continue;
    auto r = check_condition_ii(t, disk, 512, 8, 1e-8);
    const bool passes = r.margin >= -1e-8;
    if (target < 1) CHECK(passes);
    if (target > 1) CHECK_FALSE(passes);
    if (target == 1) CHECK(std::abs(r.margin) < 1e-3);
  }
}

TEST_CASE("spectral disk condition tracks the norm") {
  auto rng = make_rng(103);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix t = ginibre(2 + trial % 5, rng);
    const double target = std::array{0.9, 1.1}[static_cast<size_t>(trial % 2)];
    t *= target / op_norm(t);
    auto spec = gen_eig(t).points;
    if (std::any_of(spec.begin(), spec.end(), [](cplx z) { return std::abs(z) > 1 - 1e-3; })) continue;
    auto r = check_spectral_disk(t, 512, 1e-8);
    CHECK(r.condition == PairCondition::spectral_disk);
    CHECK(r.passed == (target < 1));
  }
}

TEST_CASE("condition (i) sampled") {
  auto disk = build_atlas(Domain::disk());
  auto rng = make_rng(107);
  Matrix t = ginibre(4, rng);
  t /= oracle::numerical_radius(t);
  auto ok = check_condition_i_sampled(t, disk, 32, 1e-7, 5);
  CHECK(ok.passed);
  CHECK(ok.max_w <= 1 + 1e-7);
  CHECK(ok.trials >= 32);
  CHECK(ok.seed == std::optional<std::uint64_t>(5));

  auto ell = build_atlas(Domain::ellipse(2, 1));
  auto bad = check_condition_i_sampled(crouzeix21(), ell, 16, 1e-7, 5);
  CHECK_FALSE(bad.passed);
  REQUIRE(bad.witness);
  REQUIRE(bad.witness->function);
  CHECK(bad.witness->label.find("approximant") != std::string::npos);
  CHECK(bad.witness->function->degree() <= 32);
  const double ratio = oracle::ellipse_abs_g(2, 1, std::sqrt(3.0)) * 2 / std::sqrt(3.0);
  CHECK(bad.max_w > 1);
  CHECK(bad.max_w <= ratio + 1e-6);
  CHECK(std::abs(bad.margin - (1 - bad.max_w)) < 1e-15);

  auto zero = check_condition_i_sampled(Matrix::Zero(2, 2), ell, 8, 1e-7, 1);
  CHECK(zero.passed);
  CHECK(zero.max_w < 1e-12);
}

TEST_CASE("condition (i) sampled is independent of the thread count") {
  auto ell = build_atlas(Domain::ellipse(2, 1));
  auto rng = make_rng(109);
  Matrix t = 0.3 * ginibre(3, rng);
  set_thread_cap(1);
  auto one = check_condition_i_sampled(t, ell, 12, 1e-7, 77);
  set_thread_cap(4);
  auto four = check_condition_i_sampled(t, ell, 12, 1e-7, 77);
  set_thread_cap(0);
  CHECK(one.max_w == four.max_w);
  CHECK(one.witness->label == four.witness->label);
}

TEST_CASE("(ii) implies sampled (i) on random instances") {
  const std::vector<Domain> domains{Domain::disk(), Domain::ellipse(2, 1), Domain::square()};
  std::vector<ConformalAtlas> atlases;
  for (const auto& d : domains) atlases.push_back(build_atlas(d));
  auto rng = make_rng(113);
  std::uniform_real_distribution<double> unit(0.2, 0.9);
  int checked = 0;
  for (int trial = 0; checked < 100 && trial < 400; ++trial) {
    const auto& atlas = atlases[static_cast<size_t>(trial % 3)];
    Matrix t = ginibre(2 + trial % 3, rng);
    t *= unit(rng) / oracle::numerical_radius(t);
    auto ii = check_condition_ii(t, atlas, 128, 24, 1e-8);
    if (ii.margin <= 1e-3) continue;
    ++checked;
    SampledFamily family;
    family.approximant_degrees = {8, 16};
    auto i = check_condition_i_sampled(t, atlas, 4, 1e-6, static_cast<std::uint64_t>(trial), family);
    CHECK(i.passed);
  }
  CHECK(checked == 100);
}

TEST_CASE("Herglotz formula: constants and the nilpotent") {
  auto disk = build_atlas(Domain::disk());
  auto rng = make_rng(127);
  Matrix t = ginibre(3, rng);
  t *= 0.7 / op_norm(t);
  Matrix one = herglotz_apply([](cplx) { return cplx(1.0); }, t, disk, 64);
  CHECK((one - Matrix::Identity(3, 3)).norm() < 1e-8);

  Matrix n = nilp(1);
  Matrix z = herglotz_apply(RationalFn(Poly::identity()), n, disk, 8);
  CHECK((z - n).norm() < 1e-12);

  CHECK_THROWS_AS(herglotz_apply([](cplx) { return cplx(0.0, 1.0); }, t, disk, 64), HypothesisError);
  CHECK_THROWS_AS(herglotz_apply(RationalFn(Poly::constant(1.0), Poly({0.9, -1.0})), t, disk, 64), PoleError);
}

TEST_CASE("Herglotz formula on the ellipse") {
  // The boundary correspondence of ellipse(2, 1) is singular at the reflection of
  // the foci, so the trapezoid error for analytic data decays like |g(c)|^m with
  // |g(c)| = 0.956 whatever T is: about 1e-4 at m = 256 and 1e-9 at m = 512.
  auto ell = build_atlas(Domain::ellipse(2, 1));
  const Matrix expect = 3.0 * Matrix::Identity(2, 2);
  auto err = [&](int m) {
    return (herglotz_apply(RationalFn(Poly({0.0, 0.0, 1.0})), crouzeix21(), ell, m, 48) - expect).norm();
  };
  const double e256 = err(256);
  CHECK(e256 > 1e-5);
  CHECK(e256 < 1e-3);
  CHECK(err(512) < 1e-6);

  double previous = err(32);
  for (int m = 64; m <= 512; m *= 2) {
    const double e = err(m);
    if (previous > 1e-10) CHECK(e < 0.5 * previous);
    previous = e;
  }

  Matrix small = 0.5 * crouzeix21();
  Matrix fs = poly_apply(Poly({0.5, -1.0, 0.0, 2.0}), small);
  Matrix hs = herglotz_apply(RationalFn(Poly({0.5, -1.0, 0.0, 2.0})), small, ell, 640, 48);
  CHECK((hs - fs).norm() < 1e-8);

  // A rounder ellipse has a much wider analyticity annulus.
  auto round = build_atlas(Domain::ellipse(1.5, 1));
  Matrix hr = herglotz_apply(RationalFn(Poly({0.5, -1.0, 0.0, 2.0})), small * 0.75, round, 256, 48);
  CHECK((hr - poly_apply(Poly({0.5, -1.0, 0.0, 2.0}), small * 0.75)).norm() < 1e-8);
}

TEST_CASE("teardrop geometry") {
  Teardrop t0(0.0);
  CHECK(std::abs(t0.signed_distance(2.0) - 1.0) < 1e-12);
  CHECK(std::abs(t0.signed_distance(0.0) + 1.0) < 1e-12);

  auto rng = make_rng(131);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (cplx a : {cplx(0.5, 0), cplx(0, 0.9), cplx(-0.3, 0.4), cplx(0.99, 0)}) {
    Teardrop td(a);
    CHECK(td.contains(a));
    for (int k = 0; k < 300; ++k) {
      const cplx p(u(rng), u(rng));
      const double sd = td.signed_distance(p);
      if (sd < -1e-6) CHECK(teardrop_contains_oracle(a, p, 1e-9));
      if (sd > 1e-6) CHECK_FALSE(teardrop_contains_oracle(a, p, 0.0));
    }
  }
}

TEST_CASE("teardrop_check examples") {
  auto disk = build_atlas(Domain::disk());
  auto r0 = teardrop_check(nilp(2), disk, RationalFn(Poly::identity()), 360);
  CHECK(r0.inside);
  CHECK(std::abs(r0.apex) == 0.0);
  CHECK(r0.max_excess < 1e-7);

  auto rh = teardrop_check(nilp(2), disk, mobius_exchange(0.5), 360);
  CHECK(rh.inside);
  CHECK(std::abs(rh.apex - 0.5) < 1e-15);
  // Independent sweep of f(T) = (1/2 - T)(1 + T/2)^{-1} for T^2 = 0.
  const Matrix ft = 0.5 * Matrix::Identity(2, 2) - 0.75 * nilp(2);
  for (int k = 0; k < 360; ++k) {
    const auto x = Eigen::SelfAdjointEigenSolver<Matrix>(re_part(std::polar(1.0, -2 * kPi * k / 360) * ft));
    const Vector v = x.eigenvectors().col(1);
    const cplx p = v.dot(ft * v);
    CHECK(teardrop_contains_oracle(0.5, p, 1e-7));
  }

  auto ell = build_atlas(Domain::ellipse(2, 1));
  auto rc = teardrop_check(Matrix::Zero(2, 2), ell, RationalFn(Poly({0.3, 0.2})), 64,
                           TeardropOptions{1e-7, true, 64, 16, 1024});
  CHECK(rc.inside);
  CHECK(std::abs(rc.apex - 0.3) < 1e-15);

  CHECK_THROWS_AS(teardrop_check(nilp(2.2), disk, RationalFn(Poly::identity()), 64), HypothesisError);
  CHECK_THROWS_AS(teardrop_check(nilp(1), disk, RationalFn(Poly({0.0, 1.5})), 64), HypothesisError);
}
