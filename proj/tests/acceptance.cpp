// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wpair/dilation.hpp"
#include "wpair/experiments.hpp"
#include "wpair/io.hpp"
#include "wpair/matcore.hpp"
#include "wpair/numrange.hpp"
#include "wpair/random.hpp"
#include "wpair/wspec.hpp"

using namespace wpair;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail << "failed: ";
      else detail << "; ";
      detail << what;
      ok = false;
    }
  }
};

Poly monomial(int k) {
  std::vector<cplx> c(static_cast<size_t>(k + 1), 0.0);
  c.back() = 1.0;
  return Poly(c);
}

bool spectrum_near(const Matrix& t, double radius, double gap) {
  auto s = gen_eig(t).points;
  return std::any_of(s.begin(), s.end(), [&](cplx z) { return std::abs(z) > radius - gap; });
}

// 1. Crouzeix matrix for a = 2, b = 1.
void crouzeix(Outcome& out) {
  const Matrix t = crouzeix_matrix(EllipseParams(2, 1));
  auto s = gen_eig(t).points;
  std::sort(s.begin(), s.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
  const double c = std::sqrt(3.0);
  const double spec_err = std::max(std::abs(s[0] + c), std::abs(s[1] - c));
  double fit = 0;
  for (cplx z : boundary(t, 720).points) fit = std::max(fit, std::abs(std::norm(z.real() / 2) + std::norm(z.imag()) - 1));
  const double w = numerical_radius(t);
  out.require(spec_err < 1e-10, "spectrum");
  out.require(fit < 1e-6, "ellipse fit");
  out.require(std::abs(w - 2) < 1e-8, "numerical radius");
  out.detail << " spectrum_err=" << spec_err << " fit=" << fit << " w=" << w;
}

// 2. The ellipse is not a W-spectral pair with its center.
void ellipse(Outcome& out) {
  auto r = ellipse_violation(EllipseParams(2, 1), {8, 16, 32});
  const double oracle_g = oracle::ellipse_abs_g(2, 1, r.c);
  out.require(r.ratio > 1.01, "ratio margin");
  out.require(r.first_violating_degree && *r.first_violating_degree <= 32, "violating degree");
  out.require(std::abs(r.g_at_c) > r.c / r.a, "Schwarz bound");
  out.require(std::abs(std::abs(r.g_at_c) - oracle_g) < 1e-8, "oracle |g(c)|");
  out.detail << " ratio=" << r.ratio << " |g(c)|=" << std::abs(r.g_at_c) << " oracle=" << oracle_g;
  if (r.first_violating_degree) out.detail << " first_d=" << *r.first_violating_degree;
}

// 3. On the disk, (ii) is w(T) <= 1 and the spectral version is ||T|| <= 1.
void disk_equivalences(Outcome& out) {
  auto disk = build_atlas(Domain::disk());
  auto rng = make_rng(3);
  const double targets[] = {0.9, 1.0, 1.1};
  int checked = 0, resampled = 0, w_bad = 0, norm_bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    const double target = targets[trial % 3];
    Matrix t, u;
    // Spectra touching the circle leave the open domain; draw again.
    for (;;) {
      Matrix x = ginibre(n, rng);
      t = x * (target / oracle::numerical_radius(x));
      u = x * (target / op_norm(x));
      if (!spectrum_near(t, 1, 1e-3) && !spectrum_near(u, 1, 1e-3)) break;
      ++resampled;
    }
    auto r = check_condition_ii(t, disk, 512, 8, 1e-6);
    if (r.passed != (target <= 1)) ++w_bad;
    auto s = check_spectral_disk(u, 512, 1e-6);
    if (s.passed != (target <= 1)) ++norm_bad;
    ++checked;
  }
  out.require(w_bad == 0, std::to_string(w_bad) + " numerical radius disagreements");
  out.require(norm_bad == 0, std::to_string(norm_bad) + " norm disagreements");
  out.detail << " matrices=" << checked << " resampled=" << resampled;
}

// 4. Berger-Stampfli-Kato on random data.
void bsk(Outcome& out) {
  auto r = bsk_fuzz(500, 4);
  out.require(r.max_w <= 1 + 1e-7, "w(f(T)) above 1");
  out.detail << " trials=" << r.trials << " max_w=" << r.max_w;
}

// 5. Herglotz reconstruction converges geometrically in m.
void herglotz(Outcome& out) {
  auto rng = make_rng(5);
  const std::vector<RationalFn> family = {
      RationalFn(Poly::constant(1.0)), RationalFn(Poly::identity()), RationalFn(monomial(2)),
      RationalFn(Poly({0.5, -1.0, 0.0, 2.0})), RationalFn(Poly::constant(1.0), Poly({3.0, -1.0}))};
  struct Case {
    const char* name;
    Domain domain;
    double radius;
  };
  const Case cases[] = {{"disk", Domain::disk(), 0.5}, {"ellipse(1.5,1)", Domain::ellipse(1.5, 1), 0.4}};
  double worst256 = 0;
  for (const Case& c : cases) {
    auto atlas = build_atlas(c.domain);
    for (int trial = 0; trial < 3; ++trial) {
      Matrix t = ginibre(2 + trial, rng);
      t *= c.radius / numerical_radius(t);
      for (size_t k = 0; k < family.size(); ++k) {
        const Matrix exact = rational_apply(family[k], t);
        double previous = 1e300;
        for (int m : {16, 32, 64, 128, 256}) {
          const double e = (herglotz_apply(family[k], t, atlas, m, 48) - exact).norm();
          if (previous > 1e-10 && !(e < 0.5 * previous))
            out.require(false, std::string(c.name) + " no decay at m=" + std::to_string(m));
          previous = e;
        }
        worst256 = std::max(worst256, previous);
      }
    }
  }
  out.require(worst256 < 1e-8, "error at m=256");
  out.detail << " worst_error_m256=" << worst256;
}

// 6. Naimark models from the positive measure of condition (ii).
void naimark(Outcome& out) {
  auto rng = make_rng(6);
  struct Case {
    Domain domain;
    std::vector<double> radii;
  };
  const Case cases[] = {{Domain::disk(), {0.3, 0.6, 0.9}}, {Domain::ellipse(2, 1), {0.4, 0.7}}};
  int models = 0;
  double naimark_defect = 0, boundary = 0, calculus = 0;
  for (const Case& c : cases) {
    auto atlas = build_atlas(c.domain);
    for (double radius : c.radii) {
      for (int n = 2; n <= 4; ++n) {
        Matrix t = ginibre(n, rng);
        t *= radius / numerical_radius(t);
        auto pair = check_condition_ii(t, atlas, 512, 32, 1e-8);
        if (!pair.passed || pair.margin <= 1e-3) continue;
        auto povm = povm_discretize(t, atlas, 512, 32);
        auto model = naimark_dilate(povm);
        auto diag = verify(model, povm, c.domain);
        naimark_defect = std::max(naimark_defect, diag.naimark_defect);
        boundary = std::max(boundary, diag.boundary_distance);
        for (int k = 1; k <= 6; ++k)
          calculus = std::max(calculus, dilation_calculus_check(t, model, monomial(k), c.domain));
        const Poly mixed({0.0, cplx(0.5, -0.25), 0.0, -0.3, 0.0, 0.0, 0.1});
        calculus = std::max(calculus, dilation_calculus_check(t, model, mixed, c.domain));
        ++models;
      }
    }
  }
  Matrix nilp = Matrix::Zero(2, 2);
  nilp(0, 1) = 2;
  auto disk = build_atlas(Domain::disk());
  auto model = naimark_dilate(povm_discretize(nilp, disk, 512, 32));
  const double delta = dilation_defect(Matrix::Identity(2, 2), model, [](cplx) { return cplx(1.0); });

  out.require(models >= 10, "too few models");
  out.require(naimark_defect < 1e-10, "V*Q_jV = F_j");
  out.require(boundary < 1e-8, "nodes off the boundary");
  out.require(calculus < 1e-6, "f(T) = 2V*f(N)V");
  out.require(delta >= 0.5, "base point caveat");
  out.detail << " models=" << models << " naimark=" << naimark_defect << " boundary=" << boundary
             << " calculus=" << calculus << " delta(f=1)=" << delta;
}

// 7. Egervary dilation of random contractions.
void egervary(Outcome& out) {
  auto rng = make_rng(7);
  double unitary = 0, powers = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Matrix t = ginibre(1 + trial % 5, rng);
    t *= (trial % 4 == 0 ? 1.0 : 0.9) / op_norm(t);
    const Matrix u = egervary_dilation(t, 5);
    const Matrix id = Matrix::Identity(u.rows(), u.cols());
    unitary = std::max({unitary, (u.adjoint() * u - id).norm(), (u * u.adjoint() - id).norm()});
    powers = std::max(powers, oracle::power_dilation_defect(u, t, 5));
  }
  out.require(unitary < 1e-10, "unitarity");
  out.require(powers < 1e-9, "compressed powers");
  out.detail << " unitary=" << unitary << " powers=" << powers;
}

// 8. Drury's teardrop for disk-to-disk rational maps.
void teardrop(Outcome& out) {
  auto disk = build_atlas(Domain::disk());
  auto rng = make_rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = -1e300;
  for (int trial = 0; trial < 200; ++trial) {
    Matrix t;
    do {
      t = ginibre(1 + trial % 5, rng);
      t *= (0.5 + 0.5 * unit(rng)) / numerical_radius(t);
    } while (spectrum_near(t, 1, 1e-3));
    // c * Blaschke product of degree 1..3.
    Poly num = Poly::constant(std::polar(std::sqrt(unit(rng)), 2 * kPi * unit(rng)));
    Poly den = Poly::constant(1.0);
    for (int k = 0; k <= trial % 3; ++k) {
      const cplx a = std::polar(0.9 * std::sqrt(unit(rng)), 2 * kPi * unit(rng));
      num = num * Poly({a, -1.0});
      den = den * Poly({1.0, -std::conj(a)});
    }
    TeardropOptions opts;
    opts.tol = 1e-6;
    auto r = teardrop_check(t, disk, RationalFn(num, den), 360, opts);
    worst = std::max(worst, r.max_excess);
    if (!r.inside) out.require(false, "trial " + std::to_string(trial));
  }
  out.detail << " trials=200 max_excess=" << worst;
}

// 9. Non-Hermitian involutions.
void involutions(Outcome& out) {
  double residual = 0;
  int refuted = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto r = involution_demo(seed);
    residual = std::max(residual, r.fit_residual);
    if (!r.refutation.passed && r.refutation.witness) ++refuted;
  }
  out.require(residual < 1e-6, "ellipse fit");
  out.require(refuted == 20, "refutations");
  out.detail << " max_fit_residual=" << residual << " refuted=" << refuted << "/20";
}

// 10. Search on the square; finding a violation is an outcome, not a criterion.
void square(Outcome& out) {
  SearchOptions opts;
  opts.budget = 2000;
  opts.seed = 7;
  auto r = square_search(Domain::square(), opts);
  auto again = square_search(Domain::square(), opts);
  out.require(r.evaluations > 0 && r.evaluations <= 2000, "budget");
  out.require(dump(to_json(r)) == dump(to_json(again)), "report not reproducible");

  Matrix start = Matrix::Zero(3, 3);
  start.topLeftCorner(2, 2) = 0.98 * crouzeix_matrix(EllipseParams(2, 1));
  SearchOptions sanity;
  sanity.budget = 200;
  sanity.evaluations_per_restart = 200;
  sanity.start = start;
  auto e = square_search(Domain::ellipse(2, 1), sanity);
  out.require(e.feasible && e.best.objective > 1, "ellipse-seeded sanity case");
  out.detail << " evaluations=" << r.evaluations << " restarts=" << r.restarts
             << " square_objective=" << r.best.objective << " feasible=" << r.feasible
             << " violates=" << r.violates << " ellipse_objective=" << e.best.objective;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Crouzeix example", 1, crouzeix},
      {2, "ellipse violation", 10, ellipse},
      {3, "disk equivalences", 30, disk_equivalences},
      {4, "Berger-Stampfli-Kato fuzz", 60, bsk},
      {5, "Herglotz formula", 30, herglotz},
      {6, "Naimark dilation", 60, naimark},
      {7, "Egervary dilation", 30, egervary},
      {8, "Drury teardrop", 60, teardrop},
      {9, "involutions", 60, involutions},
      {10, "square search", 60, square},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    out.detail.precision(6);
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(secs < c.budget_s, "runtime");
    if (!out.ok) ++failures;
    std::printf("criterion %2d %s: %s (%.2f s)%s\n", c.id, c.name, out.ok ? "PASS" : "FAIL", secs,
                out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
