#include "wpair/experiments.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "wpair/confmap.hpp"
#include "wpair/matcore.hpp"
#include "wpair/numrange.hpp"
#include "wpair/parallel.hpp"
#include "wpair/random.hpp"

namespace wpair {

EllipseParams::EllipseParams(double a_, double b_) : a(a_), b(b_) {
  if (!(std::isfinite(a) && std::isfinite(b) && a > b && b > 0)) {
    std::ostringstream os;
    os << "experiments: ellipse needs a > b > 0, got a = " << a << ", b = " << b;
    throw InputError(os.str());
  }
}

Matrix crouzeix_matrix(const EllipseParams& p) {
  Matrix t(2, 2);
  t << p.c(), 2.0 * p.b, 0.0, -p.c();
  return t;
}

EllipseViolation ellipse_violation(const EllipseParams& p, const std::vector<int>& degrees) {
  const ConformalAtlas atlas = build_atlas(Domain::ellipse(p.a, p.b));
  const Matrix t = crouzeix_matrix(p);
  EllipseViolation out;
  out.a = p.a;
  out.b = p.b;
  out.c = p.c();
  out.w_t = numerical_radius(t);
  out.g_at_c = atlas.forward(out.c);
  out.ratio = std::abs(out.g_at_c) * p.a / out.c;
  out.schwarz_lower = out.c / p.a;
  for (const int d : degrees) {
    DegreeResult r;
    r.degree = d;
    try {
      const Approximant ap = poly_approx(atlas, d);
      const Matrix f_of_t = poly_apply(ap.poly, t);
      r.w = numerical_radius(f_of_t);
      r.structure_defect = op_norm(f_of_t - (ap.poly(out.c) / out.c) * t);
      r.sup_error = ap.sup_error;
      if (r.w > 1.0 && !out.first_violating_degree) out.first_violating_degree = d;
    } catch (const DegreeTooHighError&) {
      r.skipped = true;
    }
    out.degrees.push_back(r);
  }
  return out;
}

PairCheckReport pair_refutation(const EllipseParams& p, int trials, std::uint64_t seed) {
  const ConformalAtlas atlas = build_atlas(Domain::ellipse(p.a, p.b));
  return check_condition_i_sampled(crouzeix_matrix(p), atlas, trials, 1e-8, seed);
}

namespace {

struct ConicFit {
  double residual = 0;
  cplx center;
  double a = 0, b = 0, rotation = 0;
};

// A x^2 + B xy + C y^2 + D x + E y = 1 by least squares on the boundary points.
ConicFit fit_conic(const std::vector<cplx>& points) {
  const Eigen::Index m = static_cast<Eigen::Index>(points.size());
  RealMatrix design(m, 5);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double x = points[static_cast<size_t>(k)].real(), y = points[static_cast<size_t>(k)].imag();
    design.row(k) << x * x, x * y, y * y, x, y;
  }
  const RealVector coef = design.colPivHouseholderQr().solve(RealVector::Ones(m));
  ConicFit fit;
  fit.residual = (design * coef - RealVector::Ones(m)).cwiseAbs().maxCoeff();
  Eigen::Matrix2d q;
  q << coef(0), 0.5 * coef(1), 0.5 * coef(1), coef(2);
  const Eigen::Vector2d v0 = -0.5 * q.inverse() * Eigen::Vector2d(coef(3), coef(4));
  fit.center = {v0(0), v0(1)};
  const auto eig = herm_eig(q / (1.0 + v0.dot(q * v0)));
  if (!(eig.eigenvalues(0) > 0)) throw ConvergenceError("experiments: boundary fit is not an ellipse");
  fit.a = 1.0 / std::sqrt(eig.eigenvalues(0));
  fit.b = 1.0 / std::sqrt(eig.eigenvalues(1));
  fit.rotation = std::atan2(eig.eigenvectors(1, 0), eig.eigenvectors(0, 0));
  return fit;
}

}  // namespace

InvolutionReport involution_demo(std::uint64_t seed, int trials) {
  InvolutionReport out;
  out.seed = seed;
  Matrix sigma = Matrix::Zero(2, 2);
  sigma(0, 0) = 1.0;
  sigma(1, 1) = -1.0;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(attempt));
    const Matrix s = ginibre(2, rng);
    out.attempts = attempt + 1;
    Eigen::JacobiSVD<Matrix> svd(s);
    const auto& sv = svd.singularValues();
    out.s_condition = sv(0) / sv(1);
    if (!(out.s_condition <= 1e6)) continue;
    const Matrix t = s * sigma * s.inverse();
    if ((t - t.adjoint()).norm() <= 1e-8 * t.norm()) continue;
    const ConicFit fit = fit_conic(boundary(t, 720).points);
    if (fit.b < 0.25 || fit.b > 4.0) continue;
    out.fit_residual = fit.residual;
    out.center = fit.center;
    out.a = fit.a;
    out.b = fit.b;
    out.rotation = fit.rotation;
    // Rotate so the major axis is real; the pair property is rotation invariant.
    out.t = std::polar(1.0, -fit.rotation) * t;
    const ConformalAtlas atlas = build_atlas(Domain::ellipse(fit.a, fit.b));
    SampledFamily family;
    family.approximant_degrees = {8, 16, 32, 48};
    out.refutation = check_condition_i_sampled(out.t, atlas, trials, 1e-8, seed, family);
    return out;
  }
  throw ConvergenceError("experiments: no admissible involution found in 1000 draws");
}

BskReport bsk_fuzz(int trials, std::uint64_t seed) {
  if (trials < 0) throw InputError("experiments: trial count must be non-negative");
  const Domain disk = Domain::disk();
  const ConformalAtlas atlas = build_atlas(disk);
  std::vector<double> w(static_cast<size_t>(trials), 0.0), excess(static_cast<size_t>(trials), 0.0);
  parallel_for(trials, [&](int trial) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(trial));
    std::uniform_int_distribution<int> pick_n(2, 6), pick_d(1, 8);
    const int n = pick_n(rng);
    Matrix t = ginibre(n, rng);
    t /= numerical_radius(t);
    std::vector<cplx> coeffs(static_cast<size_t>(pick_d(rng)) + 1);
    for (auto& c : coeffs) c = complex_gaussian(rng);
    const Poly f = normalize_on_boundary(Poly(std::move(coeffs)), disk, 1024);
    w[static_cast<size_t>(trial)] = numerical_radius(poly_apply(f, t));

    // (a + f) / (1 + conj(a) f) maps the disk into itself with value a at 0.
    const cplx a = std::polar(std::sqrt(std::uniform_real_distribution<double>(0.0, 0.95)(rng)),
                              std::uniform_real_distribution<double>(0.0, 2 * kPi)(rng));
    const RationalFn shifted(f.shifted(a), f.scaled(std::conj(a)).shifted(1.0));
    TeardropOptions opts;
    opts.verify_pair = false;  // w(T) = 1 is condition (ii) on the disk
    opts.tol = 1e-6;
    excess[static_cast<size_t>(trial)] = teardrop_check(t, atlas, shifted, 360, opts).max_excess;
  });
  BskReport out;
  out.trials = trials;
  out.seed = seed;
  if (trials > 0) {
    const auto wi = std::max_element(w.begin(), w.end());
    const auto ei = std::max_element(excess.begin(), excess.end());
    out.max_w = *wi;
    out.worst_trial = static_cast<int>(wi - w.begin());
    out.max_teardrop_excess = *ei;
    out.worst_teardrop_trial = static_cast<int>(ei - excess.begin());
  }
  out.passed = out.max_w <= 1.0 + 1e-7 && out.max_teardrop_excess <= 1e-6;
  return out;
}

double containment_penalty(const Matrix& t, const Domain& domain) {
  const Matrix re = re_part(t);
  const Matrix im = re_part(-kI * t);
  if (const auto* r = std::get_if<Rectangle>(&domain.shape())) {
    // W(T) inside a centered rectangle iff the four axis support values are.
    const auto ev_re = herm_eig(re).eigenvalues;
    const auto ev_im = herm_eig(im).eigenvalues;
    const double worst = std::max({ev_re(ev_re.size() - 1) - r->half_width, -ev_re(0) - r->half_width,
                                   ev_im(ev_im.size() - 1) - r->half_height, -ev_im(0) - r->half_height});
    return std::max(0.0, worst);
  }
  double worst = 0;
  const int samples = 256;
  for (int k = 0; k < samples; ++k) {
    const double theta = 2 * kPi * k / samples;
    worst = std::max(worst, lambda_max(re_part(std::polar(1.0, -theta) * t)) - domain.support(theta));
  }
  return worst;
}

namespace {

constexpr int kParams = 18;
using Params = Eigen::Matrix<double, kParams, 1>;

Matrix to_matrix(const Params& x) {
  Matrix t(3, 3);
  for (int k = 0; k < 9; ++k) t(k / 3, k % 3) = cplx(x(2 * k), x(2 * k + 1));
  return t;
}

Params to_params(const Matrix& t) {
  Params x;
  for (int k = 0; k < 9; ++k) {
    x(2 * k) = t(k / 3, k % 3).real();
    x(2 * k + 1) = t(k / 3, k % 3).imag();
  }
  return x;
}

struct Evaluator {
  const Domain& domain;
  std::vector<std::pair<int, Poly>> approximants;
  RadiusOptions radius;

  SearchCandidate operator()(const Matrix& t) const {
    SearchCandidate c;
    c.t = t;
    c.penalty = containment_penalty(t, domain);
    for (const auto& [d, f] : approximants) {
      const double w = numerical_radius(poly_apply(f, t), radius);
      if (w > c.objective) {
        c.objective = w;
        c.best_degree = d;
      }
    }
    return c;
  }
};

bool better(const SearchCandidate& a, const SearchCandidate& b) {
  const bool fa = a.penalty <= 1e-8, fb = b.penalty <= 1e-8;
  if (fa != fb) return fa;
  if (fa) return a.objective > b.objective;
  return a.penalty < b.penalty;
}

struct RestartResult {
  SearchCandidate best;
  int evaluations = 0;
};

// Nelder-Mead minimizing -(objective - rho penalty), standard coefficients.
RestartResult nelder_mead(const Evaluator& eval, const Params& start, double step, int budget, double rho) {
  RestartResult out;
  auto score = [&](const Params& x) {
    const SearchCandidate c = eval(to_matrix(x));
    ++out.evaluations;
    if (out.evaluations == 1 || better(c, out.best)) out.best = c;
    return -(c.objective - rho * c.penalty);
  };
  std::vector<Params> simplex(kParams + 1, start);
  std::vector<double> values(kParams + 1);
  values[0] = score(start);
  for (int k = 0; k < kParams && out.evaluations < budget; ++k) {
    simplex[static_cast<size_t>(k) + 1](k) += step;
    values[static_cast<size_t>(k) + 1] = score(simplex[static_cast<size_t>(k) + 1]);
  }
  std::vector<size_t> order(simplex.size());
  while (out.evaluations < budget) {
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return values[a] < values[b]; });
    const size_t lo = order.front(), hi = order.back(), second = order[order.size() - 2];
    if (values[hi] - values[lo] < 1e-12 * (1.0 + std::abs(values[lo]))) break;
    Params centroid = Params::Zero();
    for (size_t k = 0; k < simplex.size(); ++k)
      if (k != hi) centroid += simplex[k];
    centroid /= kParams;
    const Params reflected = centroid + (centroid - simplex[hi]);
    const double fr = score(reflected);
    if (fr < values[lo]) {
      const Params expanded = centroid + 2.0 * (centroid - simplex[hi]);
      const double fe = out.evaluations < budget ? score(expanded) : fr;
      if (fe < fr) {
        simplex[hi] = expanded;
        values[hi] = fe;
      } else {
        simplex[hi] = reflected;
        values[hi] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[hi] = reflected;
      values[hi] = fr;
      continue;
    }
    const bool outside = fr < values[hi];
    const Params contracted = outside ? Params(centroid + 0.5 * (reflected - centroid))
                                      : Params(centroid + 0.5 * (simplex[hi] - centroid));
    if (out.evaluations >= budget) break;
    const double fc = score(contracted);
    if (fc < std::min(fr, values[hi])) {
      simplex[hi] = contracted;
      values[hi] = fc;
      continue;
    }
    for (size_t k = 0; k < simplex.size() && out.evaluations < budget; ++k) {
      if (k == lo) continue;
      simplex[k] = simplex[lo] + 0.5 * (simplex[k] - simplex[lo]);
      values[k] = score(simplex[k]);
    }
  }
  return out;
}

}  // namespace

SearchReport square_search(const Domain& domain, const SearchOptions& options) {
  if (options.budget < 1) throw InputError("experiments: search budget must be at least 1");
  if (options.start && (options.start->rows() != 3 || options.start->cols() != 3))
    throw InputError("experiments: search start must be 3x3");
  const ConformalAtlas atlas = build_atlas(domain);
  Evaluator eval{domain, {}, RadiusOptions{128, 40, 2}};
  for (const int d : options.degrees) eval.approximants.emplace_back(d, poly_approx(atlas, d).poly);

  const int per_restart = std::max(1, options.evaluations_per_restart);
  const int restarts = std::max(1, options.budget / per_restart);
  std::vector<RestartResult> results(static_cast<size_t>(restarts));
  parallel_for(restarts, [&](int r) {
    const int share = options.budget / restarts + (r < options.budget % restarts ? 1 : 0);
    Params start;
    if (r == 0 && options.start) {
      start = to_params(*options.start);
    } else {
      auto rng = make_rng(options.seed, static_cast<std::uint64_t>(r));
      Matrix t = ginibre(3, rng);
      // Scale so that W(T) starts strictly inside the domain.
      double lo = 0, hi = 1;
      if (containment_penalty(t, domain) > 0) {
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          (containment_penalty(mid * t, domain) > 0 ? hi : lo) = mid;
        }
        t *= 0.9 * lo;
      }
      start = to_params(t);
    }
    results[static_cast<size_t>(r)] = nelder_mead(eval, start, 0.1, share, options.rho);
  });

  SearchReport report;
  report.options = options;
  report.domain = domain.describe();
  report.restarts = restarts;
  report.best = results.front().best;
  for (const auto& r : results) {
    report.evaluations += r.evaluations;
    if (better(r.best, report.best)) report.best = r.best;
  }
  // Recompute the winner with the full-resolution numerical radius.
  const Evaluator exact{domain, eval.approximants, RadiusOptions{}};
  report.best = exact(report.best.t);
  report.feasible = report.best.penalty <= 1e-8;
  report.violates = report.feasible && report.best.objective > 1.0;
  return report;
}

}  // namespace wpair
