#include "wpair/wspec.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "wpair/matcore.hpp"
#include "wpair/numrange.hpp"
#include "wpair/parallel.hpp"
#include "wpair/random.hpp"

namespace wpair {

std::string to_string(PairCondition condition) {
  switch (condition) {
    case PairCondition::ii:
      return "ii";
    case PairCondition::i_sampled:
      return "i_sampled";
    case PairCondition::spectral_disk:
      return "spectral_disk";
  }
  return "unknown";
}

namespace {

// Lowest index among the minima: the reduction must not depend on scheduling.
size_t argmin(const std::vector<double>& v) {
  return static_cast<size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

size_t argmax(const std::vector<double>& v) {
  return static_cast<size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

Matrix node_kernel(const BoundaryQuadrature& q, int j, const Matrix& g_of_t) {
  try {
    return h_family(q.images[static_cast<size_t>(j)], g_of_t);
  } catch (const PoleError& e) {
    std::ostringstream os;
    os << "wspec: node " << j << " (zeta = " << format_complex(q.nodes[static_cast<size_t>(j)])
       << ") is a pole of h_zeta(T): " << e.what();
    throw PoleError(os.str(), e.spectrum_point(), e.pole());
  }
}

}  // namespace

PairCheckReport check_condition_ii(const Matrix& t, const ConformalAtlas& atlas, int m, int degree,
                                   double tol) {
  require_square(t, "wspec");
  require_finite(t, "wspec");
  const GOfMatrix g = g_of_matrix(atlas, t, degree);
  const BoundaryQuadrature q = quadrature(atlas, m);
  std::vector<double> values(static_cast<size_t>(m));
  parallel_for(m, [&](int j) {
    values[static_cast<size_t>(j)] = lambda_min(re_part(node_kernel(q, j, g.value))) + 1.0;
  });
  const size_t worst = argmin(values);

  PairCheckReport report;
  report.condition = PairCondition::ii;
  report.m = m;
  report.degree = degree;
  report.approx_error = g.approximant.sup_error;
  report.margin = values[worst];
  report.passed = report.margin >= -tol;
  Witness w;
  w.label = "node " + std::to_string(worst);
  w.index = static_cast<int>(worst);
  w.node = q.nodes[worst];
  w.value = values[worst];
  report.witness = w;
  return report;
}

PairCheckReport check_spectral_disk(const Matrix& t, int m, double tol) {
  require_square(t, "wspec");
  require_finite(t, "wspec");
  if (m < 4) throw InputError("wspec: need at least 4 angles");
  require_spectrum_inside(t, Domain::disk());
  std::vector<double> values(static_cast<size_t>(m));
  parallel_for(m, [&](int j) {
    values[static_cast<size_t>(j)] = lambda_min(re_part(mobius_halfplane(t, 2 * kPi * j / m)));
  });
  const size_t worst = argmin(values);
  PairCheckReport report;
  report.condition = PairCondition::spectral_disk;
  report.m = m;
  report.margin = values[worst];
  report.passed = report.margin >= -tol;
  Witness w;
  w.label = "node " + std::to_string(worst);
  w.index = static_cast<int>(worst);
  w.node = std::polar(1.0, 2 * kPi * static_cast<double>(worst) / m);
  w.value = values[worst];
  report.witness = w;
  return report;
}

PairCheckReport check_condition_i_sampled(const Matrix& t, const ConformalAtlas& atlas, int trials,
                                          double tol, std::uint64_t seed, const SampledFamily& family) {
  require_square(t, "wspec");
  require_finite(t, "wspec");
  if (trials < 0) throw InputError("wspec: trial count must be non-negative");
  const Domain& domain = atlas.domain();
  require_spectrum_inside(t, domain);

  struct Candidate {
    std::string label;
    int index = -1;
    Poly f;
    bool valid = false;
  };
  const size_t n_approx = family.approximant_degrees.size();
  std::vector<Candidate> family_members(n_approx + static_cast<size_t>(trials));
  for (size_t k = 0; k < n_approx; ++k) {
    const int d = family.approximant_degrees[k];
    Candidate& c = family_members[k];
    c.label = "approximant d=" + std::to_string(d);
    c.index = static_cast<int>(k);
    try {
      c.f = poly_approx(atlas, d).poly;
      c.valid = true;
    } catch (const DegreeTooHighError&) {
      // Too ill-conditioned for this domain; the family simply omits it.
    }
  }
  const Poly tmpl = atlas.basis_template();
  for (int trial = 0; trial < trials; ++trial) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(trial));
    std::uniform_int_distribution<int> pick(1, family.max_random_degree);
    std::vector<cplx> coeffs(static_cast<size_t>(pick(rng)) + 1);
    for (auto& c : coeffs) c = complex_gaussian(rng);
    Candidate& c = family_members[n_approx + static_cast<size_t>(trial)];
    c.label = "trial " + std::to_string(trial);
    c.index = trial;
    c.f = Poly(std::move(coeffs), tmpl.basis(), tmpl.center(), tmpl.scale());
  }

  std::vector<double> w(family_members.size(), 0.0);
  parallel_for(static_cast<int>(family_members.size()), [&](int k) {
    Candidate& c = family_members[static_cast<size_t>(k)];
    if (static_cast<size_t>(k) >= n_approx) {
      c.f = normalize_on_boundary(c.f, domain, family.boundary_samples);
      c.valid = true;
    }
    if (c.valid) w[static_cast<size_t>(k)] = numerical_radius(poly_apply(c.f, t));
  });

  const size_t best = w.empty() ? 0 : argmax(w);
  PairCheckReport report;
  report.condition = PairCondition::i_sampled;
  report.trials = trials;
  report.seed = seed;
  report.degree = family.approximant_degrees.empty()
                      ? 0
                      : *std::max_element(family.approximant_degrees.begin(), family.approximant_degrees.end());
  report.max_w = w.empty() ? 0.0 : w[best];
  report.margin = 1.0 - report.max_w;
  report.passed = report.margin >= -tol;
  if (!w.empty()) {
    Witness wit;
    wit.label = family_members[best].label;
    wit.index = family_members[best].index;
    wit.value = w[best];
    wit.function = family_members[best].f;
    report.witness = wit;
  }
  return report;
}

Matrix herglotz_apply(const ScalarFn& f, const Matrix& t, const ConformalAtlas& atlas, int m, int degree) {
  require_square(t, "wspec");
  require_finite(t, "wspec");
  const cplx at_base = f(atlas.domain().base());
  if (!(std::abs(at_base.imag()) <= 1e-10)) {
    std::ostringstream os;
    os << "wspec: Herglotz formula needs f(z0) real, got f(z0) = " << format_complex(at_base);
    throw HypothesisError(os.str());
  }
  const GOfMatrix g = g_of_matrix(atlas, t, degree);
  const BoundaryQuadrature q = quadrature(atlas, m);
  std::vector<Matrix> terms(static_cast<size_t>(m));
  parallel_for(m, [&](int j) {
    const double weight = f(q.nodes[static_cast<size_t>(j)]).real() * q.weights[static_cast<size_t>(j)];
    terms[static_cast<size_t>(j)] = weight * node_kernel(q, j, g.value);
  });
  Matrix sum = Matrix::Zero(t.rows(), t.cols());
  for (const auto& term : terms) sum += term;
  return sum;
}

Matrix herglotz_apply(const RationalFn& f, const Matrix& t, const ConformalAtlas& atlas, int m, int degree) {
  for (const cplx pole : f.poles())
    if (atlas.domain().signed_distance(pole) <= kTol.pole_margin) {
      std::ostringstream os;
      os << "wspec: pole " << format_complex(pole) << " of f lies in the closed domain";
      throw PoleError(os.str(), pole, pole);
    }
  return herglotz_apply(ScalarFn([&](cplx z) { return f(z); }), t, atlas, m, degree);
}

Teardrop::Teardrop(cplx apex) : apex_(apex) {
  if (!(std::abs(apex) <= 1.0 + 1e-12)) throw InputError("wspec: teardrop apex must satisfy |a| <= 1");
}

double Teardrop::signed_distance(cplx p) const {
  const double a2 = std::norm(apex_);
  // |p - t a| - (1 - t |a|^2) is convex in t, so golden section finds the minimum.
  auto phi = [&](double t) { return std::abs(p - t * apex_) - (1.0 - t * a2); };
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0, hi = 1;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = phi(x1), f2 = phi(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 > f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = phi(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = phi(x1);
    }
  }
  return std::min({f1, f2, phi(0.0), phi(1.0)});
}

TeardropReport teardrop_check(const Matrix& t, const ConformalAtlas& atlas, const RationalFn& f,
                              int range_samples, const TeardropOptions& options) {
  require_square(t, "wspec");
  const Domain& domain = atlas.domain();
  if (options.verify_pair) {
    const PairCheckReport pair = check_condition_ii(t, atlas, options.m, options.degree, 1e-8);
    if (!pair.passed) {
      std::ostringstream os;
      os << "wspec: teardrop hypothesis fails: condition (ii) margin " << pair.margin << " at "
         << pair.witness->label;
      throw HypothesisError(os.str());
    }
  }
  for (const cplx pole : f.poles())
    if (domain.signed_distance(pole) <= kTol.pole_margin) {
      std::ostringstream os;
      os << "wspec: teardrop hypothesis fails: pole " << format_complex(pole) << " in the closed domain";
      throw HypothesisError(os.str());
    }
  TeardropReport report;
  report.f_sup = boundary_sup(domain, [&](cplx z) { return f(z); }, options.boundary_samples);
  if (report.f_sup > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "wspec: teardrop hypothesis fails: sup |f| on the boundary is " << report.f_sup;
    throw HypothesisError(os.str());
  }
  report.apex = f(domain.base());
  const Teardrop drop(report.apex);
  const RangeBoundary range = boundary(rational_apply(f, t), range_samples);
  report.samples = range_samples;
  report.max_excess = -std::numeric_limits<double>::infinity();
  for (const cplx p : range.points) {
    const double d = drop.signed_distance(p);
    if (d > report.max_excess) {
      report.max_excess = d;
      report.worst_point = p;
    }
  }
  report.inside = report.max_excess <= options.tol;
  return report;
}

}  // namespace wpair
