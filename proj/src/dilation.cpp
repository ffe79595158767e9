#include "wpair/dilation.hpp"

#include <algorithm>
#include <sstream>

#include "wpair/matcore.hpp"
#include "wpair/parallel.hpp"

namespace wpair {

namespace {

Matrix clamp_psd(const Matrix& a) {
  const auto eig = herm_eig(a);
  const RealVector kept = eig.eigenvalues.cwiseMax(0.0);
  return re_part(eig.eigenvectors * kept.cast<cplx>().asDiagonal() * eig.eigenvectors.adjoint());
}

Matrix inverse_sqrt(const Matrix& s) {
  const auto eig = herm_eig(s);
  if (!(eig.eigenvalues(0) > 0)) throw NotPsdError("dilation: POVM mass is singular", eig.eigenvalues(0));
  const RealVector inv = eig.eigenvalues.cwiseSqrt().cwiseInverse();
  return re_part(eig.eigenvectors * inv.cast<cplx>().asDiagonal() * eig.eigenvectors.adjoint());
}

}  // namespace

PovmDiscretization povm_discretize(const Matrix& t, const ConformalAtlas& atlas, int m, int degree, double tol) {
  require_square(t, "dilation");
  require_finite(t, "dilation");
  const Eigen::Index n = t.rows();
  const GOfMatrix g = g_of_matrix(atlas, t, degree);
  const BoundaryQuadrature q = quadrature(atlas, m);
  const Matrix id = Matrix::Identity(n, n);

  PovmDiscretization out;
  out.m = m;
  out.nodes = q.nodes;
  out.approx_error = g.approximant.sup_error;
  out.elements.resize(static_cast<size_t>(m));
  std::vector<double> lows(static_cast<size_t>(m));
  parallel_for(m, [&](int j) {
    const Matrix shifted = re_part(h_family(q.images[static_cast<size_t>(j)], g.value)) + id;
    const double low = lambda_min(shifted);
    if (low < -tol) {
      std::ostringstream os;
      os << "dilation: F_" << j << " is not positive semidefinite at node "
         << format_complex(q.nodes[static_cast<size_t>(j)]) << " (lambda_min(Re H + I) = " << low
         << "); condition (ii) fails there";
      throw NotPsdError(os.str(), low, j);
    }
    lows[static_cast<size_t>(j)] = low / (2.0 * m);
    out.elements[static_cast<size_t>(j)] = shifted / (2.0 * m);
  });
  out.min_eigenvalue_raw = *std::min_element(lows.begin(), lows.end());

  Matrix mass = Matrix::Zero(n, n);
  for (auto& f : out.elements) {
    f = clamp_psd(f);
    mass += f;
  }
  out.mass_defect_raw = op_norm(mass - id);
  const Matrix r = inverse_sqrt(re_part(mass));
  for (auto& f : out.elements) f = re_part(r * f * r);
  return out;
}

Vector NaimarkModel::normal_diagonal() const {
  Vector d(static_cast<Eigen::Index>(m) * n);
  for (int j = 0; j < m; ++j) d.segment(static_cast<Eigen::Index>(j) * n, n).setConstant(nodes[static_cast<size_t>(j)]);
  return d;
}

Matrix NaimarkModel::normal_dense() const { return normal_diagonal().asDiagonal(); }

Matrix NaimarkModel::projection(int j) const {
  const Eigen::Index size = static_cast<Eigen::Index>(m) * n;
  Matrix q = Matrix::Zero(size, size);
  q.block(static_cast<Eigen::Index>(j) * n, static_cast<Eigen::Index>(j) * n, n, n).setIdentity();
  return q;
}

Matrix NaimarkModel::compress(const std::vector<cplx>& values) const {
  if (values.size() != static_cast<size_t>(m)) throw InputError("dilation: one value per node is required");
  Matrix out = Matrix::Zero(n, n);
  for (int j = 0; j < m; ++j) {
    const auto b = block(j);
    out += values[static_cast<size_t>(j)] * (b.adjoint() * b);
  }
  return out;
}

NaimarkModel naimark_dilate(const PovmDiscretization& povm) {
  if (povm.elements.empty() || povm.elements.size() != povm.nodes.size())
    throw InputError("dilation: POVM needs one element per node");
  NaimarkModel model;
  model.m = static_cast<int>(povm.elements.size());
  model.n = static_cast<int>(povm.elements.front().rows());
  model.nodes = povm.nodes;
  model.V.resize(static_cast<Eigen::Index>(model.m) * model.n, model.n);
  for (int j = 0; j < model.m; ++j)
    model.V.middleRows(static_cast<Eigen::Index>(j) * model.n, model.n) = psd_sqrt(povm.elements[static_cast<size_t>(j)]);
  return model;
}

NaimarkDiagnostics verify(const NaimarkModel& model, const PovmDiscretization& povm, const Domain& domain) {
  NaimarkDiagnostics d;
  d.isometry_defect = op_norm(model.V.adjoint() * model.V - Matrix::Identity(model.n, model.n));
  for (int j = 0; j < model.m; ++j) {
    const auto b = model.block(j);
    const double defect = op_norm(b.adjoint() * b - povm.elements[static_cast<size_t>(j)]);
    if (defect > d.naimark_defect || d.worst_node < 0) {
      d.naimark_defect = std::max(d.naimark_defect, defect);
      d.worst_node = j;
    }
    d.boundary_distance = std::max(d.boundary_distance, std::abs(domain.signed_distance(model.nodes[static_cast<size_t>(j)])));
  }
  return d;
}

double dilation_defect(const Matrix& f_of_t, const NaimarkModel& model, const ScalarFn& f) {
  std::vector<cplx> values(static_cast<size_t>(model.m));
  for (int j = 0; j < model.m; ++j) values[static_cast<size_t>(j)] = f(model.nodes[static_cast<size_t>(j)]);
  return op_norm(f_of_t - 2.0 * model.compress(values));
}

namespace {

void require_vanishing_at_base(cplx value) {
  if (!(std::abs(value) <= 1e-10)) {
    std::ostringstream os;
    os << "dilation: f(T) = 2 V* f(N) V needs f(z0) = 0, got f(z0) = " << format_complex(value);
    throw HypothesisError(os.str());
  }
}

}  // namespace

double dilation_calculus_check(const Matrix& t, const NaimarkModel& model, const Poly& f, const Domain& domain) {
  require_vanishing_at_base(f(domain.base()));
  return dilation_defect(poly_apply(f, t), model, [&](cplx z) { return f(z); });
}

double dilation_calculus_check(const Matrix& t, const NaimarkModel& model, const RationalFn& f,
                               const Domain& domain) {
  require_vanishing_at_base(f(domain.base()));
  return dilation_defect(rational_apply(f, t), model, [&](cplx z) { return f(z); });
}

ResolventReport resolvent_positivity_check(const Matrix& t, const NaimarkModel& model, const Poly& f, cplx alpha,
                                           const Domain& domain) {
  if (!(std::abs(alpha) < 1.0)) throw InputError("dilation: resolvent check needs |alpha| < 1");
  require_vanishing_at_base(f(domain.base()));
  const Eigen::Index n = t.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix af = alpha * poly_apply(f, t);
  for (const cplx lambda : gen_eig(af).points)
    if (std::abs(1.0 - lambda) < kTol.pole_margin) {
      std::ostringstream os;
      os << "dilation: I - alpha f(T) is singular (eigenvalue " << format_complex(lambda) << " of alpha f(T))";
      throw PoleError(os.str(), lambda, 1.0);
    }
  const Matrix resolvent = solve(id - af, id);

  std::vector<cplx> values(static_cast<size_t>(model.m));
  for (int j = 0; j < model.m; ++j) {
    const cplx v = alpha * f(model.nodes[static_cast<size_t>(j)]);
    values[static_cast<size_t>(j)] = v / (1.0 - v);
  }
  const Matrix via_model = id + 2.0 * model.compress(values);

  ResolventReport report;
  report.lambda_min = lambda_min(re_part(resolvent));
  report.model_lambda_min = lambda_min(re_part(via_model));
  report.discrepancy = op_norm(resolvent - via_model);
  report.positive = report.lambda_min >= -1e-8;
  return report;
}

Matrix egervary_dilation(const Matrix& t, int steps) {
  require_square(t, "dilation");
  require_finite(t, "dilation");
  if (steps < 1) throw InputError("dilation: Egervary dilation needs at least one step");
  const double norm = op_norm(t);
  if (norm > 1.0 + 1e-10) {
    std::ostringstream os;
    os << "dilation: T is not a contraction (||T|| = " << norm << ")";
    throw HypothesisError(os.str());
  }
  const Eigen::Index n = t.rows();
  const Matrix id = Matrix::Identity(n, n);
  // Both defects from one SVD T = W S Y*: D_T = Y d(S) Y*, D_T* = W d(S) W*, so
  // T D_T = D_T* T holds to rounding even when a singular value equals 1.
  Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vector d(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s = std::min(svd.singularValues()(k), 1.0);
    d(k) = std::sqrt((1.0 - s) * (1.0 + s));
  }
  const Matrix defect = svd.matrixV() * d.asDiagonal() * svd.matrixV().adjoint();
  const Matrix defect_star = svd.matrixU() * d.asDiagonal() * svd.matrixU().adjoint();
  const Eigen::Index size = (steps + 1) * n;
  Matrix u = Matrix::Zero(size, size);
  u.block(0, 0, n, n) = t;
  u.block(n, 0, n, n) = defect;
  u.block(0, steps * n, n, n) = defect_star;
  u.block(n, steps * n, n, n) = -t.adjoint();
  for (Eigen::Index i = 2; i <= steps; ++i) u.block(i * n, (i - 1) * n, n, n) = id;
  return u;
}

}  // namespace wpair
