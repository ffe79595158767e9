#include "wpair/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace wpair {

namespace {

double finite_or_throw(const Json& v, const char* what) {
  if (!v.is_number()) throw InputError(std::string("io: ") + what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError(std::string("io: ") + what + " is not finite");
  return x;
}

Json optional_number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json to_json(cplx z) { return Json::array({optional_number(z.real()), optional_number(z.imag())}); }

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {finite_or_throw(j, "complex entry"), 0.0};
  if (!j.is_array() || j.size() != 2) throw InputError("io: complex entries are [re, im] pairs");
  return {finite_or_throw(j[0], "real part"), finite_or_throw(j[1], "imaginary part")};
}

Json to_json(const Matrix& a) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k) data.push_back(to_json(a(i, k)));
  Json out;
  out["n"] = a.rows();
  if (a.rows() != a.cols()) out["cols"] = a.cols();
  out["data"] = std::move(data);
  return out;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("data"))
    throw InputError("io: matrix JSON needs \"n\" and \"data\"");
  if (!j["n"].is_number_integer()) throw InputError("io: matrix \"n\" must be an integer");
  const long long n = j["n"].get<long long>();
  if (n < 1 || n > kTol.max_dimension) throw InputError("io: matrix dimension must lie in [1, 64]");
  const Json& data = j["data"];
  if (!data.is_array() || data.size() != static_cast<size_t>(n * n)) {
    std::ostringstream os;
    os << "io: matrix \"data\" must hold n*n = " << n * n << " entries";
    throw InputError(os.str());
  }
  Matrix a(n, n);
  for (long long k = 0; k < n * n; ++k) a(k / n, k % n) = complex_from_json(data[static_cast<size_t>(k)]);
  return a;
}

Json to_json(const Poly& p) {
  Json out;
  Json coeffs = Json::array();
  for (const cplx c : p.coeffs()) coeffs.push_back(to_json(c));
  out["coeffs"] = std::move(coeffs);
  if (p.basis() != Basis::monomial) out["basis"] = "chebyshev";
  if (p.center() != cplx(0)) out["center"] = to_json(p.center());
  if (p.scale() != 1.0) out["scale"] = p.scale();
  return out;
}

Poly poly_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
    throw InputError("io: polynomial JSON needs a \"coeffs\" array");
  std::vector<cplx> coeffs;
  for (const auto& c : j["coeffs"]) coeffs.push_back(complex_from_json(c));
  Basis basis = Basis::monomial;
  if (j.contains("basis")) {
    const std::string name = j["basis"].is_string() ? j["basis"].get<std::string>() : "";
    if (name == "chebyshev")
      basis = Basis::chebyshev;
    else if (name != "monomial")
      throw InputError("io: polynomial basis must be \"monomial\" or \"chebyshev\"");
  }
  const cplx center = j.contains("center") ? complex_from_json(j["center"]) : cplx(0);
  const double scale = j.contains("scale") ? finite_or_throw(j["scale"], "scale") : 1.0;
  return Poly(std::move(coeffs), basis, center, scale);
}

RationalFn rational_from_json(const Json& j) {
  if (j.is_object() && j.contains("num")) {
    if (!j.contains("den")) throw InputError("io: rational JSON needs \"den\" next to \"num\"");
    return RationalFn(poly_from_json(j["num"]), poly_from_json(j["den"]));
  }
  return RationalFn(poly_from_json(j));
}

Json to_json(const PairCheckReport& r) {
  Json out;
  out["condition"] = to_string(r.condition);
  out["passed"] = r.passed;
  out["margin"] = optional_number(r.margin);
  out["m"] = r.m;
  out["degree"] = r.degree;
  if (r.condition == PairCondition::ii) out["approx_error"] = r.approx_error;
  if (r.condition == PairCondition::i_sampled) {
    out["trials"] = r.trials;
    out["max_w"] = r.max_w;
  }
  if (r.witness) {
    Json w;
    w["label"] = r.witness->label;
    w["index"] = r.witness->index;
    w["value"] = optional_number(r.witness->value);
    if (r.condition == PairCondition::i_sampled) {
      if (r.witness->function) w["function"] = to_json(*r.witness->function);
    } else {
      w["node"] = to_json(r.witness->node);
    }
    out["witness"] = std::move(w);
  } else {
    out["witness"] = nullptr;
  }
  out["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  return out;
}

Json to_json(const TeardropReport& r) {
  Json out;
  out["inside"] = r.inside;
  out["max_excess"] = r.max_excess;
  out["worst_point"] = to_json(r.worst_point);
  out["apex"] = to_json(r.apex);
  out["f_sup"] = r.f_sup;
  out["samples"] = r.samples;
  return out;
}

Json to_json(const EllipseViolation& r) {
  Json out;
  out["a"] = r.a;
  out["b"] = r.b;
  out["c"] = r.c;
  out["w_T"] = r.w_t;
  out["g_at_c"] = to_json(r.g_at_c);
  out["abs_g_at_c"] = std::abs(r.g_at_c);
  out["ratio"] = r.ratio;
  out["schwarz_lower"] = r.schwarz_lower;
  out["schwarz_verified"] = r.schwarz_lower < std::abs(r.g_at_c);
  Json rows = Json::array();
  for (const auto& d : r.degrees) {
    Json row;
    row["degree"] = d.degree;
    if (d.skipped) {
      row["skipped"] = true;
    } else {
      row["w"] = d.w;
      row["structure_defect"] = d.structure_defect;
      row["sup_error"] = d.sup_error;
    }
    rows.push_back(std::move(row));
  }
  out["degrees"] = std::move(rows);
  out["first_violating_degree"] = r.first_violating_degree ? Json(*r.first_violating_degree) : Json(nullptr);
  return out;
}

Json to_json(const InvolutionReport& r) {
  Json out;
  out["seed"] = r.seed;
  out["attempts"] = r.attempts;
  out["s_condition"] = r.s_condition;
  out["matrix"] = to_json(r.t);
  out["fit_residual"] = r.fit_residual;
  out["center"] = to_json(r.center);
  out["a"] = r.a;
  out["b"] = r.b;
  out["rotation"] = r.rotation;
  out["refutation"] = to_json(r.refutation);
  return out;
}

Json to_json(const BskReport& r) {
  Json out;
  out["trials"] = r.trials;
  out["seed"] = r.seed;
  out["max_w"] = r.max_w;
  out["worst_trial"] = r.worst_trial;
  out["max_teardrop_excess"] = r.max_teardrop_excess;
  out["worst_teardrop_trial"] = r.worst_teardrop_trial;
  out["passed"] = r.passed;
  return out;
}

Json to_json(const SearchReport& r) {
  Json out = to_json(r.best.t);
  out["domain"] = r.domain;
  out["objective"] = r.best.objective;
  out["penalty"] = r.best.penalty;
  out["best_degree"] = r.best.best_degree;
  out["feasible"] = r.feasible;
  out["violates"] = r.violates;
  out["evaluations"] = r.evaluations;
  out["restarts"] = r.restarts;
  out["budget"] = r.options.budget;
  out["seed"] = r.options.seed;
  out["degrees"] = r.options.degrees;
  out["rho"] = r.options.rho;
  return out;
}

Json to_json(const NaimarkDiagnostics& d) {
  Json out;
  out["isometry_defect"] = d.isometry_defect;
  out["naimark_defect"] = d.naimark_defect;
  out["worst_node"] = d.worst_node;
  out["boundary_distance"] = d.boundary_distance;
  return out;
}

Json model_to_json(const NaimarkModel& model) {
  Json out;
  out["n"] = model.n;
  out["m"] = model.m;
  Json nodes = Json::array();
  for (const cplx z : model.nodes) nodes.push_back(to_json(z));
  out["nodes"] = std::move(nodes);
  out["V"] = to_json(model.V);
  out["N"] = to_json(model.normal_dense());
  return out;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("io: cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("io: " + path + " is not valid JSON: " + e.what());
  }
}

Matrix read_matrix(const std::string& path) {
  try {
    return matrix_from_json(read_json(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("io: malformed matrix in " + path + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("io: cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("io: write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InputError("io: cannot rename into " + path);
  }
}

std::string boundary_csv(const RangeBoundary& b) {
  std::string out = "theta,re,im,support_value\n";
  char line[128];
  for (size_t k = 0; k < b.points.size(); ++k) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", b.angles[k], b.points[k].real(),
                  b.points[k].imag(), b.support_values[k]);
    out += line;
  }
  return out;
}

std::string range_svg(const RangeBoundary& b, const std::vector<cplx>& eigenvalues, const Domain* domain) {
  std::vector<cplx> outline;
  if (domain)
    for (int k = 0; k < 512; ++k) outline.push_back(domain->boundary_point(2 * kPi * k / 512));
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  bool first = true;
  auto grow = [&](cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return;
    if (first) {
      lo_x = hi_x = z.real();
      lo_y = hi_y = z.imag();
      first = false;
    }
    lo_x = std::min(lo_x, z.real());
    hi_x = std::max(hi_x, z.real());
    lo_y = std::min(lo_y, z.imag());
    hi_y = std::max(hi_y, z.imag());
  };
  for (const cplx z : b.points) grow(z);
  for (const cplx z : eigenvalues) grow(z);
  for (const cplx z : outline) grow(z);
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  const double mid_x = 0.5 * (lo_x + hi_x), mid_y = 0.5 * (lo_y + hi_y);
  const double size = 800, pad = 40;
  const double unit = (size - 2 * pad) / span;
  auto px = [&](cplx z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f,%.3f", size / 2 + (z.real() - mid_x) * unit,
                  size / 2 - (z.imag() - mid_y) * unit);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  os << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  const cplx origin(0, 0);
  os << "<line x1=\"0\" y1=\"" << px(origin).substr(px(origin).find(',') + 1) << "\" x2=\"800\" y2=\""
     << px(origin).substr(px(origin).find(',') + 1) << "\" stroke=\"#ccc\"/>\n";
  os << "<line x1=\"" << px(origin).substr(0, px(origin).find(',')) << "\" y1=\"0\" x2=\""
     << px(origin).substr(0, px(origin).find(',')) << "\" y2=\"800\" stroke=\"#ccc\"/>\n";
  if (!outline.empty()) {
    os << "<polygon fill=\"none\" stroke=\"#888\" stroke-dasharray=\"6,4\" points=\"";
    for (const cplx z : outline) os << px(z) << ' ';
    os << "\"/>\n";
  }
  os << "<polygon fill=\"#cfe0f5\" fill-opacity=\"0.6\" stroke=\"#1f4e8c\" stroke-width=\"2\" points=\"";
  for (const cplx z : b.points) os << px(z) << ' ';
  os << "\"/>\n";
  for (const cplx z : eigenvalues) {
    const std::string p = px(z);
    os << "<circle cx=\"" << p.substr(0, p.find(',')) << "\" cy=\"" << p.substr(p.find(',') + 1)
       << "\" r=\"4\" fill=\"#c0392b\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace wpair
