// wpair: command-line front end. Exit codes: 0 computed and the checked
// property holds, 1 computed and it fails, 2 bad usage or input.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "wpair/confmap.hpp"
#include "wpair/dilation.hpp"
#include "wpair/domain.hpp"
#include "wpair/experiments.hpp"
#include "wpair/io.hpp"
#include "wpair/matcore.hpp"
#include "wpair/numrange.hpp"
#include "wpair/parallel.hpp"
#include "wpair/wspec.hpp"

using namespace wpair;

namespace {

struct RunConfig {
  std::string subcommand;
  std::string matrix;
  std::string domain = "disk:r=1";
  std::string base = "0";
  int m = 256;
  int degree = 32;
  double tol = 1e-8;
  std::uint64_t seed = 12345;
  std::string out;
  int samples = 360;
  int threads = 0;
  // subcommand specific
  std::string condition = "ii";
  int trials = 64;
  std::string function;
  std::string export_model;
  double a = 2.0, b = 1.0;
  std::vector<int> degrees{8, 16, 32};
  int budget = 2000;
  std::string start;
};

Json config_json(const RunConfig& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  if (!c.matrix.empty()) j["matrix"] = c.matrix;
  j["domain"] = c.domain;
  j["base"] = c.base;
  j["m"] = c.m;
  j["degree"] = c.degree;
  j["tol"] = c.tol;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["threads"] = c.threads;
  if (c.subcommand == "check-pair") {
    j["condition"] = c.condition;
    j["trials"] = c.trials;
  }
  if (c.subcommand == "herglotz") j["function"] = c.function;
  if (c.subcommand == "dilate" && !c.export_model.empty()) j["export_model"] = c.export_model;
  if (c.subcommand == "reproduce-ellipse") {
    j["a"] = c.a;
    j["b"] = c.b;
    j["degrees"] = c.degrees;
  }
  if (c.subcommand == "involution" || c.subcommand == "bsk-fuzz") j["trials"] = c.trials;
  if (c.subcommand == "search-square") {
    j["budget"] = c.budget;
    j["degrees"] = c.degrees;
    if (!c.start.empty()) j["start"] = c.start;
  }
  j["out"] = c.out;
  return j;
}

void emit(const RunConfig& c, Json report) {
  report["config"] = config_json(c);
  report["version"] = kVersion;
  const std::string text = dump(report);
  if (c.out.empty())
    std::cout << text;
  else
    write_atomic(c.out, text);
}

Matrix load_matrix(const RunConfig& c) {
  if (c.matrix.empty()) throw InputError("cli: --matrix is required");
  return read_matrix(c.matrix);
}

Domain load_domain(const RunConfig& c) { return parse_domain(c.domain, parse_complex(c.base)); }

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int run_numrange(const RunConfig& c) {
  const Matrix t = load_matrix(c);
  const RangeBoundary b = boundary(t, c.samples);
  const auto eig = gen_eig(t).points;
  Json summary;
  summary["n"] = t.rows();
  summary["samples"] = c.samples;
  summary["numerical_radius"] = numerical_radius(t);
  summary["residual"] = b.residual(t);
  summary["convex"] = b.is_convex();
  Json spectrum = Json::array();
  for (const cplx z : eig) spectrum.push_back(to_json(z));
  summary["spectrum"] = std::move(spectrum);
  if (ends_with(c.out, ".csv") || ends_with(c.out, ".svg")) {
    std::optional<Domain> domain;
    if (c.domain != "none") domain = load_domain(c);
    write_atomic(c.out, ends_with(c.out, ".csv") ? boundary_csv(b) : range_svg(b, eig, domain ? &*domain : nullptr));
    RunConfig to_stdout = c;
    to_stdout.out.clear();
    summary["written"] = c.out;
    emit(to_stdout, summary);
    return 0;
  }
  Json points = Json::array();
  for (size_t k = 0; k < b.points.size(); ++k) {
    Json row;
    row["theta"] = b.angles[k];
    row["point"] = to_json(b.points[k]);
    row["support_value"] = b.support_values[k];
    points.push_back(std::move(row));
  }
  summary["boundary"] = std::move(points);
  emit(c, summary);
  return 0;
}

int run_check_pair(const RunConfig& c) {
  const Matrix t = load_matrix(c);
  const ConformalAtlas atlas = build_atlas(load_domain(c));
  if (c.condition != "ii" && c.condition != "i" && c.condition != "both")
    throw InputError("cli: --condition must be ii, i or both");
  Json reports = Json::array();
  bool passed = true;
  if (c.condition != "i") {
    PairCheckReport r = check_condition_ii(t, atlas, c.m, c.degree, c.tol);
    r.seed = c.seed;
    passed = passed && r.passed;
    reports.push_back(to_json(r));
  }
  if (c.condition != "ii") {
    SampledFamily family;
    family.approximant_degrees = {8, 16, c.degree};
    std::sort(family.approximant_degrees.begin(), family.approximant_degrees.end());
    family.approximant_degrees.erase(std::unique(family.approximant_degrees.begin(), family.approximant_degrees.end()),
                                     family.approximant_degrees.end());
    const PairCheckReport r = check_condition_i_sampled(t, atlas, c.trials, c.tol, c.seed, family);
    passed = passed && r.passed;
    reports.push_back(to_json(r));
  }
  Json out = reports.size() == 1 ? reports[0] : Json{{"passed", passed}, {"reports", reports}};
  emit(c, out);
  return passed ? 0 : 1;
}

int run_herglotz(const RunConfig& c) {
  const Matrix t = load_matrix(c);
  const ConformalAtlas atlas = build_atlas(load_domain(c));
  if (c.function.empty()) throw InputError("cli: --function is required");
  const RationalFn f = rational_from_json(read_json(c.function));
  const Matrix result = herglotz_apply(f, t, atlas, c.m, c.degree);
  const Matrix direct = rational_apply(f, t);
  Json out;
  out["result"] = to_json(result);
  out["direct"] = to_json(direct);
  out["error"] = op_norm(result - direct);
  emit(c, out);
  return 0;
}

int run_dilate(const RunConfig& c) {
  const Matrix t = load_matrix(c);
  const Domain domain = load_domain(c);
  const ConformalAtlas atlas = build_atlas(domain);
  Json out;
  PovmDiscretization povm;
  try {
    povm = povm_discretize(t, atlas, c.m, c.degree, c.tol);
  } catch (const NotPsdError& e) {
    out["passed"] = false;
    out["error"] = e.what();
    out["node"] = e.index();
    out["min_eigenvalue"] = e.min_eigenvalue();
    emit(c, out);
    return 1;
  }
  const NaimarkModel model = naimark_dilate(povm);
  const NaimarkDiagnostics diag = verify(model, povm, domain);
  out["m"] = povm.m;
  out["n"] = model.n;
  out["approx_error"] = povm.approx_error;
  out["mass_defect_raw"] = povm.mass_defect_raw;
  out["min_eigenvalue_raw"] = povm.min_eigenvalue_raw;
  out["diagnostics"] = to_json(diag);
  // (z - z0)^k vanishes at the base point, as the dilation identity requires.
  Json calculus = Json::array();
  for (int k = 1; k <= 6; ++k) {
    std::vector<cplx> coeffs(static_cast<size_t>(k) + 1, 0.0);
    coeffs.back() = 1.0;
    const Poly f(coeffs, Basis::monomial, domain.base(), 1.0);
    calculus.push_back(Json{{"degree", k}, {"defect", dilation_calculus_check(t, model, f, domain)}});
  }
  out["calculus"] = std::move(calculus);
  out["constant_one_defect"] =
      dilation_defect(Matrix::Identity(t.rows(), t.cols()), model, [](cplx) { return cplx(1.0); });
  const bool passed = diag.isometry_defect < 1e-10 && diag.naimark_defect < 1e-10 && diag.boundary_distance < 1e-8;
  out["passed"] = passed;
  if (!c.export_model.empty()) {
    Json exported = model_to_json(model);
    exported["version"] = kVersion;
    write_atomic(c.export_model, dump(exported));
  }
  emit(c, out);
  return passed ? 0 : 1;
}

int run_reproduce_ellipse(const RunConfig& c) {
  const EllipseViolation v = ellipse_violation(EllipseParams(c.a, c.b), c.degrees);
  Json out = to_json(v);
  const bool ok = v.ratio > 1.0 && v.schwarz_lower < std::abs(v.g_at_c) && v.first_violating_degree.has_value();
  out["reproduced"] = ok;
  emit(c, out);
  return ok ? 0 : 1;
}

int run_involution(const RunConfig& c) {
  const InvolutionReport r = involution_demo(c.seed, c.trials);
  Json out = to_json(r);
  const bool ok = r.fit_residual < 1e-6 && std::abs(r.center) < 1e-6 && !r.refutation.passed;
  out["reproduced"] = ok;
  emit(c, out);
  return ok ? 0 : 1;
}

int run_bsk(const RunConfig& c) {
  const BskReport r = bsk_fuzz(c.trials, c.seed);
  emit(c, to_json(r));
  return r.passed ? 0 : 1;
}

int run_search(const RunConfig& c) {
  SearchOptions options;
  options.budget = c.budget;
  options.seed = c.seed;
  options.degrees = c.degrees;
  if (!c.start.empty()) options.start = read_matrix(c.start);
  const SearchReport r = square_search(load_domain(c), options);
  emit(c, to_json(r));
  return 0;
}

void add_common(CLI::App* sub, RunConfig& c, bool needs_matrix) {
  if (needs_matrix) sub->add_option("--matrix", c.matrix, "Matrix JSON file")->required();
  sub->add_option("--domain", c.domain, "disk:r=1 | ellipse:a=2,b=1 | square:s=1 | rectangle:w=2,h=1");
  sub->add_option("--base", c.base, "Base point z0, e.g. 0 or 0.1+0.2i");
  sub->add_option("--m", c.m, "Quadrature nodes")->check(CLI::Range(4, 1 << 20));
  sub->add_option("--degree", c.degree, "Approximant degree")->check(CLI::Range(1, 128));
  sub->add_option("--tol", c.tol, "Pass tolerance")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", c.seed, "Random seed (default: $WPAIR_SEED)");
  sub->add_option("--out", c.out, "Output path (stdout when omitted)");
  sub->add_option("--samples", c.samples, "Boundary samples")->check(CLI::Range(8, 1 << 20));
  sub->add_option("--threads", c.threads, "Thread cap (0 = all cores)")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"W-spectral pair toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  RunConfig c;

  auto* numrange = app.add_subcommand("numrange", "Numerical range boundary (JSON, .csv or .svg output)");
  add_common(numrange, c, true);

  auto* check = app.add_subcommand("check-pair", "Check conditions (ii) and/or sampled (i)");
  add_common(check, c, true);
  check->add_option("--condition", c.condition, "ii | i | both")->check(CLI::IsMember({"ii", "i", "both"}));
  check->add_option("--trials", c.trials, "Random test functions for (i)")->check(CLI::NonNegativeNumber);

  auto* herglotz = app.add_subcommand("herglotz", "Herglotz quadrature of f(T)");
  add_common(herglotz, c, true);
  herglotz->add_option("--function", c.function, "Polynomial or rational JSON")->required();

  auto* dilate = app.add_subcommand("dilate", "POVM discretization and Naimark dilation");
  add_common(dilate, c, true);
  dilate->add_option("--export-model", c.export_model, "Write V, N and nodes as JSON");

  auto* ellipse = app.add_subcommand("reproduce-ellipse", "Crouzeix ellipse counterexample");
  add_common(ellipse, c, false);
  ellipse->add_option("--a", c.a, "Semi-major axis");
  ellipse->add_option("--b", c.b, "Semi-minor axis");
  ellipse->add_option("--degrees", c.degrees, "Approximant degrees")->delimiter(',');

  auto* involution = app.add_subcommand("involution", "Random involution refutation");
  add_common(involution, c, false);
  involution->add_option("--trials", c.trials, "Random test functions")->check(CLI::NonNegativeNumber);

  auto* bsk = app.add_subcommand("bsk-fuzz", "Berger-Stampfli-Kato and teardrop fuzzing on the disk");
  add_common(bsk, c, false);
  bsk->add_option("--trials", c.trials, "Random (T, f) pairs")->check(CLI::NonNegativeNumber);

  auto* search = app.add_subcommand("search-square", "Nelder-Mead search for a 3x3 square counterexample");
  add_common(search, c, false);
  search->add_option("--budget", c.budget, "Objective evaluations")->check(CLI::PositiveNumber);
  search->add_option("--degrees", c.degrees, "Approximant degrees")->delimiter(',');
  search->add_option("--start", c.start, "Starting 3x3 matrix JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  c.subcommand = chosen->get_name();
  bool seed_set = chosen->count("--seed") > 0;
  if (!seed_set) {
    if (const char* env = std::getenv("WPAIR_SEED")) {
      try {
        c.seed = std::stoull(env);
        seed_set = true;
      } catch (const std::exception&) {
        std::cerr << "wpair: WPAIR_SEED must be a non-negative integer\n";
        return 2;
      }
    }
  }
  if (!seed_set && c.subcommand == "search-square") c.seed = 7;
  if (c.subcommand == "search-square" && chosen->count("--domain") == 0) c.domain = "square:s=1";
  if ((c.subcommand == "bsk-fuzz") && chosen->count("--trials") == 0) c.trials = 500;
  if ((c.subcommand == "involution") && chosen->count("--trials") == 0) c.trials = 8;
  set_thread_cap(c.threads);

  try {
    if (c.subcommand == "numrange") return run_numrange(c);
    if (c.subcommand == "check-pair") return run_check_pair(c);
    if (c.subcommand == "herglotz") return run_herglotz(c);
    if (c.subcommand == "dilate") return run_dilate(c);
    if (c.subcommand == "reproduce-ellipse") return run_reproduce_ellipse(c);
    if (c.subcommand == "involution") return run_involution(c);
    if (c.subcommand == "bsk-fuzz") return run_bsk(c);
    if (c.subcommand == "search-square") return run_search(c);
  } catch (const ConvergenceError& e) {
    std::cerr << "wpair: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "wpair: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "wpair: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
