#pragma once

#include <string>

#include <json.hpp>

#include "wpair/core.hpp"
#include "wpair/dilation.hpp"
#include "wpair/domain.hpp"
#include "wpair/experiments.hpp"
#include "wpair/funcalc.hpp"
#include "wpair/numrange.hpp"
#include "wpair/wspec.hpp"

namespace wpair {

using Json = nlohmann::ordered_json;

// Complex numbers travel as [re, im]. Matrices as {"n": n, "data": [[re, im], ...]}
// in row-major order. Polynomials as {"coeffs": [...]} with optional "basis",
// "center" and "scale"; rational functions as {"num": poly, "den": poly}.

Json to_json(cplx z);
cplx complex_from_json(const Json& j);

Json to_json(const Matrix& a);
/// Throws InputError on malformed input, non-finite entries or n > 64.
Matrix matrix_from_json(const Json& j);

Json to_json(const Poly& p);
Poly poly_from_json(const Json& j);
/// Accepts a rational {"num", "den"} or a bare polynomial.
RationalFn rational_from_json(const Json& j);

Json to_json(const PairCheckReport& r);
Json to_json(const TeardropReport& r);
Json to_json(const EllipseViolation& r);
Json to_json(const InvolutionReport& r);
Json to_json(const BskReport& r);
Json to_json(const SearchReport& r);
Json to_json(const NaimarkDiagnostics& d);
Json model_to_json(const NaimarkModel& model);

/// Reads and parses a JSON file; InputError on failure.
Json read_json(const std::string& path);
Matrix read_matrix(const std::string& path);

/// Two-space indented text with a trailing newline. Doubles print in the
/// shortest form that round-trips, so output is byte-stable.
std::string dump(const Json& j);

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::string& path, const std::string& content);

/// "theta,re,im,support_value" header plus one row per boundary sample.
std::string boundary_csv(const RangeBoundary& b);

/// Static 800x800 SVG of the W(T) boundary, the eigenvalues and, if given, the domain.
std::string range_svg(const RangeBoundary& b, const std::vector<cplx>& eigenvalues, const Domain* domain);

}  // namespace wpair
