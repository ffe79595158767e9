#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wpair {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr cplx kI{0.0, 1.0};

inline constexpr const char* kVersion = "0.1.0";

/// Numerical thresholds shared by every module. Values are fixed; callers that
/// need something different pass an explicit argument instead of mutating these.
struct Tolerances {
  double hermitian = 1e-12;       // ||A - A*|| relative to ||A||_F
  double pivot = 1e-14;           // LU pivot relative to ||A||_inf
  double psd_clamp = 1e-10;       // eigenvalues above -psd_clamp are clamped to 0
  double pole_margin = 1e-6;      // min distance between a pole and the spectrum
  double spectrum_margin = 1e-6;  // sigma(T) must sit this far inside a domain
  double interior = 1e-9;         // base point distance to the boundary
  double convexity = 1e-9;        // cross-product slack on range polylines
  int max_dimension = 64;
  int max_degree = 128;
};

inline constexpr Tolerances kTol{};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: non-square, non-finite, bad parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, double pivot)
      : Error(what), pivot_(pivot) {}
  double pivot() const { return pivot_; }

 private:
  double pivot_;
};

class NotPsdError : public Error {
 public:
  NotPsdError(const std::string& what, double min_eigenvalue, int index = -1)
      : Error(what), min_eigenvalue_(min_eigenvalue), index_(index) {}
  double min_eigenvalue() const { return min_eigenvalue_; }
  /// Offending node, or -1 when not applicable.
  int index() const { return index_; }

 private:
  double min_eigenvalue_;
  int index_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class PoleError : public Error {
 public:
  PoleError(const std::string& what, cplx spectrum_point, cplx pole)
      : Error(what), spectrum_point_(spectrum_point), pole_(pole) {}
  cplx spectrum_point() const { return spectrum_point_; }
  cplx pole() const { return pole_; }

 private:
  cplx spectrum_point_;
  cplx pole_;
};

/// Unsupported domain kind, bad domain parameters, or a spectrum outside the domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A mathematical hypothesis of an operation is not met (base point, real part, ...).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

class DegreeTooHighError : public Error {
 public:
  DegreeTooHighError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

std::string format_complex(cplx z);

}  // namespace wpair
