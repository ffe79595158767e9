#pragma once

#include <string>
#include <variant>

#include "wpair/core.hpp"

namespace wpair {

struct Disk {
  cplx center{0.0, 0.0};
  double radius = 1.0;
};

/// Centered ellipse x^2/a^2 + y^2/b^2 < 1 with the major axis on the real line.
struct Ellipse {
  double a = 2.0;
  double b = 1.0;
  double focal() const { return std::sqrt((a - b) * (a + b)); }
};

/// Centered rectangle (-half_width, half_width) x (-half_height, half_height).
struct Rectangle {
  double half_width = 1.0;
  double half_height = 1.0;
};

using Shape = std::variant<Disk, Ellipse, Rectangle>;

/// A Jordan domain together with its base point z0.
class Domain {
 public:
  static Domain disk(cplx center = 0.0, double radius = 1.0, cplx base = 0.0);
  static Domain ellipse(double a, double b, cplx base = 0.0);
  static Domain rectangle(double half_width, double half_height, cplx base = 0.0);
  static Domain square(double half_side = 1.0, cplx base = 0.0) {
    return rectangle(half_side, half_side, base);
  }

  const Shape& shape() const { return shape_; }
  cplx base() const { return base_; }
  std::string kind() const;
  /// CLI form, e.g. "ellipse:a=2,b=1".
  std::string describe() const;

  /// Negative inside, zero on the boundary, positive outside. Exact Euclidean
  /// distance for disks and rectangles; for the ellipse the gauge value
  /// (sqrt(x^2/a^2 + y^2/b^2) - 1) * b, which has the same sign and never
  /// exceeds the true distance outside.
  double signed_distance(cplx z) const;
  bool contains(cplx z, double tol = 0.0) const { return signed_distance(z) <= tol; }

  /// Support function max Re(e^{-i theta} z) over the closed domain.
  double support(double theta) const;

  /// Geometric boundary parametrization, t in [0, 2 pi). Counterclockwise.
  /// Rectangles are parametrized by arc length scaled to 2 pi, starting at the
  /// corner (w, -h), so that corners land on t = k * (side fraction).
  cplx boundary_point(double t) const;
  /// Parameters (in [0, 2 pi)) where the boundary has corners; empty for smooth domains.
  std::vector<double> corner_parameters() const;

 private:
  Domain(Shape shape, cplx base);
  Shape shape_;
  cplx base_;
};

/// Parses "disk:r=1", "disk:r=2,cx=0.5,cy=0", "ellipse:a=2,b=1", "square:s=1",
/// "rectangle:w=2,h=1". Throws InputError on malformed text.
Domain parse_domain(const std::string& spec, cplx base = 0.0);

/// Parses "0", "0+0i", "1.5-2i", "-0.3i", "i".
cplx parse_complex(const std::string& text);

}  // namespace wpair
