#include "wpair/domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

namespace wpair {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Domain::Domain(Shape shape, cplx base) : shape_(std::move(shape)), base_(base) {
  if (!std::isfinite(base_.real()) || !std::isfinite(base_.imag()))
    throw DomainError("domain: base point must be finite");
  const double d = signed_distance(base_);
  if (!(d < -kTol.interior))
    throw DomainError("domain: base point " + format_complex(base_) +
                      " is not strictly inside " + describe());
}

Domain Domain::disk(cplx center, double radius, cplx base) {
  if (!(radius > 0) || !std::isfinite(radius)) throw DomainError("domain: disk radius must be positive");
  return Domain(Disk{center, radius}, base);
}

Domain Domain::ellipse(double a, double b, cplx base) {
  if (!(a > b && b > 0) || !std::isfinite(a))
    throw DomainError("domain: ellipse requires a > b > 0 (got a=" + fmt(a) + ", b=" + fmt(b) + ")");
  return Domain(Ellipse{a, b}, base);
}

Domain Domain::rectangle(double half_width, double half_height, cplx base) {
  if (!(half_width > 0 && half_height > 0) || !std::isfinite(half_width) || !std::isfinite(half_height))
    throw DomainError("domain: rectangle half sides must be positive");
  return Domain(Rectangle{half_width, half_height}, base);
}

std::string Domain::kind() const {
  return std::visit(overloaded{[](const Disk&) { return std::string("disk"); },
                               [](const Ellipse&) { return std::string("ellipse"); },
                               [](const Rectangle& r) {
                                 return std::string(r.half_width == r.half_height ? "square" : "rectangle");
                               }},
                    shape_);
}

std::string Domain::describe() const {
  return std::visit(
      overloaded{[](const Disk& d) {
                   std::string s = "disk:r=" + fmt(d.radius);
                   if (d.center != cplx(0)) s += ",cx=" + fmt(d.center.real()) + ",cy=" + fmt(d.center.imag());
                   return s;
                 },
                 [](const Ellipse& e) { return "ellipse:a=" + fmt(e.a) + ",b=" + fmt(e.b); },
                 [](const Rectangle& r) {
                   if (r.half_width == r.half_height) return "square:s=" + fmt(r.half_width);
                   return "rectangle:w=" + fmt(r.half_width) + ",h=" + fmt(r.half_height);
                 }},
      shape_);
}

double Domain::signed_distance(cplx z) const {
  return std::visit(overloaded{[&](const Disk& d) { return std::abs(z - d.center) - d.radius; },
                               [&](const Ellipse& e) {
                                 const double g = std::hypot(z.real() / e.a, z.imag() / e.b);
                                 return (g - 1.0) * e.b;
                               },
                               [&](const Rectangle& r) {
                                 const double dx = std::abs(z.real()) - r.half_width;
                                 const double dy = std::abs(z.imag()) - r.half_height;
                                 if (dx <= 0 && dy <= 0) return std::max(dx, dy);
                                 return std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
                               }},
                    shape_);
}

double Domain::support(double theta) const {
  const double c = std::cos(theta), s = std::sin(theta);
  return std::visit(overloaded{[&](const Disk& d) {
                                 return d.center.real() * c + d.center.imag() * s + d.radius;
                               },
                               [&](const Ellipse& e) { return std::hypot(e.a * c, e.b * s); },
                               [&](const Rectangle& r) {
                                 return r.half_width * std::abs(c) + r.half_height * std::abs(s);
                               }},
                    shape_);
}

cplx Domain::boundary_point(double t) const {
  return std::visit(
      overloaded{[&](const Disk& d) { return d.center + d.radius * std::polar(1.0, t); },
                 [&](const Ellipse& e) { return cplx(e.a * std::cos(t), e.b * std::sin(t)); },
                 [&](const Rectangle& r) {
                   const double w = r.half_width, h = r.half_height;
                   const double perimeter = 4 * (w + h);
                   double s = std::fmod(t, 2 * kPi);
                   if (s < 0) s += 2 * kPi;
                   s *= perimeter / (2 * kPi);
                   if (s < 2 * h) return cplx(w, -h + s);
                   s -= 2 * h;
                   if (s < 2 * w) return cplx(w - s, h);
                   s -= 2 * w;
                   if (s < 2 * h) return cplx(-w, h - s);
                   s -= 2 * h;
                   return cplx(-w + s, -h);
                 }},
      shape_);
}

std::vector<double> Domain::corner_parameters() const {
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    const double w = r->half_width, h = r->half_height;
    const double scale = 2 * kPi / (4 * (w + h));
    return {0.0, 2 * h * scale, (2 * h + 2 * w) * scale, (4 * h + 2 * w) * scale};
  }
  return {};
}

cplx parse_complex(const std::string& raw) {
  std::string text;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) text += ch;
  if (text.empty()) throw InputError("cli: empty complex number");
  auto to_double = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InputError("cli: cannot parse complex number '" + raw + "'");
    }
    if (used != s.size()) throw InputError("cli: cannot parse complex number '" + raw + "'");
    return v;
  };
  if (text.back() != 'i' && text.back() != 'j') return {to_double(text), 0.0};
  const std::string body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not part of an exponent and not leading.
  size_t split = std::string::npos;
  for (size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, to_double(body)};
  return {to_double(body.substr(0, split)), to_double(body.substr(split))};
}

Domain parse_domain(const std::string& spec, cplx base) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::map<std::string, double> params;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InputError("cli: malformed domain parameter '" + item + "'");
      try {
        size_t used = 0;
        const std::string value = item.substr(eq + 1);
        params[item.substr(0, eq)] = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw InputError("cli: malformed domain parameter '" + item + "'");
      }
    }
  }
  auto get = [&](const char* key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  auto need = [&](const char* key) {
    auto it = params.find(key);
    if (it == params.end()) throw InputError("cli: domain '" + spec + "' is missing '" + key + "'");
    return it->second;
  };
  if (kind == "disk") return Domain::disk(cplx(get("cx", 0), get("cy", 0)), get("r", 1.0), base);
  if (kind == "ellipse") return Domain::ellipse(need("a"), need("b"), base);
  if (kind == "square") return Domain::square(get("s", 1.0), base);
  if (kind == "rectangle") return Domain::rectangle(need("w"), need("h"), base);
  throw InputError("cli: unknown domain kind '" + kind + "'");
}

}  // namespace wpair
