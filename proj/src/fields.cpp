#include "panharmonic/fields.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "panharmonic/specfun.hpp"

namespace panharmonic {

namespace {

std::string number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

Point checked_direction(int m, const Point& direction) {
  if (direction.size() != m) throw Error(ErrorKind::InvalidArgument, "direction dimension mismatch");
  if (std::abs(direction.norm() - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidArgument, "direction must be a unit vector");
  return direction;
}

void check_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorKind::InvalidArgument, "mu must be > 0");
}

void check_axes(int m, int i, int j) {
  if (i < 0 || j < 0 || i >= m || j >= m || i == j)
    throw Error(ErrorKind::InvalidArgument, "need two distinct axes in range");
}

}  // namespace

std::string FieldLabel::describe() const {
  switch (kind) {
    case FieldClass::Harmonic: return "harmonic";
    case FieldClass::Panharmonic: return "panharmonic(" + number(mu) + ")";
    case FieldClass::Generic: return "generic";
  }
  return "generic";
}

double SmoothRegion::clearance(const Point& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Hole& hole : holes) best = std::min(best, (x - hole.center).norm() - hole.radius);
  return best;
}

ScalarField::ScalarField(int m, Fn fn, FieldLabel label, SmoothRegion region, std::string name)
    : dim_(m), fn_(std::move(fn)), label_(label), region_(std::move(region)), name_(std::move(name)) {
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 2");
}

ScalarField make_plane_panharmonic(int m, double mu, const Point& direction) {
  check_mu(mu);
  const Point d = checked_direction(m, direction);
  return ScalarField(
      m, [d, mu](const Point& x) { return std::exp(mu * d.dot(x)); },
      FieldLabel::panharmonic(mu), {}, "plane(mu=" + number(mu) + ")");
}

ScalarField make_cosh_panharmonic(int m, double mu, const Point& direction) {
  check_mu(mu);
  const Point d = checked_direction(m, direction);
  return ScalarField(
      m, [d, mu](const Point& x) { return std::cosh(mu * d.dot(x)); },
      FieldLabel::panharmonic(mu), {}, "cosh(mu=" + number(mu) + ")");
}

ScalarField make_radial_panharmonic(int m, double mu, const Point& center) {
  check_mu(mu);
  if (center.size() != m) throw Error(ErrorKind::InvalidArgument, "center dimension mismatch");
  const Dimension dim(m);
  return ScalarField(
      m, [dim, mu, center](const Point& x) { return specfun::a_sphere(dim, mu * (x - center).norm()); },
      FieldLabel::panharmonic(mu), {}, "radial(mu=" + number(mu) + ")");
}

ScalarField make_constant(int m, double value) {
  return ScalarField(
      m, [value](const Point&) { return value; }, FieldLabel::harmonic(), {},
      "constant(" + number(value) + ")");
}

ScalarField make_linear(const Point& coefficients, double offset) {
  const int m = static_cast<int>(coefficients.size());
  return ScalarField(
      m, [coefficients, offset](const Point& x) { return offset + coefficients.dot(x); },
      FieldLabel::harmonic(), {}, "linear");
}

ScalarField make_product_harmonic(int m, int i, int j) {
  check_axes(m, i, j);
  return ScalarField(
      m, [i, j](const Point& x) { return x[i] * x[j]; }, FieldLabel::harmonic(), {},
      "x" + std::to_string(i + 1) + "*x" + std::to_string(j + 1));
}

ScalarField make_difference_harmonic(int m, int i, int j) {
  check_axes(m, i, j);
  return ScalarField(
      m, [i, j](const Point& x) { return x[i] * x[i] - x[j] * x[j]; }, FieldLabel::harmonic(), {},
      "x" + std::to_string(i + 1) + "^2-x" + std::to_string(j + 1) + "^2");
}

ScalarField make_fundamental(const Point& pole) {
  const int m = static_cast<int>(pole.size());
  SmoothRegion region;
  region.holes.push_back({pole, 0.0});
  return ScalarField(
      m, [pole, m](const Point& x) { return fundamental(m, x, pole); }, FieldLabel::harmonic(),
      std::move(region), "fundamental");
}

ScalarField make_fundamental(const Point& pole, const Domain& keep_out) {
  if (pole.size() != keep_out.dim()) throw Error(ErrorKind::InvalidArgument, "pole dimension mismatch");
  if (keep_out.signed_distance(pole) >= 0.0)
    throw Error(ErrorKind::InvalidArgument, "pole lies in the evaluation domain");
  return make_fundamental(pole);
}

ScalarField make_generic(int m, ScalarField::Fn fn, std::string name, SmoothRegion region) {
  return ScalarField(m, std::move(fn), FieldLabel::generic(), std::move(region), std::move(name));
}

ScalarField linear_combination(const std::vector<std::pair<double, ScalarField>>& terms) {
  if (terms.empty()) throw Error(ErrorKind::InvalidArgument, "empty combination");
  const int m = terms.front().second.dim();
  FieldLabel label = terms.front().second.label();
  SmoothRegion region;
  std::string name;
  for (const auto& [c, f] : terms) {
    if (f.dim() != m) throw Error(ErrorKind::InvalidArgument, "dimension mismatch in combination");
    const FieldLabel& l = f.label();
    if (l.kind != label.kind || (l.kind == FieldClass::Panharmonic && l.mu != label.mu))
      label = FieldLabel::generic();
    region.holes.insert(region.holes.end(), f.smooth_region().holes.begin(),
                        f.smooth_region().holes.end());
    name += (name.empty() ? "" : "+") + number(c) + "*" + f.name();
  }
  return ScalarField(
      m,
      [terms](const Point& x) {
        double sum = 0.0;
        for (const auto& [c, f] : terms) sum += c * f(x);
        return sum;
      },
      label, std::move(region), name);
}

double fundamental(int m, const Point& x, const Point& y) {
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 2");
  const double r = (x - y).norm();
  if (r == 0.0) throw Error(ErrorKind::CoincidentPoints, "kernel is singular at x = y");
  if (m == 2) return std::log(r) / (2.0 * std::numbers::pi);
  const double omega = specfun::unit_sphere_area(Dimension(m));
  return 1.0 / ((2.0 - m) * omega * std::pow(r, m - 2));
}

double fd_laplacian(const ScalarField& field, const Point& x, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be > 0");
  const int m = field.dim();
  if (x.size() != m) throw Error(ErrorKind::InvalidArgument, "point dimension mismatch");
  if (field.smooth_region().clearance(x) <= step * std::sqrt(static_cast<double>(m)))
    throw Error(ErrorKind::StencilOutsideDomain, "stencil leaves the smooth region");
  const double center = field(x);
  double sum = 0.0;
  Point y = x;
  for (int i = 0; i < m; ++i) {
    y[i] = x[i] + step;
    const double plus = field(y);
    y[i] = x[i] - step;
    const double minus = field(y);
    y[i] = x[i];
    sum += (plus - 2.0 * center) + minus;
  }
  return sum / (step * step);
}

double pde_residual(const ScalarField& field, const Point& x, double mu, double step) {
  const double u = field(x);
  return std::abs(fd_laplacian(field, x, step) - mu * mu * u) / (1.0 + std::abs(u));
}

}  // namespace panharmonic
