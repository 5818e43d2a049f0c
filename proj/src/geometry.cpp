#include "panharmonic/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace panharmonic {

namespace {

int dimension_of(const BallSpec& ball) {
  if (!(ball.radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "ball radius must be > 0");
  return static_cast<int>(ball.center.size());
}

int dimension_of(const BoxSpec& box) {
  if (box.lo.size() != box.hi.size())
    throw Error(ErrorKind::InvalidArgument, "box corners differ in dimension");
  if (((box.hi - box.lo).array() <= 0.0).any())
    throw Error(ErrorKind::InvalidArgument, "box must have positive extent");
  return static_cast<int>(box.lo.size());
}

std::string format_point(const Point& x) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  return os.str();
}

}  // namespace

Domain::Domain(BallSpec ball) : shape_(ball), dim_(dimension_of(ball)) {
  if (dim_ < 2) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 2");
}

Domain::Domain(BoxSpec box) : shape_(box), dim_(dimension_of(box)) {
  if (dim_ < 2) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 2");
}

Domain Domain::unit_ball(int m) { return Domain(BallSpec{Point::Zero(m), 1.0}); }

Domain Domain::unit_box(int m) { return Domain(BoxSpec{Point::Zero(m), Point::Ones(m)}); }

double Domain::signed_distance(const Point& x) const {
  if (x.size() != dim_) throw Error(ErrorKind::InvalidArgument, "point dimension mismatch");
  if (const auto* b = std::get_if<BallSpec>(&shape_)) return b->radius - (x - b->center).norm();
  const auto& box = std::get<BoxSpec>(shape_);
  const Eigen::ArrayXd below = box.lo.array() - x.array();
  const Eigen::ArrayXd above = x.array() - box.hi.array();
  const Eigen::ArrayXd outside = below.max(above);  // per-axis, negative when inside the slab
  if ((outside <= 0.0).all()) return -outside.maxCoeff();
  return -outside.max(0.0).matrix().norm();
}

Point Domain::nearest_boundary_point(const Point& x) const {
  if (const auto* b = std::get_if<BallSpec>(&shape_)) {
    const Point d = x - b->center;
    const double n = d.norm();
    if (n == 0.0) {
      Point p = b->center;
      p[0] += b->radius;
      return p;
    }
    return b->center + (b->radius / n) * d;
  }
  const auto& box = std::get<BoxSpec>(shape_);
  Point p = x.cwiseMax(box.lo).cwiseMin(box.hi);
  if (signed_distance(x) <= 0.0) return p;
  // Inside: push the closest face coordinate onto the face.
  Eigen::Index best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  bool to_lo = true;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] - box.lo[i] < best_gap) best_gap = x[i] - box.lo[i], best = i, to_lo = true;
    if (box.hi[i] - x[i] < best_gap) best_gap = box.hi[i] - x[i], best = i, to_lo = false;
  }
  p[best] = to_lo ? box.lo[best] : box.hi[best];
  return p;
}

double Domain::measure() const {
  if (const auto* b = std::get_if<BallSpec>(&shape_))
    return specfun::unit_ball_volume(Dimension(dim_)) * std::pow(b->radius, dim_);
  const auto& box = std::get<BoxSpec>(shape_);
  return (box.hi - box.lo).prod();
}

double Domain::boundary_measure() const {
  if (const auto* b = std::get_if<BallSpec>(&shape_))
    return specfun::unit_sphere_area(Dimension(dim_)) * std::pow(b->radius, dim_ - 1);
  const auto& box = std::get<BoxSpec>(shape_);
  const Eigen::VectorXd side = box.hi - box.lo;
  const double volume = side.prod();
  double area = 0.0;
  for (Eigen::Index i = 0; i < side.size(); ++i) area += 2.0 * volume / side[i];
  return area;
}

double Domain::diameter() const {
  if (const auto* b = std::get_if<BallSpec>(&shape_)) return 2.0 * b->radius;
  const auto& box = std::get<BoxSpec>(shape_);
  return (box.hi - box.lo).norm();
}

std::pair<Point, Point> Domain::bounds() const {
  if (const auto* b = std::get_if<BallSpec>(&shape_)) {
    const Point r = Point::Constant(dim_, b->radius);
    return {b->center - r, b->center + r};
  }
  const auto& box = std::get<BoxSpec>(shape_);
  return {box.lo, box.hi};
}

std::string Domain::describe() const {
  if (const auto* b = std::get_if<BallSpec>(&shape_)) {
    std::ostringstream os;
    os.precision(17);
    os << "ball:r=" << b->radius << ",c=" << format_point(b->center);
    return os.str();
  }
  const auto& box = std::get<BoxSpec>(shape_);
  return "box:lo=" + format_point(box.lo) + ",hi=" + format_point(box.hi);
}

RuleResolution rule_resolution(int m, int level) {
  if (level < 1) throw Error(ErrorKind::InvalidArgument, "rule level must be >= 1");
  if (m == 2) return {4 * level, 8 << level};
  if (m == 3) return {4 * level, 8 * level};
  throw Error(ErrorKind::UnsupportedDimension,
              "deterministic rules exist for m = 2, 3 only; use monte_carlo_sphere");
}

QuadratureRule sphere_rule(int m, int level) {
  const RuleResolution res = rule_resolution(m, level);
  QuadratureRule rule;
  rule.kind = RuleKind::Sphere;
  rule.m = m;
  const int na = res.azimuth;
  const double dphi = 2.0 * std::numbers::pi / na;
  if (m == 2) {
    rule.nodes.resize(2, na);
    rule.weights = Eigen::VectorXd::Constant(na, dphi);
    for (int k = 0; k < na; ++k) rule.nodes.col(k) << std::cos(k * dphi), std::sin(k * dphi);
    rule.declared_order = na - 1;
    return rule;
  }
  const auto [z, wz] = gauss_legendre(res.polar);
  const int n = res.polar * na;
  rule.nodes.resize(3, n);
  rule.weights.resize(n);
  int idx = 0;
  for (int i = 0; i < res.polar; ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]));
    for (int k = 0; k < na; ++k, ++idx) {
      const double phi = (k + 0.5) * dphi;
      rule.nodes.col(idx) << z[i], s * std::cos(phi), s * std::sin(phi);
      rule.weights[idx] = wz[i] * dphi;
    }
  }
  // Unit norm to rounding.
  rule.nodes.colwise().normalize();
  rule.declared_order = std::min(2 * res.polar - 1, na - 1);
  return rule;
}

QuadratureRule ball_rule(int m, int level) {
  const RuleResolution res = rule_resolution(m, level);
  const QuadratureRule sphere = sphere_rule(m, level);
  // r in [0,1] with weight r^{m-1}: s = 2r - 1, r^{m-1} dr = (1+s)^{m-1} ds / 2^m.
  const auto [s, ws] = gauss_jacobi<double>(res.polar, 0.0, static_cast<double>(m - 1));
  const double jac = std::pow(0.5, m);

  QuadratureRule rule;
  rule.kind = RuleKind::Ball;
  rule.m = m;
  const Eigen::Index ns = sphere.size();
  rule.nodes.resize(m, res.polar * ns);
  rule.weights.resize(res.polar * ns);
  for (int i = 0; i < res.polar; ++i) {
    const double r = 0.5 * (1.0 + s[i]);
    rule.nodes.middleCols(i * ns, ns) = r * sphere.nodes;
    rule.weights.segment(i * ns, ns) = (ws[i] * jac) * sphere.weights;
  }
  rule.declared_order = std::min(sphere.declared_order, 2 * res.polar - 1);
  return rule;
}

QuadratureRule monte_carlo_sphere(int m, std::int64_t n, std::uint64_t seed) {
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 2");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "need at least one node");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  QuadratureRule rule;
  rule.kind = RuleKind::Sphere;
  rule.m = m;
  rule.nodes.resize(m, n);
  for (std::int64_t k = 0; k < n; ++k) {
    double norm = 0.0;
    while (norm == 0.0) {
      for (int i = 0; i < m; ++i) rule.nodes(i, k) = gauss(rng);
      norm = rule.nodes.col(k).norm();
    }
    rule.nodes.col(k) /= norm;
  }
  rule.weights = Eigen::VectorXd::Constant(
      n, specfun::unit_sphere_area(Dimension(m)) / static_cast<double>(n));
  return rule;
}

}  // namespace panharmonic
