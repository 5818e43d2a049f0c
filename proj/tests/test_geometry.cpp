#include <doctest.h>

#include <cmath>
#include <numbers>

#include "panharmonic/geometry.hpp"
#include "panharmonic/mesh.hpp"

using namespace panharmonic;
constexpr double pi = std::numbers::pi;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

Point vec(std::initializer_list<double> v) {
  Point x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

}  // namespace

TEST_CASE("ball and box distance oracles") {
  const Domain ball(BallSpec{vec({1, 0, 0}), 2.0});
  CHECK(ball.signed_distance(vec({1, 0, 0})) == 2.0);
  CHECK(ball.signed_distance(vec({4, 0, 0})) == doctest::Approx(-1.0));
  CHECK((ball.nearest_boundary_point(vec({2, 0, 0})) - vec({3, 0, 0})).norm() < 1e-15);
  CHECK(ball.measure() == doctest::Approx(32 * pi / 3));
  CHECK(ball.boundary_measure() == doctest::Approx(16 * pi));
  CHECK(ball.diameter() == 4.0);

  const Domain box(BoxSpec{vec({0, 0}), vec({2, 1})});
  CHECK(box.signed_distance(vec({0.5, 0.25})) == doctest::Approx(0.25));
  CHECK(box.signed_distance(vec({3, 0.5})) == doctest::Approx(-1.0));
  CHECK((box.nearest_boundary_point(vec({1.8, 0.5})) - vec({2, 0.5})).norm() < 1e-15);
  CHECK(box.measure() == doctest::Approx(2.0));
  CHECK(box.boundary_measure() == doctest::Approx(6.0));
  CHECK(box.diameter() == doctest::Approx(std::sqrt(5.0)));

  CHECK_THROWS_AS(Domain(BallSpec{vec({0, 0}), -1.0}), Error);
  CHECK_THROWS_AS(Domain(BoxSpec{vec({0, 0}), vec({1, 0})}), Error);
  CHECK_THROWS_AS(Domain(BoxSpec{vec({0, 0}), vec({1, 1, 1})}), Error);
  CHECK_THROWS_AS(ball.signed_distance(vec({0, 0})), Error);
}

TEST_CASE("Gauss-Jacobi nodes integrate polynomials exactly") {
  const auto [x, w] = gauss_legendre(6);
  CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-15));
  // x^10 over [-1, 1].
  CHECK((w.array() * x.array().pow(10)).sum() == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
  // weight (1 + x)^2: int_{-1}^{1} (1+x)^2 x^2 dx = 2/3 + 2/5 = 16/15.
  const auto [xj, wj] = gauss_jacobi<double>(5, 0.0, 2.0);
  CHECK(wj.sum() == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  CHECK((wj.array() * xj.array().square()).sum() == doctest::Approx(16.0 / 15.0).epsilon(1e-14));
  const auto [xl, wl] = gauss_jacobi<long double>(4, 0.0L, 1.0L);
  CHECK(static_cast<double>(wl.sum()) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(gauss_jacobi<double>(0, 0.0, 0.0), Error);
}

TEST_CASE("sphere rules: weights, norms and moments") {
  for (int m : {2, 3})
    for (int level = 1; level <= 7; ++level) {
      const QuadratureRule rule = sphere_rule(m, level);
      CHECK(rule.kind == RuleKind::Sphere);
      CHECK(std::abs(rule.weights.sum() - specfun::unit_sphere_area(Dimension(m))) < 1e-12);
      CHECK((rule.weights.array() > 0).all());
      CHECK(((rule.nodes.colwise().norm().array() - 1.0).abs() < 1e-12).all());
    }
  const QuadratureRule s3 = sphere_rule(3, 4);
  CHECK(std::abs(s3.integrate([](const auto& y) { return y[0] * y[0]; }) - 4 * pi / 3) < 1e-10);
  const QuadratureRule s2 = sphere_rule(2, 4);
  CHECK(std::abs(s2.integrate([](const auto& y) { return y[0]; })) < 1e-14);
  CHECK(std::abs(s3.integrate([](const auto& y) { return y[0] * y[1] * y[2]; })) < 1e-14);
  // int_{S^2} y1^4 = 4 pi / 5.
  CHECK(std::abs(s3.integrate([](const auto& y) { return std::pow(y[0], 4); }) - 4 * pi / 5) < 1e-12);
}

TEST_CASE("ball rules: weights and radial moments") {
  for (int m : {2, 3})
    for (int level = 1; level <= 6; ++level) {
      const QuadratureRule rule = ball_rule(m, level);
      CHECK(rule.kind == RuleKind::Ball);
      CHECK(std::abs(rule.weights.sum() - specfun::unit_ball_volume(Dimension(m))) < 1e-12);
      CHECK((rule.weights.array() > 0).all());
      CHECK((rule.nodes.colwise().norm().array() < 1.0).all());
    }
  const QuadratureRule b3 = ball_rule(3, 3);
  CHECK(std::abs(b3.integrate([](const auto& y) { return y.squaredNorm(); }) - 4 * pi / 5) < 1e-10);
  const QuadratureRule b2 = ball_rule(2, 3);
  CHECK(std::abs(b2.integrate([](const auto& y) { return y.squaredNorm(); }) - pi / 2) < 1e-12);
}

TEST_CASE("rules self-converge on a smooth integrand") {
  auto f = [](const auto& y) { return std::exp(y[0]); };
  for (int level = 4; level <= 6; ++level) {
    CHECK(std::abs(sphere_rule(3, level).integrate(f) - sphere_rule(3, level + 1).integrate(f)) < 1e-10);
    CHECK(std::abs(ball_rule(3, level).integrate(f) - ball_rule(3, level + 1).integrate(f)) < 1e-10);
  }
  // Closed form: int_{S^2} e^{y1} = 4 pi sinh(1).
  CHECK(std::abs(sphere_rule(3, 6).integrate(f) - 4 * pi * std::sinh(1.0)) < 1e-12);
}

TEST_CASE("resolution and unsupported dimensions") {
  CHECK(sphere_rule(2, 3).size() == 64);
  CHECK(sphere_rule(3, 2).size() == 8 * 16);
  CHECK(kind_of([] { sphere_rule(4, 3); }) == ErrorKind::UnsupportedDimension);
  CHECK(kind_of([] { ball_rule(5, 3); }) == ErrorKind::UnsupportedDimension);
  CHECK(kind_of([] { sphere_rule(3, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("Monte Carlo sphere nodes") {
  const QuadratureRule a = monte_carlo_sphere(5, 100000, 42);
  const QuadratureRule b = monte_carlo_sphere(5, 100000, 42);
  CHECK(a.nodes == b.nodes);
  CHECK(a.declared_order == 0);
  const double omega5 = specfun::unit_sphere_area(Dimension(5));
  CHECK(std::abs(a.weights.sum() - omega5) < 1e-9);
  CHECK(((a.nodes.colwise().norm().array() - 1.0).abs() < 1e-12).all());
  // Mean of y1 within 3 standard errors of zero.
  const Eigen::ArrayXd y1 = a.nodes.row(0).transpose().array();
  const double mean = y1.mean();
  const double se = std::sqrt((y1 - mean).square().sum() / (y1.size() - 1) / y1.size());
  CHECK(std::abs(mean) < 3 * se);
  CHECK(std::abs(a.integrate([](const auto& y) { return y[0]; })) < 3 * se * omega5);
  CHECK(monte_carlo_sphere(5, 10, 1).nodes != monte_carlo_sphere(5, 10, 2).nodes);
}

TEST_CASE("exact clipped measures") {
  using detail::box_ball_volume;
  using detail::rectangle_disk_area;
  CHECK(rectangle_disk_area(-2, 2, -2, 2, 1.0) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(rectangle_disk_area(0, 2, 0, 2, 1.0) == doctest::Approx(pi / 4).epsilon(1e-14));
  CHECK(rectangle_disk_area(0.1, 0.2, 0.1, 0.3, 1.0) == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(rectangle_disk_area(2, 3, 0, 1, 1.0) == 0.0);
  // Circular segment x >= 0.5: r^2 acos(d) - d sqrt(1 - d^2).
  CHECK(rectangle_disk_area(0.5, 2, -2, 2, 1.0) ==
        doctest::Approx(std::acos(0.5) - 0.5 * std::sqrt(0.75)).epsilon(1e-13));

  const Eigen::Vector3d big(2, 2, 2);
  CHECK(box_ball_volume(-big, big, 1.0) == doctest::Approx(4 * pi / 3).epsilon(1e-12));
  CHECK(box_ball_volume(Eigen::Vector3d::Zero(), big, 1.0) == doctest::Approx(pi / 6).epsilon(1e-12));
  // Spherical cap z >= 0.5: pi h^2 (3R - h) / 3 with h = 0.5.
  CHECK(box_ball_volume(Eigen::Vector3d(-2, -2, 0.5), big, 1.0) ==
        doctest::Approx(pi * 0.25 * 2.5 / 3).epsilon(1e-12));
  CHECK(box_ball_volume(Eigen::Vector3d(0.1, 0.1, 0.1), Eigen::Vector3d(0.2, 0.3, 0.4), 1.0) ==
        doctest::Approx(0.006).epsilon(1e-13));
}

TEST_CASE("unit box mesh is an exact partition") {
  const DomainMesh mesh = DomainMesh::build(Domain::unit_box(3), 0.25);
  CHECK(mesh.size() == 64);
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    CHECK(mesh.measures()[i] == doctest::Approx(1.0 / 64).epsilon(1e-14));
    CHECK(mesh.full(i));
  }
  // Non-divisible sides shrink the spacing per axis.
  const DomainMesh skew = DomainMesh::build(Domain(BoxSpec{Point::Zero(2), vec({1.0, 0.3})}), 0.25);
  CHECK(std::abs(skew.total_measure() - 0.3) < 1e-14);
  CHECK(skew.spacing()[0] <= 0.25);
  CHECK(skew.spacing()[1] <= 0.25);
}

TEST_CASE("ball meshes: measure, node placement, refinement") {
  const Domain ball3 = Domain::unit_ball(3);
  const DomainMesh mesh = DomainMesh::build(ball3, 0.1);
  CHECK(std::abs(mesh.total_measure() - 4 * pi / 3) / (4 * pi / 3) < 1e-3);
  for (Eigen::Index i = 0; i < mesh.size(); ++i) CHECK(mesh.distance(mesh.center(i)) > 0.0);

  const Domain ball2(BallSpec{vec({0.3, -0.2}), 0.7});
  double previous = -1.0;
  for (double h : {0.2, 0.1, 0.05}) {
    const DomainMesh m2 = DomainMesh::build(ball2, h);
    const double defect = std::abs(m2.total_measure() - ball2.measure());
    if (previous >= 0.0) CHECK(defect <= std::max(previous / 2, 1e-12));
    previous = defect;
    for (Eigen::Index i = 0; i < m2.size(); ++i) CHECK(m2.distance(m2.center(i)) > 0.0);
  }

  for (Eigen::Index i : mesh.interior(0.2)) CHECK(mesh.distance(mesh.center(i)) >= 0.2);
  CHECK(!mesh.interior(0.2).empty());
  CHECK(mesh.interior(1.5).empty());
}

TEST_CASE("mesh lookup and cell boxes") {
  const DomainMesh mesh = DomainMesh::build(Domain::unit_ball(3), 0.2);
  for (Eigen::Index i = 0; i < mesh.size(); i += 7) {
    const Point lo = mesh.cell_lo(i), hi = mesh.cell_hi(i);
    const Point mid = 0.5 * (lo + hi);
    const auto found = mesh.locate(mid);
    REQUIRE(found.has_value());
    CHECK(*found == i);
    if (mesh.full(i)) CHECK((mesh.center(i) - mid).norm() < 1e-14);
  }
  CHECK(!mesh.locate(vec({5, 5, 5})).has_value());
}

TEST_CASE("mesh guards") {
  CHECK(kind_of([] { DomainMesh::build(Domain::unit_ball(3), 0.001); }) == ErrorKind::TooFine);
  CHECK(kind_of([] { DomainMesh::build(Domain::unit_ball(3), -1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { DomainMesh::build(Domain::unit_ball(4), 0.5); }) == ErrorKind::UnsupportedDimension);
}
