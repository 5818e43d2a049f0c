#include <doctest.h>

#include <cmath>
#include <random>

#include "panharmonic/mean_values.hpp"
#include "panharmonic/specfun.hpp"

using namespace panharmonic;
using specfun::a_ball;
using specfun::a_sphere;

namespace {

Point vec(std::initializer_list<double> v) {
  Point x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

// Admissible (x, r) inside the unit ball.
std::vector<std::pair<Point, double>> samples(int m, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.7, 0.7), frac(0.05, 0.95);
  std::vector<std::pair<Point, double>> out;
  while (static_cast<int>(out.size()) < n) {
    Point x(m);
    for (int i = 0; i < m; ++i) x[i] = u(rng);
    const double room = 1.0 - x.norm();
    if (room > 0.05) out.emplace_back(x, room * frac(rng));
  }
  return out;
}

}  // namespace

TEST_CASE("sphere means") {
  const MeanRules r2 = MeanRules::deterministic(2, 6);
  const MeanRules r3 = MeanRules::deterministic(3, 6);
  CHECK(std::abs(sphere_mean(make_product_harmonic(2, 0, 1), vec({0.2, 0.3}), 0.4, r2.sphere) - 0.06) < 1e-10);
  CHECK(std::abs(sphere_mean(make_radial_panharmonic(3, 1.0), Point::Zero(3), 1.0, r3.sphere) - std::sinh(1.0)) <
        1e-12);
  CHECK(sphere_mean(make_constant(3, 1.0), vec({0.1, 0.1, 0.1}), 0.5, r3.sphere) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("ball means") {
  const MeanRules r2 = MeanRules::deterministic(2, 6);
  CHECK(ball_mean(make_constant(2, 1.0), vec({0.1, 0.1}), 0.5, r2.ball) == doctest::Approx(1.0).epsilon(1e-15));
  const ScalarField plane = make_plane_panharmonic(2, 1.0, Point::Unit(2, 0));
  CHECK(std::abs(ball_mean(plane, Point::Zero(2), 1.0, r2.ball) - a_ball(Dimension(2), 1.0)) < 1e-12);
  CHECK(std::abs(ball_mean(make_linear(Point::Unit(2, 0)), vec({0.4, 0.0}), 0.3, r2.ball) - 0.4) < 1e-10);
}

TEST_CASE("admissibility and rule kinds") {
  const MeanRules r3 = MeanRules::deterministic(3, 3);
  const ScalarField e = make_fundamental(vec({1, 0, 0}));
  CHECK(kind_of([&] { sphere_mean(e, Point::Zero(3), 1.0, r3.sphere); }) == ErrorKind::InadmissibleBall);
  CHECK_NOTHROW(sphere_mean(e, Point::Zero(3), 0.99, r3.sphere));
  CHECK(kind_of([&] { sphere_mean(e, Point::Zero(3), 0.5, r3.ball); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { ball_mean(e, Point::Zero(3), -0.5, r3.ball); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { coupling(e, Point::Zero(3), 1.2, 1.0, r3); }) == ErrorKind::InadmissibleBall);
}

TEST_CASE("mean-value identities for panharmonic fields") {
  for (int m : {2, 3}) {
    const MeanRules rules = MeanRules::deterministic(m, 6);
    const MeanRules finer = MeanRules::deterministic(m, 7);
    const Dimension dim(m);
    const std::vector<ScalarField> fields = {make_plane_panharmonic(m, 1.5, Point::Unit(m, 0)),
                                             make_cosh_panharmonic(m, 0.8, Point::Ones(m).normalized()),
                                             make_radial_panharmonic(m, 1.2, Point::Constant(m, 0.1))};
    for (const ScalarField& f : fields) {
      const double mu = f.label().mu;
      for (const auto& [x, r] : samples(m, 20, 5)) {
        const double ms = sphere_mean(f, x, r, rules.sphere);
        const double mb = ball_mean(f, x, r, rules.ball);
        const double eps = std::abs(ms - sphere_mean(f, x, r, finer.sphere)) +
                           std::abs(mb - ball_mean(f, x, r, finer.ball)) + 1e-13 * (1 + std::abs(ms));
        CAPTURE(m);
        CAPTURE(f.name());
        CHECK(std::abs(ms - a_sphere(dim, mu * r) * f(x)) <= std::max(eps, 1e-8));
        CHECK(std::abs(mb - a_ball(dim, mu * r) * f(x)) <= std::max(eps, 1e-8));
        CHECK(std::abs(coupling_residual(f, x, r, mu, rules)) <= 1e-8);
        CHECK(ms - f(x) >= -1e-8);
      }
    }
  }
}

TEST_CASE("coupling residual for non-panharmonic data") {
  const MeanRules r3 = MeanRules::deterministic(3, 6);
  const Dimension d3(3);
  const double expected = (a_sphere(d3, 1.0) - a_ball(d3, 1.0)) / 3.0;
  const double residual = coupling_residual(make_constant(3, 1.0), Point::Zero(3), 1.0, 1.0, r3);
  CHECK(residual == doctest::Approx(expected).epsilon(1e-13));
  CHECK(residual == doctest::Approx(0.0239).epsilon(2e-3));

  // mu -> 0: the residual tends to (M• - M°) / (|M°| + |M•| + 1).
  const ScalarField g = make_generic(3, [](const Point& x) { return x[0] * x[0] + 0.3 * x[1]; }, "g");
  const Point x = vec({0.1, 0.2, 0.0});
  const CouplingSample c = coupling(g, x, 0.5, 1e-7, r3);
  CHECK(c.residual == doctest::Approx((c.m_ball - c.m_sphere) / (std::abs(c.m_sphere) + std::abs(c.m_ball) + 1.0))
                          .epsilon(1e-10));
}

TEST_CASE("detector verdicts on the unit ball") {
  const Domain ball = Domain::unit_ball(3);
  const ScalarField plane = make_plane_panharmonic(3, 1.5, Point::Unit(3, 0));
  const DetectionReport ok = detect_panharmonic(plane, ball, 1.5);
  CHECK(ok.verdict == Verdict::Panharmonic);
  CHECK(ok.max_residual <= ok.tolerance);
  CHECK(ok.samples.size() == 40);
  for (const MeanSample& s : ok.samples) CHECK(s.r < ball.signed_distance(s.x));

  const DetectionReport wrong_mu = detect_panharmonic(plane, ball, 1.0);
  CHECK(wrong_mu.verdict == Verdict::Rejected);
  CHECK(wrong_mu.max_residual > 10 * wrong_mu.tolerance);

  CHECK(detect_panharmonic(make_difference_harmonic(3, 0, 1), ball, 0.8).verdict == Verdict::Rejected);
  CHECK(detect_panharmonic(make_constant(3, 1.0), ball, 1.0).verdict == Verdict::Rejected);

  // Same seed, same report.
  const DetectionReport again = detect_panharmonic(plane, ball, 1.5);
  CHECK(again.max_residual == ok.max_residual);
}

TEST_CASE("detector: inconclusive band and thin domains") {
  const Domain ball = Domain::unit_ball(2);
  const ScalarField plane = make_plane_panharmonic(2, 1.0, Point::Unit(2, 0));
  DetectionConfig config;
  const DetectionReport base = detect_panharmonic(plane, ball, 1.0 + 1e-4, config);
  // Tolerances straddling the observed maximum give all three verdicts.
  config.tolerance = base.max_residual * 0.5;
  CHECK(detect_panharmonic(plane, ball, 1.0 + 1e-4, config).verdict == Verdict::Inconclusive);
  config.tolerance = base.max_residual * 2.0;
  CHECK(detect_panharmonic(plane, ball, 1.0 + 1e-4, config).verdict == Verdict::Panharmonic);
  config.tolerance = base.max_residual * 0.05;
  CHECK(detect_panharmonic(plane, ball, 1.0 + 1e-4, config).verdict == Verdict::Rejected);

  DetectionConfig floor;
  floor.radius_floor = 10.0;
  CHECK(kind_of([&] { detect_panharmonic(plane, ball, 1.0, floor); }) == ErrorKind::DomainTooThin);
}

TEST_CASE("detector never samples across a pole") {
  const Domain ball = Domain::unit_ball(3);
  const ScalarField e = make_fundamental(vec({0.5, 0, 0}));
  const DetectionReport r = detect_panharmonic(e, ball, 1.0);
  for (const MeanSample& s : r.samples) CHECK((s.x - vec({0.5, 0, 0})).norm() > s.r);
  CHECK(r.verdict == Verdict::Rejected);
}

TEST_CASE("estimate_mu round trips") {
  const QuadratureRule s3 = sphere_rule(3, 6);
  CHECK(estimate_mu(make_radial_panharmonic(3, 2.0), Point::Zero(3), 0.5, s3) == doctest::Approx(2.0).epsilon(1e-6));
  const QuadratureRule s2 = sphere_rule(2, 6);
  const ScalarField p = make_plane_panharmonic(2, 0.7, vec({0.6, 0.8}));
  CHECK(estimate_mu(p, vec({0.13, -0.21}), 0.4, s2) == doctest::Approx(0.7).epsilon(1e-6));
  for (const auto& [x, r] : samples(3, 20, 17)) {
    const ScalarField f = make_cosh_panharmonic(3, 1.3, Point::Unit(3, 2));
    if (std::abs(f(x)) > 0.1) CHECK(estimate_mu(f, x, r, s3) == doctest::Approx(1.3).epsilon(1e-5));
  }
  const ScalarField pos = make_linear(Point::Unit(3, 0), 2.0);
  CHECK(kind_of([&] { estimate_mu(pos, vec({0.1, 0, 0}), 0.5, s3); }) == ErrorKind::NotPositiveType);
  CHECK(kind_of([&] { estimate_mu(make_product_harmonic(3, 0, 1), Point::Zero(3), 0.5, s3); }) ==
        ErrorKind::DegenerateCenter);
}
