#include <doctest.h>

#include <cmath>

#include "panharmonic/specs.hpp"

using namespace panharmonic;

namespace {

bool parse_error(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == ErrorKind::Parse;
  }
  return false;
}

}  // namespace

TEST_CASE("spec grammar") {
  const Spec s = Spec::parse("plane:mu=1.5,dir=1,2,3");
  CHECK(s.name == "plane");
  CHECK(s.params.at("mu") == std::vector<double>{1.5});
  CHECK(s.params.at("dir") == std::vector<double>{1, 2, 3});
  CHECK(Spec::parse("const").params.empty());
  for (const char* bad : {"", "plane:", "plane:mu=1,mu=2", "plane:1,mu=2", "plane:mu=x", "plane:mu=1e999",
                          "pl ane:mu=1", "plane:m u=1", "plane:mu=1.5.2"})
    CHECK(parse_error([&] { Spec::parse(bad); }));
}

TEST_CASE("field specs") {
  const Point x = Eigen::Vector3d(0.3, -0.4, 0.2);
  const ScalarField plane = parse_field("plane:mu=2,dir=0,3,4", 3);
  CHECK(plane(x) == doctest::Approx(std::exp(2.0 * (-0.4 * 0.6 + 0.2 * 0.8))));
  CHECK(plane.label().kind == FieldClass::Panharmonic);
  CHECK(plane.label().mu == 2.0);
  CHECK(parse_field("cosh:mu=1", 3)(x) == doctest::Approx(std::cosh(0.3)));
  CHECK(parse_field("radial:mu=1,center=0.3,-0.4,0.2", 3)(x) == doctest::Approx(1.0));
  CHECK(parse_field("const", 3)(x) == 1.0);
  CHECK(parse_field("const:value=-2.5", 3)(x) == -2.5);
  CHECK(parse_field("linear:coef=1,2,3,offset=1", 3)(x) == doctest::Approx(1 + 0.3 - 0.8 + 0.6));
  CHECK(parse_field("product", 3)(x) == doctest::Approx(-0.12));
  CHECK(parse_field("product:i=3,j=1", 3)(x) == doctest::Approx(0.06));
  CHECK(parse_field("difference:i=2,j=3", 3)(x) == doctest::Approx(0.16 - 0.04));
  CHECK(parse_field("fundamental:pole=0,0,0", 3)(x) == doctest::Approx(-1.0 / (4 * M_PI * x.norm())));

  const ScalarField scaled = parse_field("plane:mu=1,scale=3", 3);
  CHECK(scaled(x) == doctest::Approx(3 * std::exp(0.3)));
  CHECK(scaled.label().kind == FieldClass::Panharmonic);
  const ScalarField shifted = parse_field("plane:mu=1,shift=1", 3);
  CHECK(shifted(x) == doctest::Approx(std::exp(0.3) + 1));
  CHECK(shifted.label().kind != FieldClass::Panharmonic);
  CHECK(parse_field("linear:coef=1,0,0,shift=2", 3).label().kind == parse_field("linear:coef=1,0,0", 3).label().kind);

  for (const char* bad : {"plane", "plane:mu=0", "plane:mu=1,dir=0,0,0", "plane:mu=1,dir=1,2", "wave:mu=1",
                          "const:mu=1", "product:i=1,j=1", "product:i=4", "product:i=1.5", "linear:coef=1,2",
                          "plane:mu=1,mu2=3"})
    CHECK(parse_error([&] { parse_field(bad, 3); }));
}

TEST_CASE("domain, grid and point specs") {
  const Domain ball = parse_domain("ball", 3);
  CHECK(ball.is_ball());
  CHECK(ball.signed_distance(Point::Zero(3)) == 1.0);
  const Domain shifted = parse_domain("ball:r=2,c=1,0", 2);
  CHECK(shifted.signed_distance(Eigen::Vector2d(1, 0)) == 2.0);
  const Domain box = parse_domain("box", 2);
  CHECK(box.signed_distance(Eigen::Vector2d(0.5, 0.5)) == 0.5);
  CHECK(parse_domain("box:lo=-1,-1,hi=1,3", 2).signed_distance(Eigen::Vector2d(0, 1)) == 1.0);
  for (const char* bad : {"ball:r=-1", "box:lo=0,0,hi=1,0", "ball:scale=2", "disk", "ball:c=1,2,3"})
    CHECK(parse_error([&] { parse_domain(bad, 2); }));

  CHECK(parse_grid("0:1:5") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(parse_grid("2:2:1") == std::vector<double>{2});
  CHECK(parse_grid("0.1,1,10") == std::vector<double>{0.1, 1, 10});
  for (const char* bad : {"1:0:3", "0:1:2.5", "0:1:0", "0:1", "a,b"}) CHECK(parse_error([&] { parse_grid(bad); }));

  const auto pts = parse_points("0,0.5;1,-1", 2);
  REQUIRE(pts.size() == 2);
  CHECK(pts[1] == Eigen::Vector2d(1, -1));
  CHECK(parse_points("", 2).empty());
  CHECK(parse_error([] { parse_points("0,0,0", 2); }));
}
