#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "panharmonic/error.hpp"
#include "panharmonic/specfun.hpp"

namespace panharmonic {

using Point = Eigen::VectorXd;

/// Open ball B_r(x).
struct BallSpec {
  Point center;
  double radius = 1.0;
};

/// Axis-aligned box [lo, hi].
struct BoxSpec {
  Point lo;
  Point hi;
};

/// Bounded domain D: a ball or an axis-aligned box, with an exact distance oracle.
class Domain {
 public:
  Domain(BallSpec ball);
  Domain(BoxSpec box);

  static Domain unit_ball(int m);
  static Domain unit_box(int m);

  int dim() const { return dim_; }
  bool is_ball() const { return std::holds_alternative<BallSpec>(shape_); }
  const BallSpec& ball() const { return std::get<BallSpec>(shape_); }
  const BoxSpec& box() const { return std::get<BoxSpec>(shape_); }

  /// Distance to the boundary, positive inside and negative outside.
  double signed_distance(const Point& x) const;
  bool contains(const Point& x) const { return signed_distance(x) > 0.0; }
  Point nearest_boundary_point(const Point& x) const;
  double measure() const;
  double boundary_measure() const;
  double diameter() const;
  /// Axis-aligned bounding box.
  std::pair<Point, Point> bounds() const;

  std::string describe() const;

 private:
  std::variant<BallSpec, BoxSpec> shape_;
  int dim_;
};

enum class RuleKind { Sphere, Ball };

/// Nodes and weights on S_1(0) or B_1(0). Nodes are the columns of `nodes`.
struct QuadratureRule {
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;
  RuleKind kind = RuleKind::Sphere;
  int m = 2;
  /// Total polynomial degree integrated exactly; 0 for Monte Carlo rules.
  int declared_order = 0;

  Eigen::Index size() const { return weights.size(); }

  /// Integral over the unit sphere/ball of f(node).
  template <typename F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) sum += weights[i] * f(nodes.col(i));
    return sum;
  }
};

/// Gauss–Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta,
/// by Golub–Welsch on the Jacobi matrix.
template <typename Scalar = double>
std::pair<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>
gauss_jacobi(int n, Scalar alpha, Scalar beta) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "gauss_jacobi needs n >= 1");
  const Scalar ab = alpha + beta;
  Vec diag(n);
  Vec sub(std::max(n - 1, 1));
  diag[0] = (beta - alpha) / (ab + Scalar(2));
  for (int k = 1; k < n; ++k) {
    const Scalar s = Scalar(2 * k) + ab;
    diag[k] = (beta * beta - alpha * alpha) / (s * (s + Scalar(2)));
    sub[k - 1] = std::sqrt(Scalar(4 * k) * (Scalar(k) + alpha) * (Scalar(k) + beta) *
                           (Scalar(k) + ab) / (s * s * (s + Scalar(1)) * (s - Scalar(1))));
  }
  const Scalar mu0 = std::pow(Scalar(2), ab + Scalar(1)) * std::tgamma(alpha + Scalar(1)) *
                     std::tgamma(beta + Scalar(1)) / std::tgamma(ab + Scalar(2));
  if (n == 1) return {Vec::Constant(1, diag[0]), Vec::Constant(1, mu0)};

  Eigen::SelfAdjointEigenSolver<Mat> solver;
  solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::SolverBreakdown, "Golub–Welsch eigen-solve failed");
  Vec weights = mu0 * solver.eigenvectors().row(0).transpose().array().square();
  return {solver.eigenvalues(), weights};
}

/// Gauss–Legendre on [-1, 1].
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  return gauss_jacobi<double>(n, 0.0, 0.0);
}

/// Node counts used by the deterministic rules at a given level.
struct RuleResolution {
  int polar;    // Gauss nodes in cos(theta) (m = 3) and radial nodes (ball rules)
  int azimuth;  // trapezoid nodes around the circle
};
RuleResolution rule_resolution(int m, int level);

/// Trapezoid (m = 2) or Gauss–Legendre x trapezoid (m = 3) rule on S_1(0).
QuadratureRule sphere_rule(int m, int level);
/// Sphere rule times a radial Gauss–Jacobi factor weighted by r^{m-1}.
QuadratureRule ball_rule(int m, int level);
/// n normalized Gaussian samples with equal weights omega_m / n.
QuadratureRule monte_carlo_sphere(int m, std::int64_t n, std::uint64_t seed);

}  // namespace panharmonic
