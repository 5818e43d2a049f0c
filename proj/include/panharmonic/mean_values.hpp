#pragma once

#include <cstdint>
#include <vector>

#include "panharmonic/fields.hpp"
#include "panharmonic/geometry.hpp"

namespace panharmonic {

/// Sphere and ball rules of matching dimension.
struct MeanRules {
  QuadratureRule sphere;
  QuadratureRule ball;

  static MeanRules deterministic(int m, int level);
};

/// M°(x, r, u): mean of u over S_r(x). Requires B_r(x) admissible for the
/// field's smooth region.
double sphere_mean(const ScalarField& field, const Point& x, double r, const QuadratureRule& rule);

/// M•(x, r, u): mean of u over B_r(x).
double ball_mean(const ScalarField& field, const Point& x, double r, const QuadratureRule& rule);

struct CouplingSample {
  double m_sphere;
  double m_ball;
  double residual;
};

/// (a°(mu r) M• - a•(mu r) M°) / (|M°| + |M•| + 1).
CouplingSample coupling(const ScalarField& field, const Point& x, double r, double mu,
                        const MeanRules& rules);
inline double coupling_residual(const ScalarField& field, const Point& x, double r, double mu,
                                const MeanRules& rules) {
  return coupling(field, x, r, mu, rules).residual;
}

struct MeanSample {
  Point x;
  double r = 0.0;
  double m_sphere = 0.0;
  double m_ball = 0.0;
  double residual = 0.0;
  Eigen::Index sphere_nodes = 0;
  Eigen::Index ball_nodes = 0;
};

enum class Verdict { Panharmonic, Rejected, Inconclusive };
const char* to_string(Verdict v) noexcept;

struct DetectionConfig {
  int centers = 8;
  /// Radii r(x) 2^{-k}, k = 1..radii.
  int radii = 5;
  double tolerance = 1e-6;
  int level = 6;
  std::uint64_t seed = 20240601;
  /// Radii at or below this are too small to resolve.
  double radius_floor = 1e-6;
};

struct DetectionReport {
  Verdict verdict = Verdict::Inconclusive;
  double mu = 0.0;
  double tolerance = 0.0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  std::vector<MeanSample> samples;
};

/// Checks the sphere/ball coupling identity on sampled admissible balls.
/// Accept when every |residual| <= tol, reject when some |residual| > 10 tol.
DetectionReport detect_panharmonic(const ScalarField& field, const Domain& domain, double mu,
                                   const DetectionConfig& config = {});

/// Inverts a°(mu r) = M°(x, r, u) / u(x) for mu by bisection.
double estimate_mu(const ScalarField& field, const Point& x, double r, const QuadratureRule& rule);

}  // namespace panharmonic
