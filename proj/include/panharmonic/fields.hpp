#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "panharmonic/geometry.hpp"

namespace panharmonic {

enum class FieldClass { Harmonic, Panharmonic, Generic };

/// Analytic class a field claims; mu is meaningful for Panharmonic only.
struct FieldLabel {
  FieldClass kind = FieldClass::Generic;
  double mu = 0.0;

  static FieldLabel harmonic() { return {FieldClass::Harmonic, 0.0}; }
  static FieldLabel panharmonic(double mu) { return {FieldClass::Panharmonic, mu}; }
  static FieldLabel generic() { return {FieldClass::Generic, 0.0}; }

  std::string describe() const;
};

/// Where a field is C^2: all of R^m minus finitely many closed balls
/// (radius 0 removes a single pole).
struct SmoothRegion {
  struct Hole {
    Point center;
    double radius = 0.0;
  };
  std::vector<Hole> holes;

  /// Distance from x to the nearest excluded set; +inf for the whole space.
  double clearance(const Point& x) const;
  bool contains(const Point& x) const { return clearance(x) > 0.0; }
};

/// u: R^m -> R with its claimed class and smoothness region.
class ScalarField {
 public:
  using Fn = std::function<double(const Point&)>;

  ScalarField(int m, Fn fn, FieldLabel label, SmoothRegion region, std::string name);

  int dim() const { return dim_; }
  const FieldLabel& label() const { return label_; }
  const SmoothRegion& smooth_region() const { return region_; }
  const std::string& name() const { return name_; }

  double operator()(const Point& x) const { return fn_(x); }

 private:
  int dim_;
  Fn fn_;
  FieldLabel label_;
  SmoothRegion region_;
  std::string name_;
};

/// e^{mu <d, x>}.
ScalarField make_plane_panharmonic(int m, double mu, const Point& direction);
/// (e^{mu <d, x>} + e^{-mu <d, x>}) / 2.
ScalarField make_cosh_panharmonic(int m, double mu, const Point& direction);
/// a°(mu |x - center|), the regular radial solution normalized to 1 at center.
ScalarField make_radial_panharmonic(int m, double mu, const Point& center);
inline ScalarField make_radial_panharmonic(int m, double mu) {
  return make_radial_panharmonic(m, mu, Point::Zero(m));
}

ScalarField make_constant(int m, double value);
/// offset + <coefficients, x>.
ScalarField make_linear(const Point& coefficients, double offset = 0.0);
/// x_i x_j with i != j (0-based axes).
ScalarField make_product_harmonic(int m, int i, int j);
/// x_i^2 - x_j^2 with i != j (0-based axes).
ScalarField make_difference_harmonic(int m, int i, int j);
/// E_m(x - pole). Rejects a pole inside (or on the boundary of) `keep_out`.
ScalarField make_fundamental(const Point& pole, const Domain& keep_out);
ScalarField make_fundamental(const Point& pole);

/// A field with no class claim, smooth everywhere unless told otherwise.
ScalarField make_generic(int m, ScalarField::Fn fn, std::string name,
                         SmoothRegion region = {});

/// sum_k c_k u_k. The label survives when every term shares it.
ScalarField linear_combination(const std::vector<std::pair<double, ScalarField>>& terms);

/// Fundamental solution of the Laplacian: [(2-m) omega_m |z|^{m-2}]^{-1}
/// for m >= 3, log|z| / (2 pi) for m = 2.
double fundamental(int m, const Point& x, const Point& y);

inline constexpr double kDefaultFdStep = 1e-3;
inline constexpr double kDefaultFdTolerance = 1e-4;

/// Second-order central-difference Laplacian.
double fd_laplacian(const ScalarField& field, const Point& x, double step = kDefaultFdStep);

/// |fd_laplacian - mu^2 u| / (1 + |u|); mu = 0 checks harmonicity.
double pde_residual(const ScalarField& field, const Point& x, double mu,
                    double step = kDefaultFdStep);

}  // namespace panharmonic
