#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "panharmonic/fields.hpp"
#include "panharmonic/mean_values.hpp"
#include "panharmonic/mesh.hpp"

namespace panharmonic {

using MeshPtr = std::shared_ptr<const DomainMesh>;

/// Values at the nodes of a mesh.
struct GridField {
  MeshPtr mesh;
  Eigen::VectorXd values;

  GridField(MeshPtr mesh_, Eigen::VectorXd values_);
  /// Samples `field` at every node.
  static GridField sample(MeshPtr mesh, const ScalarField& field);

  /// Multilinear interpolation between full-cell nodes of the background
  /// grid; falls back to the containing (or nearest) node near the boundary.
  double interpolate(const Point& x) const;
};

/// Integral over the box [lo, hi] of 1/|x - y| dy (m = 3), closed form.
double box_inverse_distance_integral(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi,
                                     const Eigen::Vector3d& x);

enum class PotentialMode {
  /// Closed-form cell integrals for every full cell; smooth in x, so finite
  /// differences of the potential are meaningful.
  Exact,
  /// Closed-form cell integrals within the near radius, point masses beyond.
  Fast,
};

struct PotentialOptions {
  /// Near radius in units of the largest cell side.
  double near_cells = 4.0;
};

/// x -> (T u)(x) = ∫_D E_3(x - y) u(y) dy for a piecewise-constant density.
///
/// Full cells carry their exact box potential; cut boundary cells are
/// replaced by the uniform ball of equal measure centered at the node.
class NewtonianPotential {
 public:
  NewtonianPotential(const GridField& density, PotentialOptions options = {});

  double operator()(const Point& x, PotentialMode mode = PotentialMode::Exact) const;
  /// Exact-mode evaluation wrapped as a (generic) field.
  ScalarField as_field() const;

  const MeshPtr& mesh() const { return mesh_; }

 private:
  MeshPtr mesh_;
  Eigen::VectorXd density_;
  PotentialOptions options_;
  Eigen::Matrix3Xd vertices_;         // grid vertices with nonzero coefficient
  Eigen::VectorXd vertex_weights_;    // signed sums of adjacent full-cell densities
  std::vector<Eigen::Index> cut_;     // cut cell ids
};

/// Dense discretization of T on a mesh (m = 3).
///
/// Stored in the symmetric form S = W^{1/2} A W^{-1/2}, W = diag(measures),
/// where A[i][j] ≈ ∫_{cell j} E_3(x_i - y) dy. S has the spectrum of A.
class OperatorMatrix {
 public:
  static OperatorMatrix assemble(MeshPtr mesh, PotentialOptions options = {});

  const MeshPtr& mesh() const { return mesh_; }
  Eigen::Index size() const { return symmetric_.rows(); }
  const Eigen::MatrixXd& symmetric() const { return symmetric_; }
  const Eigen::VectorXd& sqrt_measures() const { return sqrt_w_; }
  /// A in the collocation form A[i][j] ≈ ∫_{cell j} E_3(x_i - y) dy.
  Eigen::MatrixXd collocation() const;
  /// A u.
  Eigen::VectorXd apply(const Eigen::VectorXd& density) const;
  /// max |S - S^T| before symmetrization.
  double raw_asymmetry() const { return raw_asymmetry_; }
  const PotentialOptions& options() const { return options_; }

 private:
  MeshPtr mesh_;
  Eigen::MatrixXd symmetric_;
  Eigen::VectorXd sqrt_w_;
  double raw_asymmetry_ = 0.0;
  PotentialOptions options_;
};

/// T u at the nodes, via the matrix row products.
GridField apply_T(const OperatorMatrix& matrix, const GridField& density);
/// (T u)(x) anywhere, by direct quadrature over the cells.
double apply_T(const GridField& density, const Point& x, PotentialMode mode = PotentialMode::Exact);

struct RieszDecomposition {
  /// h = u - mu^2 T u at every node.
  GridField harmonic;
  /// Nodes at distance >= margin from the boundary (the compact set K).
  std::vector<Eigen::Index> interior;
  double margin;
  /// x -> u(x) - mu^2 (T u)(x), defined everywhere.
  ScalarField harmonic_field;
};

/// Harmonic part h = u - mu^2 T u of a panharmonic u. The margin must be at
/// least twice the mesh size.
RieszDecomposition riesz_harmonic_part(const ScalarField& u, double mu, MeshPtr mesh,
                                       double margin);

struct GaussTest {
  double max_residual = 0.0;
  std::vector<MeanSample> samples;
};

/// |M°(x, r, h) - h(x)| at `count` points x with B_r(x) inside the margin-
/// shrunk domain.
GaussTest gauss_mean_value_test(const ScalarField& h, const Domain& domain, double margin,
                                int count, std::uint64_t seed, const QuadratureRule& rule);

struct MeanRatio {
  double lhs = 0.0;    // volume mean
  double rhs = 0.0;    // boundary mean
  double c = 0.0;      // a•(mu R) / a°(mu R)
  double ratio = 0.0;  // lhs / rhs
  double bound = 0.0;  // m / (mu R)
  bool exceeds_ball_constant = false;
};

/// Volume and boundary means of a nonnegative u over a ball, with the
/// ball constant c of the mean-ratio inequality.
MeanRatio mean_ratio_check(const ScalarField& u, const BallSpec& ball, double mu,
                           const MeanRules& rules);

}  // namespace panharmonic
