#pragma once

#include <cstdint>
#include <vector>

#include "panharmonic/potential.hpp"

namespace panharmonic {

struct SolveConfig {
  /// lambda = mu^2 > 0 is never a characteristic value of T.
  double mu = 1.0;
  double solver_tolerance = 1e-10;
  /// Interior points where the PDE residual of the interpolant is sampled.
  int residual_samples = 100;
  std::uint64_t seed = 7;
  /// Residual points lie at distance >= this fraction of the inradius from the boundary.
  double residual_margin_fraction = 0.5;
  double fd_step = kDefaultFdStep;
  /// Solver-breakdown threshold for the condition estimate.
  double condition_cap = 1e12;
};

struct SolveReport {
  double mu = 0.0;
  GridField solution;
  /// x -> h(x) + mu^2 (T u_h)(x), the Nystrom extension of the nodal solution.
  ScalarField interpolant;
  /// ||u - mu^2 A u - h||_inf at the nodes.
  double algebraic_residual = 0.0;
  /// max |fd_laplacian(interpolant) - mu^2 interpolant| at residual_points.
  double pde_residual = 0.0;
  /// 1-norm condition estimate of I - mu^2 A (symmetric form).
  double condition_estimate = 0.0;
  std::vector<Point> residual_points;
};

/// Solves u - mu^2 T u = h on the mesh of `matrix` (dense Cholesky on the
/// symmetric form, which is positive definite for mu^2 > 0).
SolveReport solve_ie(const ScalarField& h, const OperatorMatrix& matrix, const SolveConfig& config);
SolveReport solve_ie(const ScalarField& h, const Domain& domain, double mesh_h,
                     const SolveConfig& config);

/// Same system with nodal right-hand side only; no interpolant residual.
Eigen::VectorXd solve_nodal(const Eigen::VectorXd& h, const OperatorMatrix& matrix, double mu,
                            double* condition_estimate = nullptr);

/// Interior points (fixed by seed) used for PDE residual sampling.
std::vector<Point> residual_points(const Domain& domain, int count, std::uint64_t seed,
                                   double margin_fraction);

struct SpectrumReport {
  /// Characteristic values lambda_n = 1/sigma_n, ordered by |lambda_n|.
  std::vector<double> values;
  /// Eigenvalues sigma_n of the discrete operator, same order.
  std::vector<double> eigenvalues;
  /// Sizes of runs of numerically equal lambda_n (relative gap < multiplicity_tolerance).
  std::vector<int> multiplicities;
  double multiplicity_tolerance = 1e-6;
  bool all_negative = false;
  /// |lambda_n| nondecreasing in n.
  bool nondecreasing = false;
};

SpectrumReport characteristic_values(const OperatorMatrix& matrix, int k);

struct RoundtripReport {
  double mu_extract = 0.0;
  double mu_solve = 0.0;
  /// max |u_solved - u| over the interior sub-mesh.
  double max_error = 0.0;
  /// Minimum of the intermediate harmonic part over the interior sub-mesh.
  double min_harmonic = 0.0;
  /// Minimum of h - u over the interior sub-mesh (h majorizes u when >= 0).
  double min_majorant_gap = 0.0;
  std::size_t interior_nodes = 0;
};

/// Extracts h = u - mu_extract^2 T u, then solves u' - mu_solve^2 T u' = h
/// and compares u' with u on the interior sub-mesh.
RoundtripReport roundtrip_check(const ScalarField& u, double mu_extract, double mu_solve,
                                const OperatorMatrix& matrix, double margin);
inline RoundtripReport roundtrip_check(const ScalarField& u, double mu, const OperatorMatrix& matrix,
                                       double margin) {
  return roundtrip_check(u, mu, mu, matrix, margin);
}

/// Mesh tolerance tol(h) = constant h^order for a unit density, fitted from
/// the nodal error of T 1 against (|x|^2 - 3)/6 on the unit ball at two levels.
struct MeshTolerance {
  double h_coarse = 0.0;
  double error_coarse = 0.0;
  double error_fine = 0.0;
  double order = 0.0;
  double constant = 0.0;
  double operator()(double h) const;
  /// Bound for mu^2 (T_h - T) u with |u| <= sup_density.
  double scaled(double h, double mu, double sup_density) const { return mu * mu * sup_density * (*this)(h); }
};

MeshTolerance calibrate_mesh_tolerance(double h_coarse, PotentialOptions options = {});

}  // namespace panharmonic
