#include "panharmonic/inteq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace panharmonic {

namespace {

double inradius(const Domain& domain) {
  if (domain.is_ball()) return domain.ball().radius;
  return 0.5 * (domain.box().hi - domain.box().lo).minCoeff();
}

}  // namespace

std::vector<Point> residual_points(const Domain& domain, int count, std::uint64_t seed,
                                   double margin_fraction) {
  const double margin = margin_fraction * inradius(domain);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto [lo, hi] = domain.bounds();
  std::vector<Point> points;
  for (int draws = 0; static_cast<int>(points.size()) < count && draws < 1000 * count + 1000; ++draws) {
    Point x(domain.dim());
    for (int i = 0; i < domain.dim(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    if (domain.signed_distance(x) >= margin) points.push_back(std::move(x));
  }
  return points;
}

Eigen::VectorXd solve_nodal(const Eigen::VectorXd& h, const OperatorMatrix& matrix, double mu,
                            double* condition_estimate) {
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be > 0");
  if (h.size() != matrix.size()) throw Error(ErrorKind::InvalidArgument, "right-hand side size mismatch");
  const Eigen::Index n = matrix.size();
  // W^{1/2} (I - mu^2 A) W^{-1/2} = I - mu^2 S.
  Eigen::MatrixXd system = -mu * mu * matrix.symmetric();
  system.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::SolverBreakdown, "I - mu^2 T is not positive definite on this mesh");
  if (condition_estimate) *condition_estimate = 1.0 / llt.rcond();
  const Eigen::VectorXd& s = matrix.sqrt_measures();
  Eigen::VectorXd y = llt.solve(s.cwiseProduct(h));
  (void)n;
  return y.cwiseQuotient(s);
}

SolveReport solve_ie(const ScalarField& h, const OperatorMatrix& matrix, const SolveConfig& config) {
  const MeshPtr& mesh = matrix.mesh();
  if (h.dim() != mesh->dim()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  const double mu2 = config.mu * config.mu;

  const GridField rhs = GridField::sample(mesh, h);
  double condition = 0.0;
  Eigen::VectorXd u = solve_nodal(rhs.values, matrix, config.mu, &condition);
  if (!(condition <= config.condition_cap))
    throw Error(ErrorKind::SolverBreakdown, "condition estimate exceeds the cap");

  Eigen::VectorXd residual = u - mu2 * matrix.apply(u) - rhs.values;
  double algebraic = residual.lpNorm<Eigen::Infinity>();
  if (algebraic > config.solver_tolerance) {
    // One step of iterative refinement.
    Eigen::VectorXd correction = solve_nodal(-residual, matrix, config.mu);
    u += correction;
    residual = u - mu2 * matrix.apply(u) - rhs.values;
    algebraic = residual.lpNorm<Eigen::Infinity>();
  }

  GridField solution(mesh, u);
  auto potential = std::make_shared<NewtonianPotential>(solution, matrix.options());
  ScalarField interpolant = make_generic(
      h.dim(), [h, potential, mu2](const Point& x) { return h(x) + mu2 * (*potential)(x, PotentialMode::Exact); },
      "nystrom(" + h.name() + ")", h.smooth_region());

  std::vector<Point> points =
      residual_points(mesh->domain(), config.residual_samples, config.seed, config.residual_margin_fraction);
  double pde = 0.0;
  for (const Point& x : points) {
    const double value = interpolant(x);
    pde = std::max(pde, std::abs(fd_laplacian(interpolant, x, config.fd_step) - mu2 * value));
  }

  return SolveReport{config.mu, std::move(solution), std::move(interpolant), algebraic, pde, condition,
                     std::move(points)};
}

SolveReport solve_ie(const ScalarField& h, const Domain& domain, double mesh_h, const SolveConfig& config) {
  auto mesh = std::make_shared<const DomainMesh>(DomainMesh::build(domain, mesh_h));
  return solve_ie(h, OperatorMatrix::assemble(mesh), config);
}

SpectrumReport characteristic_values(const OperatorMatrix& matrix, int k) {
  if (k < 1 || k > matrix.size()) throw Error(ErrorKind::InvalidArgument, "k must lie in [1, cell count]");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix.symmetric(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::SolverBreakdown, "symmetric eigen-solve failed");
  // Ascending sigma: the most negative eigenvalue gives the smallest |lambda|.
  std::vector<double> sigma(solver.eigenvalues().data(), solver.eigenvalues().data() + matrix.size());
  std::stable_sort(sigma.begin(), sigma.end(),
                   [](double a, double b) { return std::abs(a) > std::abs(b); });

  SpectrumReport report;
  report.all_negative = true;
  report.nondecreasing = true;
  for (int n = 0; n < k; ++n) {
    report.eigenvalues.push_back(sigma[static_cast<std::size_t>(n)]);
    report.values.push_back(1.0 / sigma[static_cast<std::size_t>(n)]);
    if (!(report.values.back() < 0.0)) report.all_negative = false;
    if (n > 0 && std::abs(report.values[static_cast<std::size_t>(n)]) <
                     std::abs(report.values[static_cast<std::size_t>(n - 1)]))
      report.nondecreasing = false;
  }
  int run = 1;
  for (int n = 1; n <= k; ++n) {
    const bool same = n < k && std::abs(report.values[static_cast<std::size_t>(n)] -
                                        report.values[static_cast<std::size_t>(n - 1)]) <=
                                   report.multiplicity_tolerance *
                                       std::abs(report.values[static_cast<std::size_t>(n - 1)]);
    if (same) {
      ++run;
    } else {
      report.multiplicities.push_back(run);
      run = 1;
    }
  }
  return report;
}

RoundtripReport roundtrip_check(const ScalarField& u, double mu_extract, double mu_solve,
                                const OperatorMatrix& matrix, double margin) {
  const MeshPtr& mesh = matrix.mesh();
  const RieszDecomposition parts = riesz_harmonic_part(u, mu_extract, mesh, margin);
  const GridField h = GridField::sample(mesh, parts.harmonic_field);
  const Eigen::VectorXd solved = solve_nodal(h.values, matrix, mu_solve);

  RoundtripReport report;
  report.mu_extract = mu_extract;
  report.mu_solve = mu_solve;
  report.interior_nodes = parts.interior.size();
  report.min_harmonic = std::numeric_limits<double>::infinity();
  report.min_majorant_gap = std::numeric_limits<double>::infinity();
  for (const Eigen::Index i : parts.interior) {
    const double exact = u(mesh->center(i));
    report.max_error = std::max(report.max_error, std::abs(solved[i] - exact));
    report.min_harmonic = std::min(report.min_harmonic, h.values[i]);
    report.min_majorant_gap = std::min(report.min_majorant_gap, h.values[i] - exact);
  }
  return report;
}

double MeshTolerance::operator()(double h) const { return constant * std::pow(h, order); }

MeshTolerance calibrate_mesh_tolerance(double h_coarse, PotentialOptions options) {
  if (!(h_coarse > 0.0 && h_coarse <= 1.0)) throw Error(ErrorKind::InvalidArgument, "h_coarse must lie in (0, 1]");
  const Domain ball = Domain::unit_ball(3);
  auto nodal_error = [&](double h) {
    auto mesh = std::make_shared<const DomainMesh>(DomainMesh::build(ball, h));
    const NewtonianPotential potential(GridField(mesh, Eigen::VectorXd::Ones(mesh->size())), options);
    double error = 0.0;
    for (Eigen::Index i = 0; i < mesh->size(); ++i) {
      const Point x = mesh->center(i);
      error = std::max(error, std::abs(potential(x, PotentialMode::Fast) - (x.squaredNorm() - 3.0) / 6.0));
    }
    return error;
  };
  MeshTolerance tol;
  tol.h_coarse = h_coarse;
  tol.error_coarse = nodal_error(h_coarse);
  tol.error_fine = nodal_error(0.5 * h_coarse);
  if (!(tol.error_fine > 0.0 && tol.error_coarse > tol.error_fine))
    throw Error(ErrorKind::SolverBreakdown, "potential error does not decrease under refinement");
  tol.order = std::log2(tol.error_coarse / tol.error_fine);
  tol.constant = tol.error_coarse / std::pow(h_coarse, tol.order);
  return tol;
}

}  // namespace panharmonic
