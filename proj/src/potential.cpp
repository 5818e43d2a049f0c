#include "panharmonic/potential.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "panharmonic/specfun.hpp"

namespace panharmonic {

namespace {

constexpr double kInvFourPi = 0.25 / std::numbers::pi;

// log(p + sqrt(p^2 + q2)), rewritten for p < 0 to avoid cancellation.
double log_p_plus_r(double p, double q2, double r) {
  if (p >= 0.0) return std::log(p + r);
  return std::log(q2 / (r - p));
}

// Mixed antiderivative F with d^3F/(da db dc) = 1/sqrt(a^2 + b^2 + c^2).
double corner_primitive(double a, double b, double c) {
  const double a2 = a * a, b2 = b * b, c2 = c * c;
  const double r = std::sqrt(a2 + b2 + c2);
  if (r == 0.0) return 0.0;
  double s = 0.0;
  if (a != 0.0 && b != 0.0) s += a * b * log_p_plus_r(c, a2 + b2, r);
  if (b != 0.0 && c != 0.0) s += b * c * log_p_plus_r(a, b2 + c2, r);
  if (c != 0.0 && a != 0.0) s += c * a * log_p_plus_r(b, c2 + a2, r);
  if (a != 0.0) s -= 0.5 * a2 * std::atan(b * c / (a * r));
  if (b != 0.0) s -= 0.5 * b2 * std::atan(c * a / (b * r));
  if (c != 0.0) s -= 0.5 * c2 * std::atan(a * b / (c * r));
  return s;
}

// Potential of the uniform ball of measure w and radius rho at distance r
// from its center, for the kernel -1/(4 pi |z|), per unit density.
double equivalent_ball_potential(double w, double rho, double r) {
  if (r >= rho) return -kInvFourPi * w / r;
  return -(3.0 * rho * rho - r * r) / 6.0;
}

double equivalent_radius(double w) { return std::cbrt(3.0 * w / (4.0 * std::numbers::pi)); }

void require_3d(const DomainMesh& mesh) {
  if (mesh.dim() != 3)
    throw Error(ErrorKind::UnsupportedDimension, "the Newtonian operator is implemented for m = 3");
}

double near_radius(const DomainMesh& mesh, const PotentialOptions& options) {
  return options.near_cells * mesh.spacing().maxCoeff();
}

}  // namespace

double box_inverse_distance_integral(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi,
                                     const Eigen::Vector3d& x) {
  const Eigen::Vector3d a = lo - x;
  const Eigen::Vector3d b = hi - x;
  double sum = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const double sign = ((i + j + k) % 2 == 1) ? 1.0 : -1.0;  // + at the upper corner
        sum += sign * corner_primitive(i ? b[0] : a[0], j ? b[1] : a[1], k ? b[2] : a[2]);
      }
  return sum;
}

GridField::GridField(MeshPtr mesh_, Eigen::VectorXd values_)
    : mesh(std::move(mesh_)), values(std::move(values_)) {
  if (!mesh) throw Error(ErrorKind::InvalidArgument, "grid field needs a mesh");
  if (values.size() != mesh->size())
    throw Error(ErrorKind::InvalidArgument, "value count differs from cell count");
}

GridField GridField::sample(MeshPtr mesh, const ScalarField& field) {
  if (field.dim() != mesh->dim()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  Eigen::VectorXd v(mesh->size());
  for (Eigen::Index i = 0; i < mesh->size(); ++i) v[i] = field(mesh->center(i));
  return GridField(std::move(mesh), std::move(v));
}

double GridField::interpolate(const Point& x) const {
  const DomainMesh& g = *mesh;
  const int m = g.dim();
  const Eigen::ArrayXd s = (x - g.origin()).array() / g.spacing().array() - 0.5;
  const Eigen::ArrayXd base = s.floor();
  const Eigen::ArrayXd frac = s - base;
  double sum = 0.0, total = 0.0;
  for (int corner = 0; corner < (1 << m); ++corner) {
    Point probe(m);
    double weight = 1.0;
    for (int i = 0; i < m; ++i) {
      const bool up = (corner >> i) & 1;
      probe[i] = g.origin()[i] + (base[i] + (up ? 1.0 : 0.0) + 0.5) * g.spacing()[i];
      weight *= up ? frac[i] : 1.0 - frac[i];
    }
    if (weight == 0.0) continue;
    const auto cell = g.locate(probe);
    if (!cell || !g.full(*cell)) continue;
    sum += weight * values[*cell];
    total += weight;
  }
  if (total > 0.0) return sum / total;
  if (const auto cell = g.locate(x)) return values[*cell];
  Eigen::Index best = 0;
  (g.centers().colwise() - x).colwise().squaredNorm().minCoeff(&best);
  return values[best];
}

NewtonianPotential::NewtonianPotential(const GridField& density, PotentialOptions options)
    : mesh_(density.mesh), density_(density.values), options_(options) {
  require_3d(*mesh_);
  const DomainMesh& g = *mesh_;
  const Eigen::Vector3i vshape = g.grid_shape().head<3>().array() + 1;
  std::vector<double> coeff(static_cast<std::size_t>(vshape.prod()), 0.0);
  for (Eigen::Index c = 0; c < g.size(); ++c) {
    if (!g.full(c)) {
      cut_.push_back(c);
      continue;
    }
    const Eigen::Vector3i k = g.grid_index().col(c).head<3>();
    for (int bits = 0; bits < 8; ++bits) {
      const Eigen::Vector3i v = k + Eigen::Vector3i(bits & 1, (bits >> 1) & 1, (bits >> 2) & 1);
      const int ones = (bits & 1) + ((bits >> 1) & 1) + ((bits >> 2) & 1);
      const double sign = (ones % 2 == 1) ? 1.0 : -1.0;  // + at the upper corner
      coeff[static_cast<std::size_t>((v[2] * vshape[1] + v[1]) * vshape[0] + v[0])] +=
          sign * density_[c];
    }
  }
  std::vector<std::pair<Eigen::Vector3d, double>> kept;
  for (int z = 0; z < vshape[2]; ++z)
    for (int y = 0; y < vshape[1]; ++y)
      for (int x = 0; x < vshape[0]; ++x) {
        const double w = coeff[static_cast<std::size_t>((z * vshape[1] + y) * vshape[0] + x)];
        if (w == 0.0) continue;
        const Eigen::Vector3d p =
            g.origin().head<3>() + Eigen::Vector3d(x, y, z).cwiseProduct(g.spacing().head<3>());
        kept.emplace_back(p, w);
      }
  vertices_.resize(3, static_cast<Eigen::Index>(kept.size()));
  vertex_weights_.resize(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    vertices_.col(static_cast<Eigen::Index>(i)) = kept[i].first;
    vertex_weights_[static_cast<Eigen::Index>(i)] = kept[i].second;
  }
}

double NewtonianPotential::operator()(const Point& x, PotentialMode mode) const {
  const DomainMesh& g = *mesh_;
  if (x.size() != 3) throw Error(ErrorKind::InvalidArgument, "point dimension mismatch");
  const Eigen::Vector3d p = x.head<3>();
  double sum = 0.0;
  if (mode == PotentialMode::Exact) {
    double s = 0.0;
    for (Eigen::Index v = 0; v < vertices_.cols(); ++v) {
      const Eigen::Vector3d d = vertices_.col(v) - p;
      s += vertex_weights_[v] * corner_primitive(d[0], d[1], d[2]);
    }
    sum = -kInvFourPi * s;
  } else {
    const double near = near_radius(g, options_);
    const Eigen::Vector3d half = 0.5 * g.spacing().head<3>();
    for (Eigen::Index c = 0; c < g.size(); ++c) {
      if (!g.full(c) || density_[c] == 0.0) continue;
      const Eigen::Vector3d center = g.center(c).head<3>();
      const double r = (center - p).norm();
      if (r < near)
        sum -= kInvFourPi * density_[c] * box_inverse_distance_integral(center - half, center + half, p);
      else
        sum -= kInvFourPi * density_[c] * g.measures()[c] / r;
    }
  }
  for (const Eigen::Index c : cut_) {
    const double w = g.measures()[c];
    sum += density_[c] * equivalent_ball_potential(w, equivalent_radius(w), (g.center(c) - x).norm());
  }
  return sum;
}

ScalarField NewtonianPotential::as_field() const {
  auto self = std::make_shared<NewtonianPotential>(*this);
  return make_generic(3, [self](const Point& x) { return (*self)(x, PotentialMode::Exact); },
                      "newtonian-potential");
}

OperatorMatrix OperatorMatrix::assemble(MeshPtr mesh_ptr, PotentialOptions options) {
  require_3d(*mesh_ptr);
  const DomainMesh& g = *mesh_ptr;
  const Eigen::Index n = g.size();
  const double near = near_radius(g, options);
  const Eigen::Vector3d side = g.spacing().head<3>();
  const Eigen::Vector3d half = 0.5 * side;

  // Full-cell near-field integrals depend only on |index offset| per axis.
  const int reach = static_cast<int>(std::ceil(near / side.minCoeff())) + 1;
  const int span = reach + 1;
  std::vector<double> table(static_cast<std::size_t>(span * span * span), 0.0);
  for (int a = 0; a < span; ++a)
    for (int b = 0; b < span; ++b)
      for (int c = 0; c < span; ++c) {
        const Eigen::Vector3d offset = Eigen::Vector3d(a, b, c).cwiseProduct(side);
        table[static_cast<std::size_t>((a * span + b) * span + c)] =
            -kInvFourPi * box_inverse_distance_integral(offset - half, offset + half, Eigen::Vector3d::Zero());
      }

  OperatorMatrix op;
  op.mesh_ = mesh_ptr;
  op.options_ = options;
  op.sqrt_w_ = g.measures().cwiseSqrt();
  op.symmetric_.resize(n, n);
  Eigen::VectorXd rho(n);
  for (Eigen::Index j = 0; j < n; ++j) rho[j] = equivalent_radius(g.measures()[j]);

  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Vector3d cj = g.center(j).head<3>();
    const double wj = g.measures()[j];
    const bool full_j = g.full(j);
    const Eigen::Vector3i kj = g.grid_index().col(j).head<3>();
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Vector3d ci = g.center(i).head<3>();
      const double r = (ci - cj).norm();
      double a;  // A[i][j]
      if (!full_j) {
        a = equivalent_ball_potential(wj, rho[j], r);
      } else if (r >= near) {
        a = -kInvFourPi * wj / r;
      } else if (g.full(i)) {
        const Eigen::Vector3i d = (g.grid_index().col(i).head<3>() - kj).cwiseAbs();
        a = table[static_cast<std::size_t>((d[0] * span + d[1]) * span + d[2])];
      } else {
        a = -kInvFourPi * box_inverse_distance_integral(cj - half, cj + half, ci);
      }
      op.symmetric_(i, j) = a * op.sqrt_w_[i] / op.sqrt_w_[j];
    }
  }
  op.raw_asymmetry_ = (op.symmetric_ - op.symmetric_.transpose()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd sym = 0.5 * (op.symmetric_ + op.symmetric_.transpose());
  op.symmetric_ = sym;
  return op;
}

Eigen::MatrixXd OperatorMatrix::collocation() const {
  return sqrt_w_.cwiseInverse().asDiagonal() * symmetric_ * sqrt_w_.asDiagonal();
}

Eigen::VectorXd OperatorMatrix::apply(const Eigen::VectorXd& density) const {
  if (density.size() != size()) throw Error(ErrorKind::InvalidArgument, "density size mismatch");
  const Eigen::VectorXd scaled = sqrt_w_.cwiseProduct(density);
  return (symmetric_ * scaled).cwiseQuotient(sqrt_w_);
}

GridField apply_T(const OperatorMatrix& matrix, const GridField& density) {
  if (density.mesh != matrix.mesh()) throw Error(ErrorKind::InvalidArgument, "density lives on another mesh");
  return GridField(matrix.mesh(), matrix.apply(density.values));
}

double apply_T(const GridField& density, const Point& x, PotentialMode mode) {
  return NewtonianPotential(density)(x, mode);
}

RieszDecomposition riesz_harmonic_part(const ScalarField& u, double mu, MeshPtr mesh, double margin) {
  require_3d(*mesh);
  if (u.dim() != 3) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  if (!(mu >= 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be >= 0");
  if (margin < 2.0 * mesh->h())
    throw Error(ErrorKind::MarginTooSmall, "interior margin must be at least 2h");

  const GridField density = GridField::sample(mesh, u);
  auto potential = std::make_shared<NewtonianPotential>(density);
  const double mu2 = mu * mu;

  Eigen::VectorXd h(mesh->size());
  for (Eigen::Index i = 0; i < mesh->size(); ++i)
    h[i] = density.values[i] - mu2 * (*potential)(mesh->center(i), PotentialMode::Fast);

  ScalarField field = make_generic(
      3, [u, potential, mu2](const Point& x) { return u(x) - mu2 * (*potential)(x, PotentialMode::Exact); },
      "harmonic-part(" + u.name() + ")");
  return {GridField(mesh, std::move(h)), mesh->interior(margin), margin, std::move(field)};
}

GaussTest gauss_mean_value_test(const ScalarField& h, const Domain& domain, double margin, int count,
                                std::uint64_t seed, const QuadratureRule& rule) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto [lo, hi] = domain.bounds();
  const int m = domain.dim();
  const double inradius = [&] {
    if (domain.is_ball()) return domain.ball().radius;
    return 0.5 * (domain.box().hi - domain.box().lo).minCoeff();
  }();
  const double min_room = 0.1 * std::max(inradius - margin, 0.0);
  if (!(min_room > 0.0)) throw Error(ErrorKind::DomainTooThin, "margin leaves no interior");

  GaussTest out;
  for (int draws = 0; static_cast<int>(out.samples.size()) < count && draws < 100000; ++draws) {
    Point x(m);
    for (int i = 0; i < m; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    const double room = domain.signed_distance(x) - margin;
    if (room < min_room) continue;
    const double r = 0.5 * room;
    const double ms = sphere_mean(h, x, r, rule);
    const double hx = h(x);
    out.samples.push_back({x, r, ms, 0.0, ms - hx, rule.size(), 0});
    out.max_residual = std::max(out.max_residual, std::abs(ms - hx));
  }
  return out;
}

MeanRatio mean_ratio_check(const ScalarField& u, const BallSpec& ball, double mu, const MeanRules& rules) {
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be > 0");
  const int m = u.dim();
  for (const QuadratureRule* rule : {&rules.sphere, &rules.ball})
    for (Eigen::Index i = 0; i < rule->size(); ++i)
      if (u(Point(ball.center + ball.radius * rule->nodes.col(i))) < 0.0)
        throw Error(ErrorKind::NegativeValues, "u takes negative values on the ball");
  MeanRatio out;
  out.lhs = ball_mean(u, ball.center, ball.radius, rules.ball);
  out.rhs = sphere_mean(u, ball.center, ball.radius, rules.sphere);
  const double t = mu * ball.radius;
  out.c = specfun::ball_ratio(Dimension(m), t);
  out.ratio = out.lhs / out.rhs;
  out.bound = m / t;
  out.exceeds_ball_constant = out.ratio > out.c * (1.0 + 1e-9);
  return out;
}

}  // namespace panharmonic
