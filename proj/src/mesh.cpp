#include "panharmonic/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace panharmonic {

namespace detail {

namespace {

// Area of [0,a] x [0,b] inside the disk of radius rho, a, b >= 0.
double quadrant_area(double a, double b, double rho) {
  a = std::min(a, rho);
  b = std::min(b, rho);
  const double rho2 = rho * rho;
  if (a * a + b * b <= rho2) return a * b;
  const auto primitive = [&](double x) {
    return 0.5 * (x * std::sqrt(std::max(0.0, rho2 - x * x)) +
                  rho2 * std::asin(std::min(1.0, x / rho)));
  };
  const double u = std::sqrt(std::max(0.0, rho2 - b * b));
  return b * u + primitive(a) - primitive(u);
}

double signed_quadrant(double x, double y, double rho) {
  const double s = (x < 0 ? -1.0 : 1.0) * (y < 0 ? -1.0 : 1.0);
  return s * quadrant_area(std::abs(x), std::abs(y), rho);
}

}  // namespace

double rectangle_disk_area(double x0, double x1, double y0, double y1, double rho) {
  if (rho <= 0.0) return 0.0;
  return signed_quadrant(x1, y1, rho) - signed_quadrant(x0, y1, rho) -
         signed_quadrant(x1, y0, rho) + signed_quadrant(x0, y0, rho);
}

double box_ball_volume(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, double R) {
  const double za = std::max(lo[2], -R);
  const double zb = std::min(hi[2], R);
  if (za >= zb) return 0.0;

  // Cross-section area is smooth in z except where the circle of radius
  // sqrt(R^2 - z^2) passes a rectangle edge line or corner.
  std::vector<double> breaks{za, zb};
  const double R2 = R * R;
  const auto add_break = [&](double d2) {
    if (d2 >= R2) return;
    const double z = std::sqrt(R2 - d2);
    for (const double c : {z, -z})
      if (c > za && c < zb) breaks.push_back(c);
  };
  for (const double x : {lo[0], hi[0]}) {
    add_break(x * x);
    for (const double y : {lo[1], hi[1]}) add_break(x * x + y * y);
  }
  for (const double y : {lo[1], hi[1]}) add_break(y * y);
  if (za < 0.0 && zb > 0.0) breaks.push_back(0.0);
  std::sort(breaks.begin(), breaks.end());

  static const auto rule = gauss_legendre(24);
  const auto& [t, w] = rule;
  double volume = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    if (b <= a) continue;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double z = mid + half * t[i];
      const double rho = std::sqrt(std::max(0.0, R2 - z * z));
      volume += half * w[i] * rectangle_disk_area(lo[0], hi[0], lo[1], hi[1], rho);
    }
  }
  return volume;
}

}  // namespace detail

namespace {

constexpr int kCentroidSubdivisions = 8;

// Centroid of cell ∩ ball by sub-grid sampling; falls back to the cell point
// nearest the center for slivers the sub-grid misses.
Point cut_cell_node(const Point& lo, const Point& hi, const BallSpec& ball) {
  const int m = static_cast<int>(lo.size());
  const Point step = (hi - lo) / kCentroidSubdivisions;
  Point sum = Point::Zero(m);
  long count = 0;
  Eigen::VectorXi k = Eigen::VectorXi::Zero(m);
  const double r2 = ball.radius * ball.radius;
  while (true) {
    const Point p = lo + (k.cast<double>().array() + 0.5).matrix().cwiseProduct(step);
    if ((p - ball.center).squaredNorm() < r2) {
      sum += p;
      ++count;
    }
    int axis = 0;
    while (axis < m && ++k[axis] == kCentroidSubdivisions) k[axis++] = 0;
    if (axis == m) break;
  }
  if (count > 0) return sum / static_cast<double>(count);
  return ball.center.cwiseMax(lo).cwiseMin(hi);
}

double cut_cell_measure(const Point& lo, const Point& hi, const BallSpec& ball) {
  const Point a = lo - ball.center;
  const Point b = hi - ball.center;
  if (lo.size() == 2) return detail::rectangle_disk_area(a[0], b[0], a[1], b[1], ball.radius);
  if (lo.size() == 3) return detail::box_ball_volume(a, b, ball.radius);
  throw Error(ErrorKind::UnsupportedDimension, "meshes exist for m = 2, 3 only");
}

}  // namespace

DomainMesh DomainMesh::build(const Domain& domain, double h, std::size_t max_cells) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "mesh size h must be > 0");
  const int m = domain.dim();
  if (m != 2 && m != 3) throw Error(ErrorKind::UnsupportedDimension, "meshes exist for m = 2, 3");

  DomainMesh mesh(domain);
  mesh.h_ = h;
  if (domain.is_ball()) {
    const BallSpec& ball = domain.ball();
    const int n = static_cast<int>(std::ceil(ball.radius / h - 1e-12));
    mesh.spacing_ = Eigen::VectorXd::Constant(m, h);
    mesh.origin_ = ball.center - Point::Constant(m, n * h);
    mesh.grid_shape_ = Eigen::VectorXi::Constant(m, 2 * n);
  } else {
    const BoxSpec& box = domain.box();
    mesh.grid_shape_.resize(m);
    mesh.spacing_.resize(m);
    for (int i = 0; i < m; ++i) {
      const double extent = box.hi[i] - box.lo[i];
      mesh.grid_shape_[i] = std::max(1, static_cast<int>(std::ceil(extent / h - 1e-9)));
      mesh.spacing_[i] = extent / mesh.grid_shape_[i];
    }
    mesh.origin_ = box.lo;
  }

  const double cell_volume = mesh.spacing_.prod();
  const double estimate = domain.measure() / cell_volume;
  if (estimate > static_cast<double>(max_cells))
    throw Error(ErrorKind::TooFine, "about " + std::to_string(static_cast<long>(estimate)) +
                                        " cells exceed the cap of " + std::to_string(max_cells));

  std::vector<Eigen::VectorXi> indices;
  std::vector<Point> nodes;
  std::vector<double> measures;
  std::vector<bool> full;

  Eigen::VectorXi k = Eigen::VectorXi::Zero(m);
  while (true) {
    const Point lo = mesh.origin_ + k.cast<double>().cwiseProduct(mesh.spacing_);
    const Point hi = lo + mesh.spacing_;
    if (!domain.is_ball()) {
      indices.push_back(k);
      nodes.push_back(0.5 * (lo + hi));
      measures.push_back(cell_volume);
      full.push_back(true);
    } else {
      const BallSpec& ball = domain.ball();
      const Point nearest = ball.center.cwiseMax(lo).cwiseMin(hi);
      Point farthest(m);
      for (int i = 0; i < m; ++i)
        farthest[i] = (ball.center[i] - lo[i] > hi[i] - ball.center[i]) ? lo[i] : hi[i];
      const double r2 = ball.radius * ball.radius;
      if ((farthest - ball.center).squaredNorm() <= r2) {
        indices.push_back(k);
        nodes.push_back(0.5 * (lo + hi));
        measures.push_back(cell_volume);
        full.push_back(true);
      } else if ((nearest - ball.center).squaredNorm() < r2) {
        const double w = cut_cell_measure(lo, hi, ball);
        if (w > 1e-14 * cell_volume) {
          indices.push_back(k);
          nodes.push_back(cut_cell_node(lo, hi, ball));
          measures.push_back(w);
          full.push_back(false);
        }
      }
    }
    int axis = 0;
    while (axis < m && ++k[axis] == mesh.grid_shape_[axis]) k[axis++] = 0;
    if (axis == m) break;
  }

  const auto n = static_cast<Eigen::Index>(nodes.size());
  mesh.index_.resize(m, n);
  mesh.centers_.resize(m, n);
  mesh.measures_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mesh.index_.col(i) = indices[static_cast<std::size_t>(i)];
    mesh.centers_.col(i) = nodes[static_cast<std::size_t>(i)];
    mesh.measures_[i] = measures[static_cast<std::size_t>(i)];
  }
  mesh.full_ = std::move(full);
  mesh.build_lookup();
  return mesh;
}

DomainMesh DomainMesh::from_parts(const Domain& domain, double h, Point origin,
                                  Eigen::VectorXd spacing, Eigen::VectorXi grid_shape,
                                  Eigen::MatrixXi index,
                                  Eigen::MatrixXd centers, Eigen::VectorXd measures,
                                  std::vector<bool> full) {
  const int m = domain.dim();
  if (origin.size() != m || spacing.size() != m || grid_shape.size() != m || index.rows() != m || centers.rows() != m ||
      index.cols() != centers.cols() || centers.cols() != measures.size() ||
      static_cast<std::size_t>(measures.size()) != full.size())
    throw Error(ErrorKind::InvalidArgument, "inconsistent mesh parts");
  DomainMesh mesh(domain);
  mesh.h_ = h;
  mesh.origin_ = std::move(origin);
  mesh.spacing_ = std::move(spacing);
  mesh.index_ = std::move(index);
  mesh.centers_ = std::move(centers);
  mesh.measures_ = std::move(measures);
  mesh.full_ = std::move(full);
  mesh.grid_shape_ = std::move(grid_shape);
  for (Eigen::Index c = 0; c < mesh.index_.cols(); ++c)
    for (int i = 0; i < m; ++i)
      if (mesh.index_(i, c) < 0 || mesh.index_(i, c) >= mesh.grid_shape_[i])
        throw Error(ErrorKind::InvalidArgument, "cell index outside the grid");
  mesh.build_lookup();
  return mesh;
}

void DomainMesh::build_lookup() {
  long total = 1;
  for (Eigen::Index i = 0; i < grid_shape_.size(); ++i) total *= grid_shape_[i];
  lookup_.assign(static_cast<std::size_t>(total), -1);
  for (Eigen::Index c = 0; c < size(); ++c) {
    long flat = 0;
    for (Eigen::Index i = grid_shape_.size() - 1; i >= 0; --i) flat = flat * grid_shape_[i] + index_(i, c);
    lookup_[static_cast<std::size_t>(flat)] = c;
  }
}

Point DomainMesh::cell_lo(Eigen::Index i) const {
  return origin_ + index_.col(i).cast<double>().cwiseProduct(spacing_);
}

Point DomainMesh::cell_hi(Eigen::Index i) const { return cell_lo(i) + spacing_; }

std::optional<Eigen::Index> DomainMesh::locate(const Point& x) const {
  long flat = 0;
  for (Eigen::Index i = grid_shape_.size() - 1; i >= 0; --i) {
    const long k = static_cast<long>(std::floor((x[i] - origin_[i]) / spacing_[i]));
    if (k < 0 || k >= grid_shape_[i]) return std::nullopt;
    flat = flat * grid_shape_[i] + k;
  }
  const Eigen::Index c = lookup_[static_cast<std::size_t>(flat)];
  if (c < 0) return std::nullopt;
  return c;
}

std::vector<Eigen::Index> DomainMesh::interior(double delta) const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < size(); ++i)
    if (domain_.signed_distance(centers_.col(i)) >= delta) out.push_back(i);
  return out;
}

}  // namespace panharmonic
