#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "panharmonic/geometry.hpp"

namespace panharmonic {

/// Uniform Cartesian volume mesh of a ball or box.
///
/// Cells are the boxes of a background grid clipped to the domain. Cells
/// that lie wholly inside are "full"; cells cut by a ball boundary keep the
/// exact measure of the intersection and move their node to its centroid,
/// so every node lies inside D.
class DomainMesh {
 public:
  static constexpr std::size_t kDefaultMaxCells = 200000;

  /// h is the target cell side. Box meshes shrink it per axis so the cells
  /// partition the box exactly.
  static DomainMesh build(const Domain& domain, double h,
                          std::size_t max_cells = kDefaultMaxCells);

  /// Reassemble a mesh from serialized parts (see io.hpp).
  static DomainMesh from_parts(const Domain& domain, double h, Point origin,
                               Eigen::VectorXd spacing, Eigen::VectorXi grid_shape,
                               Eigen::MatrixXi index,
                               Eigen::MatrixXd centers, Eigen::VectorXd measures,
                               std::vector<bool> full);

  const Domain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  double h() const { return h_; }
  const Eigen::VectorXd& spacing() const { return spacing_; }
  const Point& origin() const { return origin_; }
  const Eigen::VectorXi& grid_shape() const { return grid_shape_; }

  Eigen::Index size() const { return measures_.size(); }
  const Eigen::MatrixXd& centers() const { return centers_; }
  auto center(Eigen::Index i) const { return centers_.col(i); }
  const Eigen::VectorXd& measures() const { return measures_; }
  const Eigen::MatrixXi& grid_index() const { return index_; }
  bool full(Eigen::Index i) const { return full_[static_cast<std::size_t>(i)]; }
  const std::vector<bool>& full_flags() const { return full_; }

  Point cell_lo(Eigen::Index i) const;
  Point cell_hi(Eigen::Index i) const;

  double total_measure() const { return measures_.sum(); }
  double distance(const Point& x) const { return domain_.signed_distance(x); }

  /// Cell whose background-grid box contains x, if that cell is in the mesh.
  std::optional<Eigen::Index> locate(const Point& x) const;

  /// Indices of cells whose node lies at distance >= delta from the boundary.
  std::vector<Eigen::Index> interior(double delta) const;

 private:
  DomainMesh(Domain domain) : domain_(std::move(domain)) {}
  void build_lookup();

  Domain domain_;
  double h_ = 0.0;
  Point origin_;
  Eigen::VectorXd spacing_;
  Eigen::VectorXi grid_shape_;
  Eigen::MatrixXi index_;
  Eigen::MatrixXd centers_;
  Eigen::VectorXd measures_;
  std::vector<bool> full_;
  std::vector<Eigen::Index> lookup_;  // dense grid -> cell id, -1 when absent
};

namespace detail {
/// Area of [x0,x1] x [y0,y1] intersected with the disk of radius rho at 0.
double rectangle_disk_area(double x0, double x1, double y0, double y1, double rho);
/// Volume of [lo, hi] intersected with the ball of radius R at 0 (m = 3).
double box_ball_volume(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, double R);
}  // namespace detail

}  // namespace panharmonic
