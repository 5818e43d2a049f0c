#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "panharmonic/inteq.hpp"
#include "panharmonic/mean_values.hpp"
#include "panharmonic/mesh.hpp"
#include "panharmonic/potential.hpp"
#include "panharmonic/wos.hpp"

namespace panharmonic::io {

using json = nlohmann::json;

/// Carried by every JSON document ("schema") and CSV file ("# schema: ...").
inline constexpr const char* kSchema = "panharmonic/1";
inline constexpr int kCsvPrecision = 17;

json to_json(const Point& x);
Point point_from_json(const json& j);

json to_json(const Domain& domain);
Domain domain_from_json(const json& j);

/// {schema, shape, m, h, origin, spacing, grid_shape, cells: [[center...], measure, [index...], full]}.
json to_json(const DomainMesh& mesh);
DomainMesh mesh_from_json(const json& j);

/// {schema, mesh: {...}, values: [...]}.
json to_json(const GridField& field);
GridField grid_field_from_json(const json& j);

json to_json(const DetectionReport& report);
json to_json(const SolveReport& report);
json to_json(const SpectrumReport& report);
json to_json(const RoundtripReport& report);
json to_json(const GaussTest& test);
json to_json(const MeshTolerance& tol);
json to_json(const WosEstimate& estimate);

json to_json(const WosConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
WosConfig wos_config_from_json(const json& j);

/// Writes "# schema: ..." and the header row, then numbers at full precision.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& columns);
  CsvWriter& row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t width_;
};

/// Columns x..., r, m_sphere, m_ball, residual.
void write_detection_csv(std::ostream& out, const DetectionReport& report);
/// Columns x..., value.
void write_grid_field_csv(std::ostream& out, const GridField& field);
/// Columns x..., mean, stderr, steps, truncated; failed points have NaN estimates.
void write_wos_scan_csv(std::ostream& out, const std::vector<WosScanEntry>& scan);
/// Columns t, a_sphere, a_ball, ratio, bound. At t = 0 the ratio is its limit 1
/// and the bound m/t is written as inf.
void write_specfun_csv(std::ostream& out, int m, const std::vector<double>& t);

/// Dense matrix as CSV rows, no header row.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix);
/// "PHMAT001", int64 rows, int64 cols, then column-major float64, all little-endian.
void write_matrix_binary(std::ostream& out, const Eigen::MatrixXd& matrix);
Eigen::MatrixXd read_matrix_binary(std::istream& in);

}  // namespace panharmonic::io
