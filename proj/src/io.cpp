#include "panharmonic/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>

#include "panharmonic/specfun.hpp"

namespace panharmonic::io {

static_assert(std::endian::native == std::endian::little, "binary matrix format assumes a little-endian host");

namespace {

void require_schema(const json& j) {
  if (!j.is_object() || j.value("schema", std::string{}) != kSchema)
    throw Error(ErrorKind::Parse, std::string("expected a document with schema ") + kSchema);
}

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::Parse, std::string("missing key '") + key + "'");
  return j.at(key);
}

std::vector<std::string> coordinate_columns(int m) {
  std::vector<std::string> cols;
  for (int i = 1; i <= m; ++i) cols.push_back("x" + std::to_string(i));
  return cols;
}

}  // namespace

json to_json(const Point& x) {
  json a = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back(x[i]);
  return a;
}

Point point_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::Parse, "expected a nonempty array of numbers");
  Point x(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorKind::Parse, "expected a number");
    x[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return x;
}

json to_json(const Domain& domain) {
  if (domain.is_ball())
    return {{"shape", "ball"}, {"center", to_json(domain.ball().center)}, {"radius", domain.ball().radius}};
  return {{"shape", "box"}, {"lo", to_json(domain.box().lo)}, {"hi", to_json(domain.box().hi)}};
}

Domain domain_from_json(const json& j) {
  const std::string shape = field(j, "shape").get<std::string>();
  if (shape == "ball") return Domain(BallSpec{point_from_json(field(j, "center")), field(j, "radius").get<double>()});
  if (shape == "box") return Domain(BoxSpec{point_from_json(field(j, "lo")), point_from_json(field(j, "hi"))});
  throw Error(ErrorKind::Parse, "unknown domain shape '" + shape + "'");
}

json to_json(const DomainMesh& mesh) {
  json cells = json::array();
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    json index = json::array();
    for (int k = 0; k < mesh.dim(); ++k) index.push_back(mesh.grid_index()(k, i));
    cells.push_back({to_json(Point(mesh.center(i))), mesh.measures()[i], index, mesh.full(i)});
  }
  json shape = json::array();
  for (Eigen::Index k = 0; k < mesh.grid_shape().size(); ++k) shape.push_back(mesh.grid_shape()[k]);
  return {{"schema", kSchema},
          {"shape", to_json(mesh.domain())},
          {"m", mesh.dim()},
          {"h", mesh.h()},
          {"origin", to_json(mesh.origin())},
          {"spacing", to_json(mesh.spacing())},
          {"grid_shape", shape},
          {"cells", cells}};
}

DomainMesh mesh_from_json(const json& j) {
  require_schema(j);
  const Domain domain = domain_from_json(field(j, "shape"));
  const int m = field(j, "m").get<int>();
  if (m != domain.dim()) throw Error(ErrorKind::Parse, "mesh dimension does not match its domain");
  const json& shape = field(j, "grid_shape");
  Eigen::VectorXi grid_shape(m);
  if (!shape.is_array() || static_cast<int>(shape.size()) != m) throw Error(ErrorKind::Parse, "bad grid_shape");
  for (int k = 0; k < m; ++k) grid_shape[k] = shape[static_cast<std::size_t>(k)].get<int>();

  const json& cells = field(j, "cells");
  const auto n = static_cast<Eigen::Index>(cells.size());
  Eigen::MatrixXd centers(m, n);
  Eigen::MatrixXi index(m, n);
  Eigen::VectorXd measures(n);
  std::vector<bool> full(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& c = cells[static_cast<std::size_t>(i)];
    if (!c.is_array() || c.size() != 4) throw Error(ErrorKind::Parse, "cell entries are [center, measure, index, full]");
    const Point x = point_from_json(c[0]);
    if (x.size() != m || c[2].size() != static_cast<std::size_t>(m)) throw Error(ErrorKind::Parse, "cell dimension mismatch");
    centers.col(i) = x;
    measures[i] = c[1].get<double>();
    for (int k = 0; k < m; ++k) index(k, i) = c[2][static_cast<std::size_t>(k)].get<int>();
    full[static_cast<std::size_t>(i)] = c[3].get<bool>();
  }
  return DomainMesh::from_parts(domain, field(j, "h").get<double>(), point_from_json(field(j, "origin")),
                                point_from_json(field(j, "spacing")), grid_shape, std::move(index),
                                std::move(centers), std::move(measures), std::move(full));
}

json to_json(const GridField& f) {
  std::vector<double> values(f.values.data(), f.values.data() + f.values.size());
  return {{"schema", kSchema}, {"mesh", to_json(*f.mesh)}, {"values", values}};
}

GridField grid_field_from_json(const json& j) {
  require_schema(j);
  auto mesh = std::make_shared<const DomainMesh>(mesh_from_json(field(j, "mesh")));
  const auto values = field(j, "values").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(values.size()) != mesh->size())
    throw Error(ErrorKind::Parse, "value count does not match the mesh");
  return GridField(mesh, Eigen::Map<const Eigen::VectorXd>(values.data(), mesh->size()));
}

json to_json(const DetectionReport& r) {
  json samples = json::array();
  for (const MeanSample& s : r.samples)
    samples.push_back({{"x", to_json(s.x)},
                       {"r", s.r},
                       {"m_sphere", s.m_sphere},
                       {"m_ball", s.m_ball},
                       {"residual", s.residual}});
  return {{"schema", kSchema},
          {"verdict", to_string(r.verdict)},
          {"mu", r.mu},
          {"tolerance", r.tolerance},
          {"max_residual", r.max_residual},
          {"mean_residual", r.mean_residual},
          {"samples", samples}};
}

json to_json(const SolveReport& r) {
  json points = json::array();
  for (const Point& x : r.residual_points) points.push_back(to_json(x));
  return {{"schema", kSchema},
          {"mu", r.mu},
          {"cells", r.solution.values.size()},
          {"mesh_h", r.solution.mesh->h()},
          {"algebraic_residual", r.algebraic_residual},
          {"pde_residual", r.pde_residual},
          {"condition_estimate", r.condition_estimate},
          {"residual_points", points}};
}

json to_json(const SpectrumReport& r) {
  return {{"schema", kSchema},
          {"characteristic_values", r.values},
          {"eigenvalues", r.eigenvalues},
          {"multiplicities", r.multiplicities},
          {"multiplicity_tolerance", r.multiplicity_tolerance},
          {"all_negative", r.all_negative},
          {"nondecreasing", r.nondecreasing}};
}

json to_json(const RoundtripReport& r) {
  return {{"schema", kSchema},
          {"mu_extract", r.mu_extract},
          {"mu_solve", r.mu_solve},
          {"max_error", r.max_error},
          {"min_harmonic", r.min_harmonic},
          {"min_majorant_gap", r.min_majorant_gap},
          {"interior_nodes", r.interior_nodes}};
}

json to_json(const GaussTest& t) {
  json samples = json::array();
  for (const MeanSample& s : t.samples)
    samples.push_back({{"x", to_json(s.x)}, {"r", s.r}, {"m_sphere", s.m_sphere}, {"residual", s.residual}});
  return {{"schema", kSchema}, {"max_residual", t.max_residual}, {"samples", samples}};
}

json to_json(const MeshTolerance& t) {
  return {{"schema", kSchema},
          {"h_coarse", t.h_coarse},
          {"error_coarse", t.error_coarse},
          {"error_fine", t.error_fine},
          {"order", t.order},
          {"constant", t.constant}};
}

json to_json(const WosEstimate& e) {
  return {{"mean", e.mean},
          {"standard_error", e.standard_error},
          {"n_paths", e.n_paths},
          {"average_steps", e.average_steps},
          {"truncated", e.truncated}};
}

json to_json(const WosConfig& c) {
  return {{"n_paths", c.n_paths},
          {"epsilon_shell", c.epsilon_shell},
          {"max_steps", c.max_steps},
          {"seed", c.seed},
          {"radius_fraction", c.radius_fraction}};
}

WosConfig wos_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Parse, "WoS config must be a JSON object");
  WosConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "schema") continue;
    if (!value.is_number()) throw Error(ErrorKind::Parse, "WoS config key '" + key + "' must be a number");
    if (key == "n_paths") c.n_paths = value.get<std::int64_t>();
    else if (key == "epsilon_shell") c.epsilon_shell = value.get<double>();
    else if (key == "max_steps") c.max_steps = value.get<std::int64_t>();
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else if (key == "radius_fraction") c.radius_fraction = value.get<double>();
    else throw Error(ErrorKind::Parse, "unknown WoS config key '" + key + "'");
  }
  if (c.n_paths < 1) throw Error(ErrorKind::Parse, "n_paths must be >= 1");
  if (!(c.epsilon_shell > 0.0)) throw Error(ErrorKind::Parse, "epsilon_shell must be > 0");
  if (c.max_steps < 1) throw Error(ErrorKind::Parse, "max_steps must be >= 1");
  if (!(c.radius_fraction > 0.0 && c.radius_fraction <= 1.0))
    throw Error(ErrorKind::Parse, "radius_fraction must lie in (0, 1]");
  return c;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& columns)
    : out_(out), width_(columns.size()) {
  out_ << "# schema: " << kSchema << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
  out_.precision(kCsvPrecision);
}

CsvWriter& CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw Error(ErrorKind::InvalidArgument, "CSV row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    const double v = values[i];
    if (std::isnan(v)) out_ << "nan";
    else if (std::isinf(v)) out_ << (v > 0 ? "inf" : "-inf");
    else out_ << v;
  }
  out_ << '\n';
  return *this;
}

void write_detection_csv(std::ostream& out, const DetectionReport& report) {
  const int m = report.samples.empty() ? 0 : static_cast<int>(report.samples.front().x.size());
  auto cols = coordinate_columns(m);
  cols.insert(cols.end(), {"r", "m_sphere", "m_ball", "residual"});
  CsvWriter csv(out, cols);
  for (const MeanSample& s : report.samples) {
    std::vector<double> row(s.x.data(), s.x.data() + s.x.size());
    row.insert(row.end(), {s.r, s.m_sphere, s.m_ball, s.residual});
    csv.row(row);
  }
}

void write_grid_field_csv(std::ostream& out, const GridField& f) {
  auto cols = coordinate_columns(f.mesh->dim());
  cols.push_back("value");
  CsvWriter csv(out, cols);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    const Point x = f.mesh->center(i);
    std::vector<double> row(x.data(), x.data() + x.size());
    row.push_back(f.values[i]);
    csv.row(row);
  }
}

void write_wos_scan_csv(std::ostream& out, const std::vector<WosScanEntry>& scan) {
  const int m = scan.empty() ? 0 : static_cast<int>(scan.front().x.size());
  auto cols = coordinate_columns(m);
  cols.insert(cols.end(), {"mean", "stderr", "steps", "truncated"});
  CsvWriter csv(out, cols);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const WosScanEntry& e : scan) {
    std::vector<double> row(e.x.data(), e.x.data() + e.x.size());
    if (e.estimate)
      row.insert(row.end(), {e.estimate->mean, e.estimate->standard_error, e.estimate->average_steps,
                             static_cast<double>(e.estimate->truncated)});
    else
      row.insert(row.end(), {nan, nan, nan, nan});
    csv.row(row);
  }
}

void write_specfun_csv(std::ostream& out, int m, const std::vector<double>& t) {
  const Dimension dim(m);
  CsvWriter csv(out, {"t", "a_sphere", "a_ball", "ratio", "bound"});
  for (double s : t) {
    const double ratio = s == 0.0 ? 1.0 : specfun::ball_ratio(dim, s);
    const double bound = s == 0.0 ? std::numeric_limits<double>::infinity() : m / s;
    csv.row({s, specfun::a_sphere(dim, s), specfun::a_ball(dim, s), ratio, bound});
  }
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& a) {
  out.precision(kCsvPrecision);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) out << (k ? "," : "") << a(i, k);
    out << '\n';
  }
}

namespace {
constexpr char kMatrixMagic[8] = {'P', 'H', 'M', 'A', 'T', '0', '0', '1'};
}

void write_matrix_binary(std::ostream& out, const Eigen::MatrixXd& a) {
  const std::int64_t dims[2] = {a.rows(), a.cols()};
  out.write(kMatrixMagic, sizeof kMatrixMagic);
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
  out.write(reinterpret_cast<const char*>(a.data()), static_cast<std::streamsize>(sizeof(double) * a.size()));
}

Eigen::MatrixXd read_matrix_binary(std::istream& in) {
  char magic[8];
  std::int64_t dims[2];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMatrixMagic, sizeof magic) != 0)
    throw Error(ErrorKind::Parse, "not a binary matrix file");
  if (!in.read(reinterpret_cast<char*>(dims), sizeof dims) || dims[0] < 0 || dims[1] < 0)
    throw Error(ErrorKind::Parse, "bad matrix dimensions");
  Eigen::MatrixXd a(dims[0], dims[1]);
  if (!in.read(reinterpret_cast<char*>(a.data()), static_cast<std::streamsize>(sizeof(double) * a.size())))
    throw Error(ErrorKind::Parse, "truncated matrix data");
  return a;
}

}  // namespace panharmonic::io
