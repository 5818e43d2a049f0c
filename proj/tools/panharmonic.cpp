// panharmonic: batch front end. Every run writes its outputs and a
// manifest.json into --out (default $PANHARMONIC_OUT, else ./panharmonic_out).
//
// Exit codes: 0 ok (detect: panharmonic), 1 runtime failure, 2 detect
// rejected, 3 detect inconclusive, 4 replay digest mismatch, 64 usage error.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <openssl/evp.h>

#include <CLI11.hpp>

#include "panharmonic/inteq.hpp"
#include "panharmonic/io.hpp"
#include "panharmonic/mean_values.hpp"
#include "panharmonic/specs.hpp"
#include "panharmonic/wos.hpp"

#ifndef PANHARMONIC_VERSION
#define PANHARMONIC_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace panharmonic;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitRejected = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitMismatch = 4;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string default_out() {
  const char* env = std::getenv("PANHARMONIC_OUT");
  return env && *env ? env : "panharmonic_out";
}

/// Output directory plus the list of files a command produced.
class Run {
 public:
  explicit Run(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  const fs::path& dir() const { return dir_; }

  std::ofstream open(const std::string& name, bool binary = false) {
    if (fs::path(name).has_parent_path()) throw std::logic_error("output names are plain file names");
    files_.push_back(name);
    std::ofstream out(dir_ / name, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    return out;
  }

  void write_json(const std::string& name, const json& doc) { open(name) << doc.dump(2) << '\n'; }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

struct Options {
  std::string out = default_out();
  std::string format = "csv";
  int dim = 3;
  double mu = 1.0;
  bool mu_set = false;
  double mesh_h = 0.2;
  int level = 6;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::int64_t paths = 100000;
  bool refine = false;
  std::string export_matrix;

  std::string field;
  std::string domain = "ball";
  std::string grid = "0:10:101";
  std::string points;
  std::string config_file;
  double tolerance = 1e-6;
  int samples = 10;
  double margin = 0.0;
  double epsilon = 1e-4;
  std::int64_t max_steps = 10000;
  std::string manifest;
};

json seeds_json(const Options& o, std::uint64_t effective) {
  return {{"seed", effective}, {"explicit", o.seed_set}};
}

// ---- commands ----------------------------------------------------------

int cmd_specfun(const Options& o, Run& run, json& seeds) {
  (void)seeds;
  std::vector<double> t;
  try {
    t = parse_grid(o.grid);
  } catch (const Error& e) {
    throw UsageError(std::string("bad --t range: ") + e.what());
  }
  for (double s : t)
    if (s < 0.0) throw UsageError("bad --t range: t must be >= 0");
  const Dimension dim(o.dim);
  if (o.format == "csv") {
    auto out = run.open("specfun.csv");
    io::write_specfun_csv(out, o.dim, t);
  } else {
    json rows = json::array();
    for (double s : t)
      rows.push_back({{"t", s},
                      {"a_sphere", specfun::a_sphere(dim, s)},
                      {"a_ball", specfun::a_ball(dim, s)},
                      {"ratio", s == 0.0 ? 1.0 : specfun::ball_ratio(dim, s)},
                      {"bound", s == 0.0 ? json(nullptr) : json(o.dim / s)}});
    run.write_json("specfun.json", {{"schema", io::kSchema}, {"m", o.dim}, {"rows", rows}});
  }
  std::cout << "specfun: " << t.size() << " rows, m = " << o.dim << "\n";
  return kExitOk;
}

int cmd_detect(const Options& o, Run& run, json& seeds) {
  if (!o.mu_set) throw UsageError("detect needs --mu");
  const ScalarField field = parse_field(o.field, o.dim);
  const Domain domain = parse_domain(o.domain, o.dim);
  DetectionConfig config;
  config.level = o.level;
  config.tolerance = o.tolerance;
  if (o.seed_set) config.seed = o.seed;
  seeds = seeds_json(o, config.seed);
  const DetectionReport report = detect_panharmonic(field, domain, o.mu, config);
  json doc = io::to_json(report);
  doc["field"] = o.field;
  doc["domain"] = io::to_json(domain);
  doc["level"] = config.level;
  doc["seed"] = config.seed;
  run.write_json("detect.json", doc);
  if (o.format == "csv") {
    auto out = run.open("samples.csv");
    io::write_detection_csv(out, report);
  }
  std::cout << "detect: " << to_string(report.verdict) << " (max residual " << report.max_residual
            << ", tolerance " << report.tolerance << ")\n";
  switch (report.verdict) {
    case Verdict::Panharmonic: return kExitOk;
    case Verdict::Rejected: return kExitRejected;
    default: return kExitInconclusive;
  }
}

void write_solution(const Options& o, Run& run, const std::string& stem, const SolveReport& report) {
  run.write_json(stem + ".json", io::to_json(report));
  if (o.format == "csv") {
    auto out = run.open(stem + "_solution.csv");
    io::write_grid_field_csv(out, report.solution);
  } else {
    run.write_json(stem + "_solution.json", io::to_json(report.solution));
  }
}

int cmd_solve(const Options& o, Run& run, json& seeds) {
  if (o.dim != 3) throw UsageError("solve is implemented for --dim 3");
  const ScalarField h = parse_field(o.field, o.dim);
  const Domain domain = parse_domain(o.domain, o.dim);
  SolveConfig config;
  config.mu = o.mu;
  if (o.seed_set) config.seed = o.seed;
  seeds = seeds_json(o, config.seed);

  auto solve_level = [&](double mesh_h, const std::string& stem) {
    auto mesh = std::make_shared<const DomainMesh>(DomainMesh::build(domain, mesh_h));
    const OperatorMatrix matrix = OperatorMatrix::assemble(mesh);
    const SolveReport report = solve_ie(h, matrix, config);
    write_solution(o, run, stem, report);
    if (!o.export_matrix.empty()) {
      if (o.export_matrix == "csv") {
        auto out = run.open(stem + "_matrix.csv");
        io::write_matrix_csv(out, matrix.collocation());
      } else {
        auto out = run.open(stem + "_matrix.bin", true);
        io::write_matrix_binary(out, matrix.collocation());
      }
    }
    std::cout << "solve h=" << mesh_h << ": " << mesh->size() << " cells, algebraic residual "
              << report.algebraic_residual << ", PDE residual " << report.pde_residual << "\n";
    return report.pde_residual;
  };

  const double coarse = solve_level(o.mesh_h, "solve");
  if (o.refine) {
    const double fine = solve_level(0.5 * o.mesh_h, "solve_refined");
    const double ratio = coarse / fine;
    run.write_json("refinement.json", {{"schema", io::kSchema},
                                       {"mesh_h", {o.mesh_h, 0.5 * o.mesh_h}},
                                       {"pde_residual", {coarse, fine}},
                                       {"ratio", ratio},
                                       {"observed_order", std::log2(ratio)}});
    std::cout << "residual ratio " << ratio << " (observed order " << std::log2(ratio) << ")\n";
  }
  return kExitOk;
}

int cmd_decompose(const Options& o, Run& run, json& seeds) {
  if (o.dim != 3) throw UsageError("decompose is implemented for --dim 3");
  const ScalarField u = parse_field(o.field, o.dim);
  const Domain domain = parse_domain(o.domain, o.dim);
  const double margin = o.margin > 0.0 ? o.margin : 3.0 * o.mesh_h;
  const std::uint64_t seed = o.seed_set ? o.seed : 11;
  seeds = seeds_json(o, seed);

  auto mesh = std::make_shared<const DomainMesh>(DomainMesh::build(domain, o.mesh_h));
  const RieszDecomposition parts = riesz_harmonic_part(u, o.mu, mesh, margin);
  const GaussTest gauss = gauss_mean_value_test(parts.harmonic_field, domain, margin, o.samples, seed,
                                                sphere_rule(3, o.level));
  const MeshTolerance tol = calibrate_mesh_tolerance(2.0 * o.mesh_h);
  double sup = 0.0, min_gap = std::numeric_limits<double>::infinity();
  const GridField nodal_u = GridField::sample(mesh, u);
  for (Eigen::Index i = 0; i < mesh->size(); ++i) sup = std::max(sup, std::abs(nodal_u.values[i]));
  for (Eigen::Index i : parts.interior) min_gap = std::min(min_gap, parts.harmonic.values[i] - nodal_u.values[i]);
  const double tolerance = tol.scaled(o.mesh_h, o.mu, sup);

  json doc = {{"schema", io::kSchema},
              {"field", o.field},
              {"mu", o.mu},
              {"mesh_h", o.mesh_h},
              {"margin", margin},
              {"interior_nodes", parts.interior.size()},
              {"gauss_test", io::to_json(gauss)},
              {"calibration", io::to_json(tol)},
              {"tolerance", tolerance},
              {"gauss_pass", gauss.max_residual <= tolerance},
              {"min_majorant_gap", min_gap}};
  run.write_json("decompose.json", doc);
  if (o.format == "csv") {
    auto out = run.open("harmonic.csv");
    io::write_grid_field_csv(out, parts.harmonic);
  } else {
    run.write_json("harmonic.json", io::to_json(parts.harmonic));
  }
  std::cout << "decompose: Gauss residual " << gauss.max_residual << " (tolerance " << tolerance
            << "), min h - u on interior " << min_gap << "\n";
  return kExitOk;
}

int cmd_wos(const Options& o, Run& run, json& seeds) {
  const Domain domain = parse_domain(o.domain, o.dim);
  const ScalarField data = parse_field(o.field, o.dim);
  WosConfig config;
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) throw UsageError("cannot read --config " + o.config_file);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError(std::string("bad --config JSON: ") + e.what());
    }
    config = io::wos_config_from_json(j);
  } else {
    config.n_paths = o.paths;
    config.epsilon_shell = o.epsilon;
    config.max_steps = o.max_steps;
  }
  if (o.seed_set) config.seed = o.seed;
  if (!(o.mu >= 0.0)) throw UsageError("--mu must be >= 0 for wos");
  seeds = seeds_json(o, config.seed);
  const std::vector<Point> points = parse_points(o.points, o.dim);
  const auto scan = wos_field_scan(domain, data, o.mu, points, config);

  json entries = json::array();
  for (const auto& e : scan)
    entries.push_back({{"x", io::to_json(e.x)},
                       {"estimate", e.estimate ? io::to_json(*e.estimate) : json(nullptr)},
                       {"error", e.error}});
  run.write_json("wos.json", {{"schema", io::kSchema},
                              {"domain", io::to_json(domain)},
                              {"data", o.field},
                              {"mu", o.mu},
                              {"config", io::to_json(config)},
                              {"points", entries}});
  if (o.format == "csv") {
    auto out = run.open("scan.csv");
    io::write_wos_scan_csv(out, scan);
  }
  for (const auto& e : scan) {
    if (e.estimate)
      std::cout << "wos " << e.x.transpose() << ": " << e.estimate->mean << " +- " << e.estimate->standard_error
                << "\n";
    else
      std::cout << "wos " << e.x.transpose() << ": failed (" << e.error << ")\n";
  }
  return kExitOk;
}

// ---- dispatch ----------------------------------------------------------

struct Outcome {
  int code = kExitOk;
  std::string command;
  fs::path out;
};

std::vector<std::string> strip_out(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    kept.push_back(args[i]);
  }
  return kept;
}

int replay(const Options& o);

Outcome dispatch(const std::vector<std::string>& args, bool write_manifest = true) {
  CLI::App app{"Panharmonic toolkit: mean values, potentials, integral equation, walk on spheres"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--out", o.out, "Output directory (default $PANHARMONIC_OUT or ./panharmonic_out)");
  app.add_option("--format", o.format, "Tabular output format")->check(CLI::IsMember({"json", "csv"}));

  auto common = [&](CLI::App* sub) {
    sub->add_option("--dim", o.dim, "Dimension m")->check(CLI::Range(2, 64));
    sub->add_option("--seed", o.seed, "RNG seed")->each([&](const std::string&) { o.seed_set = true; });
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--format", o.format, "Tabular output format")->check(CLI::IsMember({"json", "csv"}));
  };
  auto with_mu = [&](CLI::App* sub) {
    sub->add_option("--mu", o.mu, "Panharmonic parameter mu")->each([&](const std::string&) { o.mu_set = true; });
  };

  auto* specfun_cmd = app.add_subcommand("specfun", "Table of a°, a•, ratio and bound m/t over a t-grid");
  common(specfun_cmd);
  specfun_cmd->add_option("--t", o.grid, "a:b:n or comma list of t >= 0");

  auto* detect_cmd = app.add_subcommand("detect", "Panharmonicity detector (exit 0 accept, 2 reject, 3 inconclusive)");
  common(detect_cmd);
  with_mu(detect_cmd);
  detect_cmd->add_option("--field", o.field, "Field spec, e.g. plane:mu=1.5,dir=1,0,0")->required();
  detect_cmd->add_option("--domain", o.domain, "Domain spec, e.g. ball:r=1,c=0,0,0");
  detect_cmd->add_option("--level", o.level, "Quadrature level")->check(CLI::Range(1, 64));
  detect_cmd->add_option("--tol", o.tolerance, "Acceptance tolerance")->check(CLI::PositiveNumber);

  auto* solve_cmd = app.add_subcommand("solve", "Solve u - mu^2 T u = h on a mesh");
  common(solve_cmd);
  with_mu(solve_cmd);
  solve_cmd->add_option("--rhs", o.field, "Harmonic right-hand side spec h")->required();
  solve_cmd->add_option("--domain", o.domain, "Domain spec");
  solve_cmd->add_option("--mesh-h", o.mesh_h, "Cell side")->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--refine", o.refine, "Also solve at mesh-h/2 and report the residual ratio");
  solve_cmd->add_option("--export-matrix", o.export_matrix, "Write the collocation matrix")
      ->check(CLI::IsMember({"csv", "bin"}));

  auto* decompose_cmd = app.add_subcommand("decompose", "Harmonic part h = u - mu^2 T u and its Gauss test");
  common(decompose_cmd);
  with_mu(decompose_cmd);
  decompose_cmd->add_option("--u", o.field, "Panharmonic field spec")->required();
  decompose_cmd->add_option("--domain", o.domain, "Domain spec");
  decompose_cmd->add_option("--mesh-h", o.mesh_h, "Cell side")->check(CLI::PositiveNumber);
  decompose_cmd->add_option("--level", o.level, "Sphere rule level")->check(CLI::Range(1, 64));
  decompose_cmd->add_option("--margin", o.margin, "Interior margin (default 3 mesh-h)");
  decompose_cmd->add_option("--samples", o.samples, "Gauss test samples")->check(CLI::Range(1, 100000));

  auto* wos_cmd = app.add_subcommand("wos", "Walk-on-spheres estimates at points");
  common(wos_cmd);
  with_mu(wos_cmd);
  wos_cmd->add_option("--data", o.field, "Boundary data spec")->required();
  wos_cmd->add_option("--domain", o.domain, "Domain spec");
  wos_cmd->add_option("--points", o.points, "x1,...,xm;x1,...,xm")->required();
  wos_cmd->add_option("--paths", o.paths, "Paths per point")->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
  wos_cmd->add_option("--eps", o.epsilon, "Absorption shell width")->check(CLI::PositiveNumber);
  wos_cmd->add_option("--max-steps", o.max_steps, "Step cap per path");
  wos_cmd->add_option("--config", o.config_file, "WoS config JSON (overrides --paths/--eps/--max-steps)");

  auto* replay_cmd = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  replay_cmd->add_option("manifest", o.manifest, "manifest.json of an earlier run")->required();
  replay_cmd->add_option("--out", o.out, "Output directory for the re-run");

  std::vector<const char*> argv{"panharmonic"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return {kExitOk, "help", {}};
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return {kExitUsage, "", {}};
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "replay") return {replay(o), name, o.out};

  const auto start = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  Outcome outcome{kExitOk, name, o.out};
  try {
    Run run(o.out);
    json seeds = nullptr;
    if (name == "specfun") outcome.code = cmd_specfun(o, run, seeds);
    else if (name == "detect") outcome.code = cmd_detect(o, run, seeds);
    else if (name == "solve") outcome.code = cmd_solve(o, run, seeds);
    else if (name == "decompose") outcome.code = cmd_decompose(o, run, seeds);
    else outcome.code = cmd_wos(o, run, seeds);

    if (write_manifest) {
      json digests = json::object();
      for (const auto& f : run.files()) digests[f] = sha256_file(run.dir() / f);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      json manifest = {{"schema", io::kSchema},
                       {"command", name},
                       {"argv", args},
                       {"config", {{"dim", o.dim},
                                   {"mu", o.mu},
                                   {"mesh_h", o.mesh_h},
                                   {"level", o.level},
                                   {"paths", o.paths},
                                   {"format", o.format},
                                   {"refine", o.refine},
                                   {"field", o.field},
                                   {"domain", o.domain}}},
                       {"version", PANHARMONIC_VERSION},
                       {"seeds", seeds},
                       {"started_utc", started},
                       {"wall_clock_seconds", wall},
                       {"exit_code", outcome.code},
                       {"outputs", digests}};
      std::ofstream(run.dir() / "manifest.json") << manifest.dump(2) << '\n';
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << sub->help();
    outcome.code = kExitUsage;
  } catch (const Error& e) {
    const bool usage = e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::UnsupportedDimension;
    std::cerr << (usage ? "usage error: " : "error: ") << e.what() << "\n";
    if (usage) std::cerr << sub->help();
    outcome.code = usage ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    outcome.code = kExitFailure;
  }
  return outcome;
}

int replay(const Options& o) {
  std::ifstream in(o.manifest);
  if (!in) {
    std::cerr << "usage error: cannot read " << o.manifest << "\n";
    return kExitUsage;
  }
  json manifest;
  try {
    manifest = json::parse(in);
    if (manifest.value("schema", std::string{}) != io::kSchema) throw std::runtime_error("schema mismatch");
  } catch (const std::exception& e) {
    std::cerr << "usage error: not a manifest: " << e.what() << "\n";
    return kExitUsage;
  }
  std::vector<std::string> args = strip_out(manifest.at("argv").get<std::vector<std::string>>());
  const fs::path out = o.out == default_out() ? fs::path(o.manifest).parent_path() / "replay" : fs::path(o.out);
  args.push_back("--out");
  args.push_back(out.string());
  const Outcome outcome = dispatch(args);
  if (outcome.code != manifest.value("exit_code", 0)) {
    std::cerr << "replay: exit code " << outcome.code << " differs from recorded " << manifest.value("exit_code", 0)
              << "\n";
    return kExitMismatch;
  }
  int mismatches = 0;
  for (const auto& [file, digest] : manifest.at("outputs").items()) {
    const fs::path path = out / file;
    const bool same = fs::exists(path) && sha256_file(path) == digest.get<std::string>();
    std::cout << (same ? "match    " : "MISMATCH ") << file << "\n";
    mismatches += same ? 0 : 1;
  }
  return mismatches == 0 ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args).code;
}
