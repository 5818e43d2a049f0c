#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path kRoot = fs::path(PANHARMONIC_TEST_TMP) / "cli";

int run(const std::string& args) {
  const std::string cmd = std::string(PANHARMONIC_CLI) + " " + args + " >" + (kRoot / "last.log").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string out(const std::string& name) {
  const fs::path dir = kRoot / name;
  fs::remove_all(dir);
  return "--out " + dir.string();
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

struct Fixture {
  Fixture() { fs::create_directories(kRoot); }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "specfun writes a table and a manifest") {
  CHECK(run("specfun --dim 3 --t 0:2:5 " + out("specfun")) == 0);
  const fs::path dir = kRoot / "specfun";
  CHECK(fs::exists(dir / "specfun.csv"));
  const json m = read_json(dir / "manifest.json");
  CHECK(m.at("command") == "specfun");
  CHECK(m.at("exit_code") == 0);
  CHECK(m.at("outputs").contains("specfun.csv"));
  CHECK(m.at("outputs").at("specfun.csv").get<std::string>().size() == 64);
  CHECK(m.contains("version"));
  CHECK(m.contains("wall_clock_seconds"));
}

TEST_CASE_FIXTURE(Fixture, "detect exit codes") {
  CHECK(run("detect --dim 3 --field plane:mu=1.5 --mu 1.5 " + out("accept")) == 0);
  CHECK(read_json(kRoot / "accept" / "detect.json").at("verdict") == "panharmonic");
  CHECK(run("detect --dim 3 --field plane:mu=1.5 --mu 1 " + out("reject")) == 2);
  CHECK(read_json(kRoot / "reject" / "manifest.json").at("exit_code") == 2);
}

TEST_CASE_FIXTURE(Fixture, "usage errors exit 64") {
  CHECK(run("") == 64);
  CHECK(run("frobnicate") == 64);
  CHECK(run("detect --dim 3 --mu 1 " + out("u1")) == 64);
  CHECK(run("detect --dim 3 --field wave:mu=1 --mu 1 " + out("u2")) == 64);
  CHECK(run("detect --dim 3 --field plane:mu=1 --mu 1 --format xml " + out("u3")) == 64);
  CHECK(run("solve --dim 2 --rhs const " + out("u4")) == 64);
  std::ofstream(kRoot / "bad.json") << R"({"paths": 10})";
  CHECK(run("wos --dim 2 --data const --mu 1 --points 0,0 --config " + (kRoot / "bad.json").string() + " " +
            out("u5")) == 64);
}

TEST_CASE_FIXTURE(Fixture, "solve and wos runs") {
  CHECK(run("solve --dim 3 --rhs const --mu 1 --mesh-h 0.3 --format json " + out("solve")) == 0);
  const json m = read_json(kRoot / "solve" / "manifest.json");
  CHECK(m.at("outputs").size() >= 2);
  CHECK(run("wos --dim 3 --data const --mu 1 --points \"0,0,0;2,0,0\" --paths 200 " + out("wos")) == 0);
  std::ifstream scan(kRoot / "wos" / "scan.csv");
  std::string first;
  std::getline(scan, first);
  CHECK(first.rfind("# schema:", 0) == 0);
}

TEST_CASE_FIXTURE(Fixture, "replay reproduces digests") {
  REQUIRE(run("wos --dim 2 --data plane:mu=1 --mu 1 --points 0.2,0.1 --paths 300 --seed 9 " + out("orig")) == 0);
  const fs::path manifest = kRoot / "orig" / "manifest.json";
  CHECK(run("replay " + manifest.string()) == 0);
  CHECK(fs::exists(kRoot / "orig" / "replay" / "wos.json"));

  json m = read_json(manifest);
  m["outputs"]["wos.json"] = std::string(64, '0');
  std::ofstream(kRoot / "tampered.json") << m.dump();
  CHECK(run("replay " + (kRoot / "tampered.json").string() + " " + out("tampered_run")) == 4);
  CHECK(run("replay " + (kRoot / "missing.json").string()) == 64);
}
