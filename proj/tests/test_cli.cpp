#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using circlelab::cli::dispatch;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("circlelab_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("exponents command") {
  auto r = run({"exponents", "--r", "2", "--s", "3", "--ell", "2"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["final"] == "5/4");
  CHECK(j["case"] == "(i)");
  CHECK(j["config"]["options"]["r"] == 2);
  r = run({"exponents", "--r", "2", "--s", "2", "--ell", "2"});
  CHECK(nlohmann::json::parse(r.out)["nontrivial"] == false);
  r = run({"exponents", "--r", "8", "--s", "8", "--ell", "128"});
  CHECK(nlohmann::json::parse(r.out)["final"] == "14447/896");
}

TEST_CASE("exit codes") {
  CHECK(run({"exponents", "--bogus", "1"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({}).code == 2);
  const auto bad = run({"exponents", "--r", "3", "--s", "2", "--ell", "2"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("HypothesisViolation") != std::string::npos);
  CHECK(run({"arcs", "--X", "100", "--theta", "0.45"}).code == 2);
  CHECK(run({"verify", "weil", "--cmax", "500"}).code == 0);
  // A failing assertion inside a suite.
  CHECK(run({"verify", "major", "--limit", "0.01"}).code == 3);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("artifacts round-trip through the echoed config") {
  const auto a = scratch("a"), b = scratch("b");
  REQUIRE(run({"--out", a.string(), "--seed", "99", "verify", "minor", "--grid", "1000", "4000"}).code == 0);
  REQUIRE(run({"--out", b.string(), "--config", (a / "verify_minor.json").string()}).code == 0);
  CHECK(slurp(a / "verify_minor.json") == slurp(b / "verify_minor.json"));
  CHECK(slurp(a / "verify_minor.csv") == slurp(b / "verify_minor.csv"));
  const auto report = nlohmann::json::parse(slurp(a / "verify_minor.json"));
  CHECK(report["details"]["seed"] == 99);
  CHECK(report["config"]["options"]["grid"].size() == 2);

  const auto c = scratch("c"), d = scratch("d");
  REQUIRE(run({"--out", c.string(), "phi", "--x", "0.002", "0.5", "--sigma", "-0.1", "--beta", "0.001"}).code == 0);
  REQUIRE(run({"--out", d.string(), "--config", (c / "phi.csv").string()}).code == 0);
  CHECK(slurp(c / "phi.csv") == slurp(d / "phi.csv"));
  CHECK(slurp(c / "phi.csv").rfind("# circlelab csv v1\n# config ", 0) == 0);
  CHECK(run({"--config", (c / "missing.json").string()}).code == 2);
}

TEST_CASE("coefficient cache through the environment") {
  const auto dir = scratch("cache");
  fs::create_directories(dir);
  const auto cache = dir / "table.bin";
  setenv("CIRCLELAB_CACHE", cache.string().c_str(), 1);
  const auto first = run({"sum", "--X", "300", "--ell", "2"});
  REQUIRE(first.code == 0);
  CHECK(fs::exists(cache));
  CHECK(fs::exists(dir / "table.bin.json"));
  const auto second = run({"sum", "--X", "300", "--ell", "2"});
  unsetenv("CIRCLELAB_CACHE");
  CHECK(first.out == second.out);
  const auto fresh = run({"sum", "--X", "300", "--ell", "2", "--route", "table"});
  CHECK(nlohmann::json::parse(fresh.out)["re"] == nlohmann::json::parse(first.out)["re"]);
}
