#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "acipmaps/cli.hpp"

using namespace acipmaps;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "acipmaps");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string trimmed(const std::string& s) { return s.substr(0, s.find_last_not_of('\n') + 1); }

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

const std::string kOut = "cli_test_runs";

}  // namespace

TEST_CASE("fnv1a reference values") {
  CHECK(cli::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(cli::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(cli::fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("run config validation and naming") {
  cli::RunConfig c;
  c.command = "construct";
  CHECK_NOTHROW(c.validate());
  CHECK(c.run_name().rfind("construct-", 0) == 0);
  CHECK(c.run_name().size() == std::string("construct-").size() + 16);
  cli::RunConfig d = c;
  d.out = "elsewhere";
  CHECK(d.run_name() == c.run_name());
  d.seed = 2;
  CHECK(d.run_name() != c.run_name());

  c.grid = 1000;
  CHECK_THROWS_AS(c.validate(), cli::UsageError);
  c.grid = 1024;
  c.tol = 0.0;
  CHECK_THROWS_AS(c.validate(), cli::UsageError);
  c.tol = 1e-6;
  c.mode = "perron";
  CHECK_THROWS_AS(c.validate(), cli::UsageError);
  c.mode = "lebesgue";
  c.command = "distortion";
  c.k_max = 10;
  CHECK_THROWS_AS(c.validate(), cli::UsageError);
  c.k_max = 0;
  CHECK(c.effective_k_max() == 20);
  c.command = "dini";
  CHECK(c.effective_k_max() == 10000);
}

TEST_CASE("config file with flag override") {
  const fs::path cfg = "cli_test.cfg";
  {
    std::ofstream os(cfg);
    os << "# sample\nmodulus = almost-lipschitz\nkmax=500\nout=" << kOut << "\n\n";
  }
  cli::RunConfig c;
  cli::apply_config_file(c, cfg.string());
  CHECK(c.modulus == "almost-lipschitz");
  CHECK(c.k_max == 500);

  const Run r = invoke({"dini", "--config", cfg.string(), "--kmax", "1000"});
  CHECK(r.code == 0);
  const json j = read_json(fs::path(trimmed(r.out)) / "dini.json");
  CHECK(j["config"]["kmax"] == 1000);
  CHECK(j["config"]["modulus"] == "almost-lipschitz");
  CHECK(j["dini"]["verdict"] == "dini");
  CHECK(j["dini"]["integral"].get<double>() == doctest::Approx(2.0).epsilon(1e-8));

  {
    std::ofstream os(cfg);
    os << "colour=blue\n";
  }
  CHECK(invoke({"dini", "--config", cfg.string()}).code == 2);
  fs::remove(cfg);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"dini", "--grid", "1000"}).code == 2);
  CHECK(invoke({"dini", "--seed", "-3"}).code == 2);
  CHECK(invoke({"dini", "--modulus", "cantor", "--out", kOut}).code == 2);
  CHECK(invoke({"dini", "--config", "no-such-file.cfg"}).code == 2);
}

TEST_CASE("non-concave modulus is a certification failure") {
  const Run r = invoke({"construct", "--modulus", "holder:alpha=2,C=1", "--out", kOut});
  CHECK(r.code == 1);
  CHECK(r.err.find("not in K (concavity)") != std::string::npos);
}

TEST_CASE("dini runs are deterministic apart from the timestamp") {
  const Run a = invoke({"dini", "--modulus", "log-nondini", "--out", kOut});
  REQUIRE(a.code == 0);
  json ja = read_json(fs::path(trimmed(a.out)) / "dini.json");
  const Run b = invoke({"dini", "--modulus", "log-nondini", "--out", kOut});
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  json jb = read_json(fs::path(trimmed(b.out)) / "dini.json");
  CHECK(ja["dini"]["verdict"] == "non_dini");
  ja.erase("timestamp");
  jb.erase("timestamp");
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("construct in both modes") {
  const Run a = invoke({"construct", "--mode", "acip", "--modulus", "holder:alpha=0.5,C=1",
                        "--grid", "1024", "--out", kOut});
  CHECK(a.code == 0);
  const fs::path da = trimmed(a.out);
  CHECK(fs::exists(da / "map.csv"));
  CHECK(fs::exists(da / "density.csv"));
  const json ca = read_json(da / "certificate.json");
  CHECK(ca["passed"] == true);
  CHECK(ca.contains("timestamp"));

  const Run b = invoke({"construct", "--mode", "lebesgue", "--modulus", "log-nondini", "--seed",
                        "7", "--grid", "1024", "--out", kOut});
  CHECK(b.code == 0);
  const json cb = read_json(fs::path(trimmed(b.out)) / "certificate.json");
  bool found = false;
  for (const auto& c : cb["checks"]) {
    if (c["name"] != "extension_condition") continue;
    found = true;
    CHECK(c["value"].get<double>() <= 1e-10);
  }
  CHECK(found);
  CHECK(cb["map"]["provenance"]["seed"] == 7);
}

TEST_CASE("a tolerance too tight to meet names the failing check") {
  const Run r = invoke({"construct", "--mode", "acip", "--modulus", "holder:alpha=0.25,C=1",
                        "--grid", "256", "--tol", "1e-300", "--out", kOut});
  CHECK(r.code == 1);
  CHECK(r.err.find("invariance") != std::string::npos);
}

TEST_CASE("distortion of the doubling stub") {
  const Run r = invoke({"distortion", "--mode", "lebesgue", "--modulus", "zero", "--out", kOut});
  CHECK(r.code == 0);
  const fs::path d = trimmed(r.out);
  CHECK(fs::exists(d / "distortion.csv"));
  const json j = read_json(d / "distortion.json");
  CHECK(j["distortion"]["verdict"] == "bounded");
  for (const auto& l : j["distortion"]["levels"]) CHECK(l["D"].get<double>() <= 1e-12);
}

TEST_CASE("verify a Lebesgue map") {
  const Run r = invoke({"verify", "--mode", "lebesgue", "--modulus", "holder:alpha=0.5,C=1",
                        "--seed", "3", "--out", kOut});
  CHECK(r.code == 0);
  const json j = read_json(fs::path(trimmed(r.out)) / "report.json");
  REQUIRE(j["checks"].size() == 4);
  for (const auto& c : j["checks"]) CHECK(c["pass"] == true);
  CHECK(fs::exists(fs::path(trimmed(r.out)) / "modulus.csv"));
}
