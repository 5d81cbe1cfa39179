#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "acipmaps/construct.hpp"
#include "acipmaps/io.hpp"

using namespace acipmaps;

namespace {
int count_lines(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}
}  // namespace

TEST_CASE("map and density CSV") {
  std::ostringstream m;
  write_map_csv(m, doubling_map(), 8);
  CHECK(m.str().rfind("x,f,df\n", 0) == 0);
  CHECK(count_lines(m.str()) == 10);
  CHECK(m.str().find("\n0.5,1,2\n") != std::string::npos);

  std::ostringstream d;
  write_density_csv(d, uniform_density(), 4);
  CHECK(d.str() == "x,rho,g\n0,1,0\n0.25,1,0.25\n0.5,1,0.5\n0.75,1,0.75\n1,1,1\n");
}

TEST_CASE("grid function CSV round-trips values") {
  const GridFunction h = GridFunction::sample([](double x) { return 0.1 + x; }, 4);
  std::ostringstream os;
  write_grid_csv(os, h);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,value");
  int j = 0;
  while (std::getline(in, line)) {
    const double v = std::stod(line.substr(line.find(',') + 1));
    CHECK(v == h[j]);
    ++j;
  }
  CHECK(j == 5);
}

TEST_CASE("JSON exports") {
  const json c = to_json(certify_map(doubling_map()));
  CHECK(c["passed"] == true);
  CHECK(c["lambda"] == 2.0);
  const json g = to_json(check_c1_circle(linear_two_branch(0.3)));
  CHECK(g["passed"] == false);
  const json p = to_json(doubling_map().provenance());
  CHECK(p["path"] == "doubling");
  CHECK(p["cutoff"].is_null());

  const json d = to_json(dini_classify(make_holder(0.5, 1.0)));
  CHECK(d["verdict"] == "dini");
  CHECK(d["integral"].get<double>() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(d["partial_sums"].size() <= 32);
  CHECK(d["partial_sums"].back()["k"] == 10000);
}

TEST_CASE("distortion CSV has one row per level") {
  const DistortionReport r = classify_distortion(build_F_omega_member(make_zero(), 1), make_zero(), 20);
  std::ostringstream os;
  write_distortion_csv(os, r);
  CHECK(count_lines(os.str()) == 21);
  CHECK(os.str().rfind("k,D,witness,lower_bound\n", 0) == 0);
  const json j = to_json(r);
  CHECK(j["levels"].size() == 20);
  CHECK(j["verdict"] == "bounded");
}

TEST_CASE("write_file creates parent directories") {
  const auto dir = std::filesystem::temp_directory_path() / "acipmaps_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_file((dir / "a.txt").string(), "hello\n");
  std::ifstream in(dir / "a.txt");
  std::string s;
  std::getline(in, s);
  CHECK(s == "hello");
  std::filesystem::remove_all(dir.parent_path());
}
