#include "polymv/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace polymv;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "polymv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

TEST_CASE("coeffs subcommand") {
  const auto r = run({"coeffs", "--alphas", "1/4,1/2,1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("c_1 = 64/45") != std::string::npos);
  CHECK(r.out.find("c_2 = 4/9") != std::string::npos);
  CHECK(r.out.find("c_3 = 1/45") != std::string::npos);
  CHECK(r.out.find("[exact]") != std::string::npos);

  const auto g = run({"coeffs", "-m", "3", "--geometric", "1", "2"});
  CHECK(g.code == kExitOk);
  CHECK(g.out.find("1/16") != std::string::npos);

  CHECK(run({"coeffs", "--alphas", "1/2,1/4"}).code == kExitUsage);
  CHECK(run({"coeffs", "--alphas", "x"}).code == kExitUsage);
  CHECK(run({"coeffs", "--alphas", "1/2,3/2"}).code == kExitUsage);
  CHECK(run({"nosuch"}).code == kExitUsage);
  CHECK(run({"--version"}).code == kExitOk);
}

TEST_CASE("kelvin subcommand") {
  const auto ok = run({"kelvin", "-m", "2", "-n", "3"});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("closed form: PASS") != std::string::npos);
  const auto bad = run({"kelvin", "-m", "2", "-n", "2", "--self-test"});
  CHECK(bad.code == kExitCertificate);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("verify rejects m = 1 and passes a small run") {
  CHECK(run({"verify", "-m", "1"}).code == kExitUsage);
  const auto r = run({"verify", "-m", "2", "-n", "2", "--samples", "3", "--tuples", "2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("# seed=") != std::string::npos);
  CHECK(r.out.find("[nonzero as expected]") != std::string::npos);
  CHECK(r.out.find("failures = 0") != std::string::npos);
}

TEST_CASE("stability rows") {
  const auto r = run({"stability", "--family", "ellipse", "--eps", "0,0.2", "-m", "2", "--threads", "1"});
  REQUIRE(r.code == kExitOk);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == stability_csv_header());
  const auto ball = split(lines[1]);
  const auto ellipse = split(lines[2]);
  REQUIRE(ball.size() == 12);
  REQUIRE(ellipse.size() == 12);
  CHECK(ball[9] == "exact-ball");
  CHECK(std::stod(ellipse[6]) == doctest::Approx(1.0 - 1.0 / 1.2).epsilon(1e-9));
  CHECK(std::stod(ellipse[7]) > 0.0);
  CHECK(r.out.find("# C_hat(n=2,m=2)") != std::string::npos);

  const auto parallel = run({"stability", "--family", "ellipse", "--eps", "0,0.2", "-m", "2", "--threads", "2"});
  CHECK(parallel.out == r.out);

  CHECK(run({"stability", "--family", "square"}).code == kExitUsage);
}

TEST_CASE("rigidity with JSON output") {
  const std::string path = "polymv_cli_test_rigidity.json";
  const auto r = run({"rigidity", "--domain", "ellipse a=1 b=1.2", "-m", "2", "--json", path});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("matched ball=") != std::string::npos);
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  REQUIRE(j.size() == 2);
  CHECK(j[0].at("gap_lower_bound").get<double>() > 10.0 * j[1].at("gap_lower_bound").get<double>());
  in.close();
  std::remove(path.c_str());
  CHECK(run({"rigidity", "-m", "2"}).code == kExitUsage);
}
