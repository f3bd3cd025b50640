#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "poincare/cli.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "pseries");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = poincare::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("pseries_test_" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("thresholds report") {
  const Run r = run({"thresholds", "--epsilon", "2", "--n", "1"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["command"] == "thresholds");
  CHECK(j["status"] == "ok");
  // (m - 1) 2 > 2 first at m = 3; (m - 2) 2 > 2 first at m = 4.
  CHECK(j["result"]["demailly"] == 3);
  CHECK(j["result"]["main"] == 4);
  CHECK(j["result"]["df"].is_null());
  CHECK(j["config"]["epsilon"] == "2");
  CHECK(j["version"].get<std::string>().rfind("0.1.0", 0) == 0);

  const Run df = run({"thresholds", "--epsilon", "2", "--n", "2", "--C", "2"});
  REQUIRE(df.code == 0);
  const json k = json::parse(df.out);
  CHECK(k["result"]["demailly"] == 4);
  CHECK(k["result"]["main"] == 5);
  CHECK(k["result"]["df"] == 4);
}

TEST_CASE("input errors exit 1 with a message") {
  const Run unknown = run({"frobnicate"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("unknown command") != std::string::npos);
  CHECK(unknown.err.find("usage:") != std::string::npos);
  CHECK(unknown.out.empty());

  CHECK(run({}).code == 1);
  CHECK(run({"thresholds"}).code == 1);  // no epsilon
  CHECK(run({"thresholds", "--epsilon", "-1"}).code == 1);
  CHECK(run({"thresholds", "--epsilon", "2", "--bogus", "1"}).code == 1);
  const Run bad_m = run({"poincare-eval", "--m", "1"});
  CHECK(bad_m.code == 1);
  CHECK(bad_m.err.find("--m") != std::string::npos);

  const auto cfg = temp_file("bad.cfg", "m = 4\nradius = far\n");
  const Run bad_file = run({"poincare-eval", "--config", cfg.string()});
  CHECK(bad_file.code == 1);
  CHECK(bad_file.err.find("line 2") != std::string::npos);
  std::filesystem::remove(cfg);
}

TEST_CASE("config file, flag precedence and CSV output") {
  const auto cfg = temp_file("ok.cfg", "# thresholds experiment\nepsilon = 0.5\nn = 1\n");
  const Run from_file = run({"thresholds", "--config", cfg.string()});
  REQUIRE(from_file.code == 0);
  CHECK(json::parse(from_file.out)["result"]["main"] == 7);
  const Run overridden = run({"thresholds", "--config", cfg.string(), "--epsilon", "2"});
  CHECK(json::parse(overridden.out)["result"]["main"] == 4);

  const auto csv = std::filesystem::temp_directory_path() / "pseries_test_table.csv";
  const auto report = std::filesystem::temp_directory_path() / "pseries_test_report.json";
  const Run with_csv =
      run({"thresholds", "--epsilon", "2", "--csv", csv.string(), "--output", report.string()});
  REQUIRE(with_csv.code == 0);
  CHECK(with_csv.out.empty());
  std::ifstream in(csv);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "m,demailly_margin,main_margin,df_margin");
  CHECK(first == "2,0,-2,\"\"");
  std::ifstream rin(report);
  CHECK(json::parse(rin)["result"]["main"] == 4);
  std::filesystem::remove(cfg);
  std::filesystem::remove(csv);
  std::filesystem::remove(report);
}

TEST_CASE("checked commands succeed on the preset") {
  for (const char* c : {"injectivity-radius", "cutoff-check", "seshadri-bound", "lemma22-check"}) {
    const Run r = run({c});
    INFO(c << ": " << r.err);
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["status"] == "ok");
  }
  const json s = json::parse(run({"seshadri-bound"}).out);
  CHECK(s["result"]["consistency_residual"].get<double>() < 1e-10);
  CHECK(s["result"]["thresholds"]["main"] == 4);
}

TEST_CASE("a violated check exits 2") {
  // Below the smallest displacement (about 3.06) the ball holds only the
  // identity and its shells are empty, so the extrapolated tail is zero while
  // the ball of radius R + 2 adds the generators.
  const Run r = run({"weight-sum", "--radius", "2.5"});
  CHECK(r.code == 2);
  const json j = json::parse(r.out);
  CHECK(j["status"] == "violated");
  CHECK(j["result"]["within_tail"] == false);
  CHECK(run({"weight-sum", "--radius", "10"}).code == 0);
}

TEST_CASE("identical config gives byte-identical reports") {
  for (const char* c : {"thresholds", "density", "quasi-psh-check"}) {
    std::vector<std::string> args{c, "--epsilon", "1.25"};
    const Run a = run(args);
    const Run b = run(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}
