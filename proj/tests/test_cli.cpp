#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wpgibbs/cli.hpp"

using nlohmann::json;

namespace {

struct outcome {
  int code;
  std::string out;
  std::string err;
};

outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = wpgibbs::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("wpgibbs_cli_" + name);
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string& header) {
  std::istringstream is(text);
  std::getline(is, header);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("critical") {
  auto r = run_cli({"critical", "--k", "4"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc.at("schema_version") == 1);
  CHECK(std::abs(doc.at("alpha_cr").get<double>() - 6.3716) < 5e-4);
  CHECK(std::abs(doc.at("psi_residual").get<double>()) < 1e-10);
  CHECK(doc.at("counts").at("at") == 3);

  r = run_cli({"critical", "--k", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("no critical point: count is constant") != std::string::npos);
  CHECK(run_cli({"critical", "--k", "5"}).code == 2);
  CHECK(run_cli({"critical", "--mode", "other"}).code == 2);

  r = run_cli({"critical", "--mode", "a1k4"});
  REQUIRE(r.code == 0);
  const auto scan = json::parse(r.out);
  CHECK(std::abs(scan.at("alpha_cr").get<double>() - 0.152) < 0.01);
  const auto& t = scan.at("transitions").back();
  CHECK(t.at("counts") == json::array({5, 3, 1}));
}

TEST_CASE("count") {
  auto r = run_cli({"count", "--k", "4", "--a-size", "4", "--alpha", "10", "--set", "I3"});
  REQUIRE(r.code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc.at("count") == 5);
  CHECK(doc.at("exactness") == "exact");
  CHECK(doc.at("results").size() == 5u);

  // The same point through theta, and through the multi-start path.
  r = run_cli({"count", "--k", "4", "--theta", std::to_string(-9.0 / 11.0), "--set", "I3"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("count") == 5);
  r = run_cli({"count", "--k", "4", "--a-size", "1", "--alpha", "0.1", "--set", "I3"});
  REQUIRE(r.code == 0);
  doc = json::parse(r.out);
  CHECK(doc.at("count") == 5);
  CHECK(doc.at("exactness") == "observed");
}

TEST_CASE("solve output schema and verify round trip") {
  const auto path = temp_file("solve.json");
  auto r = run_cli({"solve", "--k", "2", "--a-size", "1", "--alpha", "0.1", "--out", path.string()});
  REQUIRE(r.code == 0);
  std::ifstream f(path);
  const auto doc = json::parse(f);
  CHECK(doc.at("schema_version") == 1);
  CHECK(doc.at("command") == "solve");
  for (const char* key : {"k", "a_size", "alpha", "theta"}) CHECK(doc.at("params").contains(key));
  for (const char* key : {"dropped_starts", "grid", "tolerances"}) CHECK(doc.at("diagnostics").contains(key));
  REQUIRE_FALSE(doc.at("results").empty());
  for (const auto& rec : doc.at("results")) {
    CHECK(rec.at("h").size() == 4u);
    CHECK(rec.at("residual").get<double>() < 1e-10);
    for (const char* key : {"ti", "i1", "i2", "i3"}) CHECK(rec.at("flags").contains(key));
    CHECK(rec.at("source") == "full_solve");
    CHECK(rec.contains("params"));
    CHECK(rec.contains("solver_tol"));
  }

  r = run_cli({"verify", "--in", path.string(), "--depth", "4"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("pass") == true);

  // Tampering with one field must be caught.
  json bad = doc;
  bad["results"][0]["h"][0] = bad["results"][0]["h"][0].get<double>() + 1e-3;
  const auto bad_path = temp_file("bad.json");
  std::ofstream(bad_path) << bad.dump();
  r = run_cli({"verify", "--in", bad_path.string()});
  CHECK(r.code == 1);
}

TEST_CASE("verify the zero record") {
  json doc = {{"schema_version", 1},
              {"command", "solve"},
              {"params", {{"k", 2}, {"a_size", 1}, {"A", {1}}, {"alpha", 0.2}}},
              {"results", {{{"h", {0.0, 0.0, 0.0, 0.0}}}}}};
  const auto path = temp_file("zero.json");
  std::ofstream(path) << doc.dump();
  const auto r = run_cli({"verify", "--in", path.string(), "--depth", "4"});
  REQUIRE(r.code == 0);
  const auto rep = json::parse(r.out);
  CHECK(rep.at("checks")[0].at("eq4_residual") == 0.0);
}

TEST_CASE("plot-phi reproduces five crossings") {
  const auto r = run_cli({"plot-phi", "--k", "5", "--alpha", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find('\r') == std::string::npos);
  std::string header;
  const auto rows = parse_csv(r.out, header);
  CHECK(header == "x,phi,identity");
  REQUIRE(rows.size() > 100);
  int crossings = 0;
  double prev = 0.0;
  for (const auto& row : rows) {
    REQUIRE(row.size() == 3u);
    CHECK(row[0] == row[2]);
    const double d = row[1] - row[2];
    if (d == 0.0) {
      ++crossings;
    } else if (prev != 0.0 && (d > 0.0) != (prev > 0.0)) {
      ++crossings;
    }
    prev = d;
  }
  CHECK(crossings == 5);
  CHECK(r.err.find("phi crossings: 5") != std::string::npos);
}

TEST_CASE("scan csv") {
  const auto r = run_cli({"scan", "--k", "4", "--alpha-lo", "5", "--alpha-hi", "8", "--steps", "7", "--set", "I3",
                          "--format", "csv"});
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = parse_csv(r.out, header);
  CHECK(header == "alpha,count");
  REQUIRE(rows.size() == 7u);
  CHECK(rows.front()[1] == 1.0);
  CHECK(rows.back()[1] == 5.0);

  const auto j = run_cli({"scan", "--k", "4", "--alpha-lo", "5", "--alpha-hi", "8", "--steps", "7", "--set", "I3"});
  REQUIRE(j.code == 0);
  const auto doc = json::parse(j.out);
  CHECK(doc.at("transitions").size() == 1u);
  CHECK(doc.at("reduction_path") == true);
}

TEST_CASE("group") {
  const auto r = run_cli({"group", "--k", "2", "--word", "1,2,2,3", "--A", "1", "--ball", "2"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc.at("word").at("reduced") == json::array({1, 3}));
  CHECK(doc.at("ball").at("level_sizes") == json::array({1, 3, 6}));
  CHECK(doc.at("ball").at("total") == 10);
}

TEST_CASE("usage errors and exit codes") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"nonsense"}).code == 2);
  CHECK(run_cli({"count", "--k", "4", "--alpha", "10", "--theta", "0.1"}).code == 2);
  CHECK(run_cli({"count", "--k", "4"}).code == 2);
  CHECK(run_cli({"count", "--k", "4", "--alpha", "10", "--set", "I7"}).code == 2);
  CHECK(run_cli({"count", "--k", "4", "--a-size", "5", "--alpha", "10"}).code == 2);
  CHECK(run_cli({"count", "--k", "4", "--alpha", "-1"}).code == 2);
  CHECK(run_cli({"count", "--k", "4", "--theta", "1.5"}).code == 2);
  CHECK(run_cli({"count", "--k", "4", "--alpha", "10", "--format", "xml"}).code == 2);
  CHECK(run_cli({"scan", "--k", "4", "--alpha-lo", "3", "--alpha-hi", "2"}).code == 2);
  CHECK(run_cli({"group", "--k", "2", "--word", "1,5"}).code == 2);
  CHECK(run_cli({"verify", "--in", "/nonexistent/file.json"}).code == 2);
  CHECK(run_cli({"group", "--k", "6", "--ball", "12"}).code == 3);
  CHECK(run_cli({"--help"}).code == 0);
}
