// Copyright 2026 The SSCD Workbench Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "sscd/io.hpp"

namespace sscd {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"sscd"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : storage) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("sscd_cli_test_" + std::to_string(::getpid()) + "_" +
                                         std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST_CASE("cli fair_share_lottery on identical instance writes fairness columns") {
  TempDir dir;
  const std::string cfg = dir.write("c.json", R"({
    "scheduler": {"kind": "fair_share_lottery"},
    "instance": {"generator": "identical",
                 "params": {"cdf": ["1/2", "1/2", "1"], "n": 3, "deadline": 6}},
    "engine": {"mode": "exact"},
    "analyses": [{"op": "fairness_ratio"}]})");
  const Outcome r = invoke({"run", "--config", cfg, "--out", dir.file("o"), "--no-header-timestamp"});
  REQUIRE(r.code == cli::kExitOk);
  const auto fair = lines(slurp(dir.file("o.fairness.csv")));
  REQUIRE(fair.size() == 4);
  CHECK(fair[0] == "schema_version,label,scheduler,player,fair_share,achieved,ratio");
  for (std::size_t i = 1; i < fair.size(); ++i) {
    const std::string ratio = fair[i].substr(fair[i].rfind(',') + 1);
    CHECK(parse_rational(ratio) >= Rational(1, 2));
  }
  const Json report = Json::parse(slurp(dir.file("o.json")));
  CHECK(report["result"]["mode"] == "exact");
}

TEST_CASE("cli malformed rational exits 2 naming the field") {
  TempDir dir;
  const std::string cfg = dir.write("c.json", R"({
    "scheduler": {"kind": "shortest_first"},
    "instance": {"deadline": 3, "players": [{"true_cdf": ["1.5", "1"]}]}})");
  const Outcome r = invoke({"run", "--config", cfg});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("instance.players[0].true_cdf[0]") != std::string::npos);
  CHECK(r.err.find("1.5") != std::string::npos);
}

TEST_CASE("cli branch limit exits 3") {
  TempDir dir;
  const std::string cfg = dir.write("c.json", R"({
    "scheduler": {"kind": "trivial_oblivious"},
    "instance": {"generator": "posu_groups", "params": {"deadline": 8, "group_cap": 100}},
    "engine": {"mode": "exact", "branch_limit": 1000}})");
  const Outcome r = invoke({"run", "--config", cfg});
  CHECK(r.code == cli::kExitEngine);
  CHECK(r.err.find("BranchLimitExceeded") != std::string::npos);
}

TEST_CASE("cli usage and unknown fields exit 2") {
  CHECK(invoke({}).code == cli::kExitConfig);
  CHECK(invoke({"run"}).code == cli::kExitConfig);
  CHECK(invoke({"run", "--config", "/nonexistent/sscd.json"}).code == cli::kExitConfig);
  TempDir dir;
  const std::string cfg = dir.write("c.json", R"({
    "scheduler": {"kind": "shortest_first", "params": {"bogus": 1}},
    "instance": {"generator": "short_long", "params": {"n": 2, "t": 3}}})");
  const Outcome r = invoke({"run", "--config", cfg});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("bogus") != std::string::npos);
}

TEST_CASE("cli generate then run reproduces inline results") {
  TempDir dir;
  REQUIRE(invoke({"generate", "near_deterministic", "--param", "n=4", "--param", "deadline=9",
                  "--param", "seed=3", "--out", dir.file("inst.json")})
              .code == cli::kExitOk);
  const std::string by_file = dir.write("f.json", R"({
    "scheduler": {"kind": "near_deterministic_threshold"},
    "instance": {"file": "inst.json"},
    "engine": {"mode": "monte_carlo", "trials": 2000, "seed": 11}})");
  const std::string inline_cfg =
      R"({"scheduler": {"kind": "near_deterministic_threshold"}, "instance": )" +
      slurp(dir.file("inst.json")) + R"(, "engine": {"mode": "monte_carlo", "trials": 2000, "seed": 11}})";
  const std::string by_value = dir.write("i.json", inline_cfg);
  const Outcome a = invoke({"run", "--config", by_file, "--no-header-timestamp"});
  const Outcome b = invoke({"run", "--config", by_value, "--no-header-timestamp"});
  REQUIRE(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  // Reruns are byte-identical; the timestamp line is the only difference when enabled.
  CHECK(invoke({"run", "--config", by_file, "--no-header-timestamp"}).out == a.out);
  const Outcome stamped = invoke({"run", "--config", by_file});
  CHECK(stamped.out.rfind("# generated_at=", 0) == 0);
  CHECK(stamped.out.substr(stamped.out.find('\n') + 1) == a.out);
  // Seed and trials overrides reach the CSV provenance columns.
  const Outcome over = invoke({"run", "--config", by_file, "--seed", "5", "--trials", "10", "--no-header-timestamp"});
  CHECK(lines(over.out)[1].find(",monte_carlo,10,,5,") != std::string::npos);
}

TEST_CASE("cli list prints twelve kinds") {
  const Outcome r = invoke({"list-schedulers"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(lines(r.out).size() == 13);
  CHECK(r.out.find("forgiving_virtual_length,preemptive") != std::string::npos);
}

TEST_CASE("cli sweep yields one row per point") {
  TempDir dir;
  const std::string cfg = dir.write("s.json", R"({
    "scheduler": {"kind": "trivial_oblivious"},
    "instance": {"generator": "oblivious_lb", "params": {"n": 4}},
    "engine": {"mode": "monte_carlo", "trials": 200, "seed": 7},
    "analyses": [{"op": "fairness_ratio"}],
    "sweep": [{"path": "/instance/params/n", "values": [4, 8, 16]}]})");
  const Outcome r = invoke({"sweep", "--config", cfg, "--no-header-timestamp"});
  REQUIRE(r.code == cli::kExitOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].rfind("schema_version,/instance/params/n,rho,", 0) == 0);
  CHECK(rows[1].rfind("1,4,", 0) == 0);
  CHECK(rows[2].rfind("1,8,", 0) == 0);
  CHECK(rows[3].rfind("1,16,", 0) == 0);
  CHECK(r.out == invoke({"sweep", "--config", cfg, "--no-header-timestamp"}).out);
}

TEST_CASE("cli exact run with analyses writes analysis csv") {
  TempDir dir;
  const std::string cfg = dir.write("c.json", R"({
    "scheduler": {"kind": "forgiving_virtual_length"},
    "instance": {"deadline": 6, "players": [
      {"true_cdf": {"point_mass": 2}, "report": {"type": "qualitative", "estimate": 2}},
      {"true_cdf": {"point_mass": 3}, "report": {"type": "qualitative", "estimate": 3}}]},
    "engine": {"mode": "exact"},
    "analyses": [{"op": "check_error_properties", "player": 0, "grid": [1, 2, 3], "true_length": 2},
                 {"op": "exact_preemptive_optimum"},
                 {"op": "completeness_check", "max_n": 2, "max_len": 2, "min_deadline": 1, "max_deadline": 3}]})");
  const Outcome r = invoke({"run", "--config", cfg, "--out", dir.file("o"), "--no-header-timestamp"});
  REQUIRE(r.code == cli::kExitOk);
  const std::string csv = slurp(dir.file("o.analysis.csv"));
  CHECK(csv.find("exact_preemptive_optimum,,,optimum,2/1") != std::string::npos);
  CHECK(csv.find("completeness_check,,,violations,0") != std::string::npos);
  CHECK(csv.find("check_error_properties,1,,symmetric,1") != std::string::npos);
}

}  // namespace
}  // namespace sscd
