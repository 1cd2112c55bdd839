// Copyright 2026 The wignerrate Authors.
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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wigner/cli.hpp"
#include "wigner/export.hpp"

using namespace wigner;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "wigner_cli_test" / name;
  fs::remove_all(dir);
  return dir;
}

std::string write_config(const std::string& name, const std::string& body) {
  const auto p = fs::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  const auto r = run({"frobnicate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("simulate") != std::string::npos);
  CHECK(run({"--bogus", "lawcheck"}).code == 2);
  CHECK(run({"--format", "xml", "lawcheck"}).code == 2);
  CHECK(run({"--workers", "0", "lawcheck"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("missing or invalid config exits with 2") {
  const auto r = run({"rate", "--config", "missing.json"});
  CHECK(r.code == 2);
  CHECK(r.err.find("missing.json") != std::string::npos);
  const auto bad = write_config("wigner_cli_bad.json", R"({"n_grid": [64, 32]})");
  CHECK(run({"--config", bad, "simulate"}).code == 2);
  const auto two = write_config("wigner_cli_two.json", R"({"n_grid": [16, 32], "replicas": 2})");
  CHECK(run({"--config", two, "rate"}).code == 2);
}

TEST_CASE("lawcheck passes and writes the law curve") {
  const auto dir = scratch("law");
  const auto r = run({"lawcheck", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("8.67891") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
  const Table t = read_table((dir / "law_curve.csv").string(), Format::csv);
  CHECK(t.rows.size() == 401);
  CHECK(t.meta("version") == kVersion);
}

TEST_CASE("simulate is deterministic and honours --seed") {
  const auto cfg = write_config("wigner_cli_sim.json", R"({"n_grid": [12], "replicas": 2})");
  const auto a = scratch("sim_a"), b = scratch("sim_b"), c = scratch("sim_c");
  REQUIRE(run({"--config", cfg, "--seed", "5", "--out", a.string(), "simulate"}).code == 0);
  REQUIRE(run({"--config", cfg, "--seed", "5", "--workers", "3", "--out", b.string(), "simulate"}).code == 0);
  REQUIRE(run({"--config", cfg, "--seed", "6", "--out", c.string(), "simulate"}).code == 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string name = "spectrum_gaussian_n12_r1.csv";
  CHECK(slurp(a / name) == slurp(b / name));
  CHECK(slurp(a / name) != slurp(c / name));
  CHECK(read_table((a / name).string(), Format::csv).meta("master_seed") == "5");
}

TEST_CASE("json output format") {
  const auto cfg = write_config("wigner_cli_json.json", R"({"n_grid": [10], "replicas": 1})");
  const auto dir = scratch("json");
  REQUIRE(run({"--config", cfg, "--format", "json", "--out", dir.string(), "simulate"}).code == 0);
  const Table t = read_table((dir / "spectrum_gaussian_n10_r0.json").string(), Format::json);
  CHECK(t.rows.size() == 10);
}

TEST_CASE("small rate, diag, variance and bai runs") {
  const auto dir = scratch("runs");
  const auto rate = write_config("wigner_cli_rate.json",
                                 R"({"ensemble": [{"kind": "student_t", "df": 5}], "n_grid": [16, 32, 64], "replicas": 5})");
  const auto r = run({"--config", rate, "--out", dir.string(), "rate"});
  CHECK(r.out.find("FLAGGED") != std::string::npos);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "rate_student_t_5_.csv"));

  const auto diag = write_config("wigner_cli_diag.json",
                                 R"({"n_grid": [16], "replicas": 100, "z_grid": [[0, 0.5], [0, 1.0]]})");
  const auto d = run({"--config", diag, "--out", dir.string(), "diag"});
  CHECK(d.code == 0);
  CHECK(fs::exists(dir / "leave_one_out_gaussian_n16.csv"));
  CHECK(fs::exists(dir / "beta_exceedance_gaussian.csv"));

  const auto var = write_config("wigner_cli_var.json",
                                R"({"n_grid": [16, 32], "replicas": 60, "z_grid": [[0, 1.0]], "checks": ["moment1"]})");
  const auto v = run({"--config", var, "--out", dir.string(), "variance"});
  CHECK((v.code == 0 || v.code == 1));
  CHECK(v.out.find("moment_bound_l1") != std::string::npos);
  CHECK(v.out.find("variance_bound ") == std::string::npos);

  const auto few = write_config("wigner_cli_few.json", R"({"n_grid": [16, 32], "replicas": 10})");
  CHECK(run({"--config", few, "--out", dir.string(), "variance"}).code == 2);

  const auto bai = write_config("wigner_cli_bai.json", R"({"n_grid": [32], "replicas": 2})");
  const auto b = run({"--config", bai, "--out", dir.string(), "bai"});
  CHECK(b.code == 0);
  CHECK(b.out.find("PASS") != std::string::npos);

  const auto bad_bai = write_config("wigner_cli_badbai.json", R"({"n_grid": [32], "bai": {"B": 4}})");
  const auto bb = run({"--config", bad_bai, "--out", dir.string(), "bai"});
  CHECK(bb.code == 2);
  CHECK(bb.err.find("zeta") != std::string::npos);
}
