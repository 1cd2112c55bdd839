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

#include <cmath>
#include <stdexcept>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "wigner/export.hpp"

using namespace wigner;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "wigner_export_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("csv and json tables round-trip exactly") {
  Table t;
  t.set_meta("n", "3");
  t.set_meta("note", "a: b");
  t.columns = {"x", "y"};
  t.rows = {{0.1, 1.0 / 3.0}, {-2.5e-300, std::numeric_limits<double>::infinity()}, {std::nan(""), 7.0}};
  for (Format f : {Format::csv, Format::json}) {
    const auto path = scratch(f == Format::csv ? "t.csv" : "t.json").string();
    write_table(t, path, f);
    const Table back = read_table(path, f);
    CHECK(back.columns == t.columns);
    CHECK(back.meta("n") == "3");
    CHECK(back.meta("note") == "a: b");
    REQUIRE(back.rows.size() == 3);
    CHECK(back.rows[0][0] == 0.1);
    CHECK(back.rows[0][1] == 1.0 / 3.0);
    CHECK(back.rows[1][0] == -2.5e-300);
    CHECK(std::isinf(back.rows[1][1]));
    CHECK(std::isnan(back.rows[2][0]));
  }
}

TEST_CASE("set_meta overwrites and meta misses are empty") {
  Table t;
  t.set_meta("k", "1");
  t.set_meta("k", "2");
  CHECK(t.metadata.size() == 1);
  CHECK(t.meta("k") == "2");
  CHECK(t.meta("absent").empty());
}

TEST_CASE("format parsing") {
  CHECK(parse_format("csv") == Format::csv);
  CHECK(parse_format("json") == Format::json);
  CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}

TEST_CASE("run metadata") {
  const auto m = run_metadata(0xabcULL, 42);
  REQUIRE(m.size() == 3);
  CHECK(m[0] == std::pair<std::string, std::string>{"config_hash", "0000000000000abc"});
  CHECK(m[1].second == "42");
  CHECK(m[2].second == kVersion);
}

TEST_CASE("domain tables") {
  const Spectrum s{{-1.0, 0.5}, 9};
  const Table st = spectrum_table(s);
  CHECK(st.meta("n") == "2");
  CHECK(st.meta("seed") == "9");
  CHECK(st.rows.size() == 2);

  const Table lt = law_table(SemicircleLaw(), 5);
  CHECK(lt.columns == std::vector<std::string>{"x", "pdf", "cdf"});
  CHECK(lt.rows[2][0] == 0.0);
  CHECK(lt.rows[2][2] == 0.5);
  CHECK_THROWS_AS(law_table(SemicircleLaw(), 1), std::invalid_argument);

  std::vector<RateSummary> pts;
  for (int n : {100, 400, 1600}) pts.push_back({n, 1.0 / std::sqrt(double(n)), 0, 0, 0});
  const Table rt = rate_table(rate_fit(pts));
  CHECK(rt.columns == std::vector<std::string>{"n", "median", "q25", "q75", "sqrt_n_times_median"});
  CHECK(rt.rows[1][4] == doctest::Approx(1.0));
  CHECK(std::stod(rt.meta("slope")) == doctest::Approx(-0.5));
}

TEST_CASE("report exports keep flags and pass state") {
  BoundReport r;
  r.name = "demo";
  r.constants["A"] = 16;
  r.metrics["max_ratio"] = 0.5;
  r.flags = {"first", "second"};
  r.add({64, 0.0, 0.5}, 1.0, 2.0);
  r.add({64, 1.0, 0.5}, 3.0, 2.0);
  const Table t = report_table(r);
  CHECK(t.meta("pass") == "false");
  int flags = 0;
  for (const auto& [k, v] : t.metadata) flags += k == "flag";
  CHECK(flags == 2);
  CHECK(t.rows[0][5] == 1.0);
  CHECK(t.rows[1][5] == 0.0);

  const auto j = to_json(r);
  CHECK(j["pass"] == false);
  CHECK(j["pass_flags"][0] == true);
  CHECK(j["grid"][1]["u"] == 1.0);
  CHECK(j["flags"].size() == 2);

  const auto path = scratch("report.json").string();
  export_report(r, path, Format::json, run_metadata(1, 2));
  std::ifstream in(path);
  nlohmann::json back;
  in >> back;
  CHECK(back["metadata"]["master_seed"] == "2");
  CHECK(back["inequality"] == "demo");

  const auto csv = scratch("report.csv").string();
  export_report(r, csv, Format::csv, run_metadata(1, 2));
  const Table tb = read_table(csv, Format::csv);
  CHECK(tb.metadata.front().first == "config_hash");
  CHECK(tb.meta("inequality") == "demo");
}

TEST_CASE("diagnostics table") {
  const auto m = sample_wigner(make_wigner_spec(6, make_distribution(DistKind::gaussian), 1.0, 3, false));
  const UpperHalfPoint z(0.0, 0.5);
  const auto rows = SpectralResolvent(m).all_indices(z, sc_stieltjes(z));
  const Table t = diagnostics_table(rows, 6);
  CHECK(t.rows.size() == 6);
  CHECK(t.columns.size() == t.rows[0].size());
  for (const auto& row : t.rows) {
    CHECK(row[15] == 1.0);
    CHECK(row[16] == 1.0);
    CHECK(row[17] <= 1e-12);
  }
}

TEST_CASE("rate fit json") {
  std::vector<RateSummary> pts;
  for (int n : {10, 20, 40}) pts.push_back({n, 1.0 / n, 0, 0, 0});
  const auto j = to_json(rate_fit(pts));
  CHECK(j["slope"].get<double>() == doctest::Approx(-1.0));
  CHECK(j["per_n"].size() == 3);
}

TEST_CASE("unwritable paths fail loudly") {
  Table t;
  CHECK_THROWS(write_table(t, "/nonexistent/dir/file.csv", Format::csv));
  CHECK_THROWS(read_table("/nonexistent/dir/file.csv", Format::csv));
}
