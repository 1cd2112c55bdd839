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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wigner/bounds.hpp"
#include "wigner/harness.hpp"
#include "wigner/resolvent.hpp"
#include "wigner/spectra.hpp"

namespace wigner {

inline constexpr const char* kVersion = "0.3.0";

/// Numeric table with ordered key/value metadata.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void set_meta(const std::string& key, const std::string& value);
  std::string meta(const std::string& key) const;
};

enum class Format { csv, json };
Format parse_format(const std::string& name);

/// Metadata block every exported file carries.
std::vector<std::pair<std::string, std::string>> run_metadata(std::uint64_t config_hash,
                                                              std::uint64_t master_seed);

/// CSV: "# key: value" lines, a header row, then rows printed with 17
/// significant digits so values read back bit-exactly.
void write_table(const Table& t, const std::string& path, Format format);
Table read_table(const std::string& path, Format format);

Table spectrum_table(const Spectrum& s);
/// Columns: n, median, q25, q75, sqrt_n_times_median.
Table rate_table(const RateFit& fit);
Table law_table(const SemicircleLaw& law, int points);
Table report_table(const BoundReport& r);
Table diagnostics_table(std::span<const LeaveOneOutDiag> diags, int n);

nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const RateFit& fit);

/// Writes a BoundReport as JSON (full structure) or CSV (summary table),
/// prefixed with the given metadata.
void export_report(const BoundReport& r, const std::string& path, Format format,
                   const std::vector<std::pair<std::string, std::string>>& metadata);

}  // namespace wigner
