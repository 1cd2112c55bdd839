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

#include "wigner/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wigner {

using nlohmann::json;

namespace {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("bad numeric field '" + s + "'");
  return x;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

json number_json(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

}  // namespace

void Table::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata.emplace_back(key, value);
}

std::string Table::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return {};
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + name + "' (expected csv or json)");
}

std::vector<std::pair<std::string, std::string>> run_metadata(std::uint64_t config_hash,
                                                              std::uint64_t master_seed) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash));
  return {{"config_hash", hash}, {"master_seed", std::to_string(master_seed)},
          {"version", kVersion}};
}

void write_table(const Table& t, const std::string& path, Format format) {
  auto out = open_out(path);
  if (format == Format::json) {
    json j;
    j["metadata"] = json::object();
    for (const auto& [k, v] : t.metadata) j["metadata"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = json::array();
    for (const auto& row : t.rows) {
      json r = json::array();
      for (double x : row) r.push_back(number_json(x));
      j["rows"].push_back(r);
    }
    out << j.dump(2) << '\n';
  } else {
    for (const auto& [k, v] : t.metadata) out << "# " << k << ": " << v << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

Table read_table(const std::string& path, Format format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  Table t;
  if (format == Format::json) {
    json j;
    in >> j;
    for (const auto& [k, v] : j.at("metadata").items()) t.metadata.emplace_back(k, v.get<std::string>());
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      std::vector<double> row;
      for (const auto& x : r) row.push_back(x.is_string() ? parse_number(x.get<std::string>()) : x.get<double>());
      t.rows.push_back(std::move(row));
    }
    return t;
  }
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      if (colon != std::string::npos) {
        t.metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      }
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    if (!header) {
      while (std::getline(ss, field, ',')) t.columns.push_back(field);
      header = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, field, ',')) row.push_back(parse_number(field));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table spectrum_table(const Spectrum& s) {
  Table t;
  t.set_meta("n", std::to_string(s.size()));
  t.set_meta("seed", std::to_string(s.seed));
  t.columns = {"eigenvalue"};
  for (double x : s.eigenvalues) t.rows.push_back({x});
  return t;
}

Table rate_table(const RateFit& fit) {
  Table t;
  t.set_meta("slope", format_number(fit.slope));
  t.set_meta("slope_se", format_number(fit.slope_se));
  t.set_meta("intercept", format_number(fit.intercept));
  t.set_meta("r_squared", format_number(fit.r_squared));
  t.columns = {"n", "median", "q25", "q75", "sqrt_n_times_median"};
  for (const auto& p : fit.per_n) {
    t.rows.push_back({static_cast<double>(p.n), p.median, p.q25, p.q75, p.sqrt_n_times_median()});
  }
  return t;
}

Table law_table(const SemicircleLaw& law, int points) {
  if (points < 2) throw std::invalid_argument("law table needs at least two points");
  Table t;
  t.set_meta("sigma", format_number(law.sigma()));
  t.columns = {"x", "pdf", "cdf"};
  const double lo = -2.0 * law.sigma(), hi = 2.0 * law.sigma();
  for (int k = 0; k < points; ++k) {
    const double x = lo + (hi - lo) * k / (points - 1);
    t.rows.push_back({x, law.pdf(x), law.cdf(x)});
  }
  return t;
}

Table report_table(const BoundReport& r) {
  Table t;
  t.set_meta("inequality", r.name);
  t.set_meta("pass", r.pass ? "true" : "false");
  for (const auto& [k, v] : r.constants) t.set_meta(k, format_number(v));
  for (const auto& [k, v] : r.metrics) t.set_meta("metric." + k, format_number(v));
  for (const auto& f : r.flags) t.metadata.emplace_back("flag", f);
  t.columns = {"n", "u", "v", "lhs", "rhs", "pass"};
  for (std::size_t k = 0; k < r.lhs.size(); ++k) {
    const auto& c = r.grid[k];
    t.rows.push_back({static_cast<double>(c.n), c.u, c.v, r.lhs[k], r.rhs[k],
                      r.lhs[k] <= r.rhs[k] ? 1.0 : 0.0});
  }
  return t;
}

Table diagnostics_table(std::span<const LeaveOneOutDiag> diags, int n) {
  Table t;
  t.set_meta("n", std::to_string(n));
  if (!diags.empty()) {
    t.set_meta("u", format_number(diags.front().z.u()));
    t.set_meta("v", format_number(diags.front().z.v()));
  }
  t.columns = {"i",          "beta_re",     "beta_im",  "gamma_re", "gamma_im",
               "gamma_hat_re", "gamma_hat_im", "xi_re",    "xi_im",    "eps_re",
               "eps_im",     "a_n_re",      "a_n_im",   "b_n_re",   "b_n_im",
               "beta_le_inv_v", "xi_le_inv_v", "eps_identity_residual"};
  for (const auto& d : diags) {
    const double inv_v = 1.0 / d.z.v();
    t.rows.push_back({static_cast<double>(d.index), d.beta.real(), d.beta.imag(),
                      d.gamma.real(), d.gamma.imag(), d.gamma_hat.real(), d.gamma_hat.imag(),
                      d.xi.real(), d.xi.imag(), d.eps.real(), d.eps.imag(), d.a_n.real(),
                      d.a_n.imag(), d.b_n.real(), d.b_n.imag(),
                      std::abs(d.beta) <= inv_v * (1 + 1e-12) ? 1.0 : 0.0,
                      std::abs(d.xi) <= inv_v * (1 + 1e-12) ? 1.0 : 0.0,
                      std::abs(d.eps_identity_residual(n))});
  }
  return t;
}

json to_json(const BoundReport& r) {
  json j;
  j["inequality"] = r.name;
  j["constants"] = json::object();
  for (const auto& [k, v] : r.constants) j["constants"][k] = number_json(v);
  j["grid"] = json::array();
  for (const auto& c : r.grid) j["grid"].push_back({{"n", c.n}, {"u", c.u}, {"v", c.v}});
  j["lhs"] = json::array();
  j["rhs"] = json::array();
  j["pass_flags"] = json::array();
  for (std::size_t k = 0; k < r.lhs.size(); ++k) {
    j["lhs"].push_back(number_json(r.lhs[k]));
    j["rhs"].push_back(number_json(r.rhs[k]));
    j["pass_flags"].push_back(r.lhs[k] <= r.rhs[k]);
  }
  j["metrics"] = json::object();
  for (const auto& [k, v] : r.metrics) j["metrics"][k] = number_json(v);
  j["flags"] = r.flags;
  j["pass"] = r.pass;
  return j;
}

json to_json(const RateFit& fit) {
  json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["slope_se"] = number_json(fit.slope_se);
  j["r_squared"] = fit.r_squared;
  j["degenerate"] = fit.degenerate;
  j["per_n"] = json::array();
  for (const auto& p : fit.per_n) {
    j["per_n"].push_back({{"n", p.n}, {"median", p.median}, {"q25", p.q25}, {"q75", p.q75},
                          {"mean", p.mean}, {"sqrt_n_times_median", p.sqrt_n_times_median()}});
  }
  return j;
}

void export_report(const BoundReport& r, const std::string& path, Format format,
                   const std::vector<std::pair<std::string, std::string>>& metadata) {
  if (format == Format::json) {
    json j = to_json(r);
    j["metadata"] = json::object();
    for (const auto& [k, v] : metadata) j["metadata"][k] = v;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
    return;
  }
  Table t = report_table(r);
  t.metadata.insert(t.metadata.begin(), metadata.begin(), metadata.end());
  write_table(t, path, format);
}

}  // namespace wigner
