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
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wigner/bounds.hpp"
#include "wigner/ensemble.hpp"
#include "wigner/law.hpp"
#include "wigner/spectra.hpp"

namespace wigner {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Entry law for one experiment; the diagonal uses the same kind scaled to
/// variance sigma^2.
struct EnsembleConfig {
  DistKind kind = DistKind::gaussian;
  DistParams params{};
  double sigma = 1.0;
  bool truncate = false;

  std::string label() const;
  WignerSpec spec(int n, std::uint64_t seed) const;
};

struct RunConfig {
  std::vector<EnsembleConfig> ensembles{EnsembleConfig{}};
  std::vector<int> n_grid{64};
  int replicas = 10;
  std::vector<UpperHalfPoint> z_grid;
  std::vector<std::string> checks;
  std::uint64_t seed = 20240607;
  int workers = 1;
  std::string output_dir = ".";
  BaiConstants bai{};  // v is set per n from bai_v_scale when <= 0
  double bai_v_scale = 2.0;  // v = bai_v_scale / sqrt(n)
  double c0 = 2.0;

  /// Throws ConfigError on violated invariants.
  void validate() const;
  bool wants(const std::string& check) const;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  /// Reads a JSON config; throws ConfigError if missing or malformed.
  static RunConfig load(const std::string& path);
  /// FNV-1a hash of the canonical JSON form.
  std::uint64_t hash() const;
};

/// u in {-3, -1.5, 0, 1.5, 3} x v in {0.2, 0.5, 1}.
std::vector<UpperHalfPoint> default_z_grid();

struct DiagnosticSummary {
  UpperHalfPoint z{0.0, 1.0};
  cplx es_n_estimate;
  BetaTally beta;
  double mean_gamma4 = 0.0;  // E|gamma_i|^4
  double mean_eps4 = 0.0;    // E|eps_i|^4
  long beta_bound_violations = 0;  // |beta_i| > 1/v
  long xi_bound_violations = 0;    // |xi_i| > 1/v
};

struct ReplicaBlock {
  int n = 0;
  std::vector<Spectrum> spectra;
  std::vector<double> delta_p;
  SnSamples sn;
  std::vector<DiagnosticSummary> diagnostics;  // one per z when requested
};

struct ReplicaSet {
  EnsembleConfig ensemble;
  std::vector<ReplicaBlock> blocks;
};

struct RunOptions {
  bool keep_spectra = true;
  bool stieltjes = true;
  bool diagnostics = false;
  /// Use the analytic s(z) instead of the replica mean as E s_n.
  bool plugin_es = false;
};

class ReplicaError : public std::runtime_error {
 public:
  ReplicaError(int n, int replica, const std::string& what);
  int n() const { return n_; }
  int replica() const { return replica_; }

 private:
  int n_;
  int replica_;
};

/// Runs tasks 0..count-1 over a fixed pool of `workers` threads. The first
/// failing task (lowest index) is rethrown after all workers stop.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task);

/// R replicas per n; replica r of dimension n uses seed replica_seed(master,
/// n, r). Output does not depend on the worker count.
ReplicaSet run_replicas(const RunConfig& cfg, const EnsembleConfig& ensemble,
                        const RunOptions& options = {});

struct RateSummary {
  int n = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double mean = 0.0;
  double sqrt_n_times_median() const;
};

RateSummary summarize_deltas(int n, std::vector<double> deltas);

struct RateFit {
  std::vector<RateSummary> per_n;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double r_squared = 0.0;
  bool degenerate = false;
  std::vector<double> sqrt_n_median;

  /// max / min of sqrt(n) * median.
  double witness_spread() const;
};

/// Least squares of log median vs log n. Needs at least three points.
RateFit rate_fit(std::span<const RateSummary> points);

/// Kolmogorov distance of the pooled replica ESD to the law.
double delta_n_estimate(std::span<const Spectrum> spectra, const SemicircleLaw& law);

}  // namespace wigner
