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

#include "wigner/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "wigner/resolvent.hpp"

namespace wigner {

using nlohmann::json;

std::string EnsembleConfig::label() const {
  std::string s = to_string(kind);
  if (kind == DistKind::student_t) s += "(" + std::to_string(static_cast<int>(params.df)) + ")";
  if (kind == DistKind::two_point) s += "(" + std::to_string(params.p) + ")";
  if (truncate) s += "+truncated";
  return s;
}

WignerSpec EnsembleConfig::spec(int n, std::uint64_t seed) const {
  return make_wigner_spec(n, make_distribution(kind, params), sigma, seed, truncate);
}

std::vector<UpperHalfPoint> default_z_grid() {
  std::vector<UpperHalfPoint> z;
  for (double v : {0.2, 0.5, 1.0}) {
    for (double u : {-3.0, -1.5, 0.0, 1.5, 3.0}) z.emplace_back(u, v);
  }
  return z;
}

void RunConfig::validate() const {
  if (ensembles.empty()) throw ConfigError("config needs at least one ensemble");
  if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    if (n_grid[k] < 1) throw ConfigError("n_grid entries must be positive");
    if (k > 0 && n_grid[k] <= n_grid[k - 1]) throw ConfigError("n_grid must be ascending");
  }
  if (replicas < 1) throw ConfigError("replicas must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  for (const auto& e : ensembles) {
    try {
      (void)make_distribution(e.kind, e.params);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(std::string("ensemble: ") + err.what());
    }
    if (!(e.sigma > 0.0)) throw ConfigError("ensemble sigma must be positive");
  }
}

bool RunConfig::wants(const std::string& check) const {
  return checks.empty() || std::find(checks.begin(), checks.end(), check) != checks.end();
}

namespace {

json ensemble_to_json(const EnsembleConfig& e) {
  json j = {{"kind", to_string(e.kind)}, {"sigma", e.sigma}, {"truncate", e.truncate}};
  if (e.kind == DistKind::student_t) j["df"] = e.params.df;
  if (e.kind == DistKind::two_point) j["p"] = e.params.p;
  return j;
}

EnsembleConfig ensemble_from_json(const json& j, bool default_truncate) {
  EnsembleConfig e;
  if (j.is_string()) {
    e.kind = parse_kind(j.get<std::string>());
    e.truncate = default_truncate;
    return e;
  }
  e.kind = parse_kind(j.at("kind").get<std::string>());
  e.params.df = j.value("df", 0.0);
  e.params.p = j.value("p", 0.5);
  e.sigma = j.value("sigma", 1.0);
  e.truncate = j.value("truncate", default_truncate);
  return e;
}

}  // namespace

json RunConfig::to_json() const {
  json j;
  j["ensemble"] = json::array();
  for (const auto& e : ensembles) j["ensemble"].push_back(ensemble_to_json(e));
  j["n_grid"] = n_grid;
  j["replicas"] = replicas;
  j["z_grid"] = json::array();
  for (const auto& z : z_grid) j["z_grid"].push_back({z.u(), z.v()});
  j["checks"] = checks;
  j["seed"] = seed;
  j["workers"] = workers;
  j["output_dir"] = output_dir;
  j["bai"] = {{"A", bai.A}, {"B", bai.B}, {"eps", bai.eps}, {"v_scale", bai_v_scale}};
  j["c0"] = c0;
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  try {
    const bool truncate = j.value("truncate", false);
    if (j.contains("ensemble")) {
      c.ensembles.clear();
      const auto& e = j.at("ensemble");
      if (e.is_array()) {
        for (const auto& item : e) c.ensembles.push_back(ensemble_from_json(item, truncate));
      } else {
        c.ensembles.push_back(ensemble_from_json(e, truncate));
      }
    }
    if (j.contains("n_grid")) c.n_grid = j.at("n_grid").get<std::vector<int>>();
    c.replicas = j.value("replicas", c.replicas);
    if (j.contains("z_grid")) {
      for (const auto& p : j.at("z_grid")) {
        if (!p.is_array() || p.size() != 2) throw ConfigError("z_grid entries must be [u, v]");
        c.z_grid.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
    }
    if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    c.output_dir = j.value("output_dir", c.output_dir);
    if (j.contains("bai")) {
      const auto& b = j.at("bai");
      c.bai.A = b.value("A", c.bai.A);
      c.bai.B = b.value("B", c.bai.B);
      c.bai.eps = b.value("eps", c.bai.eps);
      c.bai_v_scale = b.value("v_scale", c.bai_v_scale);
    }
    c.c0 = j.value("c0", c.c0);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

std::uint64_t RunConfig::hash() const {
  json j = to_json();
  // Worker count and output location never change results.
  j.erase("workers");
  j.erase("output_dir");
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

ReplicaError::ReplicaError(int n, int replica, const std::string& what)
    : std::runtime_error("replica " + std::to_string(replica) + " at n=" + std::to_string(n) +
                         ": " + what),
      n_(n),
      replica_(replica) {}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task) {
  const std::size_t pool = std::min<std::size_t>(std::max(workers, 1), std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::mutex guard;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        task(k);
      } catch (...) {
        std::lock_guard lock(guard);
        if (k < failed_index) {
          failed_index = k;
          failure = std::current_exception();
        }
      }
    }
  };
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(pool);
    for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

ReplicaSet run_replicas(const RunConfig& cfg, const EnsembleConfig& ensemble,
                        const RunOptions& options) {
  cfg.validate();
  const std::vector<UpperHalfPoint> zs = cfg.z_grid.empty() ? default_z_grid() : cfg.z_grid;
  const SemicircleLaw law(1.0);
  ReplicaSet out;
  out.ensemble = ensemble;

  for (int n : cfg.n_grid) {
    const WignerSpec base = ensemble.spec(n, 0);
    const int reps = cfg.replicas;
    ReplicaBlock block;
    block.n = n;
    block.spectra.resize(reps);
    block.delta_p.resize(reps);
    block.sn.n = n;
    block.sn.z = zs;
    if (options.stieltjes) block.sn.values.assign(reps, std::vector<cplx>(zs.size()));

    auto sample = [&](int r) {
      WignerSpec spec = base;
      spec.seed = replica_seed(cfg.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r));
      return sample_wigner(spec);
    };

    parallel_for(static_cast<std::size_t>(reps), cfg.workers, [&](std::size_t k) {
      const int r = static_cast<int>(k);
      try {
        Spectrum s = eigenvalues(sample(r));
        block.delta_p[k] = kolmogorov_distance(esd(s), law);
        if (options.stieltjes) {
          for (std::size_t q = 0; q < zs.size(); ++q) {
            block.sn.values[k][q] = empirical_stieltjes(s, zs[q]);
          }
        }
        block.spectra[k] = std::move(s);
      } catch (const std::exception& e) {
        throw ReplicaError(n, r, e.what());
      }
    });

    if (options.diagnostics) {
      std::vector<cplx> es(zs.size());
      if (options.plugin_es || !options.stieltjes) {
        for (std::size_t q = 0; q < zs.size(); ++q) es[q] = sc_stieltjes(zs[q]);
      } else {
        es = block.sn.mean();
      }
      struct Partial {
        long exceed = 0, beta_viol = 0, xi_viol = 0;
        double gamma4 = 0.0, eps4 = 0.0;
      };
      std::vector<std::vector<Partial>> partial(reps, std::vector<Partial>(zs.size()));
      parallel_for(static_cast<std::size_t>(reps), cfg.workers, [&](std::size_t k) {
        const int r = static_cast<int>(k);
        try {
          const SpectralResolvent res(sample(r));
          for (std::size_t q = 0; q < zs.size(); ++q) {
            const double inv_v = 1.0 / zs[q].v();
            Partial& p = partial[k][q];
            for (const auto& d : res.all_indices(zs[q], es[q])) {
              if (std::abs(d.beta) > 2.0) ++p.exceed;
              if (std::abs(d.beta) > inv_v * (1.0 + 1e-12)) ++p.beta_viol;
              if (std::abs(d.xi) > inv_v * (1.0 + 1e-12)) ++p.xi_viol;
              p.gamma4 += std::pow(std::norm(d.gamma), 2);
              p.eps4 += std::pow(std::norm(d.eps), 2);
            }
          }
        } catch (const std::exception& e) {
          throw ReplicaError(n, r, e.what());
        }
      });
      for (std::size_t q = 0; q < zs.size(); ++q) {
        DiagnosticSummary d;
        d.z = zs[q];
        d.es_n_estimate = es[q];
        d.beta.n = n;
        d.beta.v = zs[q].v();
        d.beta.replicas = reps;
        for (int r = 0; r < reps; ++r) {
          const Partial& p = partial[r][q];
          d.beta.exceed += p.exceed;
          d.beta_bound_violations += p.beta_viol;
          d.xi_bound_violations += p.xi_viol;
          d.mean_gamma4 += p.gamma4;
          d.mean_eps4 += p.eps4;
        }
        d.beta.total = static_cast<long>(reps) * n;
        d.mean_gamma4 /= static_cast<double>(d.beta.total);
        d.mean_eps4 /= static_cast<double>(d.beta.total);
        block.diagnostics.push_back(d);
      }
    }
    if (!options.keep_spectra) block.spectra.clear();
    out.blocks.push_back(std::move(block));
  }
  return out;
}

double RateSummary::sqrt_n_times_median() const {
  return std::sqrt(static_cast<double>(n)) * median;
}

namespace {

// Linear interpolation between order statistics.
double quantile_sorted(const std::vector<double>& x, double p) {
  if (x.empty()) return 0.0;
  const double pos = p * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

}  // namespace

RateSummary summarize_deltas(int n, std::vector<double> deltas) {
  if (deltas.empty()) throw std::invalid_argument("no distances to summarize");
  std::sort(deltas.begin(), deltas.end());
  RateSummary s;
  s.n = n;
  s.median = quantile_sorted(deltas, 0.5);
  s.q25 = quantile_sorted(deltas, 0.25);
  s.q75 = quantile_sorted(deltas, 0.75);
  double acc = 0.0;
  for (double d : deltas) acc += d;
  s.mean = acc / static_cast<double>(deltas.size());
  return s;
}

double RateFit::witness_spread() const {
  if (sqrt_n_median.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(sqrt_n_median.begin(), sqrt_n_median.end());
  return *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
}

RateFit rate_fit(std::span<const RateSummary> points) {
  if (points.size() < 3) throw std::invalid_argument("rate fit needs at least three dimensions");
  RateFit fit;
  fit.per_n.assign(points.begin(), points.end());
  const double m = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    if (!(p.median > 0.0)) throw std::invalid_argument("medians must be positive for a log fit");
    xs.push_back(std::log(static_cast<double>(p.n)));
    ys.push_back(std::log(p.median));
    sx += xs.back();
    sy += ys.back();
    fit.sqrt_n_median.push_back(p.sqrt_n_times_median());
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (sxx == 0.0) {
    fit.degenerate = true;
    fit.slope = 0.0;
    fit.intercept = my;
    fit.slope_se = std::numeric_limits<double>::infinity();
    fit.r_squared = 0.0;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double e = ys[k] - (fit.intercept + fit.slope * xs[k]);
    ss_res += e * e;
  }
  fit.slope_se = std::sqrt(ss_res / (m - 2.0) / sxx);
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

double delta_n_estimate(std::span<const Spectrum> spectra, const SemicircleLaw& law) {
  return kolmogorov_distance(mean_esd(spectra), law);
}

}  // namespace wigner
