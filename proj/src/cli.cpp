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

#include "wigner/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>

#include <CLI11.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "wigner/bounds.hpp"
#include "wigner/export.hpp"
#include "wigner/harness.hpp"
#include "wigner/law.hpp"
#include "wigner/resolvent.hpp"

namespace wigner {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir;
  std::string format = "csv";
};

// Defaults applied when no config file is given.
RunConfig defaults_for(const std::string& command) {
  RunConfig c;
  if (command == "simulate") {
    c.n_grid = {64};
    c.replicas = 4;
  } else if (command == "rate") {
    c.n_grid = {128, 256, 512, 1024};
    c.replicas = 100;
  } else if (command == "variance") {
    c.n_grid = {256, 512};
    c.replicas = 500;
  } else if (command == "bai") {
    c.n_grid = {256};
    c.replicas = 20;
  } else if (command == "diag") {
    c.n_grid = {64, 128};
    c.replicas = 100;
    c.z_grid = {{0.0, 0.25}, {0.0, 0.5}, {1.9, 0.25}, {1.9, 0.5}};
  }
  return c;
}

class Command {
 public:
  Command(const GlobalOptions& g, std::ostream& out, std::ostream& err)
      : g_(g), out_(out), err_(err) {}

  RunConfig config(const std::string& command) const {
    RunConfig c = g_.config.empty() ? defaults_for(command) : RunConfig::load(g_.config);
    if (g_.seed) c.seed = *g_.seed;
    if (g_.workers) c.workers = *g_.workers;
    if (!g_.out_dir.empty()) c.output_dir = g_.out_dir;
    c.validate();
    return c;
  }

  Format format() const { return parse_format(g_.format); }

  std::string path(const RunConfig& c, const std::string& stem) const {
    fs::create_directories(c.output_dir);
    return (fs::path(c.output_dir) / (stem + (format() == Format::json ? ".json" : ".csv"))).string();
  }

  void write(const RunConfig& c, Table t, const std::string& stem) const {
    auto meta = run_metadata(c.hash(), c.seed);
    t.metadata.insert(t.metadata.begin(), meta.begin(), meta.end());
    write_table(t, path(c, stem), format());
  }

  void write(const RunConfig& c, const BoundReport& r, const std::string& stem) const {
    export_report(r, path(c, stem), format(), run_metadata(c.hash(), c.seed));
  }

  std::ostream& out() const { return out_; }
  std::ostream& err() const { return err_; }

 private:
  const GlobalOptions& g_;
  std::ostream& out_;
  std::ostream& err_;
};

std::string slug(const std::string& label) {
  std::string s;
  for (char ch : label) s += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
  return s;
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

int cmd_simulate(const Command& cmd) {
  const RunConfig c = cmd.config("simulate");
  RunOptions opt;
  opt.stieltjes = false;
  for (const auto& e : c.ensembles) {
    const ReplicaSet set = run_replicas(c, e, opt);
    for (const auto& b : set.blocks) {
      for (std::size_t r = 0; r < b.spectra.size(); ++r) {
        cmd.write(c, spectrum_table(b.spectra[r]),
                  "spectrum_" + slug(e.label()) + "_n" + std::to_string(b.n) + "_r" + std::to_string(r));
      }
      const RateSummary s = summarize_deltas(b.n, b.delta_p);
      cmd.out() << e.label() << " n=" << b.n << " replicas=" << b.spectra.size()
                << " median_delta_p=" << s.median << '\n';
    }
  }
  return 0;
}

int cmd_rate(const Command& cmd) {
  const RunConfig c = cmd.config("rate");
  if (c.n_grid.size() < 3) throw ConfigError("rate needs at least three dimensions in n_grid");
  RunOptions opt;
  opt.stieltjes = false;
  bool all_pass = true;
  const SemicircleLaw law(1.0);
  for (const auto& e : c.ensembles) {
    const ReplicaSet set = run_replicas(c, e, opt);
    std::vector<RateSummary> pts;
    for (const auto& b : set.blocks) pts.push_back(summarize_deltas(b.n, b.delta_p));
    const RateFit fit = rate_fit(pts);
    const bool hypotheses = set.ensemble.spec(c.n_grid.front(), 0).offdiag.finite_sixth_moment();
    const bool pass = fit.slope <= -0.45 && fit.witness_spread() <= 3.0;

    cmd.out() << "ensemble " << e.label() << '\n';
    cmd.out() << "  n      median    q25       q75       sqrt(n)*median  delta_n\n";
    for (std::size_t k = 0; k < set.blocks.size(); ++k) {
      const auto& p = fit.per_n[k];
      cmd.out() << "  " << std::setw(6) << p.n << ' ' << std::setw(9) << p.median << ' '
                << std::setw(9) << p.q25 << ' ' << std::setw(9) << p.q75 << ' ' << std::setw(14)
                << p.sqrt_n_times_median() << "  " << delta_n_estimate(set.blocks[k].spectra, law)
                << '\n';
    }
    cmd.out() << "  slope=" << fit.slope << " (se " << fit.slope_se << ") witness max/min="
              << fit.witness_spread();
    if (hypotheses) {
      cmd.out() << "  " << verdict(pass) << '\n';
      all_pass = all_pass && pass;
    } else {
      cmd.out() << "  FLAGGED (infinite sixth moment: outside the moment hypothesis)\n";
    }
    cmd.write(c, rate_table(fit), "rate_" + slug(e.label()));
  }
  return all_pass ? 0 : 1;
}

int cmd_variance(const Command& cmd) {
  const RunConfig c = cmd.config("variance");
  StabilityPolicy policy;
  policy.c0 = c.c0;
  RunOptions opt;
  opt.keep_spectra = false;
  bool all_pass = true;
  for (const auto& e : c.ensembles) {
    const ReplicaSet set = run_replicas(c, e, opt);
    struct Kind {
      std::string check;
      std::vector<BoundReport> reports;
    };
    std::vector<Kind> kinds;
    if (c.wants("variance")) kinds.push_back({"variance", {}});
    if (c.wants("moment1")) kinds.push_back({"moment1", {}});
    if (c.wants("moment2")) kinds.push_back({"moment2", {}});
    for (const auto& b : set.blocks) {
      for (auto& k : kinds) {
        BoundReport r = k.check == "variance" ? variance_bound_check(b.sn, policy)
                        : k.check == "moment1" ? moment_bound_check(b.sn, 1, policy)
                                               : moment_bound_check(b.sn, 2, policy);
        cmd.out() << e.label() << ' ' << r.name << " n=" << b.n
                  << " max=" << r.metrics["max_ratio"] << " median=" << r.metrics["median_ratio"]
                  << ' ' << verdict(r.pass) << '\n';
        for (const auto& f : r.flags) cmd.out() << "  flag: " << f << '\n';
        all_pass = all_pass && r.pass;
        cmd.write(c, r, r.name + "_" + slug(e.label()) + "_n" + std::to_string(b.n));
        k.reports.push_back(std::move(r));
      }
    }
    for (const auto& k : kinds) {
      for (std::size_t i = 1; i < k.reports.size(); ++i) {
        const BoundReport r = compare_across_n(k.reports[i - 1], k.reports[i], policy.across_n_factor,
                                               policy.across_n_two_sided);
        cmd.out() << e.label() << ' ' << r.name << " drift=" << r.metrics.at("drift") << ' '
                  << verdict(r.pass) << '\n';
        all_pass = all_pass && r.pass;
      }
    }
  }
  return all_pass ? 0 : 1;
}

int cmd_bai(const Command& cmd) {
  const RunConfig c = cmd.config("bai");
  const int n = c.n_grid.front();
  RunConfig one = c;
  one.n_grid = {n};
  const BaiConstants k =
      validate_constants(c.bai.A, c.bai.B, c.bai.eps, c.bai_v_scale / std::sqrt(static_cast<double>(n)));
  RunOptions opt;
  opt.stieltjes = false;
  bool all_pass = true;
  const SemicircleLaw law(1.0);
  for (const auto& e : c.ensembles) {
    const ReplicaSet set = run_replicas(one, e, opt);
    BoundReport summary;
    summary.name = "bai_inequality";
    summary.constants = {{"A", k.A}, {"B", k.B}, {"eps", k.eps}, {"v", k.v},
                         {"rho", k.rho}, {"zeta", k.zeta}, {"n", static_cast<double>(n)}};
    const auto& spectra = set.blocks.front().spectra;
    for (std::size_t r = 0; r < spectra.size(); ++r) {
      const BoundReport rep = bai_rhs(esd(spectra[r]), law, k);
      summary.add({n, static_cast<double>(r), k.v}, rep.lhs.front(), rep.rhs.front());
    }
    double worst = 0.0;
    for (std::size_t r = 0; r < summary.lhs.size(); ++r) {
      worst = std::max(worst, summary.lhs[r] / summary.rhs[r]);
    }
    summary.metrics["max_lhs_over_rhs"] = worst;
    cmd.out() << e.label() << " bai inequality n=" << n << " v=" << k.v << " samples="
              << spectra.size() << " max lhs/rhs=" << worst << ' ' << verdict(summary.pass) << '\n';
    all_pass = all_pass && summary.pass;
    cmd.write(c, summary, "bai_" + slug(e.label()));
  }
  return all_pass ? 0 : 1;
}

int cmd_diag(const Command& cmd) {
  const RunConfig c = cmd.config("diag");
  RunOptions opt;
  opt.keep_spectra = false;
  opt.diagnostics = true;
  bool all_pass = true;
  for (const auto& e : c.ensembles) {
    const ReplicaSet set = run_replicas(c, e, opt);
    std::vector<BetaTally> cells;
    long bound_violations = 0;
    for (const auto& b : set.blocks) {
      std::vector<UpperHalfPoint> zs;
      std::vector<cplx> es;
      for (const auto& d : b.diagnostics) {
        cells.push_back(d.beta);
        bound_violations += d.beta_bound_violations + d.xi_bound_violations;
        zs.push_back(d.z);
        es.push_back(d.es_n_estimate);
        cmd.out() << e.label() << " n=" << b.n << " z=" << d.z.u() << "+" << d.z.v()
                  << "i  P(|beta|>2)=" << d.beta.frequency() << " scaled=" << d.beta.scaled()
                  << " E|gamma|^4*v^2/n^2=" << d.mean_gamma4 * d.z.v() * d.z.v() / (b.n * double(b.n))
                  << " E|eps|^4*n^2*v^2=" << d.mean_eps4 * b.n * double(b.n) * d.z.v() * d.z.v()
                  << '\n';
      }
      // Monte Carlo E s_n: reported, not asserted.
      const BoundReport anbn = an_bn_check(zs, es, 1e-12);
      for (const auto& f : anbn.flags) cmd.out() << "  flag: " << f << '\n';
      cmd.out() << "  a_n/b_n inequalities with replica-mean E s_n: "
                << (anbn.pass ? "hold" : "violated (reported only)") << '\n';
      cmd.write(c, anbn, "an_bn_" + slug(e.label()) + "_n" + std::to_string(b.n));

      // Per-index table for the first replica at the first grid point.
      WignerSpec spec = e.spec(b.n, replica_seed(c.seed, static_cast<std::uint64_t>(b.n), 0));
      const SpectralResolvent res(sample_wigner(spec));
      const auto rows = res.all_indices(b.diagnostics.front().z, b.diagnostics.front().es_n_estimate);
      cmd.write(c, diagnostics_table(rows, b.n),
                "leave_one_out_" + slug(e.label()) + "_n" + std::to_string(b.n));
    }
    const BoundReport beta = beta_exceedance_check(cells, 4.0, c.c0);
    for (const auto& f : beta.flags) cmd.out() << "  flag: " << f << '\n';
    cmd.out() << e.label() << " beta exceedance drift=" << beta.metrics.at("drift")
              << " |beta|,|xi| <= 1/v violations=" << bound_violations << ' '
              << verdict(beta.pass && bound_violations == 0) << '\n';
    all_pass = all_pass && beta.pass && bound_violations == 0;
    cmd.write(c, beta, "beta_exceedance_" + slug(e.label()));
  }
  return all_pass ? 0 : 1;
}

int cmd_lawcheck(const Command& cmd) {
  const RunConfig c = cmd.config("lawcheck");
  const double value = integral_bound_value();
  const bool integral_ok = value < 10.0;
  cmd.out() << std::setprecision(10);
  cmd.out() << "integral of 1/sqrt|u^2-4| over [-16,16] = " << value << "  " << verdict(integral_ok)
            << " (< 10)\n";

  boost::math::quadrature::tanh_sinh<double> rule;
  const SemicircleLaw law(1.0);
  double cdf_err = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double x = -2.0 + 4.0 * (k + 0.5) / 1000.0;
    const double q = rule.integrate([&](double t) { return law.pdf(t); }, -2.0, x, 1e-15);
    cdf_err = std::max(cdf_err, std::abs(q - law.cdf(x)));
  }
  const bool cdf_ok = cdf_err <= 1e-10;
  cmd.out() << "max |cdf - quadrature of pdf| = " << cdf_err << "  " << verdict(cdf_ok) << '\n';

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ud(-5.0, 5.0), vd(1e-6, 5.0);
  double residual = 0.0;
  bool branch_ok = true;
  for (int k = 0; k < 10000; ++k) {
    const UpperHalfPoint z(ud(rng), vd(rng));
    const cplx s = sc_stieltjes(z);
    residual = std::max(residual, std::abs(s * s + z.z() * s + 1.0));
    branch_ok = branch_ok && s.imag() > 0.0 && std::abs(s) <= 1.0 + 1e-15;
  }
  const bool st_ok = residual <= 1e-12 && branch_ok;
  cmd.out() << "max |s^2 + z s + 1| = " << residual << ", Im s > 0 and |s| <= 1: "
            << (branch_ok ? "yes" : "no") << "  " << verdict(st_ok) << '\n';
  cmd.write(c, law_table(law, 401), "law_curve");
  return integral_ok && cdf_ok && st_ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wigner matrix spectral convergence experiments", "wigner"};
  GlobalOptions g;
  std::uint64_t seed = 0;
  int workers = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Master seed");
  auto* workers_opt = app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--config", g.config, "JSON run configuration");
  app.add_option("--out", g.out_dir, "Output directory");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.require_subcommand(1);
  app.fallthrough();

  auto* simulate = app.add_subcommand("simulate", "Sample matrices and dump spectra");
  auto* rate = app.add_subcommand("rate", "Kolmogorov distance rate experiment");
  auto* variance = app.add_subcommand("variance", "Variance and moment bound checks");
  auto* bai = app.add_subcommand("bai", "Smoothing inequality report");
  auto* diag = app.add_subcommand("diag", "Leave-one-out tables and beta exceedance");
  auto* lawcheck = app.add_subcommand("lawcheck", "Semicircle law self-checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  if (*seed_opt) g.seed = seed;
  if (*workers_opt) g.workers = workers;

  const Command cmd(g, out, err);
  try {
    if (simulate->parsed()) return cmd_simulate(cmd);
    if (rate->parsed()) return cmd_rate(cmd);
    if (variance->parsed()) return cmd_variance(cmd);
    if (bai->parsed()) return cmd_bai(cmd);
    if (diag->parsed()) return cmd_diag(cmd);
    if (lawcheck->parsed()) return cmd_lawcheck(cmd);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << app.help();
  return 2;
}

}  // namespace wigner
