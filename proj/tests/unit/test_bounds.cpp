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
#include <limits>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wigner/bounds.hpp"
#include "wigner/ensemble.hpp"
#include "wigner/resolvent.hpp"
#include "wigner/spectra.hpp"

using namespace wigner;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_a^b |F - G| by Gauss-Kronrod between consecutive breakpoints.
double l1_numeric(const StepCdf& f, const SemicircleLaw& g, double a, double b) {
  std::vector<double> cuts{a, b, -2 * g.sigma(), 2 * g.sigma()};
  for (double p : f.points) cuts.push_back(p);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = std::max(a, cuts[k]), hi = std::min(b, cuts[k + 1]);
    if (hi <= lo) continue;
    const double level = esd_eval(f, 0.5 * (lo + hi));
    // G - level changes sign at most once inside the piece.
    const double c = std::clamp(g.quantile(std::clamp(level, 0.0, 1.0)), lo, hi);
    auto h = [&](double x) { return std::abs(level - g.cdf(x)); };
    using Q = boost::math::quadrature::gauss_kronrod<double, 61>;
    total += Q::integrate(h, lo, c, 15, 1e-13) + Q::integrate(h, c, hi, 15, 1e-13);
  }
  return total;
}

SnSamples constant_samples(int n, int reps, std::vector<UpperHalfPoint> z) {
  SnSamples s;
  s.n = n;
  s.z = z;
  s.values.assign(reps, std::vector<cplx>(z.size(), cplx(0.1, 0.2)));
  return s;
}

BetaTally cell(int n, double v, long exceed, long total, int reps = 100) {
  BetaTally t;
  t.n = n;
  t.v = v;
  t.exceed = exceed;
  t.total = total;
  t.replicas = reps;
  return t;
}

}  // namespace

TEST_CASE("constant validation") {
  const auto c = validate_constants(16, 3, 2, 0.1);
  CHECK(c.rho == doctest::Approx(0.7048).epsilon(1e-4));
  CHECK(c.zeta == doctest::Approx(0.717).epsilon(1e-3));
  CHECK(c.prefactor() == doctest::Approx(1.0 / (M_PI * (1 - c.zeta) * (2 * c.rho - 1))));
  CHECK_THROWS_WITH_AS(validate_constants(16, 4, 2, 0.1), doctest::Contains("0 < zeta < 1"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(validate_constants(16, 3, 1, 0.1), doctest::Contains("rho > 1/2"),
                       std::invalid_argument);
  CHECK_THROWS_WITH(validate_constants(3, 3, 2, 0.1), doctest::Contains("A > B"));
  CHECK_THROWS_WITH(validate_constants(16, 3, 2, 0.0), doctest::Contains("v > 0"));
  CHECK_THROWS_WITH(validate_constants(16, 0, 2, 0.1), doctest::Contains("B > 0"));
}

TEST_CASE("zeta just above one is rejected") {
  const double rho = 2 / M_PI * std::atan(2.0);
  const double zeta = 16.0 / (M_PI * 12.0 * (2 * rho - 1));
  CHECK(zeta == doctest::Approx(1.036).epsilon(1e-3));
}

TEST_CASE("L1 distance of a point mass") {
  const SemicircleLaw g;
  const auto f = step_cdf_from_values({0.0});
  CHECK(l1_distance(f, g, -kInf, kInf) == doctest::Approx(8.0 / (3.0 * M_PI)).epsilon(1e-12));
  CHECK(l1_distance(f, g, 0.0, kInf) == doctest::Approx(4.0 / (3.0 * M_PI)).epsilon(1e-12));
  CHECK(l1_distance(f, g, 3.0, kInf) == 0.0);
  CHECK(l1_distance(f, g, 1.0, 1.0) == 0.0);
  CHECK(l1_distance(step_cdf_from_values({5.0}), g, 3.0, kInf) == doctest::Approx(2.0));
}

TEST_CASE("L1 distance matches quadrature") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> x(0.0, 1.5);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> v(15);
    for (double& e : v) e = x(rng);
    const auto f = step_cdf_from_values(v);
    const SemicircleLaw g(t % 2 ? 1.0 : 0.8);
    for (auto [a, b] : {std::pair{-10.0, 10.0}, std::pair{-1.0, 0.5}, std::pair{2.5, 9.0}}) {
      CHECK(l1_distance(f, g, a, b) == doctest::Approx(l1_numeric(f, g, a, b)).epsilon(1e-9).scale(1e-12));
    }
  }
}

TEST_CASE("smoothness supremum bounds a dense search") {
  const SemicircleLaw g;
  for (double h : {0.05, 0.5, 1.0}) {
    double brute = 0.0;
    for (int k = 0; k <= 200000; ++k) {
      const double x = -3.5 + 7.0 * k / 200000;
      brute = std::max(brute, g.cdf_integral(x + h) + g.cdf_integral(x - h) - 2 * g.cdf_integral(x));
    }
    const double step = 0.01;
    const double s = smoothness_sup(g, h, step);
    CHECK(s >= brute);
    CHECK(s <= brute + step);
  }
  CHECK_THROWS_AS(smoothness_sup(g, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("step Stieltjes transform") {
  const Spectrum sp{{-1.0, 0.2, 0.2, 1.5}, 0};
  const UpperHalfPoint z(0.1, 0.3);
  CHECK(std::abs(step_stieltjes(esd(sp), z) - empirical_stieltjes(sp, z)) <= 1e-14);
}

TEST_CASE("Bai inequality with a point mass") {
  const SemicircleLaw g;
  const auto c = validate_constants(16, 3, 2, 0.05);
  const auto r = bai_rhs(step_cdf_from_values({0.0}), g, c);
  REQUIRE(r.lhs.size() == 1);
  CHECK(r.lhs[0] == doctest::Approx(0.5));
  CHECK(r.rhs[0] >= 0.5);
  CHECK(r.pass);
  CHECK(r.metrics.at("term_stieltjes") > 0.0);
  CHECK(r.metrics.at("quadrature_error") < 1e-6);
}

TEST_CASE("Bai inequality on a Wigner sample") {
  const int n = 256;
  const auto m = sample_wigner(make_wigner_spec(n, make_distribution(DistKind::gaussian), 1.0, 5, false));
  const auto f = esd(eigenvalues(m));
  const auto r = bai_rhs(f, SemicircleLaw(), validate_constants(16, 3, 2, 2.0 / std::sqrt(double(n))));
  CHECK(r.pass);
  CHECK(r.lhs[0] == doctest::Approx(kolmogorov_distance(f, SemicircleLaw())));
}

TEST_CASE("variance check with identical replicas") {
  const auto s = constant_samples(64, 60, {{0.0, 0.5}, {1.0, 1.0}});
  const auto r = variance_bound_check(s);
  CHECK(r.pass);
  for (double x : r.lhs) CHECK(x == 0.0);
  CHECK(r.metrics.at("max_ratio") == 0.0);
  const auto m = moment_bound_check(s, 2);
  CHECK(m.pass);
  CHECK(m.metrics.at("max_ratio") == 0.0);
}

TEST_CASE("variance check arithmetic") {
  const int n = 100;
  const std::vector<UpperHalfPoint> z{{0.0, 10.0}, {0.5, 0.5}};
  SnSamples s = constant_samples(n, 60, z);
  for (std::size_t r = 0; r < s.values.size(); ++r) {
    const double sign = r % 2 ? 1.0 : -1.0;
    s.values[r][0] += cplx(0.0, sign * 0.01);
    s.values[r][1] += cplx(sign * 0.03, 0.0);
  }
  const auto rep = variance_bound_check(s);
  const double reps = 60.0;
  for (std::size_t k = 0; k < 2; ++k) {
    const double a = k == 0 ? 0.01 : 0.03;
    const cplx w = z[k].z() + 2.0 * sc_stieltjes(z[k]);
    CHECK(rep.lhs[k] == doctest::Approx(a * a * reps / (reps - 1) * n * std::norm(w)));
  }
  CHECK(std::isfinite(rep.lhs[0]));
  const auto m1 = moment_bound_check(s, 1);
  CHECK(m1.lhs[1] == doctest::Approx(0.03 * 0.03 * std::pow(n, 2.0) * std::pow(0.5, 3.0)));
  const auto m2 = moment_bound_check(s, 2);
  CHECK(m2.lhs[1] == doctest::Approx(std::pow(0.03, 4.0) * std::pow(n, 4.0) * std::pow(0.5, 6.0)));
  CHECK_THROWS_AS(moment_bound_check(s, 3), std::invalid_argument);
}

TEST_CASE("within-grid stability and regime flags") {
  SnSamples s = constant_samples(64, 60, {{0.0, 0.1}, {0.0, 0.5}, {0.0, 1.0}});
  for (std::size_t r = 0; r < s.values.size(); ++r) {
    const double sign = r % 2 ? 1.0 : -1.0;
    s.values[r][0] += sign * 1.0;
    s.values[r][1] += sign * 0.001;
    s.values[r][2] += sign * 0.001;
  }
  const auto rep = variance_bound_check(s);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.flags.size() == 1);
  CHECK(rep.flags[0].find("out_of_regime") != std::string::npos);
}

TEST_CASE("too few replicas are rejected") {
  const auto s = constant_samples(64, 49, {{0.0, 1.0}});
  CHECK_THROWS_AS(variance_bound_check(s), std::invalid_argument);
  CHECK_THROWS_AS(moment_bound_check(s, 1), std::invalid_argument);
}

TEST_CASE("cross-dimension comparison") {
  BoundReport a, b;
  a.grid.push_back({256, 0, 0});
  b.grid.push_back({512, 0, 0});
  a.metrics["max_ratio"] = 1.0;
  b.metrics["max_ratio"] = 0.4;
  CHECK_FALSE(compare_across_n(a, b, 2.0, true).pass);
  CHECK(compare_across_n(a, b, 2.0, false).pass);
  b.metrics["max_ratio"] = 2.5;
  CHECK_FALSE(compare_across_n(a, b, 2.0, false).pass);
  b.metrics["max_ratio"] = 1.9;
  const auto r = compare_across_n(a, b, 2.0, true);
  CHECK(r.pass);
  CHECK(r.metrics.at("drift") == doctest::Approx(1.9));
}

TEST_CASE("beta tally") {
  std::vector<LeaveOneOutDiag> d(4);
  for (auto& x : d) x.z = UpperHalfPoint(0.0, 0.25);
  d[1].beta = cplx(0.0, 3.0);
  d[2].beta = cplx(1.0, 1.0);
  const auto t = tally_beta(d, 8, 100);
  CHECK(t.exceed == 1);
  CHECK(t.total == 4);
  CHECK(t.frequency() == 0.25);
  CHECK(t.scaled() == doctest::Approx(0.25 * 64 * 0.0625));
  CHECK_THROWS_AS(tally_beta(std::vector<LeaveOneOutDiag>{}, 8, 1), std::invalid_argument);
}

TEST_CASE("beta exceedance stability") {
  // all zero: pass with unit drift
  std::vector<BetaTally> zero{cell(64, 0.25, 0, 6400), cell(128, 0.25, 0, 12800), cell(64, 0.5, 0, 6400)};
  auto r = beta_exceedance_check(zero);
  CHECK(r.pass);
  CHECK(r.metrics.at("drift") == 1.0);

  // exceedance where |beta| <= 1/v <= 2 forbids it
  auto forced = zero;
  forced[2].exceed = 1;
  r = beta_exceedance_check(forced);
  CHECK_FALSE(r.pass);
  CHECK(r.metrics.at("forced_zero_violations") == 1.0);

  // drift within and beyond the factor
  std::vector<BetaTally> mild{cell(64, 0.25, 10, 6400), cell(128, 0.25, 10, 12800)};
  r = beta_exceedance_check(mild);
  CHECK(r.metrics.at("drift") == doctest::Approx(2.0));
  CHECK(r.pass);
  mild[1].exceed = 1;
  r = beta_exceedance_check(mild);
  CHECK(r.metrics.at("drift") == doctest::Approx(5.0));
  CHECK_FALSE(r.pass);

  // below v0 the cell is flagged and excluded
  std::vector<BetaTally> low{cell(16, 0.1, 50, 1600), cell(64, 0.25, 10, 6400)};
  r = beta_exceedance_check(low);
  CHECK(r.pass);
  CHECK(r.flags.size() == 1);
  CHECK(std::isinf(r.rhs[0]));

  std::vector<BetaTally> few{cell(64, 0.25, 0, 6400, 99)};
  CHECK_THROWS_AS(beta_exceedance_check(few), std::invalid_argument);
  CHECK_THROWS_AS(beta_exceedance_check(std::vector<BetaTally>{}), std::invalid_argument);
}

TEST_CASE("a_n and b_n inequalities with the analytic transform") {
  std::vector<UpperHalfPoint> z;
  std::vector<cplx> es;
  for (double u : {-3.0, -1.9, 0.0, 1.0, 2.2})
    for (double v : {0.01, 0.3, 2.0}) {
      z.emplace_back(u, v);
      es.push_back(sc_stieltjes(z.back()));
    }
  const auto r = an_bn_check(z, es);
  CHECK(r.pass);
  CHECK(r.flags.empty());
  // |1 - a^2| = |a (z + 2s)| holds with equality for a = -s
  for (std::size_t k = 0; k < r.lhs.size(); k += 2) CHECK(r.lhs[k] == doctest::Approx(r.rhs[k]).epsilon(1e-10));

  const std::vector<UpperHalfPoint> z1{{0.0, 0.1}};
  const std::vector<cplx> bad{0.0};
  const auto rb = an_bn_check(z1, bad);
  CHECK(rb.flags.size() == 1);
  CHECK_THROWS_AS(an_bn_check(z1, es), std::invalid_argument);
}

TEST_CASE("median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(median({}) == 0.0);
}
