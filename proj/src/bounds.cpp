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

#include "wigner/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace wigner {

namespace {

constexpr double kPi = std::numbers::pi;

// int_p^q |c - G(x)| dx for constant c on a piece.
double piece_l1(const SemicircleLaw& g, double c, double p, double q) {
  if (q <= p) return 0.0;
  const double gp = g.cdf(p);
  const double gq = g.cdf(q);
  auto above = [&](double lo, double hi) {  // int (G - c)
    return g.cdf_integral(hi) - g.cdf_integral(lo) - c * (hi - lo);
  };
  auto below = [&](double lo, double hi) {  // int (c - G)
    return c * (hi - lo) - (g.cdf_integral(hi) - g.cdf_integral(lo));
  };
  if (gp >= c) return above(p, q);
  if (gq <= c) return below(p, q);
  const double cross = std::clamp(g.quantile(c), p, q);
  return below(p, cross) + above(cross, q);
}

void require_samples(const SnSamples& s, const StabilityPolicy& policy) {
  if (static_cast<int>(s.values.size()) < policy.min_replicas) {
    throw std::invalid_argument("need at least " + std::to_string(policy.min_replicas) +
                                " replicas for a stable moment estimate, got " +
                                std::to_string(s.values.size()));
  }
  for (const auto& row : s.values) {
    if (row.size() != s.z.size()) throw std::invalid_argument("sample row has wrong length");
  }
}

void finish_stability(BoundReport& r, std::vector<double> ratios, double factor) {
  const double med = median(ratios);
  double mx = 0.0;
  for (double x : ratios) mx = std::max(mx, x);
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    r.lhs[k] = ratios[k];
    r.rhs[k] = factor * med;
  }
  r.pass = true;
  for (std::size_t k = 0; k < ratios.size(); ++k) r.pass = r.pass && r.lhs[k] <= r.rhs[k];
  r.metrics["max_ratio"] = mx;
  r.metrics["median_ratio"] = med;
}

void flag_regime(BoundReport& r, const SnSamples& s, double c0) {
  const double v0 = c0 / std::sqrt(static_cast<double>(s.n));
  for (const auto& z : s.z) {
    if (z.v() < v0) {
      r.flags.push_back("out_of_regime: v=" + std::to_string(z.v()) + " < v0=" +
                        std::to_string(v0));
    }
  }
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

double BaiConstants::prefactor() const { return 1.0 / (kPi * (1.0 - zeta) * (2.0 * rho - 1.0)); }

BaiConstants validate_constants(double A, double B, double eps, double v) {
  if (!(B > 0.0)) throw std::invalid_argument("constraint B > 0 violated");
  if (!(A > B)) throw std::invalid_argument("constraint A > B violated");
  if (!(v > 0.0)) throw std::invalid_argument("constraint v > 0 violated");
  if (!(eps > 0.0)) throw std::invalid_argument("constraint eps > 0 violated");
  BaiConstants c{A, B, eps, v, 0.0, 0.0};
  c.rho = 2.0 / kPi * std::atan(eps);
  if (!(c.rho > 0.5)) {
    throw std::invalid_argument("constraint rho > 1/2 violated (rho = " + std::to_string(c.rho) +
                                ")");
  }
  c.zeta = 4.0 * B / (kPi * (A - B) * (2.0 * c.rho - 1.0));
  if (!(c.zeta > 0.0 && c.zeta < 1.0)) {
    throw std::invalid_argument("constraint 0 < zeta < 1 violated (zeta = " +
                                std::to_string(c.zeta) + ")");
  }
  return c;
}

void BoundReport::add(Cell cell, double l, double r) {
  grid.push_back(cell);
  lhs.push_back(l);
  rhs.push_back(r);
  pass = pass && l <= r;
}

double l1_distance(const StepCdf& f, const SemicircleLaw& g, double a, double b) {
  if (!(a < b)) return 0.0;
  // Outside [lo, hi] both F and G are 0 (left) or 1 (right).
  double lo = -2.0 * g.sigma();
  double hi = 2.0 * g.sigma();
  if (!f.points.empty()) {
    lo = std::min(lo, f.points.front());
    hi = std::max(hi, f.points.back());
  }
  a = std::max(a, lo);
  b = std::min(b, hi);
  if (!(a < b)) return 0.0;

  double total = 0.0;
  double left = a;
  auto it = std::upper_bound(f.points.begin(), f.points.end(), a);
  double level = it == f.points.begin() ? 0.0 : f.cumulative[(it - f.points.begin()) - 1];
  for (; it != f.points.end() && *it < b; ++it) {
    total += piece_l1(g, level, left, *it);
    left = *it;
    level = f.cumulative[it - f.points.begin()];
  }
  total += piece_l1(g, level, left, b);
  return total;
}

double smoothness_sup(const SemicircleLaw& g, double h, double step) {
  if (!(h > 0.0) || !(step > 0.0)) throw std::invalid_argument("h and step must be positive");
  // int_{|u|<=h} |G(x+u) - G(x)| du = H(x+h) + H(x-h) - 2 H(x) for monotone G,
  // with H the antiderivative of G. Its x-derivative is bounded by 1.
  auto phi = [&](double x) {
    return g.cdf_integral(x + h) + g.cdf_integral(x - h) - 2.0 * g.cdf_integral(x);
  };
  const double lo = -2.0 * g.sigma() - h;
  const double hi = 2.0 * g.sigma() + h;
  const long count = static_cast<long>(std::ceil((hi - lo) / step));
  const double dx = (hi - lo) / static_cast<double>(count);
  double sup = 0.0;
  for (long k = 0; k <= count; ++k) sup = std::max(sup, phi(lo + dx * static_cast<double>(k)));
  return sup + 0.5 * dx;
}

cplx step_stieltjes(const StepCdf& f, const UpperHalfPoint& z) {
  const cplx zz = z.z();
  cplx acc = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < f.points.size(); ++k) {
    acc += (f.cumulative[k] - prev) / (f.points[k] - zz);
    prev = f.cumulative[k];
  }
  return acc;
}

BoundReport bai_rhs(const StepCdf& f, const SemicircleLaw& g, const BaiConstants& c) {
  using boost::math::quadrature::gauss_kronrod;
  BoundReport r;
  r.name = "bai_inequality";
  r.constants = {{"A", c.A}, {"B", c.B}, {"eps", c.eps}, {"v", c.v},
                 {"rho", c.rho}, {"zeta", c.zeta}, {"sigma", g.sigma()}};

  auto gap = [&](double u) {
    const UpperHalfPoint z(u, c.v);
    return std::abs(step_stieltjes(f, z) - g.stieltjes(z));
  };
  // Panels of width about v resolve the poles of s_F near the real axis.
  const long panels = std::max<long>(16, static_cast<long>(std::ceil(2.0 * c.A / c.v)));
  const double width = 2.0 * c.A / static_cast<double>(panels);
  double term1 = 0.0;
  double quad_error = 0.0;
  for (long k = 0; k < panels; ++k) {
    const double a = -c.A + width * static_cast<double>(k);
    double err = 0.0;
    term1 += gauss_kronrod<double, 31>::integrate(gap, a, a + width, 8, 1e-12, &err);
    quad_error += err * width;
  }
  if (!std::isfinite(term1)) throw QuadratureError("Stieltjes gap integral is not finite");

  const double tail = l1_distance(f, g, -std::numeric_limits<double>::infinity(), -c.B) +
                      l1_distance(f, g, c.B, std::numeric_limits<double>::infinity());
  const double term2 = 2.0 * kPi / c.v * tail;
  const double term3 = smoothness_sup(g, 2.0 * c.v * c.eps, c.v / 10.0) / c.v;

  const double rhs = c.prefactor() * (term1 + term2 + term3);
  const double lhs = kolmogorov_distance(f, g);
  r.add({0, 0.0, c.v}, lhs, rhs);
  r.metrics = {{"term_stieltjes", term1}, {"term_tail", term2},   {"term_smoothness", term3},
               {"prefactor", c.prefactor()}, {"quadrature_error", quad_error}};
  return r;
}

std::vector<cplx> SnSamples::mean() const {
  std::vector<cplx> m(z.size(), 0.0);
  if (values.empty()) return m;
  // Offsets from the first replica, so identical rows give an exact mean.
  const auto& pivot = values.front();
  for (const auto& row : values) {
    for (std::size_t k = 0; k < z.size(); ++k) m[k] += row[k] - pivot[k];
  }
  for (std::size_t k = 0; k < z.size(); ++k) m[k] = pivot[k] + m[k] / static_cast<double>(values.size());
  return m;
}

BoundReport variance_bound_check(const SnSamples& s, const StabilityPolicy& policy) {
  require_samples(s, policy);
  BoundReport r;
  r.name = "variance_bound";
  r.constants = {{"n", static_cast<double>(s.n)}, {"replicas", static_cast<double>(s.values.size())},
                 {"within_grid_factor", policy.within_grid_factor}, {"c0", policy.c0}};
  const auto mean = s.mean();
  const double reps = static_cast<double>(s.values.size());
  std::vector<double> ratios;
  for (std::size_t k = 0; k < s.z.size(); ++k) {
    double acc = 0.0;
    for (const auto& row : s.values) acc += std::norm(row[k] - mean[k]);
    const double var = acc / (reps - 1.0);
    const cplx zz = s.z[k].z();
    const double scale = static_cast<double>(s.n) * std::norm(zz + 2.0 * sc_stieltjes(s.z[k]));
    ratios.push_back(var * scale);
    r.grid.push_back({s.n, s.z[k].u(), s.z[k].v()});
  }
  r.lhs.resize(ratios.size());
  r.rhs.resize(ratios.size());
  finish_stability(r, ratios, policy.within_grid_factor);
  flag_regime(r, s, policy.c0);
  return r;
}

BoundReport moment_bound_check(const SnSamples& s, int l, const StabilityPolicy& policy) {
  if (l != 1 && l != 2) throw std::invalid_argument("moment order l must be 1 or 2");
  require_samples(s, policy);
  BoundReport r;
  r.name = "moment_bound_l" + std::to_string(l);
  r.constants = {{"n", static_cast<double>(s.n)}, {"l", static_cast<double>(l)},
                 {"replicas", static_cast<double>(s.values.size())},
                 {"within_grid_factor", policy.within_grid_factor}, {"c0", policy.c0}};
  const auto mean = s.mean();
  const double reps = static_cast<double>(s.values.size());
  const double dn = static_cast<double>(s.n);
  std::vector<double> ratios;
  for (std::size_t k = 0; k < s.z.size(); ++k) {
    double acc = 0.0;
    for (const auto& row : s.values) acc += std::pow(std::norm(row[k] - mean[k]), l);
    const double v = s.z[k].v();
    ratios.push_back(acc / reps * std::pow(dn, 2 * l) * std::pow(v, 3 * l));
    r.grid.push_back({s.n, s.z[k].u(), v});
  }
  r.lhs.resize(ratios.size());
  r.rhs.resize(ratios.size());
  finish_stability(r, ratios, policy.within_grid_factor);
  flag_regime(r, s, policy.c0);
  return r;
}

BoundReport compare_across_n(const BoundReport& a, const BoundReport& b, double factor,
                             bool two_sided) {
  BoundReport r;
  r.name = a.name + "_across_n";
  const double max_a = a.metrics.at("max_ratio");
  const double max_b = b.metrics.at("max_ratio");
  const int n_a = a.grid.empty() ? 0 : a.grid.front().n;
  const int n_b = b.grid.empty() ? 0 : b.grid.front().n;
  r.constants = {{"factor", factor}, {"two_sided", two_sided ? 1.0 : 0.0}};
  r.add({n_b, 0.0, 0.0}, max_b, factor * max_a);
  if (two_sided) r.add({n_a, 0.0, 0.0}, max_a, factor * max_b);
  r.metrics = {{"max_ratio_small_n", max_a}, {"max_ratio_large_n", max_b},
               {"drift", max_a > 0.0 ? max_b / max_a : 0.0}};
  return r;
}

BetaTally tally_beta(std::span<const LeaveOneOutDiag> diags, int n, int replicas) {
  if (diags.empty()) throw std::invalid_argument("no leave-one-out samples");
  BetaTally t;
  t.n = n;
  t.v = diags.front().z.v();
  t.replicas = replicas;
  for (const auto& d : diags) {
    ++t.total;
    if (std::abs(d.beta) > 2.0) ++t.exceed;
  }
  return t;
}

BoundReport beta_exceedance_check(std::span<const BetaTally> cells, double drift_factor,
                                  double c0, int min_replicas) {
  if (cells.empty()) throw std::invalid_argument("no samples for the beta exceedance check");
  BoundReport r;
  r.name = "beta_exceedance";
  r.constants = {{"drift_factor", drift_factor}, {"c0", c0}};
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  long forced_violations = 0;
  for (const auto& cell : cells) {
    if (cell.replicas < min_replicas) {
      throw std::invalid_argument("beta exceedance check needs at least " +
                                  std::to_string(min_replicas) + " replicas per cell");
    }
    const double v0 = c0 / std::sqrt(static_cast<double>(cell.n));
    const bool in_regime = cell.v >= v0;
    if (!in_regime) {
      r.flags.push_back("out_of_regime: n=" + std::to_string(cell.n) +
                        " v=" + std::to_string(cell.v));
    }
    // |beta_i| <= 1/v, so no exceedance is possible once 1/v <= 2.
    if (1.0 / cell.v <= 2.0 && cell.exceed > 0) ++forced_violations;
    if (in_regime && cell.exceed > 0) {
      lo = std::min(lo, cell.scaled());
      hi = std::max(hi, cell.scaled());
    }
    r.grid.push_back({cell.n, 0.0, cell.v});
    r.lhs.push_back(cell.scaled());
    r.rhs.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  const double drift = hi > 0.0 ? hi / lo : 1.0;
  // Every in-regime positive cell must sit within drift_factor of the smallest.
  for (std::size_t k = 0; k < r.rhs.size(); ++k) {
    r.rhs[k] = hi > 0.0 ? drift_factor * lo : std::max(r.lhs[k], 0.0);
    const double v0 = c0 / std::sqrt(static_cast<double>(cells[k].n));
    if (cells[k].v < v0) r.rhs[k] = std::numeric_limits<double>::infinity();
  }
  r.pass = forced_violations == 0;
  for (std::size_t k = 0; k < r.lhs.size(); ++k) r.pass = r.pass && r.lhs[k] <= r.rhs[k];
  r.metrics = {{"drift", drift}, {"forced_zero_violations", static_cast<double>(forced_violations)},
               {"min_positive_scaled", hi > 0.0 ? lo : 0.0}, {"max_scaled", hi}};
  return r;
}

BoundReport an_bn_check(std::span<const UpperHalfPoint> z, std::span<const cplx> es_n,
                        double tol) {
  if (z.size() != es_n.size()) throw std::invalid_argument("z and E s_n differ in length");
  BoundReport r;
  r.name = "an_bn_inequalities";
  r.constants = {{"relative_tolerance", tol}};
  long an_violations = 0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const cplx zz = z[k].z();
    const cplx w = zz + 2.0 * sc_stieltjes(z[k]);
    const cplx a = 1.0 / (zz + es_n[k]);
    const cplx b = 1.0 / (zz + 2.0 * es_n[k]);
    // |a (z + 2s)| <= |1 - a^2|
    const double lhs1 = std::abs(a * w);
    const double rhs1 = std::abs(1.0 - a * a);
    r.add({0, z[k].u(), z[k].v()}, lhs1, rhs1 * (1.0 + tol));
    // |b| <= 2 / |z + 2s|
    r.add({0, z[k].u(), z[k].v()}, std::abs(b), 2.0 / std::abs(w) * (1.0 + tol));
    if (!(std::abs(a) < 1.0)) {
      ++an_violations;
      r.flags.push_back("|a_n| >= 1 at u=" + std::to_string(z[k].u()) +
                        " v=" + std::to_string(z[k].v()));
    }
  }
  r.metrics = {{"an_modulus_violations", static_cast<double>(an_violations)}};
  return r;
}

}  // namespace wigner
