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

#include "wigner/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace wigner {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double student_t_raw_pdf(double t, double df) {
  using boost::math::lgamma;
  const double log_norm = lgamma((df + 1.0) / 2.0) - lgamma(df / 2.0) -
                          0.5 * std::log(df * std::numbers::pi);
  return std::exp(log_norm - (df + 1.0) / 2.0 * std::log1p(t * t / df));
}

struct Atom {
  double value;
  double prob;
};

// Standardized atoms of the discrete kinds.
std::vector<Atom> atoms(const EntryDistribution& d) {
  switch (d.kind) {
    case DistKind::rademacher:
      return {{-1.0, 0.5}, {1.0, 0.5}};
    case DistKind::two_point: {
      const double p = d.params.p;
      return {{std::sqrt((1.0 - p) / p), p}, {-std::sqrt(p / (1.0 - p)), 1.0 - p}};
    }
    default:
      return {};
  }
}

bool is_discrete(DistKind k) {
  return k == DistKind::rademacher || k == DistKind::two_point;
}

double integrate(const auto& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-14, &error);
}

}  // namespace

std::string to_string(DistKind kind) {
  switch (kind) {
    case DistKind::gaussian: return "gaussian";
    case DistKind::rademacher: return "rademacher";
    case DistKind::uniform: return "uniform";
    case DistKind::student_t: return "student_t";
    case DistKind::two_point: return "two_point";
  }
  return "unknown";
}

DistKind parse_kind(const std::string& name) {
  for (auto k : {DistKind::gaussian, DistKind::rademacher, DistKind::uniform,
                 DistKind::student_t, DistKind::two_point}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown distribution kind '" + name + "'");
}

bool EntryDistribution::finite_sixth_moment() const { return std::isfinite(nu6); }

double EntryDistribution::standardized_pdf(double x) const {
  switch (kind) {
    case DistKind::gaussian:
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    case DistKind::uniform:
      return std::abs(x) <= std::sqrt(3.0) ? 1.0 / (2.0 * std::sqrt(3.0)) : 0.0;
    case DistKind::student_t:
      return scale * student_t_raw_pdf(scale * x, params.df);
    default:
      return 0.0;
  }
}

double EntryDistribution::standardized_support() const {
  switch (kind) {
    case DistKind::uniform: return std::sqrt(3.0);
    case DistKind::rademacher: return 1.0;
    case DistKind::two_point: {
      double m = 0.0;
      for (const auto& a : atoms(*this)) m = std::max(m, std::abs(a.value));
      return m;
    }
    default: return kInf;
  }
}

double EntryDistribution::sample(std::mt19937_64& rng) const {
  const double bound = truncation_level.value_or(kInf);
  double x = 0.0;
  do {
    double raw = 0.0;
    switch (kind) {
      case DistKind::gaussian:
        raw = std::normal_distribution<double>(0.0, 1.0)(rng);
        break;
      case DistKind::rademacher:
        raw = (rng() >> 63) ? 1.0 : -1.0;
        break;
      case DistKind::uniform:
        raw = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        break;
      case DistKind::student_t:
        raw = std::student_t_distribution<double>(params.df)(rng);
        break;
      case DistKind::two_point:
        raw = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < params.p ? 1.0 : 0.0;
        break;
    }
    x = (raw - shift) / scale;
  } while (std::abs(x) > bound);
  if (truncated()) x = (x - trunc_mean) / trunc_sd;
  return amplitude * x;
}

EntryDistribution make_distribution(DistKind kind, DistParams params) {
  EntryDistribution d;
  d.kind = kind;
  d.params = params;
  switch (kind) {
    case DistKind::gaussian:
      d.nu3 = 0.0;
      d.nu4 = 3.0;
      d.nu6 = 15.0;
      break;
    case DistKind::rademacher:
      d.nu3 = 0.0;
      d.nu4 = 1.0;
      d.nu6 = 1.0;
      break;
    case DistKind::uniform:
      d.shift = 0.5;
      d.scale = 1.0 / std::sqrt(12.0);
      d.nu3 = 0.0;
      d.nu4 = 9.0 / 5.0;
      d.nu6 = 27.0 / 7.0;
      break;
    case DistKind::student_t: {
      const double df = params.df;
      if (!(df > 2.0)) {
        throw std::invalid_argument("student_t requires df > 2 for finite variance");
      }
      d.scale = std::sqrt(df / (df - 2.0));
      d.nu3 = df > 3.0 ? 0.0 : kInf;
      d.nu4 = df > 4.0 ? 3.0 * (df - 2.0) / (df - 4.0) : kInf;
      d.nu6 = df > 6.0 ? 15.0 * (df - 2.0) * (df - 2.0) / ((df - 4.0) * (df - 6.0)) : kInf;
      break;
    }
    case DistKind::two_point: {
      const double p = params.p;
      if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("two_point requires 0 < p < 1");
      }
      d.shift = p;
      d.scale = std::sqrt(p * (1.0 - p));
      double m3 = 0.0, m4 = 0.0, m6 = 0.0;
      for (const auto& a : atoms(d)) {
        m3 += a.prob * std::pow(a.value, 3);
        m4 += a.prob * std::pow(a.value, 4);
        m6 += a.prob * std::pow(a.value, 6);
      }
      d.nu3 = m3;
      d.nu4 = m4;
      d.nu6 = m6;
      break;
    }
  }
  return d;
}

double mass_within(const EntryDistribution& d, double bound) {
  if (!(bound >= 0.0)) return 0.0;
  switch (d.kind) {
    case DistKind::gaussian:
      return std::isinf(bound) ? 1.0 : std::erf(bound / std::numbers::sqrt2);
    case DistKind::uniform:
      return std::min(bound, std::sqrt(3.0)) / std::sqrt(3.0);
    case DistKind::student_t: {
      if (std::isinf(bound)) return 1.0;
      boost::math::students_t_distribution<double> t(d.params.df);
      return 2.0 * boost::math::cdf(t, d.scale * bound) - 1.0;
    }
    default: {
      double mass = 0.0;
      for (const auto& a : atoms(d)) {
        if (std::abs(a.value) <= bound) mass += a.prob;
      }
      return mass;
    }
  }
}

double conditional_moment(const EntryDistribution& d, double bound, int k, double centre) {
  const double mass = mass_within(d, bound);
  if (mass <= 0.0) {
    throw std::domain_error("no probability mass within the truncation bound");
  }
  if (is_discrete(d.kind)) {
    double acc = 0.0;
    for (const auto& a : atoms(d)) {
      if (std::abs(a.value) <= bound) acc += a.prob * std::pow(a.value - centre, k);
    }
    return acc / mass;
  }
  double lim = std::min(bound, d.standardized_support());
  if (std::isinf(lim)) {
    if (d.kind != DistKind::gaussian) {
      throw std::domain_error("conditional moment of a heavy-tailed law needs a finite bound");
    }
    lim = 40.0;
  }
  auto integrand = [&](double x) { return std::pow(x - centre, k) * d.standardized_pdf(x); };
  // Split at the origin so the Kronrod rule sees the peak at a node.
  return (integrate(integrand, -lim, 0.0) + integrate(integrand, 0.0, lim)) / mass;
}

EntryDistribution truncate_center_rescale(const EntryDistribution& dist, int n) {
  if (n < 1) throw std::invalid_argument("truncation requires n >= 1");
  if (dist.truncated()) {
    throw std::invalid_argument("distribution is already truncated");
  }
  const double level = std::pow(static_cast<double>(n), 0.25);
  const double m = conditional_moment(dist, level, 1, 0.0);
  const double var = conditional_moment(dist, level, 2, m);
  if (!(var > 1e-14)) {
    throw std::domain_error("truncated law is degenerate (zero variance) at level " +
                            std::to_string(level));
  }
  const double s = std::sqrt(var);

  EntryDistribution out = dist;
  out.truncation_level = level;
  out.trunc_mean = m;
  out.trunc_sd = s;
  const double a = out.amplitude;
  out.nu2 = a * a * (conditional_moment(dist, level, 2, m) / (s * s));
  out.nu3 = std::pow(a, 3) * conditional_moment(dist, level, 3, m) / std::pow(s, 3);
  out.nu4 = std::pow(a, 4) * conditional_moment(dist, level, 4, m) / std::pow(s, 4);
  out.nu6 = std::pow(a, 6) * conditional_moment(dist, level, 6, m) / std::pow(s, 6);
  return out;
}

EntryDistribution with_amplitude(EntryDistribution dist, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("amplitude must be positive");
  const double r = sigma / dist.amplitude;
  dist.amplitude = sigma;
  dist.nu2 *= r * r;
  dist.nu3 *= r * r * r;
  dist.nu4 *= std::pow(r, 4);
  dist.nu6 *= std::pow(r, 6);
  return dist;
}

void WignerSpec::validate() const {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (std::abs(offdiag.nu2 - 1.0) > 1e-6) {
    throw std::invalid_argument("off-diagonal law must have unit variance");
  }
  if (std::abs(diag.nu2 - sigma * sigma) > 1e-6 * sigma * sigma) {
    throw std::invalid_argument("diagonal law must have variance sigma^2");
  }
}

WignerSpec make_wigner_spec(int n, const EntryDistribution& base, double sigma,
                            std::uint64_t seed, bool truncate) {
  WignerSpec spec;
  spec.n = n;
  spec.sigma = sigma;
  spec.seed = seed;
  spec.offdiag = truncate ? truncate_center_rescale(base, n) : base;
  spec.diag = with_amplitude(spec.offdiag, sigma);
  spec.validate();
  return spec;
}

SymmetricMatrix::SymmetricMatrix(int n, std::uint64_t seed)
    : n_(n), seed_(seed), packed_(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0) {
  if (n < 0) throw std::invalid_argument("matrix dimension must be non-negative");
}

std::size_t SymmetricMatrix::index(int i, int j) const {
  if (i > j) std::swap(i, j);
  const auto row = static_cast<std::size_t>(i);
  // Offset of row i in the packed upper triangle.
  return row * n_ - row * (row - 1) / 2 + static_cast<std::size_t>(j - i);
}

std::vector<double> SymmetricMatrix::dense() const {
  std::vector<double> out(static_cast<std::size_t>(n_) * n_);
  std::size_t k = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j, ++k) {
      out[static_cast<std::size_t>(i) * n_ + j] = packed_[k];
      out[static_cast<std::size_t>(j) * n_ + i] = packed_[k];
    }
  }
  return out;
}

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SymmetricMatrix::frobenius_squared() const {
  double f = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      const double v = (*this)(i, j);
      f += (i == j ? 1.0 : 2.0) * v * v;
    }
  }
  return f;
}

SymmetricMatrix SymmetricMatrix::minor(int skip) const {
  if (skip < 0 || skip >= n_) throw std::out_of_range("minor index out of range");
  SymmetricMatrix out(n_ - 1, seed_);
  for (int i = 0, oi = 0; i < n_; ++i) {
    if (i == skip) continue;
    for (int j = i, oj = oi; j < n_; ++j) {
      if (j == skip) continue;
      out.at(oi, oj) = (*this)(i, j);
      ++oj;
    }
    ++oi;
  }
  return out;
}

SymmetricMatrix SymmetricMatrix::from_dense(int n, std::span<const double> a) {
  if (a.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("dense matrix has wrong size");
  }
  SymmetricMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) out.at(i, j) = a[static_cast<std::size_t>(i) * n + j];
  }
  return out;
}

SymmetricMatrix sample_wigner(const WignerSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  SymmetricMatrix m(spec.n, spec.seed);
  const double s = 1.0 / std::sqrt(static_cast<double>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    m.at(i, i) = s * spec.diag.sample(rng);
    for (int j = i + 1; j < spec.n; ++j) m.at(i, j) = s * spec.offdiag.sample(rng);
  }
  return m;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t replica_seed(std::uint64_t master, std::uint64_t n, std::uint64_t replica) {
  return mix64(mix64(mix64(master) ^ n) ^ replica);
}

}  // namespace wigner
