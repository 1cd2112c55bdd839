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
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace wigner {

enum class DistKind { gaussian, rademacher, uniform, student_t, two_point };

std::string to_string(DistKind kind);
DistKind parse_kind(const std::string& name);

/// Parameters that some kinds need; ignored by the others.
struct DistParams {
  double df = 0.0;  // student_t degrees of freedom
  double p = 0.5;   // two_point: probability of the positive atom
};

/// A zero-mean entry law.
///
/// A draw is produced in three stages: a raw variate of the base kind,
/// standardized to mean 0 and variance 1 by (raw - shift) / scale; then, when
/// truncation is active, rejected unless |x| <= truncation_level and mapped to
/// (x - trunc_mean) / trunc_sd; finally multiplied by `amplitude` (used for
/// diagonal laws with variance sigma^2).
///
/// The recorded moments describe the final law: nu2 = E x^2, nu3 = E x^3,
/// nu4 = E x^4, nu6 = E x^6. An infinite moment is stored as +inf.
struct EntryDistribution {
  DistKind kind = DistKind::gaussian;
  DistParams params{};
  double shift = 0.0;
  double scale = 1.0;
  std::optional<double> truncation_level;
  double trunc_mean = 0.0;
  double trunc_sd = 1.0;
  double amplitude = 1.0;

  double nu2 = 1.0;
  double nu3 = 0.0;
  double nu4 = 3.0;
  double nu6 = 15.0;

  bool truncated() const { return truncation_level.has_value(); }
  bool finite_sixth_moment() const;

  /// Density of the standardized, untruncated law; zero for discrete kinds.
  double standardized_pdf(double x) const;
  /// Support bound of the standardized, untruncated law (inf if unbounded).
  double standardized_support() const;

  /// One draw from the final law.
  double sample(std::mt19937_64& rng) const;
};

/// Builds a standardized (mean 0, variance 1) law of the given kind.
/// Throws std::invalid_argument naming the violated constraint.
EntryDistribution make_distribution(DistKind kind, DistParams params = {});

/// Truncates the standardized law at n^{1/4}, conditioning on |x| <= n^{1/4},
/// then re-centres and rescales so the result again has mean 0, variance 1.
/// Throws std::domain_error if the truncated law is degenerate.
EntryDistribution truncate_center_rescale(const EntryDistribution& dist, int n);

/// Same law multiplied by `sigma` (variance sigma^2).
EntryDistribution with_amplitude(EntryDistribution dist, double sigma);

/// E[(X - c)^k] for the standardized variable X conditioned on |X| <= bound.
/// Uses closed forms or summation for discrete kinds and adaptive quadrature
/// otherwise. `bound` may be infinite.
double conditional_moment(const EntryDistribution& dist, double bound, int k,
                          double centre = 0.0);

/// Probability that the standardized variable satisfies |X| <= bound.
double mass_within(const EntryDistribution& dist, double bound);

struct WignerSpec {
  int n = 1;
  EntryDistribution offdiag = make_distribution(DistKind::gaussian);
  EntryDistribution diag = make_distribution(DistKind::gaussian);
  double sigma = 1.0;
  std::uint64_t seed = 0;

  /// Checks the invariants; throws std::invalid_argument on violation.
  void validate() const;
};

/// Builds a spec with unit-variance off-diagonal law and diagonal variance
/// sigma^2, optionally passing both through truncate_center_rescale.
WignerSpec make_wigner_spec(int n, const EntryDistribution& base, double sigma,
                            std::uint64_t seed, bool truncate);

/// Real symmetric matrix stored as its packed upper triangle, row by row:
/// (0,0) (0,1) ... (0,n-1) (1,1) ... (n-1,n-1).
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(int n, std::uint64_t seed = 0);

  int size() const { return n_; }
  std::uint64_t seed() const { return seed_; }

  double operator()(int i, int j) const { return packed_[index(i, j)]; }
  double& at(int i, int j) { return packed_[index(i, j)]; }

  std::span<const double> packed() const { return packed_; }

  /// Dense row-major copy.
  std::vector<double> dense() const;
  double trace() const;
  double frobenius_squared() const;

  /// Principal minor with row and column `i` removed.
  SymmetricMatrix minor(int i) const;

  static SymmetricMatrix from_dense(int n, std::span<const double> row_major);

 private:
  std::size_t index(int i, int j) const;

  int n_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> packed_;
};

/// Samples W = n^{-1/2} (x_ij). Entries above the diagonal come from
/// spec.offdiag, the diagonal from spec.diag, in row-major order from a
/// single mt19937_64 stream seeded with spec.seed.
SymmetricMatrix sample_wigner(const WignerSpec& spec);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);
/// Stream seed for replica `replica` of dimension `n` under `master`.
std::uint64_t replica_seed(std::uint64_t master, std::uint64_t n,
                           std::uint64_t replica);

}  // namespace wigner
