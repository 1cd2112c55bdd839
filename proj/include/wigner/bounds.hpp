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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "wigner/law.hpp"
#include "wigner/resolvent.hpp"
#include "wigner/spectra.hpp"

namespace wigner {

/// Constants of the Stieltjes-transform smoothing inequality
///   ||F - G|| <= [pi (1 - zeta)(2 rho - 1)]^{-1} (I1 + I2 + I3),
/// with rho = (2/pi) atan(eps) and zeta = 4B / (pi (A - B)(2 rho - 1)).
struct BaiConstants {
  double A = 16.0;
  double B = 3.0;
  double eps = 2.0;
  double v = 0.125;
  double rho = 0.0;
  double zeta = 0.0;

  double prefactor() const;
};

/// Computes rho and zeta; throws std::invalid_argument naming the failed
/// constraint (A > B > 0, v > 0, rho > 1/2, 0 < zeta < 1).
BaiConstants validate_constants(double A, double B, double eps, double v);

/// Evaluated inequality. Entry k of the grid passes iff lhs[k] <= rhs[k].
struct BoundReport {
  struct Cell {
    int n = 0;
    double u = 0.0;
    double v = 0.0;
  };

  std::string name;
  std::map<std::string, double> constants;
  std::vector<Cell> grid;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::map<std::string, double> metrics;
  std::vector<std::string> flags;
  bool pass = true;

  void add(Cell cell, double l, double r);
};

/// Exact int_a^b |F(x) - G(x)| dx for a step F and the semicircle G; a and b
/// may be infinite.
double l1_distance(const StepCdf& f, const SemicircleLaw& g, double a, double b);

/// sup_x int_{|u| <= h} |G(x+u) - G(x)| du on a grid of spacing `step`,
/// plus the Lipschitz slack step/2 so the value bounds the true supremum.
double smoothness_sup(const SemicircleLaw& g, double h, double step);

/// Stieltjes transform of a step distribution.
cplx step_stieltjes(const StepCdf& f, const UpperHalfPoint& z);

/// Right-hand side of the smoothing inequality for F against G, together
/// with lhs = ||F - G||. Metrics hold the three integral terms.
BoundReport bai_rhs(const StepCdf& f, const SemicircleLaw& g, const BaiConstants& c);

/// Stieltjes transform samples s_n(z): values[r][k] for replica r and grid
/// point z[k], all from matrices of dimension n.
struct SnSamples {
  int n = 0;
  std::vector<UpperHalfPoint> z;
  std::vector<std::vector<cplx>> values;

  /// Replica mean at each grid point.
  std::vector<cplx> mean() const;
};

/// Policy thresholds for "bounded uniformly".
struct StabilityPolicy {
  double within_grid_factor = 10.0;  // max ratio <= factor * median ratio
  double across_n_factor = 2.0;      // max ratio drift between dimensions
  bool across_n_two_sided = true;
  int min_replicas = 50;
  double c0 = 2.0;                   // v0 = c0 / sqrt(n)
};

/// Var(s_n(z)) * n |z + 2 s(z)|^2 per grid point. lhs = ratio,
/// rhs = within_grid_factor * median ratio. Metrics: max_ratio,
/// median_ratio.
BoundReport variance_bound_check(const SnSamples& samples, const StabilityPolicy& policy = {});

/// E|s_n - mean s_n|^{2l} * n^{2l} v^{3l} per grid point, l in {1, 2}.
BoundReport moment_bound_check(const SnSamples& samples, int l,
                               const StabilityPolicy& policy = {});

/// Cross-dimension comparison of two scaled-ratio reports: the max ratio of
/// the larger dimension may not exceed `factor` times that of the smaller,
/// and vice versa when `two_sided`.
BoundReport compare_across_n(const BoundReport& smaller_n, const BoundReport& larger_n,
                             double factor, bool two_sided);

/// Counts of |beta_i| > 2 for one (n, v) cell.
struct BetaTally {
  int n = 0;
  double v = 0.0;
  long exceed = 0;
  long total = 0;
  int replicas = 0;

  double frequency() const { return total > 0 ? static_cast<double>(exceed) / total : 0.0; }
  double scaled() const { return frequency() * n * n * v * v; }
};

BetaTally tally_beta(std::span<const LeaveOneOutDiag> diags, int n, int replicas);

/// Frequency of |beta_i| > 2 times n^2 v^2 over an (n, v) grid. Cells with
/// 1/v <= 2 must show no exceedance at all. Drift is measured among cells
/// with a non-zero count. Cells below v0 = c0 / sqrt(n) are flagged and
/// excluded from the drift test.
BoundReport beta_exceedance_check(std::span<const BetaTally> cells, double drift_factor = 4.0,
                                  double c0 = 2.0, int min_replicas = 100);

/// |1 - a_n^2| >= |a_n (z + 2 s(z))| and |b_n| <= 2 / |z + 2 s(z)| with
/// a_n, b_n built from the supplied E s_n estimates, plus |a_n| < 1.
/// `relative_tolerance` absorbs rounding when the estimate is exact.
BoundReport an_bn_check(std::span<const UpperHalfPoint> z, std::span<const cplx> es_n,
                        double relative_tolerance = 1e-12);

double median(std::vector<double> values);

}  // namespace wigner
