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
#include <vector>

#include <Eigen/Dense>

#include "wigner/ensemble.hpp"
#include "wigner/law.hpp"
#include "wigner/spectra.hpp"

namespace wigner {

/// (1/n) sum_k 1 / (lambda_k - z).
cplx empirical_stieltjes(const Spectrum& s, const UpperHalfPoint& z);

/// (1/n) tr (M - zI)^{-1} from one complex LU factorization; independent of
/// the eigensolver.
cplx resolvent_trace(const SymmetricMatrix& m, const UpperHalfPoint& z);

Eigen::MatrixXd to_eigen(const SymmetricMatrix& m);

/// Leave-one-out quantities for row i of W = M (already scaled by n^{-1/2}).
/// With x_ii = sqrt(n) W_ii, a_i the i-th column of sqrt(n) W without its
/// diagonal entry, D = W - zI and D_i the resolvent matrix of the principal
/// minor with row/column i removed:
///
///   beta_i      = (W_ii - z - a_i' D_i^{-1} a_i / n)^{-1}
///   gamma_i     = a_i' D_i^{-1} a_i - tr D_i^{-1}
///   gamma_hat_i = a_i' D_i^{-2} a_i - tr D_i^{-2}
///   xi_i        = tr D^{-1} - tr D_i^{-1}
///   eps_i       = W_ii - a_i' D_i^{-1} a_i / n + E s_n
///   a_n = (z + E s_n)^{-1},  b_n = (z + 2 E s_n)^{-1}
///
/// where E s_n is supplied by the caller (a replica mean, or the analytic
/// s(z) as a plug-in).
struct LeaveOneOutDiag {
  int index = 0;
  UpperHalfPoint z{0.0, 1.0};
  cplx es_n_estimate;

  cplx beta;
  cplx gamma;
  cplx gamma_hat;
  cplx xi;
  cplx eps;
  cplx a_n;
  cplx b_n;

  // Reference values used by the identity checks.
  cplx resolvent_diag;  // (D^{-1})_ii
  cplx s_n;             // (1/n) tr D^{-1}
  double w_ii = 0.0;    // n^{-1/2} x_ii

  /// eps_i - (W_ii - gamma_i/n + xi_i/n - (s_n - E s_n)); zero in exact
  /// arithmetic.
  cplx eps_identity_residual(int n) const;
};

/// Direct route: factorizes the (n-1)x(n-1) minor and the full matrix.
/// `i` is zero-based.
LeaveOneOutDiag leave_one_out(const SymmetricMatrix& m, const UpperHalfPoint& z, int i,
                              cplx es_n_estimate);

/// All indices at once from a real spectral decomposition M = U diag(lambda) U';
/// each z then costs O(n^2). Agrees with leave_one_out up to rounding.
class SpectralResolvent {
 public:
  explicit SpectralResolvent(const SymmetricMatrix& m);

  int size() const { return static_cast<int>(values_.size()); }
  cplx trace(const UpperHalfPoint& z) const;
  std::vector<LeaveOneOutDiag> all_indices(const UpperHalfPoint& z, cplx es_n_estimate) const;

 private:
  Eigen::VectorXd values_;
  Eigen::MatrixXd squared_vectors_;  // U_ik^2
  Eigen::VectorXd diag_;
};

struct QuadFormMoments {
  long reps = 0;
  double mean_residual = 0.0;
  double second_moment = 0.0;     // E |X'AX - tr A|^2
  double fourth_moment = 0.0;     // E |X'AX - tr A|^4
  double second_moment_se = 0.0;  // standard error of second_moment
  double closed_form_variance = 0.0;
};

/// (nu4 - 3) sum a_ii^2 + ||A||_F^2 + tr(A^2) for real symmetric A.
double quadratic_form_variance(const Eigen::MatrixXd& a, double nu4);

/// Monte Carlo moments of X'AX - tr A with X_j i.i.d. from `law`.
QuadFormMoments quadratic_form_residual(const Eigen::MatrixXd& a, const EntryDistribution& law,
                                        long reps, std::uint64_t seed);

/// |tr(((B - zI)^{-1} - (B + tau q q' - zI)^{-1}) A)|.
double rank_one_perturbation_gap(const Eigen::MatrixXd& b, const Eigen::VectorXd& q, double tau,
                                 const Eigen::MatrixXd& a, const UpperHalfPoint& z);

/// Largest singular value.
double operator_norm(const Eigen::MatrixXd& a);

}  // namespace wigner
