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

#include "wigner/resolvent.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace wigner {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

MatrixXcd shifted(const MatrixXd& m, cplx z) {
  MatrixXcd out = m.cast<cplx>();
  out.diagonal().array() -= z;
  return out;
}

MatrixXcd inverse_checked(const MatrixXcd& d) {
  Eigen::PartialPivLU<MatrixXcd> lu(d);
  // Singular only if z is real; v > 0 excludes that, so this guards rounding.
  if (lu.rcond() <= 0.0 || !std::isfinite(lu.rcond())) {
    throw std::runtime_error("resolvent system is singular");
  }
  return lu.inverse();
}

// Bilinear (non-conjugating) forms; the matrices are complex symmetric.
cplx bilinear(const VectorXd& a, const MatrixXcd& m) {
  return (a.cast<cplx>().transpose() * m * a.cast<cplx>())(0, 0);
}

}  // namespace

cplx empirical_stieltjes(const Spectrum& s, const UpperHalfPoint& z) {
  if (s.eigenvalues.empty()) throw std::invalid_argument("empty spectrum");
  const cplx zz = z.z();
  cplx acc = 0.0;
  for (double l : s.eigenvalues) acc += 1.0 / (l - zz);
  return acc / static_cast<double>(s.eigenvalues.size());
}

Eigen::MatrixXd to_eigen(const SymmetricMatrix& m) {
  const int n = m.size();
  MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) out(i, j) = out(j, i) = m(i, j);
  }
  return out;
}

cplx resolvent_trace(const SymmetricMatrix& m, const UpperHalfPoint& z) {
  if (m.size() < 1) throw std::invalid_argument("empty matrix");
  const MatrixXcd g = inverse_checked(shifted(to_eigen(m), z.z()));
  return g.trace() / static_cast<double>(m.size());
}

cplx LeaveOneOutDiag::eps_identity_residual(int n) const {
  const double dn = static_cast<double>(n);
  return eps - (w_ii - gamma / dn + xi / dn - (s_n - es_n_estimate));
}

LeaveOneOutDiag leave_one_out(const SymmetricMatrix& m, const UpperHalfPoint& z, int i,
                              cplx es_n_estimate) {
  const int n = m.size();
  if (i < 0 || i >= n) throw std::out_of_range("leave-one-out index out of range");
  const double dn = static_cast<double>(n);
  const double root_n = std::sqrt(dn);
  const cplx zz = z.z();

  LeaveOneOutDiag out;
  out.index = i;
  out.z = z;
  out.es_n_estimate = es_n_estimate;
  out.w_ii = m(i, i);

  const MatrixXcd g = inverse_checked(shifted(to_eigen(m), zz));
  out.resolvent_diag = g(i, i);
  const cplx tr_g = g.trace();
  out.s_n = tr_g / dn;

  cplx quad = 0.0, tr_minor = 0.0, quad2 = 0.0, tr_minor2 = 0.0;
  if (n > 1) {
    VectorXd a(n - 1);
    for (int j = 0, k = 0; j < n; ++j) {
      if (j != i) a(k++) = root_n * m(j, i);
    }
    const MatrixXcd minor_inv = inverse_checked(shifted(to_eigen(m.minor(i)), zz));
    quad = bilinear(a, minor_inv);
    tr_minor = minor_inv.trace();
    const VectorXcd y = minor_inv * a.cast<cplx>();
    quad2 = (y.transpose() * y)(0, 0);
    tr_minor2 = (minor_inv.array() * minor_inv.transpose().array()).sum();
  }

  out.beta = 1.0 / (out.w_ii - zz - quad / dn);
  out.gamma = quad - tr_minor;
  out.gamma_hat = quad2 - tr_minor2;
  out.xi = tr_g - tr_minor;
  out.eps = out.w_ii - quad / dn + es_n_estimate;
  out.a_n = 1.0 / (zz + es_n_estimate);
  out.b_n = 1.0 / (zz + 2.0 * es_n_estimate);
  return out;
}

SpectralResolvent::SpectralResolvent(const SymmetricMatrix& m) {
  const MatrixXd dense = to_eigen(m);
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectral decomposition failed");
  }
  values_ = solver.eigenvalues();
  squared_vectors_ = solver.eigenvectors().array().square().matrix();
  diag_ = dense.diagonal();
}

cplx SpectralResolvent::trace(const UpperHalfPoint& z) const {
  const cplx zz = z.z();
  cplx acc = 0.0;
  for (Eigen::Index k = 0; k < values_.size(); ++k) acc += 1.0 / (values_(k) - zz);
  return acc;
}

std::vector<LeaveOneOutDiag> SpectralResolvent::all_indices(const UpperHalfPoint& z,
                                                            cplx es_n_estimate) const {
  const int n = size();
  const double dn = static_cast<double>(n);
  const cplx zz = z.z();

  VectorXcd r(n), r2(n), r3(n);
  for (int k = 0; k < n; ++k) {
    r(k) = 1.0 / (values_(k) - zz);
    r2(k) = r(k) * r(k);
    r3(k) = r2(k) * r(k);
  }
  const cplx tr_g = r.sum();
  const cplx tr_g2 = r2.sum();
  const MatrixXcd sq = squared_vectors_.cast<cplx>();
  const VectorXcd g1 = sq * r;   // (G)_ii
  const VectorXcd g2 = sq * r2;  // (G^2)_ii
  const VectorXcd g3 = sq * r3;  // (G^3)_ii

  const cplx a_n = 1.0 / (zz + es_n_estimate);
  const cplx b_n = 1.0 / (zz + 2.0 * es_n_estimate);

  std::vector<LeaveOneOutDiag> out(n);
  for (int i = 0; i < n; ++i) {
    const cplx c = g1(i);
    // Column i of G without its diagonal entry: gg = g'g, gag = g' G_{-i,-i} g.
    const cplx gg = g2(i) - c * c;
    const cplx gag = g3(i) - 2.0 * c * g2(i) + c * c * c;
    const cplx tr_minor = tr_g - g2(i) / c;
    const cplx quad_over_n = diag_(i) - zz - 1.0 / c;
    const cplx tr_rest2 = tr_g2 - 2.0 * gg - c * c;
    const cplx tr_minor2 = tr_rest2 - 2.0 * gag / c + gg * gg / (c * c);

    LeaveOneOutDiag& d = out[i];
    d.index = i;
    d.z = z;
    d.es_n_estimate = es_n_estimate;
    d.w_ii = diag_(i);
    d.resolvent_diag = c;
    d.s_n = tr_g / dn;
    d.beta = c;
    d.gamma = dn * quad_over_n - tr_minor;
    d.gamma_hat = dn * gg / (c * c) - tr_minor2;
    d.xi = g2(i) / c;
    d.eps = diag_(i) - quad_over_n + es_n_estimate;
    d.a_n = a_n;
    d.b_n = b_n;
  }
  return out;
}

double quadratic_form_variance(const Eigen::MatrixXd& a, double nu4) {
  return (nu4 - 3.0) * a.diagonal().squaredNorm() + a.squaredNorm() + (a * a).trace();
}

QuadFormMoments quadratic_form_residual(const Eigen::MatrixXd& a, const EntryDistribution& law,
                                        long reps, std::uint64_t seed) {
  if (a.rows() != a.cols()) throw std::invalid_argument("quadratic form needs a square matrix");
  if (reps < 2) throw std::invalid_argument("need at least two repetitions");
  std::mt19937_64 rng(seed);
  const Eigen::Index n = a.rows();
  const double tr = a.trace();
  VectorXd x(n);
  double s1 = 0.0, s2 = 0.0, s4 = 0.0, s22 = 0.0;
  for (long r = 0; r < reps; ++r) {
    for (Eigen::Index j = 0; j < n; ++j) x(j) = law.sample(rng);
    const double res = x.dot(a * x) - tr;
    const double sq = res * res;
    s1 += res;
    s2 += sq;
    s4 += sq * sq;
  }
  const double dr = static_cast<double>(reps);
  QuadFormMoments out;
  out.reps = reps;
  out.mean_residual = s1 / dr;
  out.second_moment = s2 / dr;
  out.fourth_moment = s4 / dr;
  s22 = out.fourth_moment - out.second_moment * out.second_moment;
  out.second_moment_se = std::sqrt(std::max(s22, 0.0) / (dr - 1.0));
  out.closed_form_variance = quadratic_form_variance(a, law.nu4);
  return out;
}

double rank_one_perturbation_gap(const Eigen::MatrixXd& b, const Eigen::VectorXd& q, double tau,
                                 const Eigen::MatrixXd& a, const UpperHalfPoint& z) {
  if (b.rows() != b.cols() || q.size() != b.rows() || a.rows() != b.rows() ||
      a.cols() != b.cols()) {
    throw std::invalid_argument("rank-one gap: dimension mismatch");
  }
  const MatrixXcd g0 = inverse_checked(shifted(b, z.z()));
  const MatrixXcd g1 = inverse_checked(shifted(b + tau * q * q.transpose(), z.z()));
  return std::abs(((g0 - g1) * a.cast<cplx>()).trace());
}

double operator_norm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(a);
  return svd.singularValues()(0);
}

}  // namespace wigner
