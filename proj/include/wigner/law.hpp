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

#include <complex>
#include <stdexcept>

namespace wigner {

using cplx = std::complex<double>;

/// A point z = u + iv of the open upper half plane.
class UpperHalfPoint {
 public:
  UpperHalfPoint(double u, double v);
  double u() const { return u_; }
  double v() const { return v_; }
  cplx z() const { return {u_, v_}; }

 private:
  double u_;
  double v_;
};

/// Semicircle law with density (2 pi sigma^2)^{-1} sqrt(4 sigma^2 - x^2) on
/// [-2 sigma, 2 sigma].
class SemicircleLaw {
 public:
  explicit SemicircleLaw(double sigma = 1.0);

  double sigma() const { return sigma_; }
  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;
  /// Antiderivative of cdf, zero at -infinity: int_{-inf}^x cdf(t) dt.
  double cdf_integral(double x) const;
  cplx stieltjes(const UpperHalfPoint& z) const;

 private:
  double sigma_;
};

double sc_pdf(double x, double sigma);
double sc_cdf(double x, double sigma);
/// Inverse of sc_cdf by bisection; p must lie in [0, 1].
double sc_quantile(double p, double sigma);

/// Stieltjes transform of the unit semicircle, s(z) = -(z - sqrt(z^2 - 4))/2,
/// with the square-root branch chosen so that Im s(z) > 0.
cplx sc_stieltjes(const UpperHalfPoint& z);
/// Scaled law: s_sigma(z) = s(z / sigma) / sigma.
cplx sc_stieltjes(const UpperHalfPoint& z, double sigma);

/// int_{-16}^{16} du / sqrt|u^2 - 4|, integrated piecewise with a
/// double-exponential rule that tolerates the endpoint singularities at +-2.
double integral_bound_value();

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wigner
