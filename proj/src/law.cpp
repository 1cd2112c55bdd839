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

#include "wigner/law.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace wigner {

namespace {

constexpr double kPi = std::numbers::pi;

// Unit-scale pieces; the public functions rescale.
double unit_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt((2.0 - x) * (2.0 + x)) / (4.0 * kPi) + std::asin(x / 2.0) / kPi;
}

double unit_cdf_integral(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return x;
  const double r = std::sqrt((2.0 - x) * (2.0 + x));
  return x / 2.0 - r * r * r / (12.0 * kPi) + (x * std::asin(x / 2.0) + r) / kPi;
}

}  // namespace

UpperHalfPoint::UpperHalfPoint(double u, double v) : u_(u), v_(v) {
  if (!(v > 0.0)) {
    throw std::invalid_argument("z must lie in the upper half plane (v > 0), got v = " +
                                std::to_string(v));
  }
}

SemicircleLaw::SemicircleLaw(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("semicircle sigma must be positive");
}

double SemicircleLaw::pdf(double x) const { return sc_pdf(x, sigma_); }
double SemicircleLaw::cdf(double x) const { return sc_cdf(x, sigma_); }
double SemicircleLaw::quantile(double p) const { return sc_quantile(p, sigma_); }
double SemicircleLaw::cdf_integral(double x) const {
  return sigma_ * unit_cdf_integral(x / sigma_);
}
cplx SemicircleLaw::stieltjes(const UpperHalfPoint& z) const { return sc_stieltjes(z, sigma_); }

double sc_pdf(double x, double sigma) {
  const double two_s = 2.0 * sigma;
  if (x <= -two_s || x >= two_s) return 0.0;
  return std::sqrt((two_s - x) * (two_s + x)) / (2.0 * kPi * sigma * sigma);
}

double sc_cdf(double x, double sigma) { return unit_cdf(x / sigma); }

double sc_quantile(double p, double sigma) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level must be in [0, 1]");
  if (p == 0.0) return -2.0 * sigma;
  if (p == 1.0) return 2.0 * sigma;
  double lo = -2.0, hi = 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (unit_cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return sigma * 0.5 * (lo + hi);
}

cplx sc_stieltjes(const UpperHalfPoint& point) {
  const cplx z = point.z();
  const cplx root = std::sqrt((z - 2.0) * (z + 2.0));
  // The two solutions of s^2 + z s + 1 = 0 multiply to 1. Form the larger one
  // without cancellation and recover the other as its reciprocal.
  const cplx a = -0.5 * (z + root);
  const cplx b = -0.5 * (z - root);
  const cplx big = std::abs(a) >= std::abs(b) ? a : b;
  const cplx small = 1.0 / big;
  return big.imag() > 0.0 ? big : small;
}

cplx sc_stieltjes(const UpperHalfPoint& z, double sigma) {
  return sc_stieltjes(UpperHalfPoint(z.u() / sigma, z.v() / sigma)) / sigma;
}

double integral_bound_value() {
  boost::math::quadrature::tanh_sinh<double> rule;
  // Shift each singular endpoint to the origin (w = distance to +-2) so the
  // abscissas near the singularity keep full relative precision. The
  // integrand is even, so integrate u >= 0 and double.
  auto inner = [](double w) { return 1.0 / std::sqrt(w * (4.0 - w)); };  // u = 2 - w
  auto outer = [](double w) { return 1.0 / std::sqrt(w * (4.0 + w)); };  // u = 2 + w
  double err_inner = 0.0, err_outer = 0.0;
  const double mid = rule.integrate(inner, 0.0, 2.0, 1e-14, &err_inner);
  const double side = rule.integrate(outer, 0.0, 14.0, 1e-14, &err_outer);
  if (!(err_inner < 1e-9 && err_outer < 1e-9)) {
    throw QuadratureError("singular integral did not converge");
  }
  return 2.0 * (mid + side);
}

}  // namespace wigner
