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

#include "wigner/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wigner/law.hpp"

namespace wigner {

Tridiagonal tridiagonalize(const SymmetricMatrix& m) {
  const int n = m.size();
  Tridiagonal out;
  out.diag.resize(n);
  out.offdiag.resize(n > 0 ? n - 1 : 0);
  if (n == 0) return out;

  // Lower triangle of a row-major working copy; only a[i][j] with j <= i is
  // read or written.
  std::vector<double> a = m.dense();
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };

  std::vector<double> v(n), p(n), w(n);
  for (int k = 0; k + 2 < n; ++k) {
    const int lo = k + 1;
    double scale = 0.0;
    for (int i = lo; i < n; ++i) scale = std::max(scale, std::abs(at(i, k)));
    if (scale == 0.0) {
      out.offdiag[k] = 0.0;
      continue;
    }
    double norm2 = 0.0;
    for (int i = lo; i < n; ++i) {
      v[i] = at(i, k) / scale;
      norm2 += v[i] * v[i];
    }
    const double x0 = v[lo];
    const double alpha = -std::copysign(std::sqrt(norm2), x0);
    v[lo] = x0 - alpha;
    // H = I - beta v v^T maps column k onto alpha * scale * e_lo.
    const double beta = 1.0 / (norm2 - x0 * alpha);
    out.offdiag[k] = alpha * scale;

    if (norm2 - x0 * x0 == 0.0) {
      // Column already reduced; the reflection would only flip a sign.
      out.offdiag[k] = at(lo, k);
      continue;
    }

    // p = beta * A22 v using the stored lower triangle.
    std::fill(p.begin() + lo, p.end(), 0.0);
    for (int i = lo; i < n; ++i) {
      const double* row = &at(i, 0);
      double acc = 0.0;
      const double vi = v[i];
      for (int j = lo; j < i; ++j) {
        acc += row[j] * v[j];
        p[j] += row[j] * vi;
      }
      p[i] += acc + row[i] * vi;
    }
    double pv = 0.0;
    for (int i = lo; i < n; ++i) {
      p[i] *= beta;
      pv += p[i] * v[i];
    }
    const double half = 0.5 * beta * pv;
    for (int i = lo; i < n; ++i) w[i] = p[i] - half * v[i];

    for (int i = lo; i < n; ++i) {
      double* row = &at(i, 0);
      const double vi = v[i];
      const double wi = w[i];
      for (int j = lo; j <= i; ++j) row[j] -= vi * w[j] + wi * v[j];
    }
  }
  for (int i = 0; i < n; ++i) out.diag[i] = at(i, i);
  if (n >= 2) out.offdiag[n - 2] = at(n - 1, n - 2);
  return out;
}

std::vector<double> tridiagonal_eigenvalues(Tridiagonal t) {
  const int n = static_cast<int>(t.diag.size());
  std::vector<double>& d = t.diag;
  std::vector<double> e(n, 0.0);
  for (int k = 0; k + 1 < n; ++k) e[k] = t.offdiag[k];
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int max_sweeps = 50;

  for (int l = 0; l < n; ++l) {
    int sweeps = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (sweeps++ == max_sweeps) {
        throw EigenSolverError(l, "QL iteration did not converge for eigenvalue " +
                                      std::to_string(l));
      }
      // Wilkinson shift from the leading 2x2 block.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      for (; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (r == 0.0 && i >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

Spectrum eigenvalues(const SymmetricMatrix& m) {
  if (m.size() < 1) throw std::invalid_argument("eigenvalues of an empty matrix");
  Spectrum s;
  s.eigenvalues = tridiagonal_eigenvalues(tridiagonalize(m));
  s.seed = m.seed();
  return s;
}

StepCdf step_cdf_from_values(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  StepCdf f;
  const double total = static_cast<double>(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!f.points.empty() && values[k] == f.points.back()) {
      f.cumulative.back() = static_cast<double>(k + 1) / total;
    } else {
      f.points.push_back(values[k]);
      f.cumulative.push_back(static_cast<double>(k + 1) / total);
    }
  }
  return f;
}

StepCdf esd(const Spectrum& s) { return step_cdf_from_values(s.eigenvalues); }

StepCdf mean_esd(std::span<const Spectrum> spectra) {
  if (spectra.empty()) throw std::invalid_argument("mean_esd needs at least one spectrum");
  const int n = spectra.front().size();
  std::vector<double> pooled;
  pooled.reserve(spectra.size() * static_cast<std::size_t>(n));
  for (const auto& s : spectra) {
    if (s.size() != n) throw std::invalid_argument("spectra have different dimensions");
    pooled.insert(pooled.end(), s.eigenvalues.begin(), s.eigenvalues.end());
  }
  return step_cdf_from_values(std::move(pooled));
}

double esd_eval(const StepCdf& f, double x) {
  auto it = std::upper_bound(f.points.begin(), f.points.end(), x);
  if (it == f.points.begin()) return 0.0;
  return f.cumulative[static_cast<std::size_t>(it - f.points.begin()) - 1];
}

double kolmogorov_distance(const StepCdf& f, const SemicircleLaw& g) {
  double sup = 0.0;
  double before = 0.0;
  for (std::size_t k = 0; k < f.points.size(); ++k) {
    const double gx = g.cdf(f.points[k]);
    sup = std::max({sup, std::abs(f.cumulative[k] - gx), std::abs(gx - before)});
    before = f.cumulative[k];
  }
  return sup;
}

}  // namespace wigner
