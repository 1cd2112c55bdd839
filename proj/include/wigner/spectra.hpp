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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wigner/ensemble.hpp"

namespace wigner {

class SemicircleLaw;

/// Sorted eigenvalues of one symmetric matrix.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size n-1; offdiag[k] couples rows k and k+1
};

class EigenSolverError : public std::runtime_error {
 public:
  EigenSolverError(int index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

/// Householder reduction to an orthogonally similar tridiagonal matrix.
Tridiagonal tridiagonalize(const SymmetricMatrix& m);

/// Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL with
/// Wilkinson shifts, sorted ascending. Throws EigenSolverError if an
/// eigenvalue fails to converge within 50 sweeps.
std::vector<double> tridiagonal_eigenvalues(Tridiagonal t);

Spectrum eigenvalues(const SymmetricMatrix& m);

/// Right-continuous step distribution function.
struct StepCdf {
  std::vector<double> points;      // strictly increasing jump locations
  std::vector<double> cumulative;  // F(points[k]); last entry is 1
};

StepCdf esd(const Spectrum& s);

/// Pools the spectra with mass 1/(R n) per eigenvalue. Throws on an empty
/// list or on mismatched dimensions.
StepCdf mean_esd(std::span<const Spectrum> spectra);

/// Step CDF from arbitrary sample values, each of equal mass.
StepCdf step_cdf_from_values(std::vector<double> values);

double esd_eval(const StepCdf& f, double x);

/// sup_x |F(x) - G(x)|, exact for a step F and a continuous G: evaluated
/// on both sides of every jump.
double kolmogorov_distance(const StepCdf& f, const SemicircleLaw& g);

}  // namespace wigner
