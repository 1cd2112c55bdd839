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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wigner/bounds.hpp"
#include "wigner/ensemble.hpp"
#include "wigner/export.hpp"
#include "wigner/harness.hpp"
#include "wigner/law.hpp"
#include "wigner/resolvent.hpp"
#include "wigner/spectra.hpp"

namespace py = pybind11;
using namespace wigner;

namespace {

py::array_t<double> dense_array(const SymmetricMatrix& m) {
  const int n = m.size();
  py::array_t<double> out({n, n});
  auto r = out.mutable_unchecked<2>();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = m(i, j);
  return out;
}

SymmetricMatrix from_array(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw std::invalid_argument("expected a square matrix");
  const int n = static_cast<int>(a.shape(0));
  return SymmetricMatrix::from_dense(n, std::span<const double>(a.data(), a.size()));
}

WignerSpec spec_for(int n, const EntryDistribution& base, double sigma, std::uint64_t seed, bool truncate) {
  return make_wigner_spec(n, base, sigma, seed, truncate);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wigner matrices, semicircle law and convergence-rate diagnostics.";
  m.attr("__version__") = kVersion;

  py::register_exception<EigenSolverError>(m, "EigenSolverError", PyExc_RuntimeError);

  py::enum_<DistKind>(m, "DistKind")
      .value("gaussian", DistKind::gaussian)
      .value("rademacher", DistKind::rademacher)
      .value("uniform", DistKind::uniform)
      .value("student_t", DistKind::student_t)
      .value("two_point", DistKind::two_point);

  py::class_<EntryDistribution>(m, "EntryDistribution")
      .def_readonly("kind", &EntryDistribution::kind)
      .def_readonly("amplitude", &EntryDistribution::amplitude)
      .def_readonly("truncation_level", &EntryDistribution::truncation_level)
      .def_readonly("nu2", &EntryDistribution::nu2)
      .def_readonly("nu3", &EntryDistribution::nu3)
      .def_readonly("nu4", &EntryDistribution::nu4)
      .def_readonly("nu6", &EntryDistribution::nu6)
      .def_property_readonly("truncated", &EntryDistribution::truncated)
      .def_property_readonly("finite_sixth_moment", &EntryDistribution::finite_sixth_moment)
      .def("__repr__", [](const EntryDistribution& d) { return "<EntryDistribution " + to_string(d.kind) + ">"; });

  m.def(
      "make_distribution",
      [](const std::string& kind, double df, double p) { return make_distribution(parse_kind(kind), {df, p}); },
      py::arg("kind"), py::arg("df") = 0.0, py::arg("p") = 0.5);
  m.def("truncate_center_rescale", &truncate_center_rescale, py::arg("dist"), py::arg("n"));
  m.def("replica_seed", &replica_seed, py::arg("master"), py::arg("n"), py::arg("replica"));

  m.def(
      "sample_wigner",
      [](int n, const EntryDistribution& base, double sigma, std::uint64_t seed, bool truncate) {
        return dense_array(sample_wigner(spec_for(n, base, sigma, seed, truncate)));
      },
      py::arg("n"), py::arg("dist"), py::arg("sigma") = 1.0, py::arg("seed") = 0, py::arg("truncate") = false,
      "Scaled Wigner matrix as a dense n x n array.");

  m.def(
      "eigenvalues", [](py::array_t<double> a) { return eigenvalues(from_array(a)).eigenvalues; }, py::arg("matrix"),
      "Ascending eigenvalues of a symmetric matrix (upper triangle is read).");
  m.def(
      "wigner_eigenvalues",
      [](int n, const EntryDistribution& base, double sigma, std::uint64_t seed, bool truncate) {
        py::gil_scoped_release release;
        return eigenvalues(sample_wigner(spec_for(n, base, sigma, seed, truncate))).eigenvalues;
      },
      py::arg("n"), py::arg("dist"), py::arg("sigma") = 1.0, py::arg("seed") = 0, py::arg("truncate") = false);

  py::class_<SemicircleLaw>(m, "SemicircleLaw")
      .def(py::init<double>(), py::arg("sigma") = 1.0)
      .def_property_readonly("sigma", &SemicircleLaw::sigma)
      .def("pdf", &SemicircleLaw::pdf)
      .def("cdf", &SemicircleLaw::cdf)
      .def("quantile", &SemicircleLaw::quantile)
      .def("cdf_integral", &SemicircleLaw::cdf_integral)
      .def("stieltjes", [](const SemicircleLaw& g, cplx z) { return g.stieltjes({z.real(), z.imag()}); });

  m.def(
      "kolmogorov_distance",
      [](std::vector<double> values, const SemicircleLaw& g) {
        return kolmogorov_distance(step_cdf_from_values(std::move(values)), g);
      },
      py::arg("eigenvalues"), py::arg("law") = SemicircleLaw());
  m.def(
      "empirical_stieltjes",
      [](std::vector<double> values, cplx z) {
        return empirical_stieltjes(Spectrum{std::move(values), 0}, {z.real(), z.imag()});
      },
      py::arg("eigenvalues"), py::arg("z"));
  m.def("integral_bound_value", &integral_bound_value);

  py::class_<LeaveOneOutDiag>(m, "LeaveOneOutDiag")
      .def_readonly("index", &LeaveOneOutDiag::index)
      .def_readonly("beta", &LeaveOneOutDiag::beta)
      .def_readonly("gamma", &LeaveOneOutDiag::gamma)
      .def_readonly("gamma_hat", &LeaveOneOutDiag::gamma_hat)
      .def_readonly("xi", &LeaveOneOutDiag::xi)
      .def_readonly("eps", &LeaveOneOutDiag::eps)
      .def_readonly("a_n", &LeaveOneOutDiag::a_n)
      .def_readonly("b_n", &LeaveOneOutDiag::b_n)
      .def_readonly("resolvent_diag", &LeaveOneOutDiag::resolvent_diag)
      .def_readonly("s_n", &LeaveOneOutDiag::s_n)
      .def("eps_identity_residual", &LeaveOneOutDiag::eps_identity_residual);

  m.def(
      "leave_one_out",
      [](py::array_t<double> a, cplx z, cplx es_n) {
        return SpectralResolvent(from_array(a)).all_indices({z.real(), z.imag()}, es_n);
      },
      py::arg("matrix"), py::arg("z"), py::arg("es_n"), "Diagnostics for every index at one z.");

  py::class_<BaiConstants>(m, "BaiConstants")
      .def_readonly("A", &BaiConstants::A)
      .def_readonly("B", &BaiConstants::B)
      .def_readonly("eps", &BaiConstants::eps)
      .def_readonly("v", &BaiConstants::v)
      .def_readonly("rho", &BaiConstants::rho)
      .def_readonly("zeta", &BaiConstants::zeta)
      .def("prefactor", &BaiConstants::prefactor);
  m.def("validate_constants", &validate_constants, py::arg("A") = 16.0, py::arg("B") = 3.0, py::arg("eps") = 2.0,
        py::arg("v") = 0.125);

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("name", &BoundReport::name)
      .def_readonly("lhs", &BoundReport::lhs)
      .def_readonly("rhs", &BoundReport::rhs)
      .def_readonly("metrics", &BoundReport::metrics)
      .def_readonly("flags", &BoundReport::flags)
      .def_readonly("passed", &BoundReport::pass);
  m.def(
      "bai_check",
      [](std::vector<double> values, const BaiConstants& c, const SemicircleLaw& g) {
        return bai_rhs(step_cdf_from_values(std::move(values)), g, c);
      },
      py::arg("eigenvalues"), py::arg("constants"), py::arg("law") = SemicircleLaw());

  py::class_<RateSummary>(m, "RateSummary")
      .def_readonly("n", &RateSummary::n)
      .def_readonly("median", &RateSummary::median)
      .def_readonly("q25", &RateSummary::q25)
      .def_readonly("q75", &RateSummary::q75);
  py::class_<RateFit>(m, "RateFit")
      .def_readonly("per_n", &RateFit::per_n)
      .def_readonly("slope", &RateFit::slope)
      .def_readonly("intercept", &RateFit::intercept)
      .def_readonly("slope_se", &RateFit::slope_se)
      .def_readonly("r_squared", &RateFit::r_squared)
      .def_readonly("degenerate", &RateFit::degenerate)
      .def_property_readonly("witness_spread", &RateFit::witness_spread);
  m.def(
      "rate_fit",
      [](const std::map<int, std::vector<double>>& deltas) {
        std::vector<RateSummary> pts;
        for (const auto& [n, d] : deltas) pts.push_back(summarize_deltas(n, d));
        return rate_fit(pts);
      },
      py::arg("deltas"), "Fit log median distance against log n from {n: [distances]}.");
}
