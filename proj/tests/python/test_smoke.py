# Copyright 2026 The wignerrate Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import wignerrate as wr


def test_version():
    assert wr.__version__ == "0.3.0"


def test_sample_is_symmetric_and_deterministic():
    g = wr.make_distribution("gaussian")
    a = wr.sample_wigner(20, g, seed=7)
    b = wr.sample_wigner(20, g, seed=7)
    assert a.shape == (20, 20)
    assert np.array_equal(a, a.T)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, wr.sample_wigner(20, g, seed=8))


def test_eigenvalues_match_numpy():
    a = wr.sample_wigner(50, wr.make_distribution("rademacher"), seed=3)
    ours = np.array(wr.eigenvalues(a))
    assert np.allclose(ours, np.linalg.eigvalsh(a), atol=1e-10)
    assert np.allclose(ours, wr.wigner_eigenvalues(50, wr.make_distribution("rademacher"), seed=3))


def test_truncation_moments():
    t = wr.truncate_center_rescale(wr.make_distribution("student_t", df=3.0), 256)
    assert t.truncated
    assert t.finite_sixth_moment
    assert t.nu2 == pytest.approx(1.0)
    assert not wr.make_distribution("student_t", df=3.0).finite_sixth_moment


def test_semicircle_law():
    law = wr.SemicircleLaw()
    assert law.pdf(0.0) == pytest.approx(1 / math.pi)
    assert law.cdf(0.0) == 0.5
    assert law.cdf(law.quantile(0.3)) == pytest.approx(0.3)
    z = complex(0.4, 0.7)
    s = law.stieltjes(z)
    assert abs(s * s + z * s + 1) < 1e-12
    assert wr.integral_bound_value() == pytest.approx(math.pi + 2 * math.acosh(8.0))


def test_kolmogorov_distance():
    assert wr.kolmogorov_distance([0.0]) == pytest.approx(0.5)
    ev = wr.wigner_eigenvalues(400, wr.make_distribution("gaussian"), seed=1)
    assert wr.kolmogorov_distance(ev) < 0.05


def test_leave_one_out_identities():
    a = wr.sample_wigner(12, wr.make_distribution("uniform"), seed=5)
    z = complex(0.2, 0.5)
    rows = wr.leave_one_out(a, z, wr.SemicircleLaw().stieltjes(z))
    assert len(rows) == 12
    for r in rows:
        assert abs(r.beta - r.resolvent_diag) < 1e-10
        assert abs(r.eps_identity_residual(12)) < 1e-10
    assert np.mean([r.beta for r in rows]) == pytest.approx(wr.empirical_stieltjes(wr.eigenvalues(a), z))


def test_bai_constants_and_check():
    c = wr.validate_constants()
    assert c.rho == pytest.approx(2 / math.pi * math.atan(2.0))
    with pytest.raises(ValueError):
        wr.validate_constants(16.0, 4.0, 2.0, 0.125)
    ev = wr.wigner_eigenvalues(128, wr.make_distribution("gaussian"), seed=2)
    report = wr.bai_check(ev, c)
    assert report.passed
    assert all(l <= r for l, r in zip(report.lhs, report.rhs))


def test_rate_fit():
    fit = wr.rate_fit({n: [1 / math.sqrt(n)] * 3 for n in (100, 400, 1600)})
    assert fit.slope == pytest.approx(-0.5)
    assert fit.witness_spread == pytest.approx(1.0)
    assert [p.n for p in fit.per_n] == [100, 400, 1600]


def test_bad_input_raises():
    with pytest.raises(ValueError):
        wr.make_distribution("cauchy")
    with pytest.raises(ValueError):
        wr.eigenvalues(np.zeros((2, 3)))
