import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lprimedist import distribution
from lprimedist.errors import InvalidModulusError, PreconditionError
from lprimedist.lvalues import l_values_for


@pytest.fixture(scope="module")
def dists():
    return {q: distribution.distribution_for(q) for q in (59, 101, 257)}


def test_shape(dists):
    for q, d in dists.items():
        assert d.ratios.size == q - 2
        assert np.all(np.diff(d.ratios) >= 0)
        assert np.all(np.isfinite(d.ratios)) and d.ratios[0] > 0


def test_cdf_examples(dists):
    d = dists[101]
    assert distribution.empirical_cdf(d, 0) == 0
    assert distribution.empirical_cdf(d, d.ratios[-1]) == 1
    med = d.ratios[(d.size - 1) // 2]
    # conjugate pairs make each step two samples wide
    assert abs(distribution.empirical_cdf(d, med) - 0.5) <= 2 / d.size
    assert distribution.empirical_cdf(d, np.inf) == 1


def test_right_continuity_and_step_mass(dists):
    for q, d in dists.items():
        for r in np.unique(d.ratios):
            jump = distribution.empirical_cdf(d, r) - distribution.empirical_cdf(d, np.nextafter(r, 0))
            mult = np.count_nonzero(d.ratios == r)
            assert jump == pytest.approx(mult / (q - 2), abs=1e-15)


@given(st.floats(0, 5), st.floats(0, 5))
def test_cdf_monotone(s, t):
    d = distribution.distribution_for(59)
    lo, hi = sorted((s, t))
    assert distribution.empirical_cdf(d, lo) <= distribution.empirical_cdf(d, hi)


def test_moment_identities(dists):
    d = dists[101]
    assert distribution.empirical_moment(d, 0) == 1
    for k in (1, 2, 3):
        direct = math.fsum(r.ratio ** (2 * k) for r in l_values_for(101))
        assert (d.size * distribution.empirical_moment(d, k)) == pytest.approx(direct, rel=1e-14)


def test_moment_overflow_guard(dists):
    with pytest.raises(OverflowError):
        distribution.empirical_moment(dists[59], 10**4)


def test_conjugate_pairs(dists):
    for q, d in dists.items():
        _, counts = np.unique(d.ratios, return_counts=True)
        assert np.sum(counts % 2) <= 1


def test_ties_ordered_by_index(dists):
    d = dists[59]
    for i in range(d.size - 1):
        if d.ratios[i] == d.ratios[i + 1]:
            assert d.order[i] < d.order[i + 1]


def test_nondegenerate(dists):
    d = dists[257]
    a = float(np.quantile(d.ratios, 0.25))
    assert 0 < distribution.empirical_cdf(d, a) < 1


def test_tail_report(dists):
    d = dists[101]
    rep = distribution.tail_report(d, [1, 4, 9, 16])
    fr = [r["fraction"] for r in rep["rows"]]
    assert all(b <= a for a, b in zip(fr, fr[1:]))
    assert 0 <= fr[0] <= 1
    assert rep["rows"][0]["reference"] == pytest.approx(0.6065306597126334)
    assert rep["fitted_constant"] == max(r["fraction"] / r["reference"] for r in rep["rows"])
    beyond = distribution.tail_report(d, [d.ratios[-1] + 1])
    assert beyond["rows"][0]["fraction"] == 0


def test_tail_report_validation(dists):
    with pytest.raises(PreconditionError):
        distribution.tail_report(dists[59], [0.5])
    with pytest.raises(PreconditionError):
        distribution.tail_report(dists[59], [4, 1])


def test_theorem1_k0_is_exact(dists):
    rep = distribution.theorem1_report([59, 101, 257], 0, dists=dists)
    assert rep["exact_match"] and rep["slope"] is None
    assert all(r["deviation"] == 0 for r in rep["rows"])


def test_theorem1_validation(dists):
    with pytest.raises(PreconditionError):
        distribution.theorem1_report([101], 1)
    with pytest.raises(PreconditionError):
        distribution.theorem1_report([257, 101, 59], 1)
    with pytest.raises(InvalidModulusError):
        distribution.theorem1_report([59, 91, 101], 1)


def test_grid_points():
    g = distribution.grid_points(0, 8, 0.01)
    assert g.size == 801 and g[0] == 0 and g[-1] == pytest.approx(8)
    with pytest.raises(PreconditionError):
        distribution.grid_points(0, 1, 0)


def test_figure_data(dists):
    data = distribution.figure1_data(distribution.grid_points(0, 10, 0.005), dists=dists)
    assert list(data) == ["t", 59, 101, 257]
    for q in (59, 101, 257):
        col = data[q]
        assert np.all(np.diff(col) >= 0)
        assert col[0] == 0 and col[-1] == 1
        counts = col * (q - 2)
        assert np.allclose(counts, np.round(counts), atol=1e-9)
        # each distinct ratio is one jump; conjugate pairs merge into one
        assert np.unique(col).size - 1 <= np.unique(dists[q].ratios).size


def test_figure_csv(dists):
    data = distribution.figure1_data(distribution.grid_points(0, 1, 0.5), dists=dists)
    buf = io.StringIO()
    distribution.write_figure_csv(data, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t,D_59,D_101,D_257"
    assert len(lines) == 4
