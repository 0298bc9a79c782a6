import csv
import io
import math

import numpy as np
import pytest

from lprimedist import lvalues
from lprimedist.characters import build_table
from lprimedist.errors import InvalidModulusError
from lprimedist.stieltjes import build_stieltjes_table

import oracles

QUADRATIC5 = 2 / math.sqrt(5) * math.log((1 + math.sqrt(5)) / 2)


@pytest.fixture(scope="module")
def records():
    return {q: lvalues.l_values_for(q) for q in (5, 59, 101, 257)}


def test_quadratic_character_mod5(records):
    rec = records[5][1]
    assert rec.b == 2
    series, tail = oracles.quadratic5_series()
    assert abs(rec.L1 - series) <= tail + 1e-13
    assert abs(rec.L1 - QUADRATIC5) <= 1e-8


def test_record_count(records):
    assert len(lvalues.l_values_for(101)) == 99
    assert [r.b for r in records[59]] == list(range(1, 58))


@pytest.mark.parametrize("q", [5, 59, 101, 257])
def test_conjugate_pairing(records, q):
    recs = records[q]
    for r in recs:
        twin = recs[q - 1 - r.b - 1]
        assert twin.L1 == r.L1.conjugate() and twin.Lp1 == r.Lp1.conjugate()
        assert twin.ratio == r.ratio


@pytest.mark.parametrize("q", [59, 101, 257])
def test_dft_matches_direct(records, q):
    direct = lvalues.l_values_for(q, "direct")
    for a, b in zip(records[q], direct):
        assert abs(a.L1 - b.L1) <= 1e-9 and abs(a.Lp1 - b.Lp1) <= 1e-9


def test_direct_path_against_brute_characters():
    q = 13
    st = build_stieltjes_table(q)
    ref = oracles.brute_chi_table(q)
    for r in lvalues.l_values_for(q, "direct"):
        s0 = sum(ref[r.b][a] * st.gamma0[a - 1] for a in range(1, q))
        s1 = sum(ref[r.b][a] * st.gamma1[a - 1] for a in range(1, q))
        assert abs(r.L1 - s0 / q) <= 1e-12
        assert abs(r.Lp1 - (-s1 / q - math.log(q) * s0 / q)) <= 1e-12


@pytest.mark.parametrize("q", [59, 101])
def test_engine_orthogonality(q):
    t = build_table(q)
    st = build_stieltjes_table(q)
    sums = np.conj(np.fft.fft(st.gamma0[t.powers - 1]))
    assert abs(sums.sum() - (q - 1) * st.gamma0[0]) <= 1e-8 * q


@pytest.mark.parametrize("q", [59, 101, 257])
def test_sanity_envelope(records, q):
    r = lvalues.ratios(records[q])
    assert np.all(r > 0) and np.all(r < 10)


def test_nonzero_l1(records):
    for recs in records.values():
        assert min(abs(r.L1) for r in recs) > 1e-8


def test_modulus_mismatch():
    with pytest.raises(InvalidModulusError):
        lvalues.l_values_all(build_table(7), build_stieltjes_table(11))


def test_oracle_sign_convention_q5(records):
    t = build_table(5)
    o = lvalues.ratio_oracle_smoothed(t, 2, 1e6)
    rec = records[5][1]
    assert abs(abs(o) - rec.ratio) <= 1e-3
    # the smoothed series tends to -L'/L
    assert abs(o + rec.log_derivative) <= 1e-3


def test_oracle_conjugate_symmetry():
    t = build_table(59)
    for b in (1, 5, 20):
        a = lvalues.ratio_oracle_smoothed(t, b, 1e5)
        c = lvalues.ratio_oracle_smoothed(t, 58 - b, 1e5)
        assert abs(a - c.conjugate()) <= 1e-10


def test_oracle_vector_matches_scalar():
    t = build_table(59)
    vec = lvalues.ratio_oracle_all(t, 1e5)
    for b in (1, 7, 29, 57):
        assert abs(vec[b] - lvalues.ratio_oracle_smoothed(t, b, 1e5)) <= 1e-12


def test_oracle_moves_toward_engine_q5(records):
    t = build_table(5)
    target = -records[5][1].log_derivative
    dists = [abs(lvalues.ratio_oracle_smoothed(t, 2, X) - target) for X in (1e4, 2e4, 4e4, 8e4, 1.6e5)]
    assert all(b <= a + 1e-4 for a, b in zip(dists, dists[1:]))


@pytest.mark.parametrize("q", [59, 101])
def test_oracle_error_decays_like_inverse_sqrt(records, q):
    # the deviation is dominated by zeros near the critical line: ~ C X^{-1/2}
    t = build_table(q)
    ld = np.array([r.log_derivative for r in records[q]])
    d = [np.max(np.abs(ld + lvalues.ratio_oracle_all(t, X)[1:])) for X in (1e5, 1e6)]
    assert 0.2 < d[1] / d[0] < 0.45


def test_oracle_rejects_small_scale():
    with pytest.raises(ValueError):
        lvalues.ratio_oracle_smoothed(build_table(5), 1, 100)


def test_csv_format(records):
    buf = io.StringIO()
    lvalues.write_csv(records[5], buf)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert rows[0] == ["q", "b", "re_L1", "im_L1", "re_Lp1", "im_Lp1", "ratio"]
    assert len(rows) == 4
    r = records[5][0]
    assert complex(float(rows[1][2]), float(rows[1][3])) == r.L1
    assert float(rows[1][6]) == r.ratio
