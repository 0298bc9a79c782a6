"""Invariant suites run by ``lprimedist verify``.

Each check returns ``(ok, detail)``; sizes are chosen so the full run takes
well under a minute.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import arith, characters, distribution, lvalues, moments, stieltjes
from .stieltjes import EULER_GAMMA


def _arith_log_power_bound():
    sieve = arith.mangoldt_sieve(10**4)
    logm = np.log(np.arange(2, 10**4 + 1, dtype=np.float64))
    worst = -np.inf
    for k in range(1, 5):
        c = arith.lambda_convolution(k, 10**4, sieve).values[2:]
        worst = max(worst, float(np.max(c - logm**k)))
    return worst <= 1e-12, f"max c_k(m) - (log m)^k = {worst:.3g}"


def _arith_chebyshev():
    psi = math.fsum(arith.mangoldt_sieve(10**5).values)
    return abs(psi - 1e5) <= 0.05 * 1e5, f"psi(1e5) = {psi:.6g}"


def _arith_primitive_roots():
    bad = []
    for q in (3, 5, 7, 59, 101, 257, 4001):
        g = arith.primitive_root(q)
        if any(pow(g, (q - 1) // r, q) == 1 for r in arith.prime_factors(q - 1)):
            bad.append(q)
    return not bad, f"failing moduli: {bad}"


def _arith_coprime_part():
    for q in range(1, 60):
        for n in range(1, 60):
            d = arith.coprime_part(q, n)
            best = max(e for e in range(1, q + 1) if q % e == 0 and math.gcd(e, n) == 1)
            if d != best:
                return False, f"coprime_part({q}, {n}) = {d}, expected {best}"
    return True, "q, n < 60"


def _char_row_sums():
    worst = 0.0
    for q in (7, 59, 101):
        mat = characters.character_matrix(characters.build_table(q))
        sums = mat.sum(axis=1)
        expect = np.zeros(q - 1)
        expect[0] = q - 1
        worst = max(worst, float(np.max(np.abs(sums - expect))))
    return worst <= 1e-9, f"max deviation {worst:.3g}"


def _char_multiplicative():
    q = 59
    t = characters.build_table(q)
    n = np.arange(1, q)
    worst = 0.0
    for b in range(q - 1):
        v = characters.chi_values(t, b, n)
        prod = characters.chi_values(t, b, np.outer(n, n) % q)
        worst = max(worst, float(np.max(np.abs(prod - np.outer(v, v)))))
    return worst <= 1e-12, f"max deviation {worst:.3g}"


def _char_orthogonality():
    worst = 0.0
    for q in (7, 59):
        t = characters.build_table(q)
        for m in range(1, 61):
            for n in range(1, 61):
                got = characters.orthogonality_sum(t, m, n)
                worst = max(worst, abs(got - characters.orthogonality_expected(q, m, n)))
    return worst <= 1e-9, f"max deviation {worst:.3g}"


def _char_finite_identity():
    rng = np.random.default_rng(0)
    worst = 0.0
    for q in (7, 59, 101):
        lhs, rhs = characters.finite_orthogonality(characters.build_table(q), rng.standard_normal(2000))
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst <= 1e-8, f"max relative deviation {worst:.3g}"


def _stieltjes_multiplication():
    g1 = stieltjes.gamma1_at(1)
    worst0 = worst1 = 0.0
    for q in (59, 101, 257):
        st = stieltjes.build_stieltjes_table(q)
        L = math.log(q)
        s0 = math.fsum(-st.gamma0) + stieltjes.digamma(1)
        s1 = math.fsum(st.gamma1) + g1
        worst0 = max(worst0, abs(s0 + q * (EULER_GAMMA + L)) / q)
        worst1 = max(worst1, abs(s1 - q * (g1 - EULER_GAMMA * L - L * L / 2)) / q)
    ok = worst0 <= 1e-9 and worst1 <= 1e-8
    return ok, f"digamma {worst0:.3g}/q, gamma1 {worst1:.3g}/q"


def _stieltjes_reflection():
    worst = 0.0
    for x in (Fraction(1, 5), Fraction(2, 5)):
        d = stieltjes.digamma(1 - x) - stieltjes.digamma(x)
        worst = max(worst, abs(d - math.pi / math.tan(math.pi * x)))
    return worst <= 1e-10, f"max deviation {worst:.3g}"


def _stieltjes_shift():
    worst = 0.0
    for q in (59, 257):
        st = stieltjes.build_stieltjes_table(q)
        st2 = stieltjes.build_stieltjes_table(q, shift=2 * stieltjes.DEFAULT_SHIFT)
        excess = np.maximum(np.abs(st.gamma0 - st2.gamma0), np.abs(st.gamma1 - st2.gamma1)) - st.err_bound
        worst = max(worst, float(np.max(excess)))
    return worst <= 0, f"max change beyond err_bound {worst:.3g}"


def _lv_paths():
    worst = 0.0
    for q in (59, 101, 257):
        a = lvalues.l_values_for(q, "dft")
        b = lvalues.l_values_for(q, "direct")
        for x, y in zip(a, b):
            worst = max(worst, abs(x.L1 - y.L1), abs(x.Lp1 - y.Lp1))
    return worst <= 1e-9, f"max |dft - direct| = {worst:.3g}"


def _lv_quadratic5():
    rec = lvalues.l_values_for(5)[1]
    expect = 2 / math.sqrt(5) * math.log((1 + math.sqrt(5)) / 2)
    err = abs(rec.L1 - expect)
    return err <= 1e-8, f"|L(1, chi_5) - closed form| = {err:.3g}"


def _lv_envelope():
    out = []
    for q in (59, 101, 257):
        r = lvalues.ratios(lvalues.l_values_for(q))
        if not (np.all(r > 0) and np.all(r < 10)):
            out.append(q)
    return not out, f"moduli outside (0, 10): {out}"


def _lv_engine_orthogonality():
    worst = 0.0
    for q in (59, 101):
        t = characters.build_table(q)
        st = stieltjes.build_stieltjes_table(q)
        total = characters.character_matrix(t).sum(axis=0) @ st.gamma0
        worst = max(worst, abs(total - (q - 1) * st.gamma0[0]) / q)
    return worst <= 1e-8, f"max deviation {worst:.3g}/q"


def _lv_oracle():
    # q = 5 agrees at X = 1e6; larger moduli are checked for X^{-1/2} convergence
    t5 = characters.build_table(5)
    r5 = lvalues.l_values_for(5)
    o5 = lvalues.ratio_oracle_all(t5, 1e6)
    d5 = max(abs(abs(o5[r.b]) - r.ratio) for r in r5)
    rates = []
    for q in (59, 101):
        t = characters.build_table(q)
        ld = np.array([r.log_derivative for r in lvalues.l_values_for(q)])
        d1 = np.max(np.abs(ld + lvalues.ratio_oracle_all(t, 1e6)[1:]))
        d4 = np.max(np.abs(ld + lvalues.ratio_oracle_all(t, 4e6)[1:]))
        rates.append(float(d4 / d1))
    ok = d5 <= 1e-3 and max(rates) <= 0.6
    return ok, f"q=5 deviation {d5:.3g}; deviation ratio X=4e6 vs 1e6: {[round(r, 3) for r in rates]}"


def _mk_trivial():
    e = moments.moment_constant(0)
    d = moments.moment_constant(0, 10**4, "direct")
    return e.partial == 1 and e.tail_bound == 0 and d.partial == 1 and d.tail_bound == 0, "k = 0"


def _mk_routes_agree():
    bad = []
    for k in range(1, 5):
        a = moments.moment_constant(k, 10**5, "direct")
        b = moments.moment_constant(k, 10**5, "euler")
        if max(a.partial, b.partial) > min(a.upper, b.upper):
            bad.append(k)
    return not bad, f"disjoint enclosures for k in {bad}"


def _mk_closed_form():
    bad = [k for k in range(7) if moments.moment_constant(k, 10**5).upper > moments.closed_form_bound(k)]
    return not bad, f"bound violated for k in {bad}"


def _mk_carleman():
    est = [moments.moment_constant(k, 1000) for k in range(1, 21)]
    sums = [moments.carleman_partial_sum(K, est) for K in range(1, 21)]
    ok = all(b > a for a, b in zip(sums, sums[1:]))
    return ok, f"partial sums {sums[0]:.4f} .. {sums[-1]:.4f}"


def _mk_printed_digits():
    # the printed constants are the k = 1 and k = 2 sums cut at m <= 1e5
    m1 = moments.moment_constant(1, 10**5, "direct").partial
    m2 = moments.moment_constant(2, 10**5, "direct").partial
    ok = math.floor(m1 * 1e5) == 80508 and math.floor(m2 * 1e3) == 1242
    return ok, f"sum to 1e5: k=1 {m1:.7f}, k=2 {m2:.7f}"


def _dist_figure():
    grid = distribution.grid_points(0, 10, 0.01)
    data = distribution.figure1_data(grid)
    bad = []
    for q in distribution.FIGURE_PRIMES:
        col = data[q]
        counts = col * (q - 2)
        if np.any(np.diff(col) < 0) or col[0] != 0 or col[-1] != 1 or np.max(np.abs(counts - np.round(counts))) > 1e-9:
            bad.append(q)
    return not bad, f"malformed columns: {bad}"


def _dist_tail():
    rep = distribution.tail_report(distribution.distribution_for(257), [1, 4, 9, 16])
    fr = [float(r["fraction"]) for r in rep["rows"]]
    return all(b <= a for a, b in zip(fr, fr[1:])), f"fractions {fr}"


def _dist_nondegenerate():
    dist = distribution.distribution_for(257)
    a = float(np.quantile(dist.ratios, 0.25))
    f = distribution.empirical_cdf(dist, a)
    return 0 < f < 1, f"D_257({a:.4f}) = {f:.4f}"


def _dist_pairs():
    bad = []
    for q in distribution.FIGURE_PRIMES:
        vals, counts = np.unique(distribution.distribution_for(q).ratios, return_counts=True)
        if np.sum(counts % 2) > 1:
            bad.append(q)
    return not bad, f"unpaired values beyond the real character: {bad}"


SUITES = {
    "arith": [_arith_log_power_bound, _arith_chebyshev, _arith_primitive_roots, _arith_coprime_part],
    "characters": [_char_row_sums, _char_multiplicative, _char_orthogonality, _char_finite_identity],
    "stieltjes": [_stieltjes_multiplication, _stieltjes_reflection, _stieltjes_shift],
    "lvalues": [_lv_paths, _lv_quadratic5, _lv_envelope, _lv_engine_orthogonality, _lv_oracle],
    "moments": [_mk_trivial, _mk_routes_agree, _mk_closed_form, _mk_carleman, _mk_printed_digits],
    "distribution": [_dist_figure, _dist_tail, _dist_nondegenerate, _dist_pairs],
}


def run_suite(name: str) -> list[dict]:
    names = list(SUITES) if name == "all" else [name]
    results = []
    for suite in names:
        for check in SUITES[suite]:
            try:
                ok, detail = check()
            except Exception as exc:  # a crash is a failed check, not a crashed run
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            results.append({"suite": suite, "check": check.__name__.lstrip("_"),
                            "ok": bool(ok), "detail": detail})
    return results
