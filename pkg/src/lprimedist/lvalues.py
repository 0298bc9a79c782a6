"""L(1, chi), L'(1, chi) and |L'/L(1, chi)| for every non-principal character.

Starting from L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q) and cancelling the
pole (sum_a chi(a) = 0 for b != 0):

    L(1)  =  (1/q) sum_a chi(a) gamma0(a/q)
    L'(1) = -(1/q) sum_a chi(a) gamma1(a/q) - log(q) L(1)

The character sums over a are evaluated for all b at once by a length q-1
FFT of the Stieltjes columns reordered along powers of the primitive root
("dft"), or row by row with compensated summation ("direct").
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import prime_powers
from .characters import CharacterTable, build_table
from .errors import InvalidModulusError, NumericToleranceError
from .stieltjes import StieltjesTable, build_stieltjes_table

MIN_ABS_L1 = 1e-8


@dataclass(frozen=True)
class LValueRecord:
    q: int
    b: int
    L1: complex
    Lp1: complex

    @property
    def ratio(self) -> float:
        return abs(self.Lp1 / self.L1)

    @property
    def log_derivative(self) -> complex:
        return self.Lp1 / self.L1


def _twisted_sums_dft(table: CharacterTable, column: np.ndarray) -> np.ndarray:
    """S[b] = sum_{a=1}^{q-1} chi_b(a) column[a-1] for b in [0, q-1)."""
    seq = column[table.powers - 1]
    # sum_k seq[k] e^{+2 pi i b k/n} = conj(fft(seq))[b] for real seq
    return np.conj(np.fft.fft(seq))


def _twisted_sums_direct(table: CharacterTable, column: np.ndarray, bs) -> np.ndarray:
    out = np.empty(len(bs), dtype=np.complex128)
    k = table.dlog[1:]
    n = table.q - 1
    for i, b in enumerate(bs):
        row = table.roots[(b * k) % n]
        out[i] = complex(math.fsum(row.real * column), math.fsum(row.imag * column))
    return out


def _mirror(half: np.ndarray, q: int) -> np.ndarray:
    """Extend values for b = 0..(q-1)/2 to all b using conjugate symmetry."""
    n = q - 1
    full = np.empty(n, dtype=np.complex128)
    full[: n // 2 + 1] = half
    # b = 0 and b = n/2 are real characters
    full[0] = full[0].real
    full[n // 2] = full[n // 2].real
    b = np.arange(n // 2 + 1, n)
    full[b] = np.conj(full[n - b])
    return full


def l_values_all(table: CharacterTable, st: StieltjesTable, method: str = "dft") -> list[LValueRecord]:
    """One record per non-principal character b = 1..q-2."""
    if table.q != st.q:
        raise InvalidModulusError(f"character table q={table.q} but Stieltjes table q={st.q}")
    q = table.q
    half_b = np.arange((q - 1) // 2 + 1)
    if method == "dft":
        s0 = _twisted_sums_dft(table, st.gamma0)[half_b]
        s1 = _twisted_sums_dft(table, st.gamma1)[half_b]
    elif method == "direct":
        s0 = _twisted_sums_direct(table, st.gamma0, half_b)
        s1 = _twisted_sums_direct(table, st.gamma1, half_b)
    else:
        raise ValueError(f"unknown method {method!r}")
    s0 = _mirror(s0, q)
    s1 = _mirror(s1, q)
    L1 = s0 / q
    Lp1 = -s1 / q - math.log(q) * L1
    records = []
    for b in range(1, q - 1):
        if abs(L1[b]) < MIN_ABS_L1:
            raise NumericToleranceError(f"|L(1, chi_{b})| = {abs(L1[b]):.3g} mod {q}; engine fault")
        records.append(LValueRecord(q, b, complex(L1[b]), complex(Lp1[b])))
    return records


def l_values_for(q: int, method: str = "dft") -> list[LValueRecord]:
    return l_values_all(build_table(q), build_stieltjes_table(q), method)


def ratios(records: list[LValueRecord]) -> np.ndarray:
    return np.array([r.ratio for r in records])


def write_csv(records: list[LValueRecord], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["q", "b", "re_L1", "im_L1", "re_Lp1", "im_Lp1", "ratio"])
    for r in records:
        w.writerow([r.q, r.b] + [f"{v:.17g}" for v in
                                 (r.L1.real, r.L1.imag, r.Lp1.real, r.Lp1.imag, r.ratio)])


# -- smoothed series oracle ---------------------------------------------------

def oracle_length(X: float) -> int:
    return math.ceil(X * math.log(1e16))


@lru_cache(maxsize=4)
def _smoothed_weights(X: float) -> tuple[np.ndarray, np.ndarray]:
    n, lam = prime_powers(oracle_length(X))
    return n, lam * np.exp(-n / X) / n


@lru_cache(maxsize=16)
def _oracle_buckets(q: int, X: float) -> np.ndarray:
    """W[r] = sum of Lambda(n) e^{-n/X}/n over prime powers n = g^r (mod q)."""
    table = build_table(q)
    n, w = _smoothed_weights(X)
    res = n % q
    keep = res != 0
    return np.bincount(table.dlog[res[keep]], weights=w[keep], minlength=q - 1)


def ratio_oracle_all(table: CharacterTable, X: float) -> np.ndarray:
    """Smoothed sums sum_n chi_b(n) Lambda(n) e^{-n/X} / n for b in [0, q-1).

    As X grows this tends to -L'/L(1, chi_b) for b != 0.
    """
    if X < 1e3:
        raise ValueError("smoothing scale must be >= 1e3")
    W = _oracle_buckets(table.q, float(X))
    half = np.conj(np.fft.fft(W))[: (table.q - 1) // 2 + 1]
    return _mirror(half, table.q)


def ratio_oracle_smoothed(table: CharacterTable, b: int, X: float) -> complex:
    if X < 1e3:
        raise ValueError("smoothing scale must be >= 1e3")
    W = _oracle_buckets(table.q, float(X))
    r = np.arange(table.q - 1)
    row = table.roots[(b * r) % (table.q - 1)]
    return complex(math.fsum(row.real * W), math.fsum(row.imag * W))
