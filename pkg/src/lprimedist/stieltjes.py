"""Digamma and the first generalized Stieltjes constant at rational points.

Convention: zeta(s, x) = 1/(s-1) + sum_n (-1)^n gamma_n(x) (s-1)^n / n!,
so gamma_0(x) = -psi(x) and

    gamma_1(x) = lim_N [ sum_{k=0}^{N} log(k+x)/(k+x) - log(N+x)^2 / 2 ].

Both functions shift the argument by ``shift`` terms and finish with an
Euler-Maclaurin expansion carrying Bernoulli corrections through B_12.
Arguments may be floats or ``Fraction``s; for a Fraction a/q the head terms
are formed from the integers kq + a so the argument is never rounded.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import is_odd_prime
from .errors import InvalidModulusError

EULER_GAMMA = 0.57721566490153286060651209008240243
DEFAULT_SHIFT = 32

# B_2 .. B_12, then B_14 for the remainder estimate
_BERNOULLI = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
              Fraction(5, 66), Fraction(-691, 2730)]
_B14 = Fraction(7, 6)
_U = 2.0**-53


def _harmonic(n: int) -> float:
    return math.fsum(1.0 / j for j in range(1, n + 1))


_H_ODD = [_harmonic(2 * j - 1) for j in range(1, 8)]


def _split(x) -> tuple[int, int] | None:
    if isinstance(x, Fraction):
        return x.numerator, x.denominator
    if isinstance(x, int):
        return x, 1
    return None


def _check(x) -> None:
    if not x > 0:
        raise ValueError(f"argument must be positive, got {x}")


def digamma_with_error(x, shift: int = DEFAULT_SHIFT) -> tuple[float, float]:
    """psi(x) and an upper bound on its absolute error."""
    _check(x)
    rat = _split(x)
    if rat is not None:
        a, q = rat
        terms = [q / (k * q + a) for k in range(shift)]
        err = sum(_U * t for t in terms)
    else:
        xf = float(x)
        terms = [1.0 / (k + xf) for k in range(shift)]
        err = sum(2 * _U * t for t in terms)
    y = shift + float(x)
    inv2 = 1.0 / (y * y)
    tail = math.log(y) - 0.5 / y
    power = inv2
    for j, b in enumerate(_BERNOULLI, start=1):
        tail -= float(b) / (2 * j) * power
        power *= inv2
    trunc = 2 * float(_B14) / 14 * power
    value = math.fsum([tail] + [-t for t in terms])
    err += trunc + 4 * _U * (abs(tail) + abs(value))
    return value, err


def digamma(x, shift: int = DEFAULT_SHIFT) -> float:
    return digamma_with_error(x, shift)[0]


def gamma1_with_error(x, shift: int = DEFAULT_SHIFT) -> tuple[float, float]:
    """gamma_1(x) and an upper bound on its absolute error."""
    _check(x)
    rat = _split(x)
    terms = []
    err = 0.0
    if rat is not None:
        a, q = rat
        lq = math.log(q)
        for k in range(shift):
            n = k * q + a
            ln = math.log(n)
            w = q / n
            t = (ln - lq) * w
            terms.append(t)
            err += _U * ((abs(ln) + lq) * w + 2 * abs(t))
    else:
        xf = float(x)
        for k in range(shift):
            y = k + xf
            t = math.log(y) / y
            terms.append(t)
            err += 3 * _U * (abs(math.log(y)) + 1) / y
    y = shift + float(x)
    ly = math.log(y)
    head = [-0.5 * ly * ly, 0.5 * ly / y]
    inv2 = 1.0 / (y * y)
    power = inv2
    for j, b in enumerate(_BERNOULLI, start=1):
        head.append(float(b) / (2 * j) * (ly - _H_ODD[j - 1]) * power)
        power *= inv2
    trunc = 2 * float(_B14) / 14 * abs(ly - _H_ODD[6]) * power
    value = math.fsum(terms + head)
    err += trunc + 4 * _U * math.fsum(abs(h) for h in head) + 2 * _U * abs(value)
    return value, err


def gamma1_at(x, shift: int = DEFAULT_SHIFT) -> float:
    return gamma1_with_error(x, shift)[0]


@dataclass(frozen=True)
class StieltjesTable:
    q: int
    gamma0: np.ndarray  # gamma0[a-1] = -psi(a/q), a = 1..q-1
    gamma1: np.ndarray
    err_bound: np.ndarray  # per-entry bound, max of the two errors

    def to_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["a", "gamma0", "gamma1", "err_bound"])
        for a in range(1, self.q):
            w.writerow([a, f"{self.gamma0[a - 1]:.17g}", f"{self.gamma1[a - 1]:.17g}",
                        f"{self.err_bound[a - 1]:.3g}"])


def build_stieltjes_table(q: int, shift: int = DEFAULT_SHIFT) -> StieltjesTable:
    if not is_odd_prime(q):
        raise InvalidModulusError(f"{q} is not an odd prime")
    g0 = np.empty(q - 1)
    g1 = np.empty(q - 1)
    err = np.empty(q - 1)
    for a in range(1, q):
        x = Fraction(a, q)
        psi, e0 = digamma_with_error(x, shift)
        v1, e1 = gamma1_with_error(x, shift)
        g0[a - 1] = -psi
        g1[a - 1] = v1
        err[a - 1] = max(e0, e1)
    for arr in (g0, g1, err):
        arr.setflags(write=False)
    return StieltjesTable(q, g0, g1, err)
