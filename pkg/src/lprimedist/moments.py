"""Limiting moment constants M_k = sum_m c_k(m)^2 / m^2 with certified bounds.

Two independent routes give an interval [partial, partial + tail_bound]:

``direct``
    partial = sum over m <= M from the convolution table; the remainder is
    bounded with the majorant c_k(m) <= (log m)^k, i.e. by
    sum_{m>M} (log m)^{2k}/m^2 <= Gamma(2k+1, log(M-1)).

``euler``
    With independent Steinhaus variables X_p, M_k = E|G|^{2k} where
    G = sum_p Y_p and Y_p = log p * sum_j X_p^j p^{-j}.  Hence M_k is
    (k!)^2 times the u^k v^k coefficient of prod_p E[exp(u Y_p + v conj(Y_p))],
    a product of bivariate series with non-negative coefficients.  The
    product over p <= M is the sum of c_k(m)^2/m^2 over M-smooth m (a lower
    bound); the factor for p > M is bounded coefficientwise by exp(H) using
    Chebyshev's bound psi(x) < 1.03883 x.  The tail shrinks like log(M)/M,
    so this route reaches widths the direct majorant cannot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import lambda_convolution, prime_sieve, primes_between
from .errors import PreconditionError

CHEBYSHEV_PSI = 1.03883  # psi(x) < 1.03883 x for all x > 0 (Rosser-Schoenfeld)
ROUNDING_SLACK = 1e-13
MIN_TRUNCATION = 16


@dataclass(frozen=True)
class MomentEstimate:
    k: int
    truncation: int
    partial: float
    tail_bound: float
    method: str = "euler"

    @property
    def upper(self) -> float:
        return self.partial + self.tail_bound

    @property
    def midpoint(self) -> float:
        return self.partial + 0.5 * self.tail_bound

    def contains(self, value: float) -> bool:
        return self.partial <= value <= self.upper

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "truncation": self.truncation,
            "method": self.method,
            "partial": f"{self.partial:.17g}",
            "tail_bound": f"{self.tail_bound:.17g}",
            "closed_form_bound": f"{closed_form_bound(self.k):.17g}",
        }


def closed_form_bound(k: int) -> float:
    """(2k)! + (k/e)^{2k}, the closed-form upper bound on M_k."""
    return math.factorial(2 * k) + (k / math.e) ** (2 * k) if k else 1.0


def upper_gamma_int(n: int, x: float) -> float:
    """Gamma(n+1, x) = int_x^inf u^n e^{-u} du for integer n >= 0, x >= 0.

    Uses Gamma(j+1, x) = j Gamma(j, x) + x^j e^{-x}.
    """
    ex = math.exp(-x)
    g = ex
    xp = 1.0
    for j in range(1, n + 1):
        xp *= x
        g = j * g + xp * ex
    return g


def log_power_tail(k: int, M: int) -> float:
    """Upper bound on sum_{m>M} (log m)^{2k} / m^2."""
    if k == 0:
        return 1.0 / (M - 1)
    if math.log(M - 1) >= k:
        return upper_gamma_int(2 * k, math.log(M - 1))
    # summand is unimodal with peak (k/e)^{2k} at m = e^k
    return upper_gamma_int(2 * k, math.log(M)) + (k / math.e) ** (2 * k)


def _direct(k: int, M: int) -> MomentEstimate:
    c = lambda_convolution(k, M).values
    m = np.arange(1, M + 1, dtype=np.float64)
    partial = math.fsum((c[1:] / m) ** 2)
    tail = 0.0 if k == 0 else log_power_tail(k, M)
    return MomentEstimate(k, M, partial, tail, "direct")


# -- bivariate truncated power series, arrays shaped (..., K+1, K+1) ----------

def _mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    K = x.shape[-1]
    out = np.zeros(np.broadcast_shapes(x.shape, y.shape))
    for i in range(K):
        for j in range(K):
            xi = x[..., i, j]
            if not np.any(xi):
                continue
            out[..., i:, j:] += xi[..., None, None] * y[..., : K - i, : K - j]
    return out


def _log1p(h: np.ndarray) -> np.ndarray:
    """log(1 + h) for h with no terms of u-degree or v-degree zero."""
    K = h.shape[-1] - 1
    out = h.copy()
    power = h
    for j in range(2, K + 1):
        power = _mul(power, h)
        out += (-1) ** (j + 1) * power / j
    return out


def _exp(g: np.ndarray) -> np.ndarray:
    K = g.shape[-1] - 1
    out = np.zeros_like(g)
    out[..., 0, 0] = 1.0
    power = out.copy()
    for j in range(1, K + 1):
        power = _mul(power, g) / j
        out += power
    return out


def _binomials(n: int, K: int) -> np.ndarray:
    """C(n-1, a-1) for a = 1..K (zero when a > n)."""
    return np.array([math.comb(n - 1, a - 1) if a <= n else 0 for a in range(1, K + 1)], dtype=np.float64)


def _local_factors(primes: np.ndarray, K: int) -> np.ndarray:
    """Coefficients E[Y_p^a conj(Y_p)^b] / (a! b!) of the local series, per prime.

    E[Y_p^a conj(Y_p)^b] = (log p)^{a+b} sum_n C(n-1,a-1) C(n-1,b-1) p^{-2n}.
    """
    p = primes.astype(np.float64)
    x = p**-2.0
    acc = np.zeros((p.size, K, K))
    xn = np.ones_like(x)
    n = 0
    while True:
        n += 1
        xn = xn * x
        cb = _binomials(n, K)
        term = np.outer(cb, cb)[None] * xn[:, None, None]
        acc += term
        if n >= K and np.all(term <= 1e-18 * acc):
            break
    a = np.arange(1, K + 1)
    fact = np.array([math.factorial(i) for i in a], dtype=np.float64)
    lp = np.log(p)
    scale = lp[:, None, None] ** (a[:, None] + a[None, :])[None] / np.outer(fact, fact)[None]
    out = np.zeros((p.size, K + 1, K + 1))
    out[:, 1:, 1:] = acc * scale
    return out


def _prime_log_sum(c: int, s: int, P: float) -> float:
    """Upper bound on sum_{p>P} (log p)^c p^{-s}, c >= 1, s > 1.

    Bounded by sum_{n>P} Lambda(n) f(n), f(t) = log(t)^{c-1} t^{-s}; partial
    summation with psi(t) < 1.03883 t gives 1.03883 (T f(T) + int_T^inf f)
    where T = max(P, e^{(c-1)/s}) is where f starts to decrease.
    """
    T = max(float(P), math.exp((c - 1) / s))
    lt = math.log(T)
    fT = lt ** (c - 1) * T ** (-s)
    integral = upper_gamma_int(c - 1, (s - 1) * lt) / (s - 1) ** c
    return CHEBYSHEV_PSI * (T * fT + integral)


def _tail_series(K: int, P: int) -> np.ndarray:
    """Coefficientwise majorant H of sum_{p>P} h_p."""
    H = np.zeros((K + 1, K + 1))
    x = float(P) ** -2.0
    for a in range(1, K + 1):
        for b in range(1, K + 1):
            n0 = max(a, b)
            ratio = 0.0
            n = n0
            term = 1.0
            while True:
                term = math.comb(n - 1, a - 1) * math.comb(n - 1, b - 1) * x ** (n - n0)
                ratio += term
                if term <= 1e-18 * ratio and n > n0 + 2:
                    break
                n += 1
            H[a, b] = ratio * _prime_log_sum(a + b, 2 * n0, P) / (math.factorial(a) * math.factorial(b))
    return H


def _euler(k: int, P: int, chunk: int = 1 << 16) -> MomentEstimate:
    if k == 0:
        return MomentEstimate(0, P, 1.0, 0.0, "euler")
    primes = prime_sieve(P)
    parts = []
    for start in range(0, primes.size, chunk):
        block = primes[start : start + chunk]
        logs = _log1p(_local_factors(block, k))
        parts.append(logs)
    stacked = np.concatenate(parts) if parts else np.zeros((0, k + 1, k + 1))
    G = np.zeros((k + 1, k + 1))
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            G[i, j] = math.fsum(stacked[:, i, j])
    scale = math.factorial(k) ** 2
    lower = scale * _exp(G)[k, k]
    upper = scale * _exp(G + _tail_series(k, P))[k, k]
    lower *= 1 - ROUNDING_SLACK
    upper *= 1 + ROUNDING_SLACK
    return MomentEstimate(k, P, float(lower), float(upper - lower), "euler")


@lru_cache(maxsize=64)
def moment_constant(k: int, M: int = 10**7, method: str = "euler") -> MomentEstimate:
    """Certified enclosure of M_k; see the module docstring for both routes."""
    if k < 0:
        raise PreconditionError("k must be >= 0")
    if M < MIN_TRUNCATION:
        raise PreconditionError(f"truncation must be >= {MIN_TRUNCATION}")
    if method == "euler":
        return _euler(k, M)
    if method == "direct":
        return _direct(k, M)
    raise ValueError(f"unknown method {method!r}")


def carleman_partial_sum(K: int, estimates: list[MomentEstimate]) -> float:
    """sum_{k=1}^K (upper bound on M_k)^{-1/(2k)}, a lower bound on the Carleman sum."""
    by_k = {e.k: e for e in estimates}
    terms = []
    for k in range(1, K + 1):
        e = by_k.get(k)
        if e is None:
            raise PreconditionError(f"missing estimate for k={k}")
        if not e.tail_bound < e.partial:
            raise PreconditionError(f"tail bound not below partial sum for k={k}")
        terms.append(e.upper ** (-1.0 / (2 * k)))
    return math.fsum(terms)


def prime_log_square_sum(P: int) -> tuple[float, float]:
    """sum_{p<=P} (log p)^2/(p^2-1) and a bound on the rest of the series.

    This is M_1 written as a prime sum, independent of the convolution table.
    """
    parts = []
    for block in primes_between(1, P):
        p = block.astype(np.float64)
        parts.append(math.fsum(np.log(p) ** 2 / (p * p - 1)))
    tail = (1 + 1 / (P * P - 1.0)) * _prime_log_sum(2, 2, P)
    return math.fsum(parts), tail
