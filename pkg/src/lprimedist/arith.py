"""Integer primitives: primality, primitive roots, von Mangoldt sieve and
iterated Dirichlet convolutions of Lambda."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidModulusError


def is_odd_prime(n: int) -> bool:
    if n < 3 or n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def primitive_root(q: int) -> int:
    """Smallest generator of (Z/qZ)^* for an odd prime ``q``."""
    if not is_odd_prime(q):
        raise InvalidModulusError(f"{q} is not an odd prime")
    exps = [(q - 1) // r for r in prime_factors(q - 1)]
    for g in range(2, q):
        if all(pow(g, e, q) != 1 for e in exps):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


def prime_sieve(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (sieve of Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for i in range(3, math.isqrt(limit) + 1, 2):
        if flags[i]:
            flags[i * i :: 2 * i] = False
    return np.flatnonzero(flags).astype(np.int64)


def primes_between(lo: int, hi: int, segment: int = 1 << 22):
    """Yield arrays of the primes in (lo, hi], one segment at a time."""
    base = prime_sieve(math.isqrt(hi))
    start = lo + 1
    while start <= hi:
        stop = min(start + segment, hi + 1)
        flags = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= stop:
                break
            first = max(p * p, -(-start // p) * p)
            flags[first - start :: p] = False
        if start <= 1:
            flags[: 2 - start] = False
        yield np.flatnonzero(flags).astype(np.int64) + start
        start = stop


def prime_powers(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(n, Lambda(n))`` for every prime power ``n <= limit``, sorted by n."""
    primes = prime_sieve(limit)
    ns = [primes]
    logs = [np.log(primes.astype(np.float64))]
    pw = primes[primes <= math.isqrt(limit)]
    cur = pw.copy()
    while pw.size:
        cur = cur * pw
        keep = cur <= limit
        cur, pw = cur[keep], pw[keep]
        ns.append(cur)
        logs.append(np.log(pw.astype(np.float64)))
    n = np.concatenate(ns)
    lam = np.concatenate(logs)
    order = np.argsort(n, kind="stable")
    return n[order], lam[order]


@dataclass(frozen=True)
class MangoldtSieve:
    limit: int
    values: np.ndarray  # values[m] = Lambda(m), index 0 unused

    def __getitem__(self, m: int) -> float:
        return float(self.values[m])


@dataclass(frozen=True)
class ConvolutionTable:
    k: int
    limit: int
    values: np.ndarray  # values[m] = c_k(m), index 0 unused

    def __getitem__(self, m: int) -> float:
        return float(self.values[m])


def mangoldt_sieve(limit: int) -> MangoldtSieve:
    if limit < 1:
        raise ValueError("limit must be >= 1")
    values = np.zeros(limit + 1, dtype=np.float64)
    n, lam = prime_powers(limit)
    values[n] = lam
    values.setflags(write=False)
    return MangoldtSieve(limit, values)


def lambda_convolution(k: int, limit: int, sieve: MangoldtSieve | None = None) -> ConvolutionTable:
    """k-fold Dirichlet convolution c_k = Lambda * ... * Lambda up to ``limit``.

    Each fold loops over prime powers d and scatters Lambda(d) * c_{k-1}(j)
    into position d*j, which is O(limit log log limit) per fold.
    """
    if k < 0 or limit < 1:
        raise ValueError("need k >= 0 and limit >= 1")
    if k == 0:
        values = np.zeros(limit + 1)
        values[1] = 1.0
        values.setflags(write=False)
        return ConvolutionTable(0, limit, values)
    if sieve is None or sieve.limit < limit:
        sieve = mangoldt_sieve(limit)
    lam = np.array(sieve.values[: limit + 1])
    support = np.flatnonzero(lam)
    cur = lam
    for _ in range(k - 1):
        nxt = np.zeros(limit + 1)
        # c_{j}(m) = 0 for m < 2^j, so only the head of cur matters
        for d in support:
            span = limit // d
            if span < 1:
                break
            nxt[d :: d][:span] += lam[d] * cur[1 : span + 1]
        cur = nxt
    cur.setflags(write=False)
    return ConvolutionTable(k, limit, cur)


def coprime_part(q: int, n: int) -> int:
    """Largest divisor of q that is coprime to n."""
    if q < 1 or n < 1:
        raise ValueError("q and n must be positive")
    g = math.gcd(q, n)
    while g > 1:
        q //= g
        g = math.gcd(q, g)
    return q


def euler_phi(n: int) -> int:
    result = n
    for p in prime_factors(n):
        result -= result // p
    return result
