"""Dirichlet characters modulo an odd prime via a discrete-log table.

Character b sends g^k to exp(2*pi*i*b*k/(q-1)), where g is the smallest
primitive root; b = 0 is the principal character.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import coprime_part, euler_phi, is_odd_prime, primitive_root
from .errors import InvalidModulusError


def unit_roots(n: int) -> np.ndarray:
    """exp(2*pi*i*j/n) for j in [0, n), with roots[n-j] == conj(roots[j]) exactly."""
    j = np.arange(n // 2 + 1)
    half = np.exp(2j * np.pi * j / n)
    roots = np.empty(n, dtype=np.complex128)
    roots[: n // 2 + 1] = half
    roots[0] = 1.0
    if n % 4 == 0:
        roots[n // 4] = 1j
    if n % 2 == 0:
        roots[n // 2] = -1.0
    upper = np.arange(n // 2 + 1, n)
    roots[upper] = np.conj(roots[n - upper])
    return roots


@dataclass(frozen=True)
class CharacterTable:
    q: int
    g: int
    dlog: np.ndarray  # dlog[n] for n in [0, q); dlog[0] = -1 as a sentinel
    roots: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.q - 1

    @property
    def powers(self) -> np.ndarray:
        """g^k mod q for k in [0, q-1)."""
        out = np.empty(self.q - 1, dtype=np.int64)
        out[self.dlog[1:]] = np.arange(1, self.q)
        return out

    def conjugate_index(self, b: int) -> int:
        return (self.q - 1 - b) % (self.q - 1)


def build_table(q: int) -> CharacterTable:
    if not is_odd_prime(q):
        raise InvalidModulusError(f"{q} is not an odd prime")
    g = primitive_root(q)
    dlog = np.full(q, -1, dtype=np.int64)
    x = 1
    for k in range(q - 1):
        dlog[x] = k
        x = x * g % q
    dlog.setflags(write=False)
    roots = unit_roots(q - 1)
    roots.setflags(write=False)
    return CharacterTable(q, g, dlog, roots)


def chi(table: CharacterTable, b: int, n: int) -> complex:
    r = n % table.q
    if r == 0:
        return 0j
    return complex(table.roots[(b * int(table.dlog[r])) % (table.q - 1)])


def chi_values(table: CharacterTable, b: int, n) -> np.ndarray:
    """Vectorised ``chi`` over an integer array ``n``."""
    r = np.asarray(n, dtype=np.int64) % table.q
    out = table.roots[(b * table.dlog[r]) % (table.q - 1)]
    return np.where(r == 0, 0j, out)


def character_matrix(table: CharacterTable, bs=None) -> np.ndarray:
    """Rows chi_b(a) for a = 1..q-1, one row per index in ``bs``."""
    if bs is None:
        bs = np.arange(table.q - 1)
    bs = np.asarray(bs, dtype=np.int64)
    k = table.dlog[1:]
    return table.roots[np.outer(bs, k) % (table.q - 1)]


def orthogonality_sum(table: CharacterTable, m: int, n: int) -> complex:
    """Sum of chi(m)*conj(chi(n)) over primitive characters of every f | q.

    For prime q the divisors are 1 (the trivial character, value 1) and q
    (the non-principal characters b = 1..q-2).
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    total = 1.0 + 0j
    if m % table.q and n % table.q:
        bs = np.arange(1, table.q - 1)
        vals = table.roots[(bs * (int(table.dlog[m % table.q]) - int(table.dlog[n % table.q]))) % (table.q - 1)]
        total += complex(math.fsum(vals.real), math.fsum(vals.imag))
    return total


def orthogonality_expected(q: int, m: int, n: int) -> int:
    """phi(q(mn)) when m = n mod q(mn), else 0."""
    d = coprime_part(q, m * n)
    return euler_phi(d) if (m - n) % d == 0 else 0


def finite_orthogonality(table: CharacterTable, coeffs) -> tuple[float, float]:
    """Both sides of the mean-square identity over non-principal characters.

    With S_b = sum_{n<=N} a_n chi_b(n)/n (coeffs[n-1] = a_n), returns
    ``(sum_{b=1}^{q-2} |S_b|^2, rhs)`` where rhs is computed from residue
    classes: (q-1) * sum_r (sum_{n = r mod q} a_n/n)^2 - (sum_{(n,q)=1} a_n/n)^2.
    """
    a = np.asarray(coeffs, dtype=np.float64)
    n = np.arange(1, a.size + 1)
    w = a / n
    unit = n % table.q != 0
    sums = []
    for b in range(1, table.q - 1):
        s = np.dot(chi_values(table, b, n[unit]), w[unit])
        sums.append(abs(s) ** 2)
    lhs = math.fsum(sums)
    buckets = np.zeros(table.q)
    np.add.at(buckets, n[unit] % table.q, w[unit])
    rhs = (table.q - 1) * math.fsum(buckets**2) - math.fsum(w[unit]) ** 2
    return lhs, rhs
