"""Empirical distribution of |L'/L(1, chi)| over non-principal characters."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith import is_odd_prime
from .errors import InvalidModulusError, PreconditionError
from .lvalues import LValueRecord, l_values_for
from .moments import moment_constant

DEFAULT_LADDER = (101, 257, 509, 1009, 2003, 4001)
FIGURE_PRIMES = (59, 101, 257)


@dataclass(frozen=True)
class EmpiricalDistribution:
    q: int
    ratios: np.ndarray  # ascending
    order: np.ndarray  # character index b of each sorted ratio

    @property
    def size(self) -> int:
        return self.q - 2


def from_records(records: list[LValueRecord]) -> EmpiricalDistribution:
    q = records[0].q
    if len(records) != q - 2:
        raise PreconditionError(f"expected {q - 2} records, got {len(records)}")
    vals = np.array([r.ratio for r in records])
    bs = np.array([r.b for r in records])
    idx = np.argsort(vals, kind="stable")  # records arrive in ascending b
    ratios, order = vals[idx], bs[idx]
    if not (np.all(np.isfinite(ratios)) and ratios[0] > 0):
        raise PreconditionError("ratios must be finite and positive")
    ratios.setflags(write=False)
    order.setflags(write=False)
    return EmpiricalDistribution(q, ratios, order)


def distribution_for(q: int) -> EmpiricalDistribution:
    if not is_odd_prime(q):
        raise InvalidModulusError(f"{q} is not an odd prime")
    return from_records(l_values_for(q))


def empirical_cdf(dist: EmpiricalDistribution, t) -> np.ndarray | float:
    """D_q(t): fraction of characters with ratio <= t (right-continuous)."""
    counts = np.searchsorted(dist.ratios, t, side="right")
    out = counts / dist.size
    return float(out) if np.ndim(out) == 0 else out


def empirical_moment(dist: EmpiricalDistribution, k: int) -> float:
    """(1/(q-2)) sum_b ratio_b^{2k}, compensated."""
    if k < 0:
        raise PreconditionError("k must be >= 0")
    if 2 * k * math.log(dist.ratios[-1]) > 700:
        raise OverflowError(f"ratio^{2 * k} overflows double precision")
    return math.fsum(dist.ratios ** (2 * k)) / dist.size


def distributions(primes, jobs: int = 1) -> dict[int, EmpiricalDistribution]:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            dists = list(pool.map(distribution_for, primes))
    else:
        dists = [distribution_for(q) for q in primes]
    return dict(zip(primes, dists))


def theorem1_report(primes, k: int, truncation: int = 10**7, jobs: int = 1,
                    dists: dict | None = None) -> dict:
    """Deviation of the empirical 2k-th mean from M_k along a ladder of primes.

    Returns per-q deviations and the least-squares slope of log(deviation)
    against log(q).  The slope is None when every deviation is exactly zero
    (k = 0).
    """
    primes = list(primes)
    if len(primes) < 3:
        raise PreconditionError("need at least three primes")
    if any(not is_odd_prime(q) for q in primes):
        raise InvalidModulusError("ladder entries must be odd primes")
    if sorted(primes) != primes or len(set(primes)) != len(primes):
        raise PreconditionError("ladder must be strictly ascending")
    est = moment_constant(k, truncation)
    target = est.midpoint
    if dists is None:
        dists = distributions(primes, jobs)
    rows = []
    for q in primes:
        emp = empirical_moment(dists[q], k)
        rows.append({"q": q, "empirical": emp, "deviation": abs(emp - target)})
    devs = np.array([r["deviation"] for r in rows])
    report = {
        "k": k,
        "M_k": {"partial": est.partial, "tail_bound": est.tail_bound, "midpoint": target},
        "rows": rows,
    }
    if np.all(devs == 0):
        report["slope"] = None
        report["exact_match"] = True
    else:
        slope, _ = np.polyfit(np.log(primes), np.log(devs), 1)
        report["slope"] = float(slope)
        report["exact_match"] = False
    return report


def tail_report(dist: EmpiricalDistribution, thresholds) -> dict:
    """Upper-tail fractions against the reference decay e^{-sqrt(t)/2}."""
    ts = [float(t) for t in thresholds]
    if any(t < 1 for t in ts) or ts != sorted(ts):
        raise PreconditionError("thresholds must be >= 1 and ascending")
    rows = []
    for t in ts:
        above = dist.size - np.searchsorted(dist.ratios, t, side="left")
        frac = above / dist.size
        ref = math.exp(-math.sqrt(t) / 2)
        rows.append({"t": t, "fraction": frac, "reference": ref, "ratio": frac / ref})
    return {"q": dist.q, "rows": rows, "fitted_constant": max(r["ratio"] for r in rows)}


def grid_points(start: float, stop: float, step: float) -> np.ndarray:
    if step <= 0:
        raise PreconditionError("grid step must be positive")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def figure1_data(grid: np.ndarray, primes=FIGURE_PRIMES, dists: dict | None = None) -> dict:
    """Columns t and D_q(t) for each q, ready for any plotting tool."""
    if dists is None:
        dists = {q: distribution_for(q) for q in primes}
    out = {"t": np.asarray(grid, dtype=np.float64)}
    for q in primes:
        out[q] = empirical_cdf(dists[q], out["t"])
    return out


def write_figure_csv(data: dict, fh) -> None:
    qs = [key for key in data if key != "t"]
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t"] + [f"D_{q}" for q in qs])
    for i, t in enumerate(data["t"]):
        w.writerow([f"{t:.17g}"] + [f"{data[q][i]:.17g}" for q in qs])
