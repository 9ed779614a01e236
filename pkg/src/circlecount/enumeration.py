"""Exact solution counting and streaming inside a set window.

Two counting engines share one contract:

* ``naive`` enumerates the full grid A^s and classifies every tuple;
* ``mitm`` splits the variables in half and joins power-sum keys, trading
  A^s work for A^ceil(s/2) time and key storage.  Triviality cannot be
  decided per tuple in the joined stream, so the trivial count comes from the
  exact value-class partition formula instead.

Counts are exact integers everywhere; int64 fast paths are guarded by
explicit bounds and fall back to Python big integers, never wrap around.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Literal, Sequence

import numpy as np

from .budget import DEFAULT_BUDGET, Budget
from .errors import ArityTooLargeError, BadParamsError
from .system import DiagonalSystem
from .windows import SetWindow

_INT64_SAFE = 2**62

Method = Literal["naive", "mitm", "auto"]


@dataclass(frozen=True)
class SolutionTally:
    """Exact counts of ordered solution tuples in a window."""

    total: int
    trivial: int
    nontrivial: int

    def __post_init__(self) -> None:
        if self.total != self.trivial + self.nontrivial:
            raise BadParamsError("tally invariant total = trivial + nontrivial broken")

    def to_json_dict(self) -> dict:
        return {
            "total": str(self.total),
            "trivial": str(self.trivial),
            "nontrivial": str(self.nontrivial),
        }


def _value_classes_zero_sum(system: DiagonalSystem, x: Sequence[int]) -> bool:
    sums: dict[int, int] = {}
    for c, v in zip(system.coefficients, x):
        sums[v] = sums.get(v, 0) + c
    return all(t == 0 for t in sums.values())


def _power_sum_columns(
    elems: np.ndarray, coeffs: Sequence[int], degree: int
) -> list[np.ndarray]:
    """Broadcast grids of partial power sums over the tuple grid A^len(coeffs).

    Column j-1 holds sum_i lam_i x_i^j on the full grid, shape (|A|,)*len(coeffs).
    """
    m = len(coeffs)
    cols = []
    for j in range(1, degree + 1):
        pw = elems.astype(np.int64) ** j
        acc = np.zeros((1,) * m, dtype=np.int64)
        for i, lam in enumerate(coeffs):
            shape = [1] * m
            shape[i] = len(elems)
            acc = acc + lam * pw.reshape(shape)
        cols.append(acc)
    return cols


def _int64_grid_safe(system: DiagonalSystem, n: int) -> bool:
    bound = sum(abs(c) for c in system.coefficients) * n**system.degree
    return bound < _INT64_SAFE


def _naive_tally(
    system: DiagonalSystem, window: SetWindow, budget: Budget
) -> SolutionTally:
    elems = window.elements()
    a = len(elems)
    s = system.arity
    grid = max(a, 1) ** s
    budget.check_ops(grid * system.degree, "naive count")
    budget.check_bytes(grid * 8 * system.degree, "naive count grid")
    if a == 0:
        return SolutionTally(0, 0, 0)
    total = trivial = 0
    if _int64_grid_safe(system, window.length):
        arr = np.asarray(elems, dtype=np.int64)
        cols = _power_sum_columns(arr, system.coefficients, system.degree)
        mask = np.ones(cols[0].shape, dtype=bool)
        for col in cols:
            mask &= col == 0
        total = int(mask.sum())
        flat = np.flatnonzero(mask.ravel())
        for code in flat.tolist():
            tup = _decode(code, elems, s)
            if _value_classes_zero_sum(system, tup):
                trivial += 1
    else:
        for tup in itertools.product(elems, repeat=s):
            if all(v == 0 for v in system.equations_at(tup)):
                total += 1
                if _value_classes_zero_sum(system, tup):
                    trivial += 1
    return SolutionTally(total, trivial, total - trivial)


def _decode(code: int, elems: tuple[int, ...], s: int) -> tuple[int, ...]:
    a = len(elems)
    out = [0] * s
    for pos in range(s - 1, -1, -1):
        out[pos] = elems[code % a]
        code //= a
    return tuple(out)


def _half_keys(
    elems: tuple[int, ...], coeffs: Sequence[int], degree: int
) -> Counter:
    """Multiset of power-sum key vectors over the grid of one variable half."""
    arr = np.asarray(elems, dtype=np.int64)
    cols = _power_sum_columns(arr, coeffs, degree)
    lists = [c.ravel().tolist() for c in cols]
    return Counter(zip(*lists))


def _half_keys_exact(
    elems: tuple[int, ...], coeffs: Sequence[int], degree: int
) -> Counter:
    out: Counter = Counter()
    for tup in itertools.product(elems, repeat=len(coeffs)):
        key = tuple(
            sum(c * v**j for c, v in zip(coeffs, tup)) for j in range(1, degree + 1)
        )
        out[key] += 1
    return out


def _mitm_total(system: DiagonalSystem, window: SetWindow, budget: Budget) -> int:
    elems = window.elements()
    a = len(elems)
    if a == 0:
        return 0
    s = system.arity
    left = system.coefficients[: (s + 1) // 2]
    right = system.coefficients[(s + 1) // 2 :]
    half = max(len(left), len(right))
    budget.check_ops(max(a, 1) ** half * system.degree, "mitm count")
    # rough per-entry cost of a Counter slot holding a k-tuple of ints
    budget.check_bytes(max(a, 1) ** half * (64 + 32 * system.degree), "mitm keys")
    keys = _half_keys if _int64_grid_safe(system, window.length) else _half_keys_exact
    left_keys = keys(elems, left, system.degree)
    right_keys = keys(elems, right, system.degree)
    total = 0
    # iterate the smaller side for the probe
    if len(left_keys) > len(right_keys):
        left_keys, right_keys = right_keys, left_keys
    for key, mult in left_keys.items():
        neg = tuple(-v for v in key)
        other = right_keys.get(neg)
        if other:
            total += mult * other
    return total


def _falling_factorial(n: int, r: int) -> int:
    out = 1
    for i in range(r):
        out *= n - i
        if out == 0:
            return 0
    return out


def _zero_sum_partition_histogram(coeffs: Sequence[int]) -> dict[int, int]:
    """Histogram {block count: number of set partitions} over partitions of
    the coefficient indices whose every block sums to zero."""
    s = len(coeffs)
    suffix_abs = [0] * (s + 1)
    for i in range(s - 1, -1, -1):
        suffix_abs[i] = suffix_abs[i + 1] + abs(coeffs[i])
    hist: dict[int, int] = {}
    blocks: list[int] = []

    def rec(i: int) -> None:
        # each open block still needs |sum| absorbed by remaining coefficients
        if sum(abs(b) for b in blocks) > suffix_abs[i]:
            return
        if i == s:
            if all(b == 0 for b in blocks):
                hist[len(blocks)] = hist.get(len(blocks), 0) + 1
            return
        c = coeffs[i]
        for idx in range(len(blocks)):
            blocks[idx] += c
            rec(i + 1)
            blocks[idx] -= c
        blocks.append(c)
        rec(i + 1)
        blocks.pop()

    rec(0)
    return hist


_PARTITION_CACHE: dict[tuple[int, ...], dict[int, int]] = {}


def trivial_count(system: DiagonalSystem, cardinality: int) -> int:
    """Exact number of trivial tuples drawable from a set of given cardinality.

    Sums, over set partitions of the variable indices whose blocks all have
    zero coefficient sum, the falling factorial |A|(|A|-1)...(|A|-r+1) with r
    the block count: that assigns distinct values to blocks, so each trivial
    tuple is counted once, at its exact value-class partition.
    """
    if cardinality < 0:
        raise BadParamsError("cardinality must be >= 0")
    if system.arity > 12:
        raise ArityTooLargeError(
            f"set-partition enumeration supports arity <= 12, got {system.arity}"
        )
    key = system.coefficients
    hist = _PARTITION_CACHE.get(key)
    if hist is None:
        hist = _zero_sum_partition_histogram(key)
        _PARTITION_CACHE[key] = hist
    return sum(n * _falling_factorial(cardinality, r) for r, n in hist.items())


def count_solutions(
    system: DiagonalSystem,
    window: SetWindow,
    method: Method = "auto",
    budget: Budget = DEFAULT_BUDGET,
) -> SolutionTally:
    """Count ordered solution tuples in A^s, split into trivial/nontrivial.

    ``naive`` classifies tuple by tuple; ``mitm`` joins power-sum keys of the
    two variable halves and takes the trivial count from the partition
    formula.  ``auto`` picks naive for small grids, mitm otherwise.
    """
    if method not in ("naive", "mitm", "auto"):
        raise BadParamsError(f"unknown method {method!r}")
    if method == "auto":
        grid = max(window.cardinality, 1) ** system.arity
        method = "naive" if grid <= 10**6 else "mitm"
    if method == "naive":
        return _naive_tally(system, window, budget)
    total = _mitm_total(system, window, budget)
    triv = trivial_count(system, window.cardinality)
    return SolutionTally(total, triv, total - triv)


def stream_solutions(
    system: DiagonalSystem,
    window: SetWindow,
    which: Literal["all", "nontrivial"] = "all",
    budget: Budget = DEFAULT_BUDGET,
) -> Iterator[tuple[int, ...]]:
    """Yield solutions in lexicographic tuple order, optionally nontrivial only."""
    if which not in ("all", "nontrivial"):
        raise BadParamsError(f"unknown filter {which!r}")
    elems = window.elements()
    s = system.arity
    grid = max(len(elems), 1) ** s
    budget.check_ops(grid * system.degree, "stream")
    if not elems:
        return
    if _int64_grid_safe(system, window.length) and grid <= 10**8:
        budget.check_bytes(grid * 8 * system.degree, "stream grid")
        arr = np.asarray(elems, dtype=np.int64)
        cols = _power_sum_columns(arr, system.coefficients, system.degree)
        mask = np.ones(cols[0].shape, dtype=bool)
        for col in cols:
            mask &= col == 0
        for code in np.flatnonzero(mask.ravel()).tolist():
            tup = _decode(code, elems, s)
            if which == "all" or not _value_classes_zero_sum(system, tup):
                yield tup
    else:
        for tup in itertools.product(elems, repeat=s):
            if all(v == 0 for v in system.equations_at(tup)):
                if which == "all" or not _value_classes_zero_sum(system, tup):
                    yield tup


def vinogradov_moment(
    n: int, k: int, t: int, budget: Budget = DEFAULT_BUDGET
) -> int:
    """Exact count of (x, y) in [1,n]^{2t} with equal power sums up to degree k.

    This realizes the even moment integral of |g|^{2t} by orthogonality: join
    the t-tuple power-sum keys against themselves and sum squared
    multiplicities.
    """
    if t < 1 or k < 1 or n < 1:
        raise BadParamsError("need n, k, t >= 1")
    budget.check_ops(n**t * k, "vinogradov moment")
    budget.check_bytes(n**t * (64 + 32 * k), "vinogradov keys")
    elems = tuple(range(1, n + 1))
    ones = (1,) * t
    if t * n**k < _INT64_SAFE:
        keys = _half_keys(elems, ones, k)
    else:
        keys = _half_keys_exact(elems, ones, k)
    return sum(m * m for m in keys.values())


def greedy_solution_free(
    system: DiagonalSystem,
    n: int,
    budget: Budget = DEFAULT_BUDGET,
    method: Method = "auto",
) -> SetWindow:
    """Greedy scan x = 1..n keeping x whenever the set stays nontrivial-free."""
    if n < 1:
        raise BadParamsError("n must be >= 1")
    window = SetWindow.empty(n)
    for x in range(1, n + 1):
        candidate = window.add(x)
        tally = count_solutions(system, candidate, method=method, budget=budget)
        if tally.nontrivial == 0:
            window = candidate
    return window
