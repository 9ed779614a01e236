"""Degree-k uniformity sums of the balanced function, exactly.

The balanced function of a window is delta_N - A(x) on [1, N] and 0 outside.
Scaling by N turns it into the integer B(x) = |A_N| - N*A(x), so the central
quantity of this module, the (k+1)-fold difference sum, is an exact integer
divided by N^(2^(k+1)).

The fast evaluator uses the collapse identity: summing the innermost
difference shift over all of Z turns the (k+2)-fold sum into a sum of squared
k-fold difference sums,

    sum_{w_1..w_{k+1}} sum_x D_{k+1} = sum_{w_1..w_k} ( sum_x D_k )^2,

which also shows the quantity is nonnegative.  Zero-extension of the balanced
function makes this equal to the interval-restricted sum: any term with an
argument outside [1, N] vanishes.  A naive evaluator of the literal
(k+2)-fold sum with the translated-interval restriction is kept for
cross-checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .budget import Budget
from .errors import BadParamsError
from .windows import SetWindow

_INT64_SAFE = 2**62

# the N^(k+1)-work evaluator gets its own ceiling: N = 4096 at degree 2
GOWERS_DEFAULT_BUDGET = Budget(max_ops=4096**3)


@dataclass(frozen=True)
class BalancedFunction:
    """N-scaled balanced function: values[x-1] = |A_N| - N*A(x) for x in [1,N]."""

    window: SetWindow
    values: tuple[int, ...]

    def at(self, x: int) -> Fraction:
        """Unscaled value delta_N - A(x), zero outside [1, N]."""
        if 1 <= x <= self.window.length:
            return Fraction(self.values[x - 1], self.window.length)
        return Fraction(0)


def balanced_function(window: SetWindow) -> BalancedFunction:
    card = window.cardinality
    n = window.length
    values = tuple(card - n * window.indicator(x) for x in range(1, n + 1))
    assert sum(values) == 0
    return BalancedFunction(window, values)


@dataclass(frozen=True)
class UniformityReport:
    degree: int
    difference_sum: Fraction
    parameter: Fraction


def _autocorr_square_sum(c: Sequence[int]) -> int:
    """sum over all lags w of ( sum_x c(x) c(x-w) )^2, exactly."""
    arr = np.asarray(c, dtype=np.int64)
    ac = np.correlate(arr, arr, mode="full")
    return sum(v * v for v in ac.tolist())


def _autocorr_square_sum_exact(c: Sequence[int]) -> int:
    n = len(c)
    total = 0
    for w in range(-(n - 1), n):
        inner = 0
        for x in range(n):
            y = x - w
            if 0 <= y < n:
                inner += c[x] * c[y]
        total += inner * inner
    return total


def _shifted_product(c: np.ndarray, w: int) -> np.ndarray:
    """Pointwise c(x) * c(x-w) with zero extension, as an array on [1, N]."""
    out = np.zeros_like(c)
    n = len(c)
    if w >= 0:
        out[w:] = c[w:] * c[: n - w]
    else:
        out[: n + w] = c[: n + w] * c[-w:]
    return out


def _collapse_scaled(values: Sequence[int], k: int, use_int64: bool) -> int:
    """Integer numerator of the difference sum: the collapse-identity recursion."""

    def rec(c, depth: int) -> int:
        if depth == 1:
            if use_int64:
                return _autocorr_square_sum(c)
            return _autocorr_square_sum_exact(list(c))
        n = len(c)
        total = 0
        for w in range(-(n - 1), n):
            if use_int64:
                prod = _shifted_product(c, w)
            else:
                prod = [
                    c[x] * (c[x - w] if 0 <= x - w < n else 0) for x in range(n)
                ]
            total += rec(prod, depth - 1)
        return total

    start = np.asarray(values, dtype=np.int64) if use_int64 else list(values)
    return rec(start, k)


def difference_sum(
    window: SetWindow, degree: int, budget: Budget = GOWERS_DEFAULT_BUDGET
) -> Fraction:
    """Exact value of the (k+1)-fold difference sum of the balanced function."""
    if degree < 1:
        raise BadParamsError(f"degree must be >= 1, got {degree}")
    n = window.length
    budget.check_ops(n ** (degree + 1), "difference sum")
    b = balanced_function(window)
    # values bounded by N^(2^(k-1)) after the product levels, correlate adds
    # a factor N^(2^(k-1)) * N: int64 is exact iff N^(2^k + 1) stays small
    use_int64 = float(n) ** (2**degree + 1) < _INT64_SAFE
    scaled = _collapse_scaled(b.values, degree, use_int64)
    assert scaled >= 0
    return Fraction(scaled, n ** (2 ** (degree + 1)))


def difference_sum_naive(window: SetWindow, degree: int) -> Fraction:
    """Literal (k+2)-fold sum over shift vectors and the translated-interval
    intersection I_w; cross-check oracle for :func:`difference_sum`."""
    if degree < 1:
        raise BadParamsError(f"degree must be >= 1, got {degree}")
    n = window.length
    b = balanced_function(window)
    off = (degree + 1) * (n - 1)
    pad = np.zeros(n + 2 * off, dtype=np.int64)
    pad[off : off + n] = b.values
    total = 0
    shifts = range(-(n - 1), n)
    for w in itertools.product(shifts, repeat=degree + 1):
        prefixes = list(itertools.accumulate(w))
        lo = 1 + max(0, max(prefixes))
        hi = n + min(0, min(prefixes))
        if lo > hi:
            continue
        xs = np.arange(lo, hi + 1)
        term = np.ones(len(xs), dtype=np.int64)
        for r in range(degree + 2):
            for subset in itertools.combinations(range(degree + 1), r):
                ssum = sum(w[i] for i in subset)
                term = term * pad[xs - ssum - 1 + off]
        total += int(term.sum())
    return Fraction(total, n ** (2 ** (degree + 1)))


def uniformity_parameter(
    window: SetWindow, degree: int, budget: Budget = GOWERS_DEFAULT_BUDGET
) -> UniformityReport:
    """Smallest admissible uniformity parameter: difference sum over N^(k+2)."""
    ds = difference_sum(window, degree, budget)
    return UniformityReport(
        degree=degree,
        difference_sum=ds,
        parameter=ds / Fraction(window.length) ** (degree + 2),
    )


@dataclass(frozen=True)
class WeylChainReport:
    degree: int
    parameter: Fraction
    samples: int
    max_ratio: float
    chain_holds: bool
    supnorm_holds: bool


def weyl_chain_check(
    window: SetWindow,
    degree: int,
    phases: Sequence[Sequence[float]],
    budget: Budget = GOWERS_DEFAULT_BUDGET,
) -> WeylChainReport:
    """Check, at each sampled phase point, the Weyl-differencing inequality

        |E(alpha)|^(2^(k+1)) <= (2N)^(2^(k+1)-k-2) * difference_sum

    and the resulting sup-norm bound |E(alpha)| <= 2 a^(1/2^(k+1)) N with the
    exact parameter a.  Returns the largest |E| / bound ratio observed.
    """
    from .expsums import eval_E

    rep = uniformity_parameter(window, degree, budget)
    n = window.length
    p = 2 ** (degree + 1)
    chain_rhs = float(2 * n) ** (p - degree - 2) * float(rep.difference_sum)
    bound = 2.0 * float(rep.parameter) ** (1.0 / p) * n
    max_ratio = 0.0
    chain = True
    sup = True
    slack = 1.0 + 1e-9  # float-noise guard only; the inequalities are exact
    for alpha in phases:
        e_abs = abs(eval_E(window, alpha))
        if e_abs**p > chain_rhs * slack + 1e-12:
            chain = False
        if e_abs > bound * slack + 1e-12:
            sup = False
        ratio = 0.0 if e_abs == 0.0 else (e_abs / bound if bound > 0 else float("inf"))
        max_ratio = max(max_ratio, ratio)
    return WeylChainReport(
        degree=degree,
        parameter=rep.parameter,
        samples=len(phases),
        max_ratio=max_ratio,
        chain_holds=chain,
        supnorm_holds=sup,
    )
