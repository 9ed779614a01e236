"""Generating exponential sums, complete rational sums, oscillatory integrals,
and the major/minor arc classifier.

Phase points are vectors (alpha_1, ..., alpha_k) in ascending degree order:
alpha_j multiplies x^j.  All complex sums use pairwise (tree) summation with
fixed bracketing, so repeated runs produce bit-identical values.  Rational
phases in the complete sums are reduced mod q in exact integer arithmetic
before any trigonometry.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BadDegreeError, BadParamsError, ToleranceNotMetError
from .windows import SetWindow

TWO_PI = 2.0 * math.pi


def reduce_phase(alpha: Sequence[float]) -> tuple[float, ...]:
    """Reduce each component mod 1 into [0, 1)."""
    return tuple(float(a) - math.floor(float(a)) for a in alpha)


def pairwise_sum(terms: np.ndarray) -> complex:
    """Tree summation with fixed bracketing (padding with exact zeros)."""
    a = np.asarray(terms, dtype=np.complex128)
    if a.size == 0:
        return 0j
    while a.size > 1:
        if a.size % 2:
            a = np.concatenate([a, np.zeros(1, dtype=np.complex128)])
        a = a[0::2] + a[1::2]
    return complex(a[0])


def _phase_values(xs: np.ndarray, alpha: Sequence[float]) -> np.ndarray:
    phase = np.zeros(len(xs), dtype=np.float64)
    for j, aj in enumerate(alpha, start=1):
        if aj != 0.0:
            phase += aj * xs.astype(np.float64) ** j
    return phase


def eval_g(n: int, alpha: Sequence[float]) -> complex:
    """g(alpha) = sum_{1<=x<=N} e(alpha_k x^k + ... + alpha_1 x)."""
    if n < 1:
        raise BadParamsError("n must be >= 1")
    a = reduce_phase(alpha)
    xs = np.arange(1, n + 1)
    return pairwise_sum(np.exp(TWO_PI * 1j * _phase_values(xs, a)))


def eval_f(window: SetWindow, alpha: Sequence[float]) -> complex:
    """f(alpha): the same sum restricted to the window's elements."""
    a = reduce_phase(alpha)
    xs = np.asarray(window.elements(), dtype=np.int64)
    if xs.size == 0:
        return 0j
    return pairwise_sum(np.exp(TWO_PI * 1j * _phase_values(xs, a)))


def eval_v(window: SetWindow, alpha: Sequence[float]) -> complex:
    """v(alpha) = delta_N * g(alpha)."""
    return (window.cardinality / window.length) * eval_g(window.length, alpha)


def eval_E(window: SetWindow, alpha: Sequence[float]) -> complex:
    """E(alpha) = v(alpha) - f(alpha), the balanced-function exponential sum."""
    return eval_v(window, alpha) - eval_f(window, alpha)


def eval_E_balanced(window: SetWindow, alpha: Sequence[float]) -> complex:
    """Direct evaluation of E via the balanced function (identity cross-check)."""
    from .gowers import balanced_function

    a = reduce_phase(alpha)
    b = balanced_function(window)
    xs = np.arange(1, window.length + 1)
    terms = (
        np.asarray(b.values, dtype=np.float64)
        / window.length
        * np.exp(TWO_PI * 1j * _phase_values(xs, a))
    )
    return pairwise_sum(terms)


def complete_sum(q: int, a: Sequence[int], lam: int = 1) -> complex:
    """S(q, lam*a) = sum_{m=1}^q e_q(lam*(a_k m^k + ... + a_1 m)).

    The phase of each term is the exact residue of the integer polynomial
    mod q; only the final q-th roots of unity involve floating point.
    """
    if q < 1:
        raise BadParamsError("q must be >= 1")
    b = [(int(lam) * int(aj)) % q for aj in a]
    roots = [cmath.exp(TWO_PI * 1j * r / q) for r in range(q)]
    terms = np.empty(q, dtype=np.complex128)
    for i, m in enumerate(range(1, q + 1)):
        r = 0
        mp = 1
        for bj in b:
            mp = mp * m % q
            r = (r + bj * mp) % q
        terms[i] = roots[r]
    return pairwise_sum(terms)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _gl_estimate(n: int, beta: Sequence[float], panels: int) -> complex:
    edges = np.linspace(0.0, float(n), panels + 1)
    mid = (edges[1:] + edges[:-1]) / 2.0
    half = (edges[1:] - edges[:-1]) / 2.0
    pts = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    wts = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    phase = np.zeros(len(pts), dtype=np.float64)
    for j, bj in enumerate(beta, start=1):
        if bj != 0.0:
            phase += bj * pts**j
    return pairwise_sum(wts * np.exp(TWO_PI * 1j * phase))


def oscillatory_w(n: int, beta: Sequence[float], lam: int = 1) -> complex:
    """w(lam*beta) = integral_0^N e(lam*(beta_k t^k + ... + beta_1 t)) dt.

    Composite Gauss-Legendre with the panel count tied to the total phase
    variation, doubled until two successive estimates agree to 1e-8 relative.
    """
    if n < 1:
        raise BadParamsError("n must be >= 1")
    b = [float(lam) * float(x) for x in beta]
    if not all(math.isfinite(x) for x in b):
        raise BadParamsError("beta must be finite")
    if all(x == 0.0 for x in b):
        return complex(n)  # integrand identically 1
    variation = 1.0 + sum(abs(bj) * float(n) ** j for j, bj in enumerate(b, start=1))
    panels = max(1, math.ceil(variation / 4.0))
    prev = _gl_estimate(n, b, panels)
    for _ in range(20):
        panels *= 2
        cur = _gl_estimate(n, b, panels)
        if abs(cur - prev) <= 1e-8 * max(abs(cur), 1.0):
            return cur
        prev = cur
    raise ToleranceNotMetError(
        f"quadrature did not converge after 20 doublings (variation {variation:.3g})"
    )


def closed_form_w_linear(n: int, b: float) -> complex:
    """k = 1 oracle: integral_0^N e(b t) dt = (e(bN) - 1) / (2 pi i b)."""
    if b == 0.0:
        return complex(n)
    return (cmath.exp(TWO_PI * 1j * b * n) - 1.0) / (TWO_PI * 1j * b)


def sigma_exponent(k: int) -> float:
    """Minor-arc saving exponent: 1/sigma = 8 k^2 (log k + (log log k)/2 + 2)."""
    if k < 2:
        raise BadDegreeError("sigma exponent needs k >= 2")
    return 1.0 / (8.0 * k * k * (math.log(k) + math.log(math.log(k)) / 2.0 + 2.0))


def delta_exponent(k: int) -> float:
    """Major-arc height exponent delta = k * sigma."""
    return k * sigma_exponent(k)


@dataclass(frozen=True)
class ArcLabel:
    """Rational center of a major arc: numerators ascending by degree.

    ``numerators`` are stored reduced into [0, q); ``beta`` is the offset to
    the nearest representative of the center on the torus, so alpha_j and
    numerators[j-1]/q + beta[j-1] agree mod 1.
    """

    q: int
    numerators: tuple[int, ...]
    beta: tuple[float, ...]


def classify_arc(
    alpha: Sequence[float],
    n: int,
    k: int,
    exponent_override: Optional[float] = None,
) -> Optional[ArcLabel]:
    """Return the major-arc label of alpha, or None on the minor arcs.

    Scans q = 1..floor(N^delta); for each q the nearest numerator vector is
    the only candidate that can satisfy the box condition
    |q alpha_j - a_j| <= N^(delta - j).  A common divisor of (q, a_k, ..., a_1)
    is divided out, which preserves both conditions.
    """
    if n < 2:
        raise BadParamsError("n must be >= 2")
    if len(alpha) != k:
        raise BadParamsError(f"alpha must have {k} components")
    delta = float(exponent_override) if exponent_override is not None else delta_exponent(k)
    a_red = reduce_phase(alpha)
    qmax = max(1, math.floor(float(n) ** delta + 1e-12))
    for q in range(1, qmax + 1):
        nums = [round(q * aj) for aj in a_red]
        if all(
            abs(q * aj - aq) <= float(n) ** (delta - j) + 1e-15
            for j, (aj, aq) in enumerate(zip(a_red, nums), start=1)
        ):
            beta = tuple(aj - aq / q for aj, aq in zip(a_red, nums))
            g = math.gcd(q, *(abs(x) for x in nums)) if nums else q
            q_star = q // g
            reduced = tuple((x // g) % q_star for x in nums)
            return ArcLabel(q_star, reduced, beta)
    return None


def arc_membership_brute_force(
    alpha: Sequence[float], n: int, k: int, exponent_override: Optional[float] = None
) -> bool:
    """Set-theoretic major-arc membership by enumerating all (q, a) pairs."""
    delta = float(exponent_override) if exponent_override is not None else delta_exponent(k)
    a_red = reduce_phase(alpha)
    qmax = max(1, math.floor(float(n) ** delta + 1e-12))
    import itertools

    for q in range(1, qmax + 1):
        for nums in itertools.product(range(q + 1), repeat=k):
            if math.gcd(q, *nums) != 1:
                continue
            if all(
                abs(q * aj - aq) <= float(n) ** (delta - j) + 1e-15
                for j, (aj, aq) in enumerate(zip(a_red, nums), start=1)
            ):
                return True
    return False


@dataclass(frozen=True)
class MajorArcApproxReport:
    g_value: complex
    approx_value: complex
    numerator: float
    denominator: float
    ratio: float


def major_arc_approx_check(
    n: int, q: int, a: Sequence[int], beta: Sequence[float], lam: int = 1
) -> MajorArcApproxReport:
    """Empirical constant for g(lam alpha) ~ S(q, lam a) w(lam beta) / q.

    Returns |g - S w / q| over q (1 + sum |beta_j| N^j); the bound guarantees
    this ratio is O(1), and the report lets experiments record the constant.
    """
    if q < 1:
        raise BadParamsError("q must be >= 1")
    if len(a) != len(beta):
        raise BadParamsError("a and beta must have equal length")
    alpha = [aj / q + bj for aj, bj in zip(a, beta)]
    g_val = eval_g(n, [lam * x for x in alpha])
    approx = complete_sum(q, a, lam) * oscillatory_w(n, beta, lam) / q
    num = abs(g_val - approx)
    den = q * (1.0 + sum(abs(b) * float(n) ** j for j, b in enumerate(beta, start=1)))
    return MajorArcApproxReport(
        g_value=g_val,
        approx_value=approx,
        numerator=num,
        denominator=den,
        ratio=num / den,
    )
