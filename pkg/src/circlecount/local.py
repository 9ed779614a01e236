"""Local solution densities: congruence counts, singular-series terms, Euler
factors, and Hensel lifting of non-singular seeds.

The series term S(q) is computed by two independent routes that cross-check
each other:

* direct summation of the normalized complete-sum products over admissible
  numerator vectors (floating point, exact phase reduction);
* Moebius inversion of the divisor identity  sum_{d|q} S(d) = q^(k-s) M(q),
  which is exact rational arithmetic on congruence counts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .budget import DEFAULT_BUDGET, Budget
from .errors import (
    BadParamsError,
    HypothesisViolatedError,
    NoConvergenceError,
    NotCoprimeError,
    SingularJacobianError,
)
from .expsums import complete_sum, pairwise_sum
from .system import DiagonalSystem, _det_bareiss, jacobian

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class CongruenceCount:
    modulus: int
    count: int


_M_CACHE: dict[tuple[tuple[int, ...], int, int], int] = {}


def congruence_count(
    system: DiagonalSystem, q: int, budget: Budget = DEFAULT_BUDGET
) -> CongruenceCount:
    """Exact number of solutions mod q of all k congruences, x in (Z/q)^s.

    Dynamic programming over the residue vector of partial power sums: state
    space (Z/q)^k, one stage per variable, q transitions per stage, so the
    cost is s * q^(k+1) instead of q^s.
    """
    if q < 1:
        raise BadParamsError("q must be >= 1")
    if q == 1:
        return CongruenceCount(1, 1)
    k = system.degree
    s = system.arity
    # refuse before consulting the cache so refusal never depends on warmth
    budget.check_ops(s * q ** (k + 1), "congruence count")
    budget.check_bytes(2 * q**k * 8, "congruence DP states")
    key = (system.coefficients, system.degree, q)
    cached = _M_CACHE.get(key)
    if cached is not None:
        return CongruenceCount(q, cached)
    if float(q) ** s < _INT64_SAFE:
        counts = np.zeros((q,) * k, dtype=np.int64)
        counts[(0,) * k] = 1
        axes = tuple(range(k))
        for lam in system.coefficients:
            nxt = np.zeros_like(counts)
            for x in range(q):
                shifts = tuple(lam * pow(x, j, q) % q for j in range(1, k + 1))
                nxt += np.roll(counts, shifts, axis=axes)
            counts = nxt
        m = int(counts[(0,) * k])
    else:
        states: dict[tuple[int, ...], int] = {(0,) * k: 1}
        for lam in system.coefficients:
            nxt: dict[tuple[int, ...], int] = {}
            steps = [
                tuple(lam * pow(x, j, q) % q for j in range(1, k + 1))
                for x in range(q)
            ]
            for state, cnt in states.items():
                for step in steps:
                    new = tuple((a + b) % q for a, b in zip(state, step))
                    nxt[new] = nxt.get(new, 0) + cnt
            states = nxt
        m = states.get((0,) * k, 0)
    _M_CACHE[key] = m
    return CongruenceCount(q, m)


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _moebius(n: int) -> int:
    if n == 1:
        return 1
    mu = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            mu = -mu
        d += 1
    if n > 1:
        mu = -mu
    return mu


def series_term_moebius(
    system: DiagonalSystem, q: int, budget: Budget = DEFAULT_BUDGET
) -> Fraction:
    """S(q) as an exact rational, by Moebius-inverting the divisor identity
    against the congruence counts: S(q) = sum_{d|q} mu(q/d) d^(k-s) M(d)."""
    if q < 1:
        raise BadParamsError("q must be >= 1")
    k = system.degree
    s = system.arity
    total = Fraction(0)
    for d in _divisors(q):
        mu = _moebius(q // d)
        if mu == 0:
            continue
        m = congruence_count(system, d, budget).count
        total += mu * Fraction(m, d ** (s - k))
    return total


def series_term_direct(
    system: DiagonalSystem, q: int, budget: Budget = DEFAULT_BUDGET
) -> complex:
    """S(q) by direct summation over admissible numerator vectors.

    Sums q^(-s) * prod_i S(q, lam_i a) over a in [0, q)^k with
    gcd(q, a_1, ..., a_k) = 1; the complete sums S(q, b) are tabulated once
    for every residue vector b and looked up per coefficient.
    """
    if q < 1:
        raise BadParamsError("q must be >= 1")
    k = system.degree
    s = system.arity
    budget.check_ops(q ** (k + 1) + q**k * s, "direct series term")
    budget.check_bytes(q ** k * 16, "complete-sum table")
    if q == 1:
        return 1.0 + 0j
    vecs = np.indices((q,) * k).reshape(k, -1).T  # rows are (a_1, ..., a_k)
    table = np.array(
        [complete_sum(q, b) for b in itertools.product(range(q), repeat=k)],
        dtype=np.complex128,
    )  # S(q, b) indexed by the flattened vector b
    strides = np.array([q ** (k - 1 - i) for i in range(k)], dtype=np.int64)
    gcds = np.gcd.reduce(vecs, axis=1)
    mask = np.gcd(gcds, q) == 1
    prod = np.ones(vecs.shape[0], dtype=np.complex128)
    for lam in system.coefficients:
        idx = ((lam * vecs) % q) @ strides
        prod *= table[idx]
    return pairwise_sum(prod[mask]) / float(q) ** s


@dataclass(frozen=True)
class MultiplicativityReport:
    q: int
    r: int
    s_q: Fraction
    s_r: Fraction
    s_qr: Fraction
    residual: float
    passed: bool


def multiplicativity_check(
    system: DiagonalSystem, q: int, r: int, budget: Budget = DEFAULT_BUDGET
) -> MultiplicativityReport:
    """Verify S(qr) = S(q) S(r) for coprime q, r (exact values, float residual)."""
    if math.gcd(q, r) != 1:
        raise NotCoprimeError(f"gcd({q}, {r}) != 1")
    s_q = series_term_moebius(system, q, budget)
    s_r = series_term_moebius(system, r, budget)
    s_qr = series_term_moebius(system, q * r, budget)
    residual = abs(float(s_qr - s_q * s_r))
    tol = 1e-9 * (1.0 + abs(float(s_q * s_r)))
    return MultiplicativityReport(q, r, s_q, s_r, s_qr, residual, residual <= tol)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class EulerFactorReport:
    prime: int
    h_max: int
    series_terms: tuple[Fraction, ...]  # S(p^0), ..., S(p^h_max)
    partial_sum: Fraction
    normalized_counts: tuple[Fraction, ...]  # p^((k-s)t) M(p^t), t = 0..h_max
    stabilization_gap: Fraction


def euler_factor(
    system: DiagonalSystem, p: int, h_max: int, budget: Budget = DEFAULT_BUDGET
) -> EulerFactorReport:
    """Partial Euler factor sum_{h<=h_max} S(p^h) with its stabilization
    diagnostic, the normalized prime-power counts p^((k-s)t) M(p^t)."""
    if not _is_prime(p):
        raise BadParamsError(f"{p} is not prime")
    if h_max < 0:
        raise BadParamsError("h_max must be >= 0")
    terms = [series_term_moebius(system, p**h, budget) for h in range(h_max + 1)]
    k = system.degree
    s = system.arity
    normalized = [
        Fraction(congruence_count(system, p**t, budget).count, p ** (t * (s - k)))
        for t in range(h_max + 1)
    ]
    gap = (
        abs(normalized[-1] - normalized[-2]) if h_max >= 1 else Fraction(0)
    )
    return EulerFactorReport(
        prime=p,
        h_max=h_max,
        series_terms=tuple(terms),
        partial_sum=sum(terms, Fraction(0)),
        normalized_counts=tuple(normalized),
        stabilization_gap=gap,
    )


@dataclass(frozen=True)
class SeriesTerm:
    q: int
    value: Fraction
    method: str
    residual: Optional[float]  # |direct - moebius| when both routes ran
    tail_reference: float  # q^(-9k) comparison curve, reported only


@dataclass(frozen=True)
class SeriesTruncation:
    cutoff: int
    partial_sum: Fraction
    terms: tuple[SeriesTerm, ...]


def truncated_singular_series(
    system: DiagonalSystem,
    cutoff: int,
    budget: Budget = DEFAULT_BUDGET,
    method: str = "moebius",
) -> SeriesTruncation:
    """Partial sums sum_{q<=Q} S(q) with per-term values.

    The Moebius route is exact and memoizes congruence counts across terms,
    so it is the default; ``method="both"`` also runs the direct route and
    records the residual per term.
    """
    if cutoff < 1:
        raise BadParamsError("cutoff must be >= 1")
    if method not in ("moebius", "direct", "both"):
        raise BadParamsError(f"unknown method {method!r}")
    terms = []
    total = Fraction(0)
    ninek = 9 * system.degree
    for q in range(1, cutoff + 1):
        exact = series_term_moebius(system, q, budget)
        residual = None
        used = "moebius"
        if method in ("direct", "both"):
            direct = series_term_direct(system, q, budget)
            residual = abs(direct - complex(float(exact)))
            used = method
        total += exact
        terms.append(
            SeriesTerm(
                q=q,
                value=exact,
                method=used,
                residual=residual,
                tail_reference=float(q) ** (-ninek),
            )
        )
    return SeriesTruncation(cutoff=cutoff, partial_sum=total, terms=tuple(terms))


@dataclass(frozen=True)
class PadicLift:
    prime: int
    level: int
    values: tuple[int, ...]
    certified: bool
    free_indices: tuple[int, ...]
    u: int  # hypothesis depth 1 + 2 v_p(Jacobian)


def _v_p(n: int, p: int) -> int:
    if n == 0:
        raise BadParamsError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _adjugate_times(mat: list[list[int]], vec: list[int]) -> list[int]:
    """adj(mat) @ vec for an exact integer matrix (cofactor expansion)."""
    k = len(mat)
    if k == 1:
        return [vec[0]]
    out = []
    for i in range(k):
        acc = 0
        for j in range(k):
            minor = [
                [mat[r][c] for c in range(k) if c != i]
                for r in range(k)
                if r != j
            ]
            cof = (-1) ** (i + j) * _det_bareiss(minor)
            acc += cof * vec[j]
        out.append(acc)
    return out


def _pick_free_indices(
    system: DiagonalSystem, seed: Sequence[int], p: int
) -> tuple[int, ...]:
    k = system.degree
    s = system.arity
    # greedy: first k indices with pairwise-distinct residues, then fall back
    # to scanning k-subsets until a unit Jacobian turns up
    chosen: list[int] = []
    seen: set[int] = set()
    for i in range(1, s + 1):
        v = seed[i - 1] % p
        if v not in seen:
            seen.add(v)
            chosen.append(i)
            if len(chosen) == k:
                break
    candidates = []
    if len(chosen) == k:
        candidates.append(tuple(chosen))
    candidates.extend(itertools.combinations(range(1, s + 1), k))
    tried = 0
    for cand in candidates:
        tried += 1
        if tried > 5000:
            break
        if jacobian(system, seed, cand) % p != 0:
            return tuple(sorted(cand))
    raise SingularJacobianError(
        f"no k-subset of variables has a unit Jacobian mod {p} at this seed"
    )


def hensel_lift(
    system: DiagonalSystem,
    seed: Sequence[int],
    p: int,
    t: int,
    free_indices: Optional[Sequence[int]] = None,
) -> PadicLift:
    """Lift a solution mod p to a solution mod p^t by Newton iteration.

    The k variables in ``free_indices`` are updated; all others stay fixed at
    their seed values.  Requires the k x k Jacobian on the free variables to
    be nonzero with p-adic valuation v, and the seed to satisfy the
    congruences mod p^(1+2v) (the unique-lift hypothesis).  The returned
    values satisfy the system mod p^t exactly and reduce to the seed mod p.
    """
    system.require_arity(seed)
    if not _is_prime(p):
        raise BadParamsError(f"{p} is not prime")
    if t < 1:
        raise BadParamsError("target level must be >= 1")
    x = [int(val) % p for val in seed]
    free = (
        tuple(sorted(int(i) for i in free_indices))
        if free_indices is not None
        else _pick_free_indices(system, x, p)
    )
    if len(free) != system.degree or len(set(free)) != system.degree:
        raise BadParamsError("free_indices must be a k-subset")
    delta = jacobian(system, x, free)
    if delta == 0:
        raise SingularJacobianError(
            f"Jacobian vanishes on variables {free}: no unit after normalization"
        )
    v = _v_p(delta, p)
    u = 1 + 2 * v
    if any(val % p**u != 0 for val in system.equations_at(x)):
        raise HypothesisViolatedError(
            f"seed does not satisfy the congruences mod p^{u} (u = 1 + 2 v_p(J))"
        )
    work_mod = p ** (t + 2 * v + 2)
    target = p**t
    k = system.degree
    for _ in range(64):
        lvals = list(system.equations_at(x))
        if all(val % target == 0 for val in lvals):
            break
        jmat = [
            [j * system.coefficients[i - 1] * x[i - 1] ** (j - 1) for i in free]
            for j in range(1, k + 1)
        ]
        det = _det_bareiss(jmat)
        if det == 0 or _v_p(det, p) != v:
            raise NoConvergenceError("Jacobian valuation drifted during lifting")
        inv_unit = pow(det // p**v % work_mod, -1, work_mod)
        nums = _adjugate_times(jmat, lvals)  # exact: J^{-1} L = nums / det
        step = []
        for numv in nums:
            if numv % p**v != 0:
                raise NoConvergenceError(
                    "Newton correction is not p-integral; hypothesis fails in practice"
                )
            step.append((numv // p**v) * inv_unit % work_mod)
        for pos, idx in enumerate(free):
            x[idx - 1] = (x[idx - 1] - step[pos]) % work_mod
    else:
        raise NoConvergenceError("Newton iteration did not reach the target level")
    x = [val % target for val in x]
    if any(val % target != 0 for val in system.equations_at(x)):
        raise NoConvergenceError("lift verification failed")
    if any((a - b) % p != 0 for a, b in zip(x, seed)):
        raise NoConvergenceError("lift does not reduce to the seed mod p")
    return PadicLift(
        prime=p,
        level=t,
        values=tuple(x),
        certified=True,
        free_indices=free,
        u=u,
    )
