"""Constant arithmetic, main-term prediction, and the density-increment trace.

The constants involved are doubly exponential in k (e.g. the increment
constant is 2 raised to a power with more than 10^300 binary digits at k = 2),
so nothing here is ever materialized as a hardware float.  All size
bookkeeping happens on the log2 scale via :class:`BigLogNumber`, whose
magnitude field is an mpmath value: mpmath exponents are big integers, so
even the *logarithm* being astronomically large is representable exactly
enough (well beyond 30 significant bits of the iterated logarithm).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from .budget import DEFAULT_BUDGET, Budget
from .enumeration import count_solutions
from .errors import BadDegreeError, BadParamsError, NoRealSolutionError
from .expsums import sigma_exponent
from .local import truncated_singular_series
from .system import DiagonalSystem
from .windows import SetWindow

_PREC = 120
_EXACT_BIT_LIMIT = 4096


def _mpf(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator)
    return mpmath.mpf(x)


def _log2(x) -> mpmath.mpf:
    return mpmath.log(_mpf(x), 2)


class BigLogNumber:
    """A real number as sign plus log2 magnitude, with an exact payload
    while the value stays small enough to materialize.

    ``level`` reports how the number is best read: 0 when the exact rational
    payload is present, 1 when only the log2 magnitude is meaningful, and
    2 when even the log2 magnitude needs its own logarithm to be displayed
    (doubly exponential values).
    """

    __slots__ = ("sign", "log2_magnitude", "exact")

    def __init__(self, sign: int, log2_magnitude, exact: Optional[Fraction] = None):
        if sign not in (-1, 0, 1):
            raise BadParamsError("sign must be -1, 0 or +1")
        self.sign = sign
        if sign == 0:
            self.log2_magnitude = mpmath.mpf(0)
        elif isinstance(log2_magnitude, mpmath.mpf):
            # keep full precision: re-wrapping would round to the ambient prec
            self.log2_magnitude = log2_magnitude
        else:
            with mpmath.workprec(_PREC):
                self.log2_magnitude = mpmath.mpf(log2_magnitude)
        self.exact = exact

    @classmethod
    def zero(cls) -> "BigLogNumber":
        return cls(0, 0, Fraction(0))

    @classmethod
    def from_fraction(cls, value: Fraction) -> "BigLogNumber":
        value = Fraction(value)
        if value == 0:
            return cls.zero()
        sign = 1 if value > 0 else -1
        with mpmath.workprec(_PREC):
            mag = _log2(abs(value.numerator)) - _log2(value.denominator)
        return cls(sign, mag, value)

    @classmethod
    def from_int(cls, value: int) -> "BigLogNumber":
        return cls.from_fraction(Fraction(value))

    @classmethod
    def from_float(cls, value: float) -> "BigLogNumber":
        if value == 0.0:
            return cls.zero()
        sign = 1 if value > 0 else -1
        with mpmath.workprec(_PREC):
            mag = _log2(abs(value))
        return cls(sign, mag)

    @classmethod
    def from_log2(cls, sign: int, log2_magnitude) -> "BigLogNumber":
        return cls(sign, log2_magnitude)

    def _keep_exact(self) -> Optional[Fraction]:
        if self.exact is None:
            return None
        if (
            self.exact.numerator.bit_length() <= _EXACT_BIT_LIMIT
            and self.exact.denominator.bit_length() <= _EXACT_BIT_LIMIT
        ):
            return self.exact
        return None

    @property
    def level(self) -> int:
        if self.sign == 0 or self._keep_exact() is not None:
            return 0
        if abs(self.log2_magnitude) < mpmath.mpf(2) ** 48:
            return 1
        return 2

    @property
    def log2_of_abs_log2(self) -> Optional[mpmath.mpf]:
        """Display helper for level-2 values: log2 |log2 |x||."""
        if self.sign == 0 or self.log2_magnitude == 0:
            return None
        with mpmath.workprec(_PREC):
            return mpmath.log(abs(self.log2_magnitude), 2)

    def __mul__(self, other: "BigLogNumber") -> "BigLogNumber":
        if not isinstance(other, BigLogNumber):
            return NotImplemented
        if self.sign == 0 or other.sign == 0:
            return BigLogNumber.zero()
        exact = None
        a, b = self._keep_exact(), other._keep_exact()
        if a is not None and b is not None:
            exact = a * b
        with mpmath.workprec(_PREC):
            mag = self.log2_magnitude + other.log2_magnitude
        out = BigLogNumber(self.sign * other.sign, mag, exact)
        out.exact = out._keep_exact()
        return out

    def power(self, exponent) -> "BigLogNumber":
        """Raise to an integer, Fraction, or float power (value must be > 0
        unless the exponent is a nonnegative integer)."""
        if self.sign == 0:
            if (isinstance(exponent, int) and exponent > 0) or (
                isinstance(exponent, Fraction) and exponent > 0
            ):
                return BigLogNumber.zero()
            raise BadParamsError("zero to a non-positive power")
        if self.sign < 0 and not isinstance(exponent, int):
            raise BadParamsError("negative base needs an integer exponent")
        exact = None
        kept = self._keep_exact()
        if kept is not None and isinstance(exponent, int):
            if abs(exponent) * max(
                kept.numerator.bit_length(), kept.denominator.bit_length()
            ) <= _EXACT_BIT_LIMIT:
                exact = kept**exponent
        if (
            kept is not None
            and isinstance(exponent, Fraction)
            and exponent.denominator == 1
        ):
            e = exponent.numerator
            if abs(e) * max(
                kept.numerator.bit_length(), kept.denominator.bit_length()
            ) <= _EXACT_BIT_LIMIT:
                exact = kept**e
        if self.sign > 0:
            sign = 1
        else:  # negative base: integer exponent guaranteed above
            sign = -1 if exponent % 2 else 1
        with mpmath.workprec(_PREC):
            mag = self.log2_magnitude * _mpf(exponent)
        out = BigLogNumber(sign, mag, exact)
        out.exact = out._keep_exact()
        return out

    def _cmp_key(self):
        # orders the reals: negative big < negative small < 0 < positive small
        if self.sign == 0:
            return (0, mpmath.mpf(0))
        return (self.sign, self.sign * self.log2_magnitude)

    def __lt__(self, other: "BigLogNumber") -> bool:
        a, b = self._cmp_key(), other._cmp_key()
        return a[0] < b[0] or (a[0] == b[0] and a[1] < b[1])

    def __le__(self, other: "BigLogNumber") -> bool:
        return not other < self

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        kept = self._keep_exact()
        if kept is not None:
            try:
                return float(kept)
            except OverflowError:
                pass
        with mpmath.workprec(_PREC):
            try:
                return float(self.sign * mpmath.power(2, self.log2_magnitude))
            except (OverflowError, ValueError):
                return math.inf * self.sign if self.log2_magnitude > 0 else 0.0

    def to_json_dict(self) -> dict:
        out: dict = {"sign": self.sign, "level": self.level}
        out["log2_magnitude"] = mpmath.nstr(self.log2_magnitude, 20)
        lvl2 = self.log2_of_abs_log2
        if self.level == 2 and lvl2 is not None:
            out["log2_of_abs_log2"] = mpmath.nstr(lvl2, 20)
        kept = self._keep_exact()
        if kept is not None:
            out["exact"] = (
                str(kept.numerator)
                if kept.denominator == 1
                else f"{kept.numerator}/{kept.denominator}"
            )
        return out

    def __repr__(self) -> str:
        kept = self._keep_exact()
        if kept is not None:
            return f"BigLogNumber({kept})"
        return f"BigLogNumber(sign={self.sign}, log2={mpmath.nstr(self.log2_magnitude, 10)})"


@dataclass(frozen=True)
class ConstantSheet:
    k: int
    s0: int
    sigma: float
    delta_exp: float
    gamma: BigLogNumber
    K_const: Optional[BigLogNumber]  # increment constant; needs a CS value
    C_exp: BigLogNumber
    c_exp: BigLogNumber
    notes: tuple[str, ...]


def constants(
    k: int, cs_value: Optional[float] = None, bracket: str = "floor"
) -> ConstantSheet:
    """Evaluate the constant sheet for degree k.

    Conventions (recorded in ``notes``): natural logarithms throughout; the
    square bracket is the floor (``bracket="trunc"`` truncates toward zero
    instead, which differs exactly when the bracket argument is negative,
    i.e. at k = 2).  The increment constant is conditional on a supplied
    CS value (the product of the two main-term constants) and is None
    without one.
    """
    if k < 2:
        raise BadDegreeError("constants need k >= 2")
    if bracket not in ("floor", "trunc"):
        raise BadParamsError(f"unknown bracket convention {bracket!r}")
    arg = k * (math.log(k) + 2.0 * math.log(math.log(k)))
    br = math.floor(arg) if bracket == "floor" else math.trunc(arg)
    s0 = 2 * k * br + 10 * k * k + 6
    sigma = sigma_exponent(k)
    gamma_log2 = 2 ** (k + 8) + k + 1
    gamma = BigLogNumber(1, gamma_log2)
    if gamma_log2 <= _EXACT_BIT_LIMIT:
        gamma = BigLogNumber(1, gamma_log2, Fraction(2**gamma_log2))
    with mpmath.workprec(_PREC):
        c_exp = BigLogNumber(1, -mpmath.mpf(2 ** (k + 9)))
        if 2 ** (k + 9) <= _EXACT_BIT_LIMIT:
            c_exp = BigLogNumber(
                1, -mpmath.mpf(2 ** (k + 9)), Fraction(1, 2 ** (2 ** (k + 9)))
            )
        big_c = BigLogNumber(1, _log2(s0 + 2) + gamma_log2)
        k_const = None
        if cs_value is not None:
            if cs_value <= 0:
                raise BadParamsError("CS value must be positive")
            k_const = BigLogNumber(
                1, mpmath.power(2, mpmath.mpf(gamma_log2)) * _log2(_mpf(cs_value) / 4)
            )
    notes = (
        "natural logarithms",
        f"square bracket interpreted as {bracket}",
        "K_const conditional on supplied CS"
        + (f" = {cs_value}" if cs_value is not None else " (not supplied)"),
    )
    return ConstantSheet(
        k=k,
        s0=s0,
        sigma=sigma,
        delta_exp=k * sigma,
        gamma=gamma,
        K_const=k_const,
        C_exp=big_c,
        c_exp=c_exp,
        notes=notes,
    )


def uniformity_threshold(
    k: int, s0: int, k_const: BigLogNumber, delta
) -> BigLogNumber:
    """Threshold K * delta^(2^(k+1) (s0+2)) on the uniformity parameter."""
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise BadParamsError("delta must be in (0, 1]")
    exponent = 2 ** (k + 1) * (s0 + 2)
    return k_const * BigLogNumber.from_fraction(delta).power(exponent)


def predicted_count(
    system: DiagonalSystem, delta, n: int, c_est: float, s_trunc: float
) -> float:
    """Main-term prediction CS * delta^s * N^(s - k(k+1)/2)."""
    delta = float(delta)
    if delta <= 0 or n < 1 or c_est <= 0 or s_trunc <= 0:
        raise BadParamsError("all inputs must be positive")
    s = system.arity
    k = system.degree
    return c_est * s_trunc * delta**s * float(n) ** (s - k * (k + 1) // 2)


def _equation_values(system: DiagonalSystem, pts: np.ndarray) -> np.ndarray:
    """L_j at each row of pts: shape (n, k)."""
    lam = np.asarray(system.coefficients, dtype=np.float64)
    out = np.empty((pts.shape[0], system.degree), dtype=np.float64)
    for j in range(1, system.degree + 1):
        out[:, j - 1] = (pts**j) @ lam
    return out


def _distinct_at_scale(values, tol: float) -> int:
    """Number of value clusters separated by gaps larger than tol.

    Near-singular Newton limits have coordinate gaps of order sqrt(residual),
    far below any macroscopic tol, so they collapse to fewer than k clusters.
    """
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    return 1 + int(np.count_nonzero(np.diff(ordered) > tol))


def find_nonsingular_real_solution(
    system: DiagonalSystem, attempts: int = 64, seed: int = 0
) -> Optional[np.ndarray]:
    """Newton search for a non-singular real solution in the open unit cube.

    Returns None when no candidate with at least k distinct coordinates
    converges strictly inside (0, 1)^s; used as the existence gate for the
    singular-integral estimators.
    """
    rng = np.random.default_rng(seed)
    s = system.arity
    k = system.degree
    lam = np.asarray(system.coefficients, dtype=np.float64)
    for _ in range(attempts):
        x = rng.uniform(0.1, 0.9, size=s)
        order = np.argsort(x)
        free = sorted(order[np.linspace(0, s - 1, k).round().astype(int)].tolist())
        ok = False
        for _ in range(60):
            vals = np.array(
                [lam @ x**j for j in range(1, k + 1)], dtype=np.float64
            )
            if np.max(np.abs(vals)) < 1e-13:
                ok = True
                break
            jac = np.array(
                [
                    [j * lam[i] * x[i] ** (j - 1) for i in free]
                    for j in range(1, k + 1)
                ],
                dtype=np.float64,
            )
            try:
                step = np.linalg.solve(jac, vals)
            except np.linalg.LinAlgError:
                break
            for pos, idx in enumerate(free):
                x[idx] -= step[pos]
            if not np.all(np.isfinite(x)):
                break
        if not ok:
            continue
        if np.any(x <= 1e-9) or np.any(x >= 1 - 1e-9):
            continue
        if _distinct_at_scale(x, 1e-4) >= k:
            return x
    return None


@dataclass(frozen=True)
class CEstimate:
    value: float
    spread: float
    method: str
    details: dict


def _require_real_solution(
    system: DiagonalSystem, solution: Optional[Sequence[float]], seed: int
) -> None:
    if solution is not None:
        pt = np.asarray(solution, dtype=np.float64)
        if pt.shape != (system.arity,):
            raise BadParamsError("supplied solution has wrong length")
        vals = _equation_values(system, pt[None, :])[0]
        if np.max(np.abs(vals)) > 1e-9 or np.any(pt <= 0) or np.any(pt >= 1):
            raise BadParamsError("supplied point is not a solution in (0,1)^s")
        if _distinct_at_scale(pt, 1e-4) < system.degree:
            raise NoRealSolutionError("supplied solution is singular")
        return
    if find_nonsingular_real_solution(system, seed=seed) is None:
        raise NoRealSolutionError(
            "no non-singular real solution in (0,1)^s was found"
        )


def estimate_singular_integral_constant(
    system: DiagonalSystem,
    method: str,
    solution: Optional[Sequence[float]] = None,
    samples: int = 400_000,
    eps: float = 0.04,
    seed: int = 1,
    n_values: Sequence[int] = (16, 32),
    series_cutoff: int = 50,
    budget: Budget = DEFAULT_BUDGET,
) -> CEstimate:
    """Estimate the Archimedean density constant of the system.

    ``band_volume``: Monte Carlo measure of the slab {|L_j| <= eps for all j}
    in the unit cube, normalized by (2 eps)^k, at two eps levels with a
    Richardson-style extrapolation; the spread combines the level difference
    and the binomial sampling error.

    ``count_ratio``: exact full-interval counts divided by the truncated
    singular series and the main-term power of N, across increasing N.
    """
    if method not in ("band_volume", "count_ratio"):
        raise BadParamsError(f"unknown method {method!r}")
    _require_real_solution(system, solution, seed)
    k = system.degree
    if method == "band_volume":
        budget.check_ops(samples * system.arity * k, "band volume sampling")
        rng = np.random.default_rng(seed)
        hits = np.zeros(2, dtype=np.int64)
        done = 0
        chunk = 250_000
        while done < samples:
            take = min(chunk, samples - done)
            pts = rng.uniform(0.0, 1.0, size=(take, system.arity))
            dev = np.max(np.abs(_equation_values(system, pts)), axis=1)
            hits[0] += int(np.count_nonzero(dev <= eps))
            hits[1] += int(np.count_nonzero(dev <= eps / 2))
            done += take
        vols = [
            hits[i] / samples / (2.0 * e) ** k
            for i, e in enumerate((eps, eps / 2.0))
        ]
        extrap = 2.0 * vols[1] - vols[0]
        stds = [
            math.sqrt(max(h, 1)) / samples / (2.0 * e) ** k
            for h, e in zip(hits.tolist(), (eps, eps / 2.0))
        ]
        spread = max(abs(vols[1] - vols[0]), 3.0 * stds[1])
        return CEstimate(
            value=extrap,
            spread=spread,
            method="band_volume",
            details={
                "eps_levels": [eps, eps / 2.0],
                "volumes": vols,
                "samples": samples,
                "seed": seed,
            },
        )
    exponent = system.arity - k * (k + 1) // 2
    s_tr = float(
        truncated_singular_series(system, series_cutoff, budget).partial_sum
    )
    ratios = []
    for n in n_values:
        tally = count_solutions(system, SetWindow.full(n), method="auto", budget=budget)
        ratios.append(tally.total / float(n) ** exponent / s_tr)
    spread = max(ratios) - min(ratios) if len(ratios) > 1 else abs(ratios[0]) * 0.5
    return CEstimate(
        value=ratios[-1],
        spread=spread,
        method="count_ratio",
        details={
            "n_values": list(n_values),
            "ratios": ratios,
            "series_cutoff": series_cutoff,
            "series_value": s_tr,
        },
    )


@dataclass(frozen=True)
class IncrementTrace:
    steps: tuple[tuple[float, float], ...]  # (density, loglog ambient) per stage
    iterations_used: int
    outcome: str  # density_reached_one | ambient_below_Y | budget
    cumulative_exponent: float  # product of per-step ambient exponents
    threshold_loglog: float  # 1/(2 D_0), the small-density ambient threshold
    max_iterations_bound: float  # 1/D_0, iteration count guarantee


def increment_iteration(
    delta0,
    loglog_n0: float,
    y: int,
    k_const: BigLogNumber,
    c_exp: BigLogNumber,
    max_iterations: int = 10_000,
) -> IncrementTrace:
    """Iterate the density-increment recurrences on the (iterated-)log scale.

    Each stage multiplies the ambient exponent by D_r = K * delta_r^C
    (clamped at 1: a progression cannot outgrow its ambient interval) and
    raises the density by the same D_r, until the density reaches 1, the
    ambient interval drops below the minimal nontrivial-solution height Y,
    or the iteration budget runs out.
    """
    delta0 = Fraction(delta0)
    if not 0 < delta0 <= 1:
        raise BadParamsError("delta0 must be in (0, 1]")
    if y < 3:
        raise BadParamsError("Y must be >= 3")
    # D_r = K delta^C adds an O(1) log to terms of size ~C, so the working
    # precision must cover C's full magnitude for the moderate-D regime
    prec = _PREC
    if c_exp.log2_magnitude > 0:
        prec = max(prec, min(int(c_exp.log2_magnitude) + 80, 1 << 20))
    with mpmath.workprec(prec):
        c_val = mpmath.power(2, c_exp.log2_magnitude)  # C itself
        k_log2 = k_const.log2_magnitude

        def step_log2(d) -> mpmath.mpf:
            return k_log2 + c_val * mpmath.log(d, 2)

        delta = _mpf(delta0)
        loglog = mpmath.mpf(loglog_n0)
        loglog_y = mpmath.log(mpmath.log(y))
        d0 = min(mpmath.power(2, step_log2(delta)), mpmath.mpf(1))
        steps = [(float(delta), float(loglog))]
        cumulative = mpmath.mpf(1)
        iterations = 0
        outcome = "budget"
        if delta >= 1:
            outcome = "density_reached_one"
        else:
            while iterations < max_iterations:
                d_r = min(mpmath.power(2, step_log2(delta)), mpmath.mpf(1))
                delta = min(delta + d_r, mpmath.mpf(1))
                loglog = loglog + mpmath.log(d_r)
                cumulative *= d_r
                iterations += 1
                steps.append((float(delta), float(loglog)))
                if delta >= 1:
                    outcome = "density_reached_one"
                    break
                if loglog < loglog_y:
                    outcome = "ambient_below_Y"
                    break
        return IncrementTrace(
            steps=tuple(steps),
            iterations_used=iterations,
            outcome=outcome,
            cumulative_exponent=float(cumulative),
            threshold_loglog=float(1 / (2 * d0)),
            max_iterations_bound=float(mpmath.ceil(1 / d0)),
        )


@dataclass(frozen=True)
class Progression:
    start: int
    step: int
    length: int

    def elements(self) -> tuple[int, ...]:
        return tuple(self.start + i * self.step for i in range(self.length))


def progression_concentration_search(
    window: SetWindow, min_length: int, budget: Budget = DEFAULT_BUDGET
) -> tuple[Progression, Fraction]:
    """Exhaustive scan of arithmetic progressions of length >= min_length,
    returning one of maximal window density (ties: smallest step, then
    smallest start, then greatest length)."""
    n = window.length
    if not 1 <= min_length <= n:
        raise BadParamsError("need 1 <= min_length <= N")
    budget.check_ops(n * n * max(n // min_length, 1), "progression search")
    best_density = Fraction(-1)
    best: Optional[Progression] = None
    max_step = (n - 1) // (min_length - 1) if min_length > 1 else n - 1
    max_step = max(max_step, 1)
    for step in range(1, max_step + 1):
        last_start = n - (min_length - 1) * step
        for start in range(1, last_start + 1):
            count = 0
            length = 0
            x = start
            while x <= n:
                length += 1
                if window.contains(x):
                    count += 1
                if length >= min_length:
                    density = Fraction(count, length)
                    if density > best_density:
                        best_density = density
                        best = Progression(start, step, length)
                    elif (
                        density == best_density
                        and best is not None
                        and start == best.start
                        and step == best.step
                    ):
                        best = Progression(start, step, length)
                x += step
    assert best is not None
    return best, best_density
