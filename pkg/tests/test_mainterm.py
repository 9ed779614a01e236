import math
import random
from fractions import Fraction

import mpmath
import pytest

from circlecount import (
    SetWindow,
    constants,
    estimate_singular_integral_constant,
    find_nonsingular_real_solution,
    increment_iteration,
    predicted_count,
    progression_concentration_search,
    progression_window,
    random_density_window,
    uniformity_threshold,
    validate_system,
)
from circlecount.errors import BadDegreeError, BadParamsError, NoRealSolutionError
from circlecount.mainterm import BigLogNumber, Progression


class TestBigLogNumber:
    def test_exact_roundtrip(self):
        x = BigLogNumber.from_int(18)
        assert float(x) == 18.0
        assert x.level == 0
        assert x.to_json_dict()["exact"] == "18"

    def test_multiplication(self):
        a = BigLogNumber.from_int(6)
        b = BigLogNumber.from_fraction(Fraction(3, 2))
        assert float(a * b) == 9.0

    def test_power_fractional(self):
        x = BigLogNumber.from_int(9).power(Fraction(1, 2))
        assert float(x) == pytest.approx(3.0)

    def test_negative_sign_rules(self):
        m = BigLogNumber.from_int(-2)
        assert float(m.power(3)) == -8.0
        assert float(m.power(2)) == 4.0
        with pytest.raises(BadParamsError):
            m.power(Fraction(1, 2))

    def test_comparisons(self):
        vals = [
            BigLogNumber.from_int(-5),
            BigLogNumber.from_int(-1),
            BigLogNumber.zero(),
            BigLogNumber.from_fraction(Fraction(1, 3)),
            BigLogNumber.from_int(7),
        ]
        for a, b in zip(vals, vals[1:]):
            assert a < b

    def test_doubly_exponential_level(self):
        huge = BigLogNumber(1, mpmath.mpf(2) ** 200)
        assert huge.level == 2
        assert float(huge.log2_of_abs_log2) == pytest.approx(200.0)

    def test_tiny_value_floats_to_zero(self):
        tiny = BigLogNumber(1, -mpmath.mpf(2) ** 40)
        assert float(tiny) == 0.0
        assert tiny.sign == 1


class TestConstants:
    def test_s0_k3(self):
        assert constants(3).s0 == 114

    def test_sigma_k2(self):
        sheet = constants(2)
        assert sheet.sigma == pytest.approx(0.0124507, abs=1e-6)
        assert sheet.delta_exp == pytest.approx(2 * 0.0124507, abs=2e-6)

    def test_c_exponent_exact(self):
        assert constants(2).c_exp.log2_magnitude == -2048

    def test_floor_vs_trunc_at_k2(self):
        # the bracket argument is negative at k=2 only
        assert constants(2, bracket="floor").s0 == 42
        assert constants(2, bracket="trunc").s0 == 46
        assert constants(3, bracket="trunc").s0 == constants(3).s0

    def test_gamma_log2(self):
        assert constants(2).gamma.log2_magnitude == 2**10 + 3

    def test_k_const_at_cs_four_is_one(self):
        sheet = constants(2, cs_value=4.0)
        assert sheet.K_const.log2_magnitude == 0

    def test_deterministic(self):
        a, b = constants(4), constants(4)
        assert a.s0 == b.s0 and a.sigma == b.sigma

    def test_monotonicity(self):
        s0s = [constants(k).s0 for k in range(3, 9)]
        assert all(a < b for a, b in zip(s0s, s0s[1:]))
        sigmas = [constants(k).sigma for k in range(2, 9)]
        assert all(a > b for a, b in zip(sigmas, sigmas[1:]))

    def test_rejects_k1(self):
        with pytest.raises(BadDegreeError):
            constants(1)


class TestUniformityThreshold:
    def test_delta_one_returns_k(self):
        k_const = BigLogNumber.from_int(5)
        th = uniformity_threshold(2, 42, k_const, 1)
        assert float(th) == pytest.approx(5.0)

    def test_exponent_arithmetic(self):
        k_const = constants(2, cs_value=4.0).K_const  # log2 K = 0
        th = uniformity_threshold(2, 42, k_const, Fraction(1, 2))
        assert th.log2_magnitude == -352  # 2^3 * 44

    def test_monotone_in_delta(self):
        k_const = BigLogNumber.from_int(3)
        ths = [
            uniformity_threshold(2, 42, k_const, d)
            for d in (Fraction(1, 8), Fraction(1, 4), Fraction(1, 2), 1)
        ]
        for a, b in zip(ths, ths[1:]):
            assert a < b


class TestPredictedCount:
    def test_unit_case(self, sys_quad4):
        assert predicted_count(sys_quad4, 1, 10, 1.0, 1.0) == pytest.approx(10.0)

    def test_density_power_law(self, sys_quad4):
        full = predicted_count(sys_quad4, 1.0, 64, 0.9, 2.0)
        half = predicted_count(sys_quad4, 0.5, 64, 0.9, 2.0)
        assert half / full == pytest.approx(0.5**4)

    def test_rejects_nonpositive(self, sys_quad4):
        with pytest.raises(BadParamsError):
            predicted_count(sys_quad4, 0, 10, 1.0, 1.0)


class TestRealSolutionSearch:
    def test_finds_nonsingular_point(self, sys_quad6):
        x = find_nonsingular_real_solution(sys_quad6)
        assert x is not None
        assert all(0 < v < 1 for v in x)

    def test_singular_only_system(self):
        # x + y = 2z and x^2 + y^2 = 2z^2 force x = y = z: diagonal only
        sys = validate_system(2, (1, 1, -2))
        assert find_nonsingular_real_solution(sys) is None


class TestCEstimators:
    def test_no_real_solution_error(self):
        sys = validate_system(2, (1, 1, -2))
        with pytest.raises(NoRealSolutionError):
            estimate_singular_integral_constant(sys, "band_volume")

    def test_band_and_ratio_agree_within_spreads(self, sys_quad4):
        band = estimate_singular_integral_constant(
            sys_quad4, "band_volume", samples=400_000, eps=0.04, seed=1
        )
        ratio = estimate_singular_integral_constant(
            sys_quad4, "count_ratio", n_values=(32, 64), series_cutoff=50
        )
        assert abs(band.value - ratio.value) <= band.spread + ratio.spread

    def test_band_eps_consistency(self, sys_quad4):
        a = estimate_singular_integral_constant(
            sys_quad4, "band_volume", samples=300_000, eps=0.04, seed=3
        )
        b = estimate_singular_integral_constant(
            sys_quad4, "band_volume", samples=300_000, eps=0.08, seed=3
        )
        assert abs(a.value - b.value) <= 3 * (a.spread + b.spread)


class TestIncrementIteration:
    def _k_for_target_d(self, c_exp, delta0, d_target):
        # log2 K = log2 d_target - C log2 delta0; needs precision covering
        # C's full magnitude so the O(1) target survives the cancellation
        prec = int(c_exp.log2_magnitude) + 200
        with mpmath.workprec(prec):
            c_val = mpmath.power(2, c_exp.log2_magnitude)
            log2k = mpmath.log(d_target, 2) - c_val * mpmath.log(
                mpmath.mpf(delta0.numerator) / delta0.denominator, 2
            )
        return BigLogNumber(1, log2k)

    def test_density_one_immediate(self):
        sheet = constants(2, cs_value=4.0)
        trace = increment_iteration(1, 10.0, 3, sheet.K_const, sheet.C_exp)
        assert trace.outcome == "density_reached_one"
        assert trace.iterations_used == 0

    def test_big_d_two_steps(self):
        c_exp = constants(2).C_exp
        delta0 = Fraction(2, 5)
        k_const = self._k_for_target_d(c_exp, delta0, 0.55)
        trace = increment_iteration(delta0, 50.0, 3, k_const, c_exp)
        assert trace.outcome == "density_reached_one"
        assert trace.iterations_used == 2
        assert trace.cumulative_exponent >= 0.25

    def test_tiny_d_collapses_ambient(self):
        sheet = constants(2, cs_value=4.0)  # K = 1, C astronomically large
        trace = increment_iteration(
            Fraction(1, 2), 100.0, 3, sheet.K_const, sheet.C_exp
        )
        assert trace.outcome == "ambient_below_Y"
        assert trace.iterations_used == 1

    def test_density_nondecreasing_along_trace(self):
        c_exp = constants(2).C_exp
        delta0 = Fraction(1, 10)
        k_const = self._k_for_target_d(c_exp, delta0, 0.2)
        trace = increment_iteration(delta0, 1000.0, 3, k_const, c_exp)
        dens = [d for d, _ in trace.steps]
        assert all(a <= b + 1e-15 for a, b in zip(dens, dens[1:]))
        assert trace.iterations_used <= trace.max_iterations_bound

    def test_rejects_bad_inputs(self):
        sheet = constants(2, cs_value=4.0)
        with pytest.raises(BadParamsError):
            increment_iteration(0, 10.0, 3, sheet.K_const, sheet.C_exp)
        with pytest.raises(BadParamsError):
            increment_iteration(Fraction(1, 2), 10.0, 2, sheet.K_const, sheet.C_exp)


def _reference_progression_search(window, min_length):
    """Independent reference: recompute the density of every progression."""
    n = window.length
    best = None
    for step in range(1, n + 1):
        for start in range(1, n + 1):
            length = 0
            x = start
            elems = []
            while x <= n:
                length += 1
                elems.append(window.contains(x))
                x += step
                if length >= min_length:
                    dens = Fraction(sum(elems), length)
                    cand = (dens, -step, -start, length)
                    if best is None or cand > best:
                        best = cand
    return best[0]


class TestProgressionSearch:
    def test_full_interval(self):
        prog, dens = progression_concentration_search(SetWindow.full(12), 3)
        assert prog == Progression(1, 1, 12)
        assert dens == 1

    def test_even_numbers(self):
        w = progression_window(20, 2, 2)
        prog, dens = progression_concentration_search(w, 5)
        assert dens == 1
        assert prog.step == 2 and prog.start == 2

    def test_random_beats_mean(self):
        for seed in range(4):
            w = random_density_window(60, 0.5, seed=seed)
            _, dens = progression_concentration_search(w, 5)
            assert dens >= w.density

    def test_against_reference(self):
        rnd = random.Random(19)
        for _ in range(6):
            n = rnd.randint(10, 40)
            w = SetWindow(n, rnd.getrandbits(n) or 1)
            min_len = rnd.randint(2, max(2, n // 3))
            _, dens = progression_concentration_search(w, min_len)
            assert dens == _reference_progression_search(w, min_len)

    def test_reference_n200(self):
        w = random_density_window(200, 0.35, seed=4)
        _, dens = progression_concentration_search(w, 40)
        assert dens == _reference_progression_search(w, 40)
