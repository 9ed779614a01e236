import random
from fractions import Fraction

import numpy as np
import pytest

from circlecount import (
    SetWindow,
    balanced_function,
    difference_sum,
    difference_sum_naive,
    random_density_window,
    uniformity_parameter,
    weyl_chain_check,
)
from circlecount.budget import Budget
from circlecount.errors import BudgetExceededError


class TestBalancedFunction:
    def test_full_interval_vanishes(self):
        b = balanced_function(SetWindow.full(9))
        assert all(v == 0 for v in b.values)

    def test_empty_set_vanishes(self):
        b = balanced_function(SetWindow.empty(5))
        assert all(v == 0 for v in b.values)

    def test_singleton(self):
        b = balanced_function(SetWindow.from_elements(2, [1]))
        assert b.values == (-1, 1)
        assert b.at(1) == Fraction(-1, 2)
        assert b.at(3) == 0


class TestDifferenceSum:
    def test_full_interval_zero(self):
        for k in (1, 2):
            assert difference_sum(SetWindow.full(6), k) == 0

    def test_singleton_hand_value(self):
        assert difference_sum(SetWindow.from_elements(2, [1]), 1) == Fraction(3, 8)

    def test_singleton_reflection_pairs(self):
        # the interval-based sum is not translation invariant (the balanced
        # function's constant part stays pinned to [1, N]); the true symmetry
        # pairs x0 with its mirror N + 1 - x0
        n = 9
        for x0 in (1, 2, 4):
            a = difference_sum(SetWindow.from_elements(n, [x0]), 2)
            b = difference_sum(SetWindow.from_elements(n, [n + 1 - x0]), 2)
            assert a == b
        assert difference_sum(
            SetWindow.from_elements(n, [1]), 2
        ) != difference_sum(SetWindow.from_elements(n, [4]), 2)

    def test_reflection_invariance(self):
        rnd = random.Random(3)
        for _ in range(10):
            n = rnd.randint(3, 12)
            mask = rnd.getrandbits(n) or 1
            w = SetWindow(n, mask)
            mirrored = SetWindow.from_elements(
                n, [n + 1 - x for x in w.elements()]
            )
            assert difference_sum(w, 1) == difference_sum(mirrored, 1)

    def test_nonnegative(self):
        rnd = random.Random(5)
        for _ in range(20):
            n = rnd.randint(2, 14)
            w = SetWindow(n, rnd.getrandbits(n) or 1)
            assert difference_sum(w, 1) >= 0

    def test_budget_refusal(self):
        with pytest.raises(BudgetExceededError):
            difference_sum(SetWindow.full(4096), 2, Budget(max_ops=10**6))


class TestCollapseIdentity:
    def test_exhaustive_tiny_k1(self):
        n = 8
        for mask in range(1, 1 << n):
            w = SetWindow(n, mask)
            assert difference_sum(w, 1) == difference_sum_naive(w, 1)

    def test_random_k2(self):
        rnd = random.Random(11)
        for _ in range(12):
            n = rnd.randint(3, 12)
            w = SetWindow(n, rnd.getrandbits(n) or 1)
            assert difference_sum(w, 2) == difference_sum_naive(w, 2)

    def test_random_k3(self):
        rnd = random.Random(13)
        for _ in range(4):
            n = rnd.randint(3, 8)
            w = SetWindow(n, rnd.getrandbits(n) or 1)
            assert difference_sum(w, 3) == difference_sum_naive(w, 3)

    def test_exhaustive_tiny_k3(self):
        n = 4
        for mask in range(1, 1 << n):
            w = SetWindow(n, mask)
            assert difference_sum(w, 3) == difference_sum_naive(w, 3)


class TestUniformityParameter:
    def test_full_interval(self):
        rep = uniformity_parameter(SetWindow.full(16), 2)
        assert rep.parameter == 0

    def test_singleton_value(self):
        rep = uniformity_parameter(SetWindow.from_elements(2, [1]), 1)
        assert rep.parameter == Fraction(3, 64)

    def test_random_half_density_in_range(self):
        for seed in range(5):
            w = random_density_window(64, 0.5, seed=seed)
            rep = uniformity_parameter(w, 2)
            assert 0 < rep.parameter <= 1


class TestWeylChain:
    def test_full_interval_all_zero(self):
        rep = weyl_chain_check(SetWindow.full(16), 2, [(0.3, 0.7), (0.1, 0.9)])
        assert rep.max_ratio == 0.0
        assert rep.chain_holds and rep.supnorm_holds

    def test_singleton_at_zero_phase(self):
        rep = weyl_chain_check(SetWindow.from_elements(2, [1]), 1, [(0.0,)])
        assert rep.chain_holds and rep.supnorm_holds
        assert rep.max_ratio == 0.0  # E(0) = 0 always

    def test_random_phases_bounded(self):
        rng = np.random.default_rng(17)
        w = random_density_window(48, 0.4, seed=2)
        phases = rng.uniform(0.0, 1.0, size=(200, 2)).tolist()
        rep = weyl_chain_check(w, 2, phases)
        assert rep.chain_holds and rep.supnorm_holds
        assert rep.max_ratio <= 1.0
