#!/usr/bin/env python3
"""Newton lifting of congruence solutions to prime-power moduli.

A solution mod p with a unit Jacobian on k variables lifts uniquely to any
level p^t; the demo lifts a classic seed through increasing levels and shows
the failure modes (singular Jacobian, seed not solving mod p).
"""

from circlecount import hensel_lift, validate_system
from circlecount.errors import HypothesisViolatedError, SingularJacobianError

system = validate_system(2, (1, 1, 1, -1, -1, -1))
seed = (1, 0, 1, 2, 3, 2)  # the reduction of (1, 5, 6, 2, 3, 7) mod 5

print("== lifting the seed", seed, "at p = 5 ==")
for t in (1, 2, 3, 4, 6):
    lift = hensel_lift(system, seed, 5, t)
    values = lift.values
    residues = [v % 5**t for v in system.equations_at(values)]
    print(f"  t={t}: values mod 5^{t} = {values}  residues {residues}  "
          f"(free vars {lift.free_indices}, u = {lift.u})")

print("\n== choosing the free variables ==")
lift = hensel_lift(system, seed, 5, 3, free_indices=(4, 5))
print(f"  free (4,5): {lift.values}")
try:
    hensel_lift(system, seed, 5, 3, free_indices=(1, 3))  # both reduce to 1
except SingularJacobianError as exc:
    print(f"  free (1,3): SingularJacobianError: {exc}")

print("\n== failure modes ==")
try:
    hensel_lift(system, (2, 2, 2, 2, 2, 2), 5, 2)
except SingularJacobianError as exc:
    print(f"  constant seed: SingularJacobianError: {exc}")
try:
    hensel_lift(system, (1, 0, 1, 2, 3, 4), 5, 2)
except HypothesisViolatedError as exc:
    print(f"  non-solution seed: HypothesisViolatedError: {exc}")
