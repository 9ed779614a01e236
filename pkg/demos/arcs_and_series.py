#!/usr/bin/env python3
"""Exponential sums, arc dissection, and the singular series.

Shows the generating-sum evaluators, why the faithful arc exponent admits
only the trivial box at desk scale (and how the override opens it up), the
two independent routes to the series terms S(q), and the Euler factors.
"""

import math

from circlecount import (
    classify_arc,
    complete_sum,
    delta_exponent,
    eval_g,
    euler_factor,
    major_arc_approx_check,
    oscillatory_w,
    series_term_direct,
    series_term_moebius,
    truncated_singular_series,
    validate_system,
)

print("== generating sum g at rationals and nearby points ==")
for alpha in [(0.0, 0.0), (0.5, 0.0), (1 / 3, 1 / 3), (0.2501, 0.0001)]:
    val = eval_g(1000, alpha)
    print(f"  |g{alpha}| = {abs(val):10.2f}   (N = 1000)")

print("\n== arc classification ==")
n = 10**6
print(f"  paper exponent delta(2) = {delta_exponent(2):.6f}; "
      f"N^delta = {n ** delta_exponent(2):.3f} at N = 10^6")
print("  -> only q = 1 boxes exist at desk scale; generic points are minor:")
for alpha in [(0.0, 0.0), (0.41421356, 0.14159265)]:
    print(f"     alpha={alpha}: {classify_arc(alpha, n, 2)}")
print("  with an override exponent 0.4 the rational centers reappear:")
print(f"     alpha=(1/2, 1/3): {classify_arc((0.5, 1/3), 1000, 2, 0.4)}")

print("\n== major-arc approximation g ~ S(q,a) w(beta) / q ==")
rep = major_arc_approx_check(500, 3, (0, 1), (1e-5, 1e-8))
print(f"  N=500, q=3: |g - S w / q| = {rep.numerator:.3f}, "
      f"normalized ratio = {rep.ratio:.3f}")
print(f"  w(0) = {oscillatory_w(500, (0.0, 0.0)).real:.0f} exactly; "
      f"|S(3,(0,1))| = {abs(complete_sum(3, (0, 1))):.6f} = sqrt(3)")

system = validate_system(2, (1, 1, 1, 1, -1, -1, -1, -1))
print("\n== series terms, two independent routes ==")
print("   q   direct (complex)          Moebius (exact)")
for q in (2, 3, 4, 5, 6, 9):
    d = series_term_direct(system, q)
    m = series_term_moebius(system, q)
    print(f"  {q:2d}   {d.real:+.9f}{d.imag:+.1e}i   {m} = {float(m):+.9f}")

print("\n== truncated singular series ==")
for cutoff in (5, 10, 25, 50):
    trunc = truncated_singular_series(system, cutoff)
    print(f"  sum_(q<={cutoff:2d}) S(q) = {float(trunc.partial_sum):.6f}")

print("\n== Euler factors: partial sums equal normalized prime-power counts ==")
for p in (2, 3, 5):
    rep = euler_factor(system, p, 2)
    print(f"  p={p}: partial sums {[str(v) for v in rep.normalized_counts]} "
          f"(gap {float(rep.stabilization_gap):.2e})")
product = math.prod(
    float(euler_factor(system, p, 2).partial_sum) for p in (2, 3, 5, 7, 11, 13)
)
print(f"  product over p <= 13: {product:.6f} "
      f"(compare the q <= 50 truncation above)")
