"""Gagliardo seminorms with known closed forms, next to the brute-force oracle.

Run: python3 demos/seminorm_golden.py
"""

import math

from tsgag import (SeminormParams, TSFunction, build_timescale, oracle_extrapolated, seminorm)

half = SeminormParams(0.5, 2)

U = build_timescale([(0, 1)])
u = TSFunction.linear(U, 1.0)
r = seminorm(u, half)
print("u(t) = t on (0, 1), alpha = 1/2, p = 2")
print(f"  seminorm           {r.value:.15f}  (exact 1)")
print(f"  oracle, n -> inf   {math.sqrt(oracle_extrapolated(u, half, exponents=(1.0, 2.0))):.10f}")

A = build_timescale([], [(0, 1), (2, 1)])
r = seminorm(TSFunction.from_samples(A, {}, {0: 0.0, 1: 1.0}), half)
print("\ntwo unit atoms at 0 and 2 with values 0 and 1")
print(f"  seminorm           {r.value:.15f}  (exact sqrt(1/2) = {math.sqrt(0.5):.15f})")
print(f"  atom block dd      {r.dd:.15f}")

H = build_timescale([(0, 1)], [(2, 1)])
r = seminorm(TSFunction.from_samples(H, {0: ([0, 1], [0, 0])}, {1: 1.0}), half)
print("\nu = 0 on (0, 1) and u = 1 at a unit atom at 2")
print(f"  seminorm           {r.value:.15f}  (exact 1)")
print(f"  blocks: cc_intra {r.cc_intra:.3g}, mixed {r.mixed:.15f}")

q = SeminormParams(0.25, 2)
r = seminorm(TSFunction.indicator(U, 0, 0.5), q)
print("\nindicator of [0, 1/2] on (0, 1), alpha = 1/4, p = 2")
print(f"  seminorm squared   {r.value_p:.15f}  (exact 8(sqrt 2 - 1) = {8 * (math.sqrt(2) - 1):.15f})")
print(f"  error estimate     {r.err_est:.2e}")
