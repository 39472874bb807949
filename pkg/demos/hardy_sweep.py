"""Hardy ratios as the weight exponent beta approaches alpha.

Run: python3 demos/hardy_sweep.py
"""

from tsgag import SeminormParams, TSFunction, build_timescale, ckn_check, hardy_check

U = build_timescale([(0, 1)], [(1.5, 0.5)])
u = TSFunction.from_samples(U, {0: ([0, 0.5, 1], [0, 1, 0.2])}, {1: -0.5})
prm = SeminormParams(0.45, 2)
print(f"{'beta':>6} {'lhs':>14} {'[u]^p':>14} {'ratio':>10}")
for beta in (0.0, 0.1, 0.2, 0.3, 0.4, 0.44):
    rep = hardy_check(u, prm, beta, 0.0)
    print(f"{beta:6.2f} {rep.lhs:14.8g} {rep.rhs:14.8g} {rep.ratio:10.6f}")

print("\nHoelder interpolation between the Hardy norm and the L^3 norm, beta = 0.3")
for theta in (0.0, 0.25, 0.5, 0.75, 1.0):
    rep = ckn_check(u, prm, 3.0, theta, 0.3, 0.0)
    print(f"  theta = {theta:4.2f}: lhs {rep.lhs:.10f} <= rhs {rep.rhs:.10f}")
