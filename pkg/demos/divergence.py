"""A jump has finite fractional energy only while alpha p < 1.

Run: python3 demos/divergence.py
"""

from tsgag import SeminormParams, TSFunction, build_timescale, seminorm

U = build_timescale([(0, 1)])
u = TSFunction.indicator(U, 0, 0.5)
print(f"{'alpha p':>8} {'[u]^2':>22} {'diverged':>9}")
for ap in (0.5, 0.8, 0.9, 0.95, 0.99, 1.0, 1.2, 1.5):
    r = seminorm(u, SeminormParams(ap / 2, 2))
    print(f"{ap:8.2f} {r.value_p:22.12g} {str(r.diverged):>9}")
print("\nThe energy grows like 1/(1 - alpha p) and is flagged infinite from alpha p = 1 on.")
