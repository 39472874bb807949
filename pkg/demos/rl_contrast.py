"""Constants: zero Gagliardo energy, nonzero Riemann-Liouville derivative.

Run: python3 demos/rl_contrast.py
"""

from tsgag import one_sided_gap_demo

for alpha, p in ((0.25, 2), (0.4, 2), (0.5, 2), (0.3, 4)):
    rep = one_sided_gap_demo(0.0, 1.0, alpha, p)
    print(f"alpha = {alpha}, p = {p}: {rep.conclusion}")
