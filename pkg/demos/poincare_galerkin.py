"""Poincare constants from the Galerkin eigenproblem, and the p = 2 model problem.

Run: python3 demos/poincare_galerkin.py
"""

import numpy as np

from tsgag import (SeminormParams, TSFunction, assemble, build_basis, build_timescale,
                   poincare_check, poincare_eigenvalue, solve_model_problem)

alpha = 0.5
scales = {
    "(0,1)": build_timescale([(0, 1)]),
    "(0,1) + atom 2": build_timescale([(0, 1)], [(2, 1)]),
    "(0,1) + (1.5,2) + atom 3": build_timescale([(0, 1), (1.5, 2)], [(3, 1)]),
}
print("eigensolve C_P at alpha = 1/2 for growing meshes")
for name, T in scales.items():
    cps = [poincare_eigenvalue(assemble(T, build_basis(T, n), alpha))[1] for n in (8, 16, 32, 64)]
    print(f"  {name:26s}" + " ".join(f"{c:.8f}" for c in cps))

T = scales["(0,1) + (1.5,2) + atom 3"]
sys_ = assemble(T, build_basis(T, 16), alpha)
C_P = poincare_eigenvalue(sys_)[1]
rng = np.random.default_rng(0)
ratios = [poincare_check(sys_.basis.function(rng.standard_normal(sys_.basis.size)),
                         SeminormParams(alpha, 2), T, C_P=C_P).ratio for _ in range(20)]
print(f"\nrandom Galerkin functions: largest ||u - u_T|| / [u] = {max(ratios):.6f} <= C_P = {C_P:.6f}")

A = build_timescale([], [(0, 1), (1, 1)])
sol = solve_model_problem(TSFunction.from_samples(A, {}, {0: 1.0, 1: -1.0}), A, alpha)
print(f"\ntwo-atom model problem: c = {sol.coeffs}, energy = {sol.energy:.15f} (exact -1/4)")
