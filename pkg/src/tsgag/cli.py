"""Command-line front end: ``tsgag <command> --scenario <path> [options]``.

Exit status: 0 success, 2 when a result is mathematically notable (a
divergent seminorm or an inequality that does not hold), 1 on any error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import TSGagError
from .gagliardo import SeminormParams, seminorm
from .integrate import average, delta_integral, lp_norm
from .scenario import COMMANDS, Scenario, parse_scenario
from .svg import line_plot

EXIT_OK, EXIT_ERROR, EXIT_FLAG = 0, 1, 2


@dataclass
class Table:
    """Rows of one command's output with an optional plot and extra files."""

    header: list[str]
    rows: list[list] = field(default_factory=list)
    flagged: bool = False
    svg: str | None = None
    files: dict[str, object] = field(default_factory=dict)


def fmt(v) -> str:
    """CSV cell: 17 significant digits for reals, lowercase booleans."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return "%.17g" % v
    if v is None:
        return ""
    return str(v)


def fmt_extra(d: dict) -> str:
    return ";".join(f"{k}={fmt(v)}" for k, v in d.items())


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.header)
    for row in table.rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


# --------------------------------------------------------------------------
# command implementations


def _prm(s: dict) -> SeminormParams:
    return SeminormParams(float(s.get("alpha", 0.5)), float(s.get("p", 2.0)))


def _mesh(s: dict, default=(8,)) -> list[int]:
    m = s.get("mesh", list(default))
    return list(m) if isinstance(m, list) else [int(m)]


REPORT_HEADER = ["name", "scenario_id", "function", "alpha", "p", "extra", "lhs", "rhs",
                 "ratio", "constant_used", "holds", "err_est", "notes"]


def _report_row(rep, fname: str, extra: dict | None = None) -> list:
    params = {k: v for k, v in rep.params.items() if k not in ("alpha", "p")}
    if extra:
        params.update(extra)
    err = rep.extra.get("err_est")
    if err is None and "pairs" in rep.extra:
        err = float(sum(pr["err"] for pr in rep.extra["pairs"]))
    return [rep.name, rep.scenario_id, fname, rep.params.get("alpha"), rep.params.get("p"),
            fmt_extra(params), rep.lhs, rep.rhs, rep.ratio, rep.constant_used, rep.holds,
            err, "|".join(rep.notes)]


def cmd_measure(sc: Scenario, opts) -> Table:
    s = sc.settings("measure")
    name, u = sc.function_for("measure")
    p = float(s.get("p", 2.0))
    val, err = delta_integral(u, sc.T, sc.quad)
    t = Table(["scenario_id", "function", "n_components", "total_measure", "delta0", "diam",
               "integral", "err_est", "p", "lp_norm", "mean"])
    t.rows.append([sc.id, name, len(sc.T.components), sc.T.total_measure, sc.T.delta0,
                   sc.T.diam, val, err, p, lp_norm(u, p, sc.T, sc.quad),
                   average(u, sc.T, "global", sc.quad)])
    return t


SEMINORM_HEADER = ["scenario_id", "function", "alpha", "p", "value", "cc_intra", "cc_inter",
                   "dd", "mixed", "err_est", "diverged"]


def cmd_seminorm(sc: Scenario, opts) -> Table:
    s = sc.settings("seminorm")
    name, u = sc.function_for("seminorm")
    prm = _prm(s)
    t = Table(list(SEMINORM_HEADER))
    alphas = s.get("alphas")
    for a in (alphas or [prm.alpha]):
        prm_a = SeminormParams(float(a), prm.p)
        r = seminorm(u, prm_a, sc.T, sc.quad)
        t.rows.append([sc.id, name, prm_a.alpha, prm_a.p, r.value, r.cc_intra, r.cc_inter,
                       r.dd, r.mixed, r.err_est, r.diverged])
        t.flagged |= r.diverged
    if alphas and opts.svg:
        xs = [row[2] for row in t.rows]
        ys = [row[4] for row in t.rows]
        t.svg = line_plot([("seminorm", xs, ys)], f"{sc.id}: seminorm vs alpha", "alpha",
                          "[u]")
    return t


def cmd_norm(sc: Scenario, opts) -> Table:
    s = sc.settings("norm")
    name, u = sc.function_for("norm")
    prm = _prm(s)
    r = seminorm(u, prm, sc.T, sc.quad)
    lp = lp_norm(u, prm.p, sc.T, sc.quad)
    t = Table(["scenario_id", "function", "alpha", "p", "lp_norm", "seminorm", "norm",
               "err_est", "diverged"])
    norm = math.inf if r.diverged else lp + r.value
    t.rows.append([sc.id, name, prm.alpha, prm.p, lp, r.value, norm, r.err_est, r.diverged])
    t.flagged = r.diverged
    return t


def cmd_poincare(sc: Scenario, opts) -> Table:
    from .inequalities import poincare_check, poincare_constant

    s = sc.settings("poincare")
    name, u = sc.function_for("poincare")
    prm = _prm(s)
    t = Table(list(REPORT_HEADER))
    extra = {}
    if "C_P" in s:
        cp = float(s["C_P"])
        extra["method"] = "given"
    elif prm.p == 2:
        meshes = _mesh(s)
        ests = [poincare_constant(prm, sc.T, "eigensolve", sc.quad, mesh=n) for n in meshes]
        for n, c in zip(meshes, ests):
            extra[f"C_P[{n}]"] = c
        cp = ests[-1]
        extra["method"] = "eigensolve"
        if opts.svg and len(meshes) > 1:
            t.svg = line_plot([("C_P", meshes, ests)], f"{sc.id}: C_P vs mesh",
                              "cells per interval", "C_P")
    else:
        cp = poincare_constant(prm, sc.T, "sampling", sc.quad,
                               n_samples=int(s.get("n_samples", 20)), seed=opts.seed,
                               scenario_id=sc.id)
        extra["method"] = "sampling"
    rep = poincare_check(u, prm, sc.T, cp, sc.quad, sc.id)
    t.rows.append(_report_row(rep, name, extra))
    t.flagged = not rep.holds
    return t


def cmd_discrete_poincare(sc: Scenario, opts) -> Table:
    from .inequalities import discrete_poincare_bounds

    s = sc.settings("discrete-poincare")
    weights = s.get("weights") or [c.measure for c in sc.T.components]
    p = float(s.get("p", 2.0))
    lo, hi, _ = discrete_poincare_bounds(weights, p, seed=opts.seed)
    t = Table(["scenario_id", "p", "weights", "lower", "upper", "C1"])
    t.rows.append([sc.id, p, " ".join(fmt(float(w)) for w in weights), lo, hi, hi])
    return t


def cmd_cross_bounds(sc: Scenario, opts) -> Table:
    from .inequalities import cross_bounds_check

    s = sc.settings("cross-bounds")
    name, u = sc.function_for("cross-bounds")
    rep = cross_bounds_check(u, _prm(s), sc.T, sc.quad, sc.id)
    t = Table(list(REPORT_HEADER))
    t.rows.append(_report_row(rep, name, {
        "worst_lower_margin": rep.extra["worst_lower_margin"],
        "worst_upper_margin": rep.extra["worst_upper_margin"]}))
    t.flagged = not rep.holds
    return t


def cmd_coercivity(sc: Scenario, opts) -> Table:
    from .inequalities import coercivity_check, coercivity_constant, poincare_constant

    s = sc.settings("coercivity")
    name, u = sc.function_for("coercivity")
    prm = _prm(s)
    if "C" in s:
        C = float(s["C"])
    else:
        if "C_P" in s:
            cp = float(s["C_P"])
        elif prm.p == 2:
            cp = poincare_constant(prm, sc.T, "eigensolve", sc.quad, mesh=_mesh(s)[-1])
        else:
            cp = poincare_constant(prm, sc.T, "sampling", sc.quad, seed=opts.seed,
                                   scenario_id=sc.id, n_samples=int(s.get("n_samples", 20)))
        C = coercivity_constant(cp, sc.T, prm.p)
    rep = coercivity_check(u, prm, sc.T, C, sc.quad, sc.id)
    t = Table(list(REPORT_HEADER))
    t.rows.append(_report_row(rep, name))
    t.flagged = not rep.holds
    return t


def cmd_hardy(sc: Scenario, opts) -> Table:
    from .inequalities import hardy_check

    s = sc.settings("hardy")
    name, u = sc.function_for("hardy")
    prm = _prm(s)
    x0 = float(s.get("x0", sc.T.inf))
    betas = s.get("betas") or [float(s.get("beta", prm.alpha / 2))]
    C = s.get("C")
    t = Table(list(REPORT_HEADER))
    for b in betas:
        rep = hardy_check(u, prm, float(b), x0, sc.T, sc.quad, C, sc.id)
        t.rows.append(_report_row(rep, name))
        t.flagged |= not rep.holds
    if opts.svg and len(betas) > 1:
        t.svg = line_plot([("ratio", betas, [r[8] for r in t.rows])],
                          f"{sc.id}: Hardy ratio vs beta", "beta", "lhs / [u]^p")
    return t


def cmd_ckn(sc: Scenario, opts) -> Table:
    from .inequalities import ckn_check

    s = sc.settings("ckn")
    name, u = sc.function_for("ckn")
    prm = _prm(s)
    rep = ckn_check(u, prm, float(s.get("q", prm.p)), float(s.get("theta", 0.5)),
                    float(s.get("beta", prm.alpha / 2)), float(s.get("x0", sc.T.inf)), sc.T,
                    sc.quad, s.get("C_H"), s.get("C_E"), sc.id)
    t = Table(list(REPORT_HEADER))
    t.rows.append(_report_row(rep, name, {"rhs2": rep.extra["rhs2"], "C": rep.extra["C"]}))
    t.flagged = not rep.holds
    return t


def cmd_solve(sc: Scenario, opts) -> Table:
    from .galerkin import solve_model_problem

    s = sc.settings("solve")
    if "rhs" in s:
        name, f = s["rhs"], sc.functions[s["rhs"]]
    else:
        name, f = sc.function_for("solve")
    prm = _prm(s)
    if prm.p != 2:
        raise TSGagError("solve needs p = 2")
    t = Table(["scenario_id", "function", "alpha", "mesh", "dofs", "energy", "residual",
               "projected", "mean_u"])
    meshes = _mesh(s)
    energies = []
    for n in meshes:
        sol = solve_model_problem(f, sc.T, prm.alpha, n, sc.quad)
        mean_u = average(sol.u_h, sc.T, "global", sc.quad)
        t.rows.append([sc.id, name, prm.alpha, n, sol.system.basis.size, sol.energy,
                       sol.residual, sol.projected, mean_u])
        energies.append(sol.energy)
    if opts.matrices:
        t.files["K.mtx"] = sol.system.K
        t.files["M.mtx"] = sol.system.M
    if opts.svg:
        series = []
        for c in sc.T.interval_components:
            x = sol.system.basis.nodes[c.index]
            series.append((f"u_h on [{c.left:g}, {c.right:g}]", x,
                           sol.coeffs[sol.system.basis.slices[c.index]]))
        for c in sc.T.atom_components:
            series.append((f"u_h at {c.point:g}", [c.point],
                           sol.coeffs[sol.system.basis.slices[c.index]]))
        t.svg = line_plot(series, f"{sc.id}: Galerkin minimizer", "t", "u_h")
    return t


def cmd_compare_rl(sc: Scenario, opts) -> Table:
    from .rlcompare import one_sided_gap_demo

    s = sc.settings("compare-rl")
    ivs = sc.T.interval_components
    a = float(s.get("a", ivs[0].left if ivs else 0.0))
    b = float(s.get("b", ivs[0].right if ivs else 1.0))
    rep = one_sided_gap_demo(a, b, float(s.get("alpha", 0.5)), float(s.get("p", 2.0)),
                             sc.quad)
    t = Table(["scenario_id", "a", "b", "alpha", "p", "gagliardo_of_constant",
               "rl_norm_of_constant", "rl_in_lp", "conclusion"])
    t.rows.append([sc.id, rep.a, rep.b, rep.alpha, rep.p, rep.gagliardo_of_constant,
                   rep.rl_norm_of_constant, rep.rl_in_lp, rep.conclusion])
    return t


HANDLERS = {
    "measure": cmd_measure,
    "seminorm": cmd_seminorm,
    "norm": cmd_norm,
    "poincare": cmd_poincare,
    "discrete-poincare": cmd_discrete_poincare,
    "cross-bounds": cmd_cross_bounds,
    "coercivity": cmd_coercivity,
    "hardy": cmd_hardy,
    "ckn": cmd_ckn,
    "solve": cmd_solve,
    "compare-rl": cmd_compare_rl,
}


# --------------------------------------------------------------------------
# driver


def _scenario_opts(sc: Scenario, opts) -> argparse.Namespace:
    """Command-line flags, with the scenario's ``outputs`` list switching on extras."""
    out = argparse.Namespace(**vars(opts))
    out.svg = opts.svg or "svg" in sc.outputs
    out.matrices = opts.matrices or "matrices" in sc.outputs
    return out


def _apply_overrides(sc: Scenario, opts) -> Scenario:
    if opts.rel_tol is not None:
        sc.quad = sc.quad.replace(rel_tol=opts.rel_tol)
    if opts.mesh is not None:
        sc.params["mesh"] = opts.mesh
        for entry in sc.commands.values():
            entry.pop("mesh", None)
    return sc


def _write_table(table: Table, out_dir: Path, stem: str, with_csv: bool = True) -> list[Path]:
    from scipy.io import mmwrite

    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if with_csv:
        written.append(out_dir / f"{stem}.csv")
        written[0].write_text(to_csv(table), encoding="utf-8")
    if table.svg is not None:
        written.append(out_dir / f"{stem}.svg")
        written[-1].write_text(table.svg, encoding="utf-8")
    for fname, mat in table.files.items():
        path = out_dir / f"{stem}_{fname}"
        mmwrite(str(path), np.asarray(mat), precision=17)
        written.append(path)
    return written


def run(command: str, sc: Scenario, opts) -> Table:
    """Run one command on a parsed scenario."""
    return HANDLERS[command](sc, opts)


def run_report(directory: Path, opts) -> int:
    files = sorted(directory.glob("*.json"))
    if not files:
        raise TSGagError(f"no scenario files in {directory}")
    out_dir = Path(opts.out_dir or "tsgag-report")
    merged: dict[str, Table] = {}
    index = Table(["scenario_id", "command", "csv", "status", "message"])
    status = EXIT_OK
    for path in files:
        sc = _apply_overrides(parse_scenario(path), opts)
        sopts = _scenario_opts(sc, opts)
        for cmd in sc.commands:
            try:
                table = run(cmd, sc, sopts)
            except TSGagError as exc:
                index.rows.append([sc.id, cmd, "", "error", str(exc)])
                status = EXIT_ERROR
                continue
            key = cmd
            if key in merged and merged[key].header != table.header:
                key = f"{cmd}-{sc.id}"
            if key not in merged:
                merged[key] = Table(table.header)
            merged[key].rows.extend(table.rows)
            merged[key].flagged |= table.flagged
            flag = "flagged" if table.flagged else "ok"
            index.rows.append([sc.id, cmd, f"{key}.csv", flag, ""])
            if table.flagged and status == EXIT_OK:
                status = EXIT_FLAG
            if table.svg is not None or table.files:
                _write_table(table, out_dir / "figures", f"{sc.id}_{cmd}", with_csv=False)
    for key in sorted(merged):
        _write_table(merged[key], out_dir, key)
    (out_dir / "index.csv").write_text(to_csv(index), encoding="utf-8")
    return status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _mesh_arg(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError("mesh must be comma-separated integers") from exc
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("mesh sizes must be positive integers")
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tsgag", description="Fractional Gagliardo energies on hybrid time scales.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--scenario", required=True,
                    help="scenario JSON file (a directory for 'report')")
    ap.add_argument("--out-dir", default=None, help="directory for CSV/SVG outputs")
    ap.add_argument("--svg", action="store_true", help="also write SVG plots")
    ap.add_argument("--rel-tol", type=float, default=None, help="override quadrature rel_tol")
    ap.add_argument("--mesh", type=_mesh_arg, default=None, help="cells per interval, e.g. 16,32")
    ap.add_argument("--seed", type=int, default=0, help="seed for sampling estimators")
    ap.add_argument("--matrices", action="store_true",
                    help="write K and M in Matrix Market format (solve)")
    return ap


def main(argv=None) -> int:
    opts = build_parser().parse_args(argv)
    try:
        if opts.rel_tol is not None and not opts.rel_tol > 0:
            raise TSGagError("--rel-tol must be positive")
        if opts.command == "report":
            directory = Path(opts.scenario)
            if not directory.is_dir():
                raise TSGagError(f"report needs a scenario directory, got {directory}")
            return run_report(directory, opts)
        sc = _apply_overrides(parse_scenario(opts.scenario), opts)
        table = run(opts.command, sc, _scenario_opts(sc, opts))
        sys.stdout.write(to_csv(table))
        if opts.out_dir:
            _write_table(table, Path(opts.out_dir), f"{sc.id}_{opts.command}")
        return EXIT_FLAG if table.flagged else EXIT_OK
    except (TSGagError, OSError, ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"tsgag: error: {type(exc).__name__}: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
