"""Scenario documents: JSON files describing a time scale, functions and commands.

Layout::

    {
      "id": "linear_unit",
      "timescale": {"intervals": [[0, 1]], "atoms": [[2, 0.5]]},
      "functions": {"u": [{"kind": "linear", "slope": 1, "intercept": 0}]},
      "params": {"alpha": 0.5, "p": 2},
      "quad": {"rel_tol": 1e-8},
      "commands": {"seminorm": {"function": "u"}, "hardy": {"beta": 0.25, "x0": 0}},
      "outputs": ["csv", "svg"]
    }

A function is a list of per-component entries ``{component_index?, kind,
...}``; an entry without ``component_index`` covers the remaining
components. Command entries override ``params`` key by key.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DomainError, ParseError, TSGagError
from .functions import TSFunction
from .quadrature import QuadConfig
from .timescale import TimeScale, build_timescale

COMMANDS = (
    "measure", "seminorm", "norm", "poincare", "discrete-poincare", "cross-bounds",
    "coercivity", "hardy", "ckn", "solve", "compare-rl", "report",
)
FUNCTION_COMMANDS = ("measure", "seminorm", "norm", "poincare", "cross-bounds",
                     "coercivity", "hardy", "ckn", "solve")
TOP_KEYS = ("id", "timescale", "functions", "params", "quad", "commands", "outputs",
            "description")


@dataclass
class Scenario:
    id: str
    T: TimeScale
    functions: dict[str, TSFunction]
    params: dict
    quad: QuadConfig
    commands: dict[str, dict]
    outputs: list[str]
    source: str = ""
    raw: dict = field(default_factory=dict, repr=False)

    def settings(self, command: str) -> dict:
        """Global params overridden by the command's own entry."""
        out = dict(self.params)
        out.update(self.commands.get(command, {}))
        return out

    def function_for(self, command: str) -> tuple[str, TSFunction]:
        name = self.settings(command).get("function")
        if name is None:
            if len(self.functions) == 1:
                name = next(iter(self.functions))
            else:
                raise ParseError(f"command {command!r} needs a 'function' name", field="function")
        if name not in self.functions:
            raise ParseError(f"unknown function {name!r}", field="function")
        return name, self.functions[name]


def _num(d: dict, key: str):
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{key!r} must be a number", field=key)
    if not math.isfinite(v):
        raise DomainError(key, f"{key} must be finite")
    return float(v)


def validate_params(d: dict) -> None:
    """Domain checks on the keys that are present."""
    if "alpha" in d and not 0.0 < _num(d, "alpha") < 1.0:
        raise DomainError("alpha", f"alpha must lie in (0, 1), got {d['alpha']}")
    if "p" in d and not _num(d, "p") >= 1.0:
        raise DomainError("p", f"p must be >= 1, got {d['p']}")
    if "q" in d and not _num(d, "q") >= 1.0:
        raise DomainError("q", f"q must be >= 1, got {d['q']}")
    if "theta" in d and not 0.0 <= _num(d, "theta") <= 1.0:
        raise DomainError("theta", f"theta must lie in [0, 1], got {d['theta']}")
    if "beta" in d and not _num(d, "beta") >= 0.0:
        raise DomainError("beta", f"beta must be >= 0, got {d['beta']}")
    if "C_P" in d and not _num(d, "C_P") > 0.0:
        raise DomainError("C_P", "C_P must be positive")
    if "x0" in d:
        _num(d, "x0")
    for key in ("betas", "weights"):
        if key in d:
            if not isinstance(d[key], list) or not d[key]:
                raise ParseError(f"{key!r} must be a nonempty list", field=key)
            for i in range(len(d[key])):
                _num(d[key], i)
    if "weights" in d and not all(w > 0 for w in d["weights"]):
        raise DomainError("weights", "weights must be positive")
    if "mesh" in d:
        mesh = d["mesh"] if isinstance(d["mesh"], list) else [d["mesh"]]
        if not mesh or not all(isinstance(n, int) and not isinstance(n, bool) for n in mesh):
            raise ParseError("'mesh' must be an integer or a list of integers", field="mesh")
        if any(n < 1 for n in mesh):
            raise DomainError("mesh", "mesh sizes must be >= 1")


def parse_scenario_dict(doc, source: str = "") -> Scenario:
    if not isinstance(doc, dict):
        raise ParseError("scenario must be a JSON object")
    for key in doc:
        if key not in TOP_KEYS:
            raise ParseError(f"unknown top-level key {key!r}", field=key)
    for key in ("id", "timescale", "functions"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}", field=key)
    sid = doc["id"]
    if not isinstance(sid, str) or not sid:
        raise ParseError("'id' must be a nonempty string", field="id")
    ts = doc["timescale"]
    if not isinstance(ts, dict):
        raise ParseError("'timescale' must be an object", field="timescale")
    try:
        T = build_timescale(ts.get("intervals", []), ts.get("atoms", []))
    except TSGagError as exc:
        raise ParseError(f"invalid time scale: {exc}", field="timescale") from exc
    funcs_doc = doc["functions"]
    if not isinstance(funcs_doc, dict) or not funcs_doc:
        raise ParseError("'functions' must be a nonempty object", field="functions")
    functions = {}
    for name, entries in funcs_doc.items():
        try:
            functions[name] = TSFunction.from_spec(T, entries)
        except ParseError as exc:
            raise ParseError(f"function {name!r}: {exc}", field=exc.field or name) from exc
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise ParseError("'params' must be an object", field="params")
    validate_params(params)
    quad_doc = doc.get("quad", {})
    if not isinstance(quad_doc, dict):
        raise ParseError("'quad' must be an object", field="quad")
    unknown = set(quad_doc) - set(QuadConfig.__dataclass_fields__)
    if unknown:
        raise ParseError(f"unknown quad setting {sorted(unknown)[0]!r}", field="quad")
    quad = QuadConfig(**quad_doc)
    commands = doc.get("commands", {})
    if not isinstance(commands, dict):
        raise ParseError("'commands' must be an object", field="commands")
    for cmd, entry in commands.items():
        if cmd not in COMMANDS or cmd == "report":
            raise ParseError(f"unknown command {cmd!r}", field="commands")
        if not isinstance(entry, dict):
            raise ParseError(f"command {cmd!r} entry must be an object", field=cmd)
        validate_params(entry)
        name = entry.get("function")
        if name is not None and name not in functions:
            raise ParseError(f"command {cmd!r} references unknown function {name!r}",
                             field="function")
        if cmd == "solve" and "rhs" in entry and entry["rhs"] not in functions:
            raise ParseError(f"solve references unknown function {entry['rhs']!r}", field="rhs")
    outputs = doc.get("outputs", ["csv"])
    if not isinstance(outputs, list) or not all(o in ("csv", "svg", "matrices") for o in outputs):
        raise ParseError("'outputs' must list items from csv, svg, matrices", field="outputs")
    return Scenario(sid, T, functions, dict(params), quad, {k: dict(v) for k, v in commands.items()},
                    list(outputs), source, doc)


def parse_scenario(path) -> Scenario:
    """Read and validate a scenario file.

    Raises :class:`ParseError` (with line number for malformed JSON) or
    :class:`DomainError` naming the offending parameter.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", line=exc.lineno) from exc
    return parse_scenario_dict(doc, str(path))
