"""JSON interchange for realizations and reports.

A system file is an object with keys "A", "B", "C", "D" (lists of rows) and an
optional "labels" object.  Each entry is a real number, a two-element [re, im]
array, or a rational string such as "3/4".  An optional "dims" object {"n", "p", "q"}
fixes the shape when a block is empty.  When every entry is an integer, an
integral float or a rational string, an exact Fraction mirror is kept for the
polynomial oracle.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .exceptions import SystemParseError
from .statespace import StateSpace

SIG_DIGITS = 12


def _reject_constant(name):
    raise SystemParseError(f"non-finite constant {name} in input")


def _scalar(x, where: str) -> tuple[complex, Fraction | None]:
    if isinstance(x, bool):
        raise SystemParseError(f"{where}: boolean entry")
    if isinstance(x, int):
        return complex(x), Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise SystemParseError(f"{where}: non-finite entry")
        return complex(x), Fraction(int(x)) if x.is_integer() else None
    if isinstance(x, str):
        try:
            fr = Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise SystemParseError(f"{where}: cannot parse {x!r}") from e
        return complex(float(fr)), fr
    if isinstance(x, list) and len(x) == 2:
        re, fre = _scalar(x[0], where)
        im, fim = _scalar(x[1], where)
        if re.imag or im.imag:
            raise SystemParseError(f"{where}: nested complex entry")
        exact = fre if (fim is not None and fim == 0) else None
        return complex(re.real, im.real), exact
    raise SystemParseError(f"{where}: unsupported entry {x!r}")


def _matrix(rows, name: str):
    if not isinstance(rows, list):
        raise SystemParseError(f"{name} must be a list of rows")
    if rows and not all(isinstance(r, list) for r in rows):
        raise SystemParseError(f"{name} must be a list of rows")
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise SystemParseError(f"{name} has ragged rows")
    width = widths.pop() if widths else 0
    vals = np.zeros((len(rows), width), dtype=complex)
    exact: list[list[Fraction]] | None = []
    for i, r in enumerate(rows):
        erow = []
        for j, x in enumerate(r):
            v, fr = _scalar(x, f"{name}[{i}][{j}]")
            vals[i, j] = v
            if fr is None:
                exact = None
            else:
                erow.append(fr)
        if exact is not None:
            exact.append(erow)
    return vals, exact


def parse_system(obj: dict) -> tuple[StateSpace, dict | None]:
    """StateSpace plus exact rational mirror (None when some entry is not rational)."""
    if not isinstance(obj, dict):
        raise SystemParseError("system must be a JSON object")
    missing = [k for k in "ABCD" if k not in obj]
    if missing:
        raise SystemParseError(f"missing fields: {', '.join(missing)}")
    mats, exact = {}, {}
    for k in "ABCD":
        mats[k], exact[k] = _matrix(obj[k], k)
    D = mats["D"]
    p, q = D.shape
    dims = obj.get("dims")
    if dims is not None:
        try:
            n_d, p, q = int(dims["n"]), int(dims["p"]), int(dims["q"])
        except (KeyError, TypeError, ValueError) as e:
            raise SystemParseError("dims must hold integer n, p, q") from e
    elif D.size == 0:
        p = max(p, len(obj["C"]))
        q = max(q, len(obj["B"][0]) if obj["B"] else 0)
    if D.size == 0:
        D = np.zeros((p, q), complex)
    A = mats["A"]
    n = A.shape[0]
    if dims is not None and n_d != n:
        raise SystemParseError(f"dims.n = {n_d} but A is {n}x{n}")
    B = mats["B"] if mats["B"].size else np.zeros((n, q), complex)
    C = mats["C"] if mats["C"].size else np.zeros((p, n), complex)
    labels = obj.get("labels", {})
    if not isinstance(labels, dict):
        raise SystemParseError("labels must be an object")
    try:
        sys = StateSpace(A if A.size else np.zeros((0, 0)), B, C, D, labels=dict(labels))
    except ValueError as e:
        raise SystemParseError(str(e)) from e
    if any(v is None for v in exact.values()):
        return sys, None
    shapes = {"A": (n, n), "B": (n, q), "C": (p, n), "D": (p, q)}
    mirror = {}
    for k, (r, c) in shapes.items():
        E = exact[k]
        if not E or not E[0]:
            E = [[Fraction(0)] * c for _ in range(r)]
        mirror[k] = E
    return sys, mirror


def loads_system(text: str) -> tuple[StateSpace, dict | None]:
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise SystemParseError(f"invalid JSON: {e}") from e
    return parse_system(obj)


def load_system(path) -> tuple[StateSpace, dict | None]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise SystemParseError(f"cannot read {path}: {e}") from e
    return loads_system(text)


def _entry(z: complex):
    # repr of a binary64 float round-trips exactly through json
    if z.imag == 0:
        return float(z.real)
    return [float(z.real), float(z.imag)]


def system_to_obj(sys: StateSpace) -> dict:
    out = {k: [[_entry(z) for z in row] for row in getattr(sys, k)] for k in "ABCD"}
    if 0 in (sys.n, sys.p, sys.q):
        # empty blocks cannot carry their shape in nested lists
        out["dims"] = {"n": sys.n, "p": sys.p, "q": sys.q}
    if sys.labels:
        out["labels"] = dict(sys.labels)
    return out


def dumps_system(sys: StateSpace) -> str:
    return json.dumps(system_to_obj(sys), indent=1)


def save_system(sys: StateSpace, path) -> None:
    Path(path).write_text(dumps_system(sys) + "\n")


def round_floats(obj, digits: int = SIG_DIGITS):
    """Recursively format floats with ``digits`` significant digits for report output."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.{digits}g}")
    if isinstance(obj, (complex, np.complexfloating)):
        return [round_floats(obj.real, digits), round_floats(obj.imag, digits)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj) and np.all(obj.imag == 0):
            obj = obj.real
        return round_floats(obj.tolist(), digits)
    if isinstance(obj, dict):
        return {str(k): round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    return str(obj)


def fmt(x, digits: int = SIG_DIGITS) -> str:
    """Human-readable number with ``digits`` significant digits; reals print as floats."""
    z = complex(x)
    if abs(z.imag) <= 1e-13 * max(1.0, abs(z.real)):
        return repr(float(f"{z.real:.{digits}g}"))
    re = float(f"{z.real:.{digits}g}")
    im = float(f"{z.imag:.{digits}g}")
    return f"{re}{'+' if im >= 0 else '-'}{abs(im)}j"
