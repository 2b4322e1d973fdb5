"""Command line: analyze | factorize | verify | oracle.

Exit codes: 0 success, 1 verification failure or oracle mismatch, 2 parse or
usage error, 3 (C, A) not observable without --force, 4 Riccati failure,
5 non-rational entries for the oracle.
"""
from __future__ import annotations

import argparse
import json
import sys as _sys
import warnings
from pathlib import Path

import numpy as np

from . import checks, innerfact as inf, jsonio, polyoracle as po, zeromod as zm
from .exceptions import (
    DimensionMismatch,
    HypothesisViolated,
    NonRationalEntries,
    NotObservable,
    RiccatiFailure,
    SystemParseError,
)
from .matrixcore import DEFAULT_TOL, Tolerance
from .statespace import StateSpace, is_minimal, is_observable, is_reachable

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_OBS, EXIT_RICCATI, EXIT_RATIONAL = 0, 1, 2, 3, 4, 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(_sys.stderr)
        print(f"{self.prog}: error: {message}", file=_sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _yes(b: bool) -> str:
    return "yes" if b else "no"


def _zeros_text(zs) -> str:
    return ", ".join(jsonio.fmt(z) for z in zs) if len(zs) else "none"


def _emit(doc: dict):
    print(json.dumps(jsonio.round_floats(doc), indent=1, sort_keys=True))


def _flags(sys: StateSpace, tol: Tolerance) -> dict:
    return {
        "observable": is_observable(sys, tol),
        "reachable": is_reachable(sys, tol),
        "minimal": is_minimal(sys, tol),
        "lhp": inf._eigs_in_closed_lhp(sys.A, tol),
    }


def _print_flags(fl: dict):
    print(f"(C,A) observable: {_yes(fl['observable'])}")
    print(f"(A,B) reachable: {_yes(fl['reachable'])}")
    print(f"A spectrum in closed LHP: {_yes(fl['lhp'])}")


def analysis_document(sys: StateSpace, tol: Tolerance, force: bool) -> dict:
    rep = zm.zero_report(sys, tol, force)
    return {
        "system": {"n": sys.n, "p": sys.p, "q": sys.q},
        "flags": _flags(sys, tol),
        "zero_report": zm.report_to_json(rep),
    }


def cmd_analyze(args, tol: Tolerance) -> int:
    sys, _ = jsonio.load_system(args.file)
    doc = analysis_document(sys, tol, args.force)
    if args.json:
        _emit(doc)
        return EXIT_OK
    r = doc["zero_report"]
    print(f"system: {args.file} (n={sys.n}, p={sys.p}, q={sys.q})")
    _print_flags(doc["flags"])
    if r["hypothesis_violated"]:
        print("WARNING: hypothesis violated, results are not covered by the theory")
    zs = [complex(*z) for z in r["finite_zeros"]]
    print(f"finite zeros: {_zeros_text(zs)}")
    print(f"dim Z: {r['dim_Z']}")
    print(f"dim Zinf: {r['dim_Zinf']}")
    print(f"dim W(ker): {r['dim_Wker']}")
    print(f"dim W(Im): {r['dim_WIm']}")
    print(f"kernel indices: {r['kernel_indices']}")
    print(f"McMillan degree: {r['mcmillan']}")
    sd = r["subspace_dims"]
    print("subspace dims: " + ", ".join(f"{k}={v}" for k, v in sd.items()))
    verdict = "OK" if r["identity_holds"] else "FAILED"
    print(f"counting identity: {verdict} ({r['mcmillan']} = "
          f"{r['dim_Z']} + {r['dim_Zinf']} + {r['dim_Wker']} + {r['dim_WIm']})")
    for note in r["notes"]:
        print(f"note: {note}")
    return EXIT_OK


FACTOR_NAMES = ("K", "L", "K_left", "L_left", "F_r", "F_rl")


def cmd_factorize(args, tol: Tolerance) -> int:
    if not args.out:
        print("factorize: --out DIR is required", file=_sys.stderr)
        return EXIT_USAGE
    sys, _ = jsonio.load_system(args.file)
    zm.require_observable(sys, tol, args.force)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisViolated)
        fac = inf.squaring(sys, tol)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in FACTOR_NAMES:
        jsonio.save_system(getattr(fac, name), out / f"{name}.json")
    cert = inf.factorization_to_json(fac)
    (out / "certificates.json").write_text(json.dumps(jsonio.round_floats(cert), indent=1, sort_keys=True) + "\n")
    if args.json:
        _emit({"out": str(out), "files": [f"{n}.json" for n in FACTOR_NAMES] + ["certificates.json"],
               "certificates": cert})
        return EXIT_OK
    h = fac.hypotheses
    print(f"system: {args.file} (n={sys.n}, p={sys.p}, q={sys.q})")
    _print_flags(_flags(sys, tol))
    print(f"degree hypotheses hold: {_yes(h['holds'])}")
    for name in FACTOR_NAMES:
        S = getattr(fac, name)
        print(f"  {name:<7} {S.p}x{S.q}, n={S.n}")
    for side in ("right", "left"):
        c = cert[side]
        print(f"{side}: kernel indices {c['kernel_indices']}, sigma condition {jsonio.fmt(c['sigma_condition'])}, "
              f"closed loop stable: {_yes(c['stable'])}")
    for k, v in cert["defects"].items():
        print(f"defect {k}: {jsonio.fmt(v['defect'])} (scale {jsonio.fmt(v['scale'])})")
    print(f"McMillan degree F: {cert['mcmillan']['F']}, F_rl: {cert['mcmillan']['F_rl']}")
    print(f"wrote {len(FACTOR_NAMES) + 1} files to {out}")
    return EXIT_OK


def _load_factors(path: Path) -> checks.Factors:
    loaded = {}
    for name in FACTOR_NAMES:
        loaded[name] = jsonio.load_system(path / f"{name}.json")[0]
    return checks.Factors(loaded["K"], loaded["L"], loaded["F_r"], loaded["K_left"], loaded["L_left"],
                          loaded["F_rl"])


def cmd_verify(args, tol: Tolerance) -> int:
    sys, _ = jsonio.load_system(args.file)
    zm.require_observable(sys, tol, args.force)
    factors = _load_factors(Path(args.factors)) if args.factors else None
    res = checks.verify_system(sys, factors, samples=args.samples, seed=args.seed, tol=tol)
    ok = all(c.passed for c in res)
    if args.json:
        _emit({"passed": ok, "checks": [{"name": c.name, "passed": c.passed, "value": c.value,
                                          "limit": c.limit} for c in res]})
    else:
        print(f"system: {args.file} (n={sys.n}, p={sys.p}, q={sys.q})")
        _print_flags(_flags(sys, tol))
        for c in res:
            print(c.line())
        print(f"verify: {'all checks passed' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_VERIFY


def _factor_text(fs) -> list:
    out = []
    for F in fs:
        if F.root is not None:
            out.append({"root": str(F.root), "multiplicity": F.multiplicity})
        else:
            out.append({"factor": repr(F.poly), "multiplicity": F.multiplicity})
    return out


def oracle_document(sys: StateSpace, exact: dict, tol: Tolerance) -> tuple[dict, bool]:
    rep = po.oracle(exact, sys)
    zr = zm.zero_report(sys, tol, force=True)
    ks_deg = sorted(zr.kernel_indices)
    exact_zeros = rep.smm.zero_multiset()
    zero_err = po.match_multisets(exact_zeros, zr.finite_zeros)
    rows = [
        ("finite zeros", _factor_text(rep.smm.zeros), [[z.real, z.imag] for z in zr.finite_zeros],
         zero_err <= 1e-6),
        ("dim Z", sum(e.deg for e in rep.smm.epsilons), zr.dim_Z,
         sum(e.deg for e in rep.smm.epsilons) == zr.dim_Z),
        ("kernel indices", rep.kernel_degrees, ks_deg, rep.kernel_degrees == ks_deg),
        ("dim W(ker)", po.degmin(rep.kernel_basis), zr.dim_Wker, po.degmin(rep.kernel_basis) == zr.dim_Wker),
        ("dim W(Im)", po.degmin(rep.left_kernel_basis), zr.dim_WIm,
         po.degmin(rep.left_kernel_basis) == zr.dim_WIm),
        ("McMillan degree", sum(p.deg for p in rep.smm.psis), zr.mcmillan,
         sum(p.deg for p in rep.smm.psis) == zr.mcmillan),
    ]
    all_ok = all(r[3] for r in rows)
    doc = {
        "N": [[repr(a) for a in row] for row in rep.N.e],
        "d": repr(rep.d),
        "epsilons": [repr(e) for e in rep.smm.epsilons],
        "psis": [repr(p) for p in rep.smm.psis],
        "zeros": _factor_text(rep.smm.zeros),
        "poles": _factor_text(rep.smm.poles),
        "normal_rank": rep.smm.normal_rank,
        "minimal_basis": [[repr(rep.kernel_basis[i, j]) for i in range(rep.kernel_basis.rows)]
                          for j in range(rep.kernel_basis.cols)],
        "minimal_basis_degrees": rep.kernel_degrees,
        "left_minimal_basis_degrees": rep.left_kernel_degrees,
        "forney_iv": po.forney_iv(rep.kernel_basis),
        "spot_check_error": rep.spot_error,
        "comparison": [{"quantity": r[0], "exact": r[1], "float": r[2], "match": r[3]} for r in rows],
        "match": all_ok,
    }
    return doc, all_ok


def cmd_oracle(args, tol: Tolerance) -> int:
    sys, exact = jsonio.load_system(args.file)
    if exact is None:
        raise NonRationalEntries("system has entries that are not exact rationals")
    doc, ok = oracle_document(sys, exact, tol)
    if args.json:
        _emit(doc)
        return EXIT_OK if ok else EXIT_VERIFY
    print(f"system: {args.file} (n={sys.n}, p={sys.p}, q={sys.q})")
    print(f"F = N / d with d = {doc['d']}")
    print(f"normal rank: {doc['normal_rank']}")
    print(f"epsilons: {', '.join(doc['epsilons']) or 'none'}")
    print(f"psis: {', '.join(doc['psis']) or 'none'}")
    print(f"zeros: {_factor_list_text(doc['zeros'])}")
    print(f"poles: {_factor_list_text(doc['poles'])}")
    if doc["minimal_basis"]:
        cols = ["[" + "; ".join(c) + "]" for c in doc["minimal_basis"]]
        print(f"minimal basis: {', '.join(cols)} (degrees {doc['minimal_basis_degrees']})")
    else:
        print("minimal basis: none")
    print(f"{'quantity':<18}{'exact':<28}{'float':<28}match")
    for r in doc["comparison"]:
        ex = r["exact"] if not isinstance(r["exact"], list) or r["quantity"] != "finite zeros" \
            else _factor_list_text(r["exact"])
        fl = r["float"] if r["quantity"] != "finite zeros" else _zeros_text([complex(*z) for z in r["float"]])
        print(f"{r['quantity']:<18}{str(ex):<28}{str(fl):<28}{_yes(r['match'])}")
    print(f"oracle: {'full match' if ok else 'MISMATCH'}")
    return EXIT_OK if ok else EXIT_VERIFY


def _factor_list_text(fs) -> str:
    if not fs:
        return "none"
    parts = []
    for f in fs:
        base = f.get("root", f.get("factor"))
        parts.append(f"{base} (x{f['multiplicity']})" if f["multiplicity"] > 1 else str(base))
    return ", ".join(parts)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zeromodules", description="Zero-module structure of state-space systems.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="system JSON file")
    common.add_argument("--tol", type=float, default=None, help="rank tolerance; other thresholds scale with it")
    common.add_argument("--json", action="store_true", help="print a JSON document")
    common.add_argument("--force", action="store_true", help="proceed when (C, A) is not observable")
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("analyze", parents=[common], help="zero report and subspace dimensions")
    f = sub.add_parser("factorize", parents=[common], help="inner factorizations written to --out")
    f.add_argument("--out", default=None)
    v = sub.add_parser("verify", parents=[common], help="run the invariant checks on one system")
    v.add_argument("--samples", type=int, default=10, help="random evaluation points and feedback trials")
    v.add_argument("--factors", default=None, help="directory of stored factors to verify instead of recomputing")
    sub.add_parser("oracle", parents=[common], help="exact Smith-McMillan comparison")
    return p


COMMANDS = {"analyze": cmd_analyze, "factorize": cmd_factorize, "verify": cmd_verify, "oracle": cmd_oracle}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is not None and not (args.tol > 0 and np.isfinite(args.tol)):
        print("--tol must be a positive finite number", file=_sys.stderr)
        return EXIT_USAGE
    tol = DEFAULT_TOL if args.tol is None else Tolerance.from_scalar(args.tol)
    try:
        return COMMANDS[args.command](args, tol)
    except SystemParseError as e:
        print(f"parse error: {e}", file=_sys.stderr)
        return EXIT_USAGE
    except DimensionMismatch as e:
        print(f"dimension error: {e}", file=_sys.stderr)
        return EXIT_USAGE
    except NotObservable as e:
        print(f"hypothesis violation: {e}", file=_sys.stderr)
        return EXIT_OBS
    except RiccatiFailure as e:
        print(f"Riccati failure: {e}", file=_sys.stderr)
        return EXIT_RICCATI
    except NonRationalEntries as e:
        print(f"oracle: {e}", file=_sys.stderr)
        return EXIT_RATIONAL


if __name__ == "__main__":
    raise SystemExit(main())
