"""Command-line interface: ``leraykit <command> ...``.

Exit codes: 0 success, 1 unreadable or malformed input, 2 failed
precondition (non-fine covering, invalid class, invalid system), 3 failed
property. Reports are JSON with rationals written as lowest-terms strings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional, Sequence

from .coverings import MorphismError, NotFineError
from .exactla import DimensionError, RatMatrix, format_rational, parse_rational
from .io import InputError, dumps, load_complex, load_covering
from .leray import (
    LerayError,
    PreconditionError,
    factorization_check,
    homology_factorization_check,
    homology_leray_map,
    is_acyclic,
    leray_map,
    vanishing_check,
)
from .lp import LPError
from .norms import InvalidClassError, duality_check, l1_seminorm, linf_seminorm, max_pairing
from .systems import SystemError, parse_system
from .verify import SUITES, run_suites

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_PROPERTY = 0, 1, 2, 3


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _PropertyFailure(Exception):
    """A computed property failed; the partial report is still written."""

    def __init__(self, report: dict, message: str):
        super().__init__(message)
        self.report = report


def _matrix(m: RatMatrix) -> dict:
    return {"shape": [m.nrows, m.ncols], "entries": m.to_json()}


def _degrees(mats: dict, only: Optional[int]) -> dict:
    return {str(n): _matrix(m) for n, m in sorted(mats.items()) if only is None or n == only}


def _load(complex_path: str, covering_path: str):
    X = load_complex(complex_path)
    return X, load_covering(covering_path, base=X)


def _system(text: str, U):
    try:
        return parse_system(text, U)
    except FileNotFoundError as e:
        raise InputError(f"cannot read {e.filename}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"system file is not valid JSON: {e}") from None


def cmd_nerve(args) -> dict:
    X, U = _load(args.complex, args.covering)
    N = U.nerve
    K = N.complex
    supports = {}
    for p in range(N.dim + 1):
        for s in N.simplices(p):
            Z = N.support(s)
            supports[",".join(str(v) for v in K.names(s))] = [list(map(str, X.names(t))) for t in Z.maximal_simplices()]
    return {
        "command": "nerve",
        "dim": N.dim,
        "vertices": [str(v) for v in K.vertices],
        "simplices": [[str(v) for v in K.names(s)] for p in range(N.dim + 1) for s in N.simplices(p)],
        "supports": supports,
    }


def cmd_leray(args) -> dict:
    X, U = _load(args.complex, args.covering)
    A = _system(args.system, U)
    lr = leray_map(U)
    rep = is_acyclic(U, A)
    out = {
        "command": "leray",
        "system": str(args.system),
        "nerve_dim": U.nerve.dim,
        "leray": _degrees(lr.matrices, args.degree),
        "acyclic": rep.acyclic,
        "acyclicity_failures": rep.failures,
    }
    if not rep.acyclic:
        out["factorization"] = {"skipped": "covering is not acyclic for this system"}
        out["vanishing"] = {"skipped": "covering is not acyclic for this system"}
        return out
    fr = factorization_check(U, A, lr)
    out["factorization"] = {
        "holds": fr.holds,
        "phi_star": _degrees(fr.phi_star, args.degree),
        "composite": _degrees(fr.composite, args.degree),
    }
    if not fr.holds:
        out["vanishing"] = {"skipped": "factorization failed"}
        raise _PropertyFailure(out, f"factorization fails in degrees {fr.mismatched}")
    out["vanishing"] = {"holds": True, "verified_degrees": vanishing_check(U, A, fr)}
    return out


def cmd_homology_leray(args) -> dict:
    X, U = _load(args.complex, args.covering)
    A = _system(args.system, U)
    hl = homology_leray_map(U)
    rep = is_acyclic(U, A)
    out = {
        "command": "homology-leray",
        "system": str(args.system),
        "nerve_dim": U.nerve.dim,
        "homology_leray": _degrees(hl.matrices, args.degree),
        "acyclic": rep.acyclic,
        "acyclicity_failures": rep.failures,
    }
    if not rep.acyclic:
        out["factorization"] = {"skipped": "covering is not acyclic for this system"}
        return out
    fr = homology_factorization_check(U, A, hl)
    out["factorization"] = {
        "holds": fr.holds,
        "phi_star": _degrees(fr.phi_star, args.degree),
        "composite": _degrees(fr.composite, args.degree),
    }
    if not fr.holds:
        raise _PropertyFailure(out, f"homological factorization fails in degrees {fr.mismatched}")
    return out


def _parse_class(text: Optional[str]) -> Optional[List]:
    if text is None:
        return None
    text = text.strip()
    try:
        if text.startswith("["):
            items = json.loads(text)
        else:
            items = [t for t in text.split(",") if t.strip()]
        return [parse_rational(x) for x in items]
    except (ValueError, TypeError, json.JSONDecodeError) as e:
        raise InputError(f"cannot parse class coordinates {text!r}: {e}") from None


def cmd_norm(args) -> dict:
    X = load_complex(args.complex)
    h = _parse_class(args.cls)
    out = {"command": "norm", "kind": args.kind, "degree": args.degree}
    if args.kind == "l1":
        if h is None:
            raise CommandError(EXIT_PRECONDITION, "--class is required for l1")
        out.update(l1_seminorm(X, args.degree, h).to_json())
    elif args.kind == "linf":
        if h is None:
            raise CommandError(EXIT_PRECONDITION, "--class is required for linf")
        out.update(linf_seminorm(X, args.degree, h).to_json())
    else:
        rep = duality_check(X, args.degree)
        out.update(rep.to_json())
        if h is not None:
            l1 = l1_seminorm(X, args.degree, h)
            mp = max_pairing(X, args.degree, h)
            out["value"] = format_rational(l1.value)
            out["max_pairing"] = format_rational(mp.value)
            out["holds"] = rep.holds and l1.value == mp.value
        if not out["holds"]:
            raise _PropertyFailure(out, "ℓ1 seminorm and maximal pairing differ")
    return out


def cmd_verify(args) -> dict:
    root = args.fixtures
    if root is not None and not os.path.isdir(root):
        raise InputError(f"fixture directory {root} does not exist")
    kwargs = {"root": root} if root else {}
    results = run_suites(args.seed, only=args.suite or None, **kwargs)
    out = {"command": "verify", "seed": args.seed, "suites": {}, "ok": all(r.ok for r in results)}
    failures = []
    for r in results:
        entry = {"passed": r.passed, "failed": r.failed}
        if not r.ok:
            path = os.path.join(args.dump_dir, f"counterexample-{r.name}.json")
            with open(path, "w") as fh:
                fh.write(dumps(r.counterexample))
            entry["counterexample"] = path
            failures.append(f"property {r.name} failed; counterexample in {path}")
        out["suites"][r.name] = entry
    if failures:
        raise _PropertyFailure(out, "\n".join(failures))
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write the JSON report here instead of stdout")

    parser = argparse.ArgumentParser(prog="leraykit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nerve", parents=[common], help="nerve and supports of a covering")
    p.add_argument("complex")
    p.add_argument("covering")
    p.set_defaults(func=cmd_nerve)

    for name, func, help_text in (
        ("leray", cmd_leray, "Leray map H^n(N) -> H^n(X), acyclicity, factorization, vanishing"),
        ("homology-leray", cmd_homology_leray, "map H_n(X) -> H_n(N) and homological factorization"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("complex")
        p.add_argument("covering")
        p.add_argument("--system", default="FULL", help="FULL, TRUNC:m or EXPLICIT:path (default FULL)")
        p.add_argument("--degree", type=int, help="report only this degree")
        p.set_defaults(func=func)

    p = sub.add_parser("norm", parents=[common], help="ℓ1 / ℓ∞ seminorms and their duality")
    p.add_argument("complex")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--class", dest="cls", help="class coordinates, e.g. 1,0 or '[\"1/2\", 0]'")
    p.add_argument("--kind", choices=["l1", "linf", "duality"], default="l1")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("verify", parents=[common], help="run the property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fixtures", metavar="DIR", help="fixture tree to check instead of the shipped one")
    p.add_argument("--suite", action="append", choices=[n for n, _ in SUITES], help="run only this suite (repeatable)")
    p.add_argument("--dump-dir", default=".", help="where counterexamples are written (default: current directory)")
    p.set_defaults(func=cmd_verify)
    return parser


def _emit(report: dict, out: Optional[str]) -> None:
    text = dumps(report)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except _PropertyFailure as e:
        _emit(e.report, args.out)
        print(f"leraykit: {e}", file=sys.stderr)
        return EXIT_PROPERTY
    except CommandError as e:
        print(f"leraykit: {e}", file=sys.stderr)
        return e.code
    except (InputError, json.JSONDecodeError) as e:
        print(f"leraykit: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (NotFineError, PreconditionError, InvalidClassError, MorphismError, SystemError, DimensionError) as e:
        print(f"leraykit: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (LerayError, LPError) as e:
        print(f"leraykit: property failure: {e}", file=sys.stderr)
        return EXIT_PROPERTY
    except (ValueError, OSError) as e:
        print(f"leraykit: {e}", file=sys.stderr)
        return EXIT_INPUT
    _emit(report, args.out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
