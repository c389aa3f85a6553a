"""Command line front end.

Every subcommand prints one JSON report to standard output.  Exit codes:
0 success (including expected failures on non-principal inputs), 1 a
checked assertion failed, 2 malformed input, 3 an enumeration cap was hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import decompose_partition_of_unity, reduced_norm, rep_blocks, sup_norm, support
from .groupoid import (
    CapExceeded,
    GroupoidError,
    enumerate_subgroupoids,
    invariant_subsets,
    is_bisection,
    is_principal,
    transformation_groupoid,
)
from .io import dumps, load_action, load_function, load_groupoid, load_multiplier, load_net
from .multipliers import check_bounded_fejer, check_fejer_net, multiplier_cb_norm
from .theorems import (
    RESIDUAL_TOL,
    NonPrincipalWarning,
    check_bimodule_theorem,
    check_galois,
    check_inner_exact,
    functions_supported_in,
    intermediate_algebra_census,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

log = logging.getLogger("glab")


class InputError(Exception):
    pass


def _groupoid(path):
    try:
        return load_groupoid(path)
    except GroupoidError:
        raise
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load(fn, *args):
    try:
        return fn(*args)
    except GroupoidError:
        raise
    except (OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"{args[0]}: {exc}") from None


def _theorem_report(command: str, rep) -> dict:
    d = {"command": command, **rep.to_dict()}
    d["ok"] = bool(rep.passed or rep.expected_failure)
    return d


# -- subcommands ---------------------------------------------------------------------


def cmd_validate(args) -> dict:
    G = _groupoid(args.groupoid)
    return {
        "command": "validate",
        "arrows": list(G.arrows),
        "units": list(G.units),
        "principal": is_principal(G),
        "invariant_subsets": len(invariant_subsets(G)),
        "pass": True,
    }


def cmd_norm(args) -> dict:
    G = _groupoid(args.groupoid)
    f = _load(load_function, args.function, G)
    blocks = rep_blocks(G, f)
    norm = reduced_norm(G, f)
    return {
        "command": "norm",
        "norm": norm,
        "sup_norm": sup_norm(f),
        "bisection_supported": is_bisection(G, support(f)),
        "blocks": {x: float(np.linalg.norm(b.matrix, 2)) if b.matrix.size else 0.0 for x, b in blocks.items()},
        "pass": True,
    }


def cmd_cbnorm(args) -> dict:
    G = _groupoid(args.groupoid)
    h = _load(load_multiplier, args.multiplier, G)
    cb = multiplier_cb_norm(G, h, tol=args.tol)
    d = {"command": "cbnorm", "tol": args.tol, **cb.to_dict()}
    d["pass"] = bool(cb.upper - cb.lower <= 2 * args.tol)
    return d


def cmd_fejer(args) -> dict:
    G = _groupoid(args.groupoid)
    net = _load(load_net, args.net, G)
    rep = check_fejer_net(G, net, eps=args.eps, seed=args.seed)
    bounded, bound = check_bounded_fejer(G, net)
    return {"command": "fejer", **rep.to_dict(), "bounded": bounded, "cb_bound": bound}


def cmd_innerexact(args) -> dict:
    G = _groupoid(args.groupoid)
    return _theorem_report("innerexact", check_inner_exact(G, seed=args.seed))


def cmd_galois(args) -> dict:
    G = _groupoid(args.groupoid)
    return _theorem_report("galois", check_galois(G, trials=args.trials, seed=args.seed))


def cmd_bimodule(args) -> dict:
    G = _groupoid(args.groupoid)
    return _theorem_report("bimodule", check_bimodule_theorem(G, trials=args.trials, seed=args.seed))


def cmd_transform(args) -> dict:
    A = _load(load_action, args.action)
    G = transformation_groupoid(A)
    raw = G.to_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(raw, indent=2) + "\n", encoding="utf-8")
    return {"command": "transform", "groupoid": raw, "principal": is_principal(G), "pass": True}


def cmd_decompose(args) -> dict:
    G = _groupoid(args.groupoid)
    f = _load(load_function, args.function, G)
    pieces = decompose_partition_of_unity(G, f)
    total = sum((p.coeffs for p in pieces), np.zeros(len(G), dtype=complex))
    err = float(np.abs(total - f.coeffs).max(initial=0.0))
    return {
        "command": "decompose",
        "pieces": [{"support": G.ordered(support(p)), "coeffs": p.to_dict(),
                    "norm": reduced_norm(G, p), "sup_norm": sup_norm(p)} for p in pieces],
        "reconstruction_error": err,
        "pass": err == 0.0,
    }


def cmd_census(args) -> dict:
    G = _groupoid(args.groupoid)
    census = intermediate_algebra_census(G, seed=args.seed)
    subs = enumerate_subgroupoids(G, require_all_units=True)
    spans = [functions_supported_in(G, H) for H in subs]
    matched = [[k for k, A in enumerate(spans) if B.same_space(A, RESIDUAL_TOL)] for B in census]
    bijective = len(census) == len(spans) and sorted(k for m in matched for k in m) == list(range(len(spans)))
    return {
        "command": "census",
        "principal": is_principal(G),
        "algebras": [{"rank": B.rank, "matches": m} for B, m in zip(census, matched)],
        "subgroupoids": [G.ordered(H) for H in subs],
        "pass": bool(bijective),
    }


# -- report reader ---------------------------------------------------------------------


def check_report(path: str) -> tuple[bool, str]:
    """A report file parses, has the common keys and re-serializes to the same bytes."""
    try:
        text = Path(path).read_text(encoding="utf-8")
        obj = json.loads(text)
    except (OSError, ValueError) as exc:
        return False, f"unreadable report: {exc}"
    if not isinstance(obj, dict) or "command" not in obj or not isinstance(obj.get("pass"), bool):
        return False, "report lacks 'command' or boolean 'pass'"
    if "theorem" in obj and not (isinstance(obj.get("instances"), list) and isinstance(obj.get("witnesses"), list)):
        return False, "theorem report lacks 'instances' or 'witnesses'"
    if dumps(obj).rstrip("\n") != text.rstrip("\n"):
        return False, "report does not round-trip"
    return True, "ok"


def _summary(d: dict) -> str:
    cmd = d.get("command")
    verdict = "pass" if d.get("pass") else ("expected failure" if d.get("expected_failure") else "FAIL")
    if cmd == "norm":
        return f"reduced norm {d['norm']:.12f}"
    if cmd == "cbnorm":
        return f"cb norm {d['value']:.12f} attained at unit {d['unit']} (gap {d['upper'] - d['lower']:.2e})"
    if cmd == "fejer":
        return f"Fejér net final distance {max(d['final'], default=0.0):.3e} vs eps {d['eps']:.1e}: {verdict}; cb bound {d['cb_bound']:.12f}"
    if "theorem" in d:
        lines = [f"{d['theorem']}: {verdict} over {len(d['instances'])} instances"]
        lines += [f"warning: {w}" for w in d.get("warnings", [])]
        if "census" in d:
            lines.append(f"census {d['census']}")
        return "\n".join(lines)
    if cmd == "census":
        return f"{len(d['algebras'])} intermediate algebras, {len(d['subgroupoids'])} wide subgroupoids: {verdict}"
    return f"{cmd}: {verdict}"


# -- entry point ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="glab", description="Finite groupoid C*-algebra laboratory.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--summary", action="store_true", help="append a human-readable summary on stderr")
    p.add_argument("--check-report", metavar="FILE", help="validate a JSON report produced by this tool")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command")

    def add(name, fn, *positional, help=None):
        sp = sub.add_parser(name, help=help)
        for arg in positional:
            sp.add_argument(arg)
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "groupoid", help="check the groupoid axioms")
    sp = add("norm", cmd_norm, "groupoid", "function", help="reduced norm of a function")
    sp = add("cbnorm", cmd_cbnorm, "groupoid", "multiplier", help="cb norm of a multiplier")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp = add("fejer", cmd_fejer, "groupoid", "net", help="check a Fejér net")
    sp.add_argument("--eps", type=float, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("innerexact", cmd_innerexact, "groupoid", help="exact sequence for every invariant subset")
    sp.add_argument("--seed", type=int, default=0)
    for name, fn in (("galois", cmd_galois), ("bimodule", cmd_bimodule)):
        sp = add(name, fn, "groupoid", help=f"randomized {name} theorem check")
        sp.add_argument("--trials", type=int, default=64)
        sp.add_argument("--seed", type=int, default=0)
    sp = add("transform", cmd_transform, "action", help="transformation groupoid of an action")
    sp.add_argument("--out", default=None)
    add("decompose", cmd_decompose, "groupoid", "function", help="split a function along bisections")
    sp = add("census", cmd_census, "groupoid", help="brute-force intermediate algebra census")
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    if args.check_report:
        ok, msg = check_report(args.check_report)
        print(dumps({"command": "check-report", "file": args.check_report, "message": msg, "pass": ok}))
        return EXIT_OK if ok else EXIT_INPUT
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonPrincipalWarning)
            report = args.func(args)
    except GroupoidError as exc:
        print(dumps({"command": args.command, "error": "invalid input", "violations": exc.violations, "pass": False}))
        return EXIT_INPUT
    except InputError as exc:
        print(dumps({"command": args.command, "error": str(exc), "pass": False}))
        return EXIT_INPUT
    except CapExceeded as exc:
        print(dumps({"command": args.command, "error": str(exc), "pass": False}))
        return EXIT_CAP
    print(dumps(report))
    if args.summary:
        print(_summary(report), file=sys.stderr)
    ok = report.get("ok", report["pass"])
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
