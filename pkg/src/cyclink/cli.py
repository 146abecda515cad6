"""Command-line interface: invariant evaluation, identity sweeps, dumps.

Exit codes: 0 success / all checks passed; 1 a verification residual
exceeded its tolerance; others map error classes (see _EXIT_CODES).
Environment overrides: CYCLINK_TOL (default tolerance), and the caps
CYCLINK_BRUTE_CAP / CYCLINK_RANK_CAP read by the state-sum engines.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import arith, diagram, rmatrix, statesum, tetra
from .charge import build_system, solve_charges
from .errors import (
    BadLevel,
    ChargeSumViolation,
    CyclinkError,
    EdgeNotFound,
    EvenLevel,
    FermatViolation,
    GluingInconsistency,
    IllegalMove,
    IndexOutOfRange,
    NoSolution,
    NonPrimitiveRoot,
    ParseError,
    PlanarityError,
    PoleError,
    RankCapExceeded,
    TooLarge,
    ValenceError,
)

_EXIT_CODES = [
    (ParseError, 2),
    (ValenceError, 3),
    (PlanarityError, 4),
    ((EdgeNotFound, IllegalMove), 5),
    ((NoSolution, ChargeSumViolation), 6),
    ((TooLarge, RankCapExceeded), 7),
    ((BadLevel, NonPrimitiveRoot, EvenLevel, IndexOutOfRange), 8),
    ((PoleError, FermatViolation, GluingInconsistency), 9),
]

DEFAULT_TOL = float(os.environ.get("CYCLINK_TOL", 1e-9))


def _exit_code(exc: CyclinkError) -> int:
    for klass, code in _EXIT_CODES:
        if isinstance(exc, klass):
            return code
    return 10


def _read_pd(arg: str) -> str:
    if os.path.exists(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def _print(obj: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(obj, sort_keys=True))
    else:
        for key in sorted(obj):
            print(f"{key}: {obj[key]}")


def _cmd_invariant(args) -> int:
    ctx = arith.make_context(args.level, args.root, args.tol)
    d = diagram.parse_pd(_read_pd(args.pd))
    if not d.edges:
        raise EdgeNotFound("the diagram has no edges to cut")
    cut = args.cut_edge if args.cut_edge is not None else min(d.edges)
    t = diagram.cut_tangle(d, cut)
    res = statesum.evaluate(
        t, ctx, charge_seed=args.charge_seed, engine=args.engine
    )
    out = {
        "N": args.level,
        "k": args.root,
        "value_re": res.value.real,
        "value_im": res.value.imag,
        "invariant_re": res.invariant.real,
        "invariant_im": res.invariant.imag,
        "abs": abs(res.value),
        "engine": res.engine,
        "charge_digest": res.charge_digest,
    }
    _print(out, args.json)
    return 0


def _load_bundled(name: str) -> diagram.LinkDiagram:
    from importlib import resources

    text = resources.files("cyclink.data").joinpath(f"{name}.pd").read_text()
    return diagram.parse_pd(text)


def _invariance_sweep(ctx) -> dict:
    """Max relative spread of the invariant across moved/cut/recharged
    diagrams of the bundled knots."""
    worst = 0.0
    details = {}
    for name in ("unknot_0", "unknot_curl", "unknot_rii", "trefoil", "figure8"):
        d = _load_bundled(name)
        variants = [d]
        edge = min(d.edges)
        variants.append(diagram.apply_move(d, "RI+", (edge, 0, 0)))
        variants.append(diagram.apply_move(d, "RI+", (edge, 1, 1)))
        for fi, f in enumerate(d.faces or []):
            labels = [t[0] for t in f.traversals]
            others = [l for l in labels if l != labels[0]]
            if others:
                variants.append(
                    diagram.apply_move(d, "RII", (fi, labels[0], others[0], 0))
                )
                break
        values = []
        for v in variants:
            values.append(statesum.invariant_of_diagram(v, ctx))
        for e in sorted(d.edges)[:3]:
            values.append(statesum.invariant_of_diagram(d, ctx, cut_edge=e))
        t = diagram.cut_tangle(d, min(d.edges))
        sysm = build_system(t, ctx.level)
        for seed in range(3):
            values.append(
                statesum.invariant(t, ctx, charges=solve_charges(sysm, seed=seed))
            )
        base = values[0]
        scale = max(abs(base), 1e-30)
        spread = max(abs(v - base) for v in values) / scale
        details[name] = spread
        worst = max(worst, spread)
    return {"per_diagram": details, "max_rel_dev": worst}


def _cmd_verify(args) -> int:
    tol = args.tol
    N, k = args.level, args.root
    out: dict
    if args.what == "ybe":
        ctx = arith.make_context(N, k, tol)
        res = rmatrix.verify_ybe(ctx)
        out = {"check": "ybe", "N": N, "k": k, "residual": res, "tolerance": tol}
        ok = res < tol
    elif args.what == "inverse":
        ctx = arith.make_context(N, k, tol)
        res = rmatrix.verify_inverse(ctx)
        out = {"check": "inverse", "N": N, "k": k, "residual": res, "tolerance": tol}
        ok = res < tol
    elif args.what == "kink":
        ctx = arith.make_context(N, k, tol)
        res = rmatrix.verify_kink(ctx)
        out = {"check": "kink", "N": N, "k": k, "residual": res, "tolerance": tol}
        ok = res < tol
    elif args.what == "symmetry":
        ctx = arith.make_context(N, k, tol)
        r10, r11 = rmatrix.verify_symmetries(ctx, seed=args.seed or 0)
        out = {
            "check": "symmetry",
            "N": N,
            "k": k,
            "residual_rotation": r10,
            "residual_reflection": r11,
            "tolerance": tol,
        }
        ok = r10 < tol and r11 < tol
    elif args.what == "octahedron":
        ctx = arith.make_context(N, k, tol)
        rep = tetra.octahedron_check(ctx, charge_seed=args.seed, tol=max(tol, 1e-6))
        out = {"check": "octahedron", "N": N, "k": k}
        out.update(rep.to_dict())
        ok = rep.constant
    elif args.what == "invariance":
        ctx = arith.make_context(N, k, tol)
        sweep = _invariance_sweep(ctx)
        out = {"check": "invariance", "N": N, "k": k, "tolerance": 1e-6}
        out.update(sweep)
        ok = sweep["max_rel_dev"] < 1e-6
    else:
        raise ValueError(f"unknown check {args.what!r}")
    out["pass"] = bool(ok)
    _print(out, args.json)
    return 0 if ok else 1


def _cmd_dump(args) -> int:
    ctx = arith.make_context(args.level, args.root, args.tol)
    if args.what == "rmatrix":
        print(rmatrix.rtensor_to_json(rmatrix.r_matrix(ctx)))
        return 0
    raise ValueError(f"unknown dump target {args.what!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyclink")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--level", "-N", type=int, default=3)
        sp.add_argument("--root", "-k", type=int, default=1)
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("invariant", help="evaluate the state sum of a diagram")
    sp.add_argument("--pd", required=True, help="PD code text or a file path")
    sp.add_argument("--engine", choices=("brute", "tensor"), default="tensor")
    sp.add_argument("--cut-edge", type=int, default=None)
    sp.add_argument("--charge-seed", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_invariant)

    sp = sub.add_parser("verify", help="run an identity or invariance sweep")
    sp.add_argument(
        "what",
        choices=("ybe", "symmetry", "inverse", "kink", "octahedron", "invariance"),
    )
    sp.add_argument("--seed", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_verify)

    sp = sub.add_parser("dump", help="emit machine-readable objects")
    sp.add_argument("what", choices=("rmatrix",))
    common(sp)
    sp.set_defaults(fn=_cmd_dump)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CyclinkError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_code(exc)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
