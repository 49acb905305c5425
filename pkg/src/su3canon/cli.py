"""Command-line front end: decompose products, emit and compare tables,
and run the self-check suite.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

import numpy as np

from . import __version__
from .coupled import decompose_product, default_parents
from .irreps import IrrepLabel, casimir2, dimension, so3_content
from .kbasis import alt3_basis, build_table, qq2_blocks, z_matrix
from .models import rotor_zbar_check
from .oracle import (algebra_residuals, build_product_mscheme,
                     build_symmetric_mscheme, oracle_table)
from .tables import BasisChoice, ReducedMatrixTable

_BASIS_ALIASES = {
    "gtw": BasisChoice.GTW,
    "alt1": BasisChoice.ALT1, "alti": BasisChoice.ALT1,
    "alt2": BasisChoice.ALT2, "altii": BasisChoice.ALT2,
    "alt3": BasisChoice.ALT3, "altiii": BasisChoice.ALT3,
    "asymptotic": BasisChoice.ASYMPTOTIC, "as": BasisChoice.ASYMPTOTIC,
    "rotor": BasisChoice.ROTOR, "rot": BasisChoice.ROTOR,
}


class UsageError(Exception):
    pass


def _parse_basis(name: str) -> str:
    key = name.strip().lower()
    if key not in _BASIS_ALIASES:
        raise UsageError(f"unknown basis {name!r}; choose from "
                         f"{sorted(set(_BASIS_ALIASES))}")
    return _BASIS_ALIASES[key]


def _parse_parents(text: Optional[str]):
    if text is None:
        return None
    try:
        a, b = (int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"--parents expects 'a,b', got {text!r}") from None
    return (a, b)


def _build(args, basis: str) -> ReducedMatrixTable:
    irrep = IrrepLabel(args.lam, args.mu)
    cg_text = None
    if basis == BasisChoice.ALT2:
        if args.cg_file is None:
            raise UsageError("basis AltII requires --cg-file")
        with open(args.cg_file) as fh:
            cg_text = fh.read()
    return build_table(irrep, basis,
                       parents=_parse_parents(getattr(args, "parents", None)),
                       cg_text=cg_text,
                       cluster_tol=args.cluster_tol,
                       degeneracy_tol=args.degeneracy_tol,
                       max_L=getattr(args, "max_L", None))


def cmd_decompose(args) -> int:
    if args.lam1 < args.lam2:
        raise UsageError("decompose expects lambda1 >= lambda2")
    print(f"({args.lam1},0) x ({args.lam2},0) =")
    for irrep in decompose_product(args.lam1, args.lam2):
        print(f"  {irrep}  dim {dimension(irrep)}  C2 {casimir2(irrep):g}")
    return 0


def cmd_table(args) -> int:
    table = _build(args, _parse_basis(args.basis))
    text = (table.to_json(args.precision) if args.format == "json"
            else table.to_csv(args.precision))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for w in table.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def cmd_compare(args) -> int:
    bases = [_parse_basis(b) for b in args.bases]
    if len(bases) < 2:
        raise UsageError("compare needs at least two bases")
    tables = [_build(args, b) for b in bases]
    keys = []
    seen = set()
    for t in tables:
        for f, i, v in t.entries():
            k = (i.K, i.L, f.K, f.L)
            if k not in seen and abs(v) > 1e-12:
                seen.add(k)
                keys.append(k)
    keys.sort()
    header = f"{'Ki;Li':>7} {'Kf;Lf':>7} " + " ".join(f"{b:>14}" for b in bases)
    print(f"irrep ({args.lam},{args.mu})")
    print(header + f" {'maxdev':>12}")
    worst = 0.0
    for (Ki, Li, Kf, Lf) in keys:
        vals = []
        for t in tables:
            from .irreps import KLState
            vals.append(t.get(KLState(Kf, Lf), KLState(Ki, Li)))
        dev = max(vals) - min(vals)
        worst = max(worst, dev)
        cols = " ".join(f"{v:14.6f}" for v in vals)
        print(f"{Ki:>3};{Li:<3} {Kf:>3};{Lf:<3} {cols} {dev:12.6f}")
    print(f"max deviation over rows: {worst:.6f}")
    return 0


def cmd_check(args) -> int:
    failures = 0

    def report(name: str, value: float, tol: float):
        nonlocal failures
        ok = value <= tol
        failures += 0 if ok else 1
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {value:.3e} (tol {tol:g})")

    lam = min(args.max_lambda, 4)
    res = algebra_residuals(build_symmetric_mscheme(lam))
    for key, v in res.items():
        report(f"({lam},0) commutator [{key}]", v, 1e-10)
    res = algebra_residuals(build_product_mscheme(2, 2))
    for key, v in res.items():
        report(f"(2,0)x(2,0) commutator [{key}]", v, 1e-10)

    # Casimir constant via the quadrupole sum rule on a symmetric irrep
    sym = build_symmetric_mscheme(lam)
    QQ = sum(((-1) ** nu) * (sym.Q[nu] @ sym.Q[-nu]) for nu in range(-2, 3))
    LL = sum(((-1) ** k) * (sym.L[k] @ sym.L[-k]) for k in range(-1, 2))
    dev = float(np.abs(np.diag(QQ + 3 * LL) - casimir2(IrrepLabel(lam, 0))).max())
    report(f"({lam},0) Casimir constant", dev, 1e-9)

    # cross-pipeline agreement on (2,2): canonical AltIII from the M-scheme
    # oracle versus the recoupling pipeline
    irrep = IrrepLabel(2, 2)
    oracle = alt3_basis(oracle_table(irrep, default_parents(irrep)))[1]
    pipeline = build_table(irrep, BasisChoice.ALT3)
    dev = max(float(np.abs(oracle.blocks[k] - pipeline.blocks[k]).max())
              for k in pipeline.blocks)
    report("(2,2) oracle vs pipeline AltIII table", dev, 1e-9)

    # Z self-consistency: z_matrix of the AltIII table is diagonal
    dev = 0.0
    for L in pipeline.Ls:
        Z = z_matrix(pipeline, L)
        off = Z - np.diag(np.diag(Z))
        dev = max(dev, float(np.abs(off).max() / max(np.linalg.norm(Z), 1.0)))
    report("(2,2) AltIII Z diagonality", dev, 1e-8)

    # rotor Zbar diagonality (closed-form side of the same statement)
    report("(10,4) rotor Zbar off-diagonal", rotor_zbar_check(IrrepLabel(10, 4)).max_offdiag, 1e-8)
    return 1 if failures else 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="su3canon",
                                description="SU(3) quadrupole tables in "
                                            "canonical SO(3)-coupled bases")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="decompose (l1,0) x (l2,0)")
    d.add_argument("lam1", type=int)
    d.add_argument("lam2", type=int)
    d.set_defaults(func=cmd_decompose)

    def add_build_flags(q):
        q.add_argument("lam", type=int)
        q.add_argument("mu", type=int)
        q.add_argument("--cg-file", default=None)
        q.add_argument("--parents", default=None, metavar="a,b")
        q.add_argument("--cluster-tol", type=float, default=1e-6)
        q.add_argument("--degeneracy-tol", type=float, default=1e-7)
        q.add_argument("--max-L", dest="max_L", type=int, default=None,
                       help="drop rows involving angular momentum above this")

    t = sub.add_parser("table", help="emit a reduced-element table")
    add_build_flags(t)
    t.add_argument("--basis", default="alt3")
    t.add_argument("--format", choices=("csv", "json"), default="csv")
    t.add_argument("--out", default=None)
    t.add_argument("--precision", type=int, default=9)
    t.set_defaults(func=cmd_table)

    c = sub.add_parser("compare", help="aligned multi-basis comparison")
    add_build_flags(c)
    c.add_argument("bases", nargs="+")
    c.set_defaults(func=cmd_compare)

    k = sub.add_parser("check", help="run the oracle self-check suite")
    k.add_argument("--max-lambda", type=int, default=4)
    k.set_defaults(func=cmd_check)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # computation failure
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
