"""Command-line interface: ``pf-lattice <command> ...``.

Every command prints one JSON report (or writes it to ``--report``). Exit codes:
0 success, 1 I/O, parse or configuration error, 2 hypothesis violated (analyze),
3 reducible (irreducible), 4 LP failure (commutant), 5 precondition violated
(triangularize), 6 a suite property failed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .commutant import (Side, commutant_equality_gap, is_super_commutant_irreducible,
                        sample_semi_commuting, super_commutant_relation)
from .errors import (HypothesisViolated, LatticeError, MatrixFormatError, PreconditionViolation,
                     QuasiNilpotentInput, SolverFailure)
from .lattice import PosMatrix, Tolerances
from .matrix_io import dumps, load_matrix, matrix_to_obj
from .perron import is_ideal_irreducible, peripheral_cycle_structure
from .spectral import spectrum
from .triangularize import commutator_nilpotency
from .verify import SuiteConfig, run_theorem_suite

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_HYPOTHESIS = 2
EXIT_REDUCIBLE = 3
EXIT_LP = 4
EXIT_PRECONDITION = 5
EXIT_SUITE_FAIL = 6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with "hypothesis violated".
    def error(self, message):
        raise UsageError(message)


def _failure(command, exc: LatticeError, status: str) -> dict:
    return {"command": command, "status": status, "reason": exc.reason, "diagnostics": exc.diagnostics}


def _load(path, tol):
    """Read a matrix file and require a nonnegative square matrix."""
    return PosMatrix(load_matrix(path), tol).entries


def cmd_analyze(args, tol):
    k = _load(args.matrix, tol)
    rep = spectrum(k, tol)
    try:
        st = peripheral_cycle_structure(k, tol)
    except (HypothesisViolated, QuasiNilpotentInput) as exc:
        out = _failure("analyze", exc, "hypothesis_violated")
        out["spectrum"] = rep.to_dict()
        return out, EXIT_HYPOTHESIS
    return {"command": "analyze", "status": "ok", "spectrum": rep.to_dict(),
            "structure": st.to_dict()}, EXIT_OK


def cmd_irreducible(args, tol):
    mats = [_load(p, tol) for p in args.matrices]
    mode = args.mode or "plain"
    out = {"command": "irreducible", "mode": mode}
    if mode == "plain":
        cert = is_ideal_irreducible(mats, tol)
    else:
        if len(mats) != 1:
            raise UsageError(f"--{mode} takes exactly one matrix")
        side = Side.RIGHT if mode == "super-right" else Side.LEFT
        rel = super_commutant_relation(mats[0], side, tol)
        cert = is_super_commutant_irreducible(mats[0], side, tol, relation=rel)
        out["relation"] = rel.edges.astype(int).tolist()
    out.update(status="irreducible" if cert.irreducible else "reducible", certificate=cert.to_dict())
    return out, EXIT_OK if cert.irreducible else EXIT_REDUCIBLE


def cmd_commutant(args, tol):
    k = _load(args.matrix, tol)
    out = {"command": "commutant", "status": "ok"}
    if args.gap:
        right, left = commutant_equality_gap(k, tol, exact=args.exact)
        out.update(mode="gap", gap_right=float(right), gap_left=float(left))
    elif args.relation:
        side = Side(args.side)
        rel = super_commutant_relation(k, side, tol, exact=args.exact)
        out.update(mode="relation", side=side.value, relation=rel.to_dict())
    else:
        if args.sample < 1:
            raise UsageError("--sample needs a positive count")
        side = Side(args.side)
        got = sample_semi_commuting(k, side, args.seed, args.sample, tol)
        out.update(mode="sample", side=side.value, seed=args.seed, degenerate=got.degenerate,
                   samples=[matrix_to_obj(a) for a in got.matrices])
    return out, EXIT_OK


def cmd_triangularize(args, tol):
    t, k = _load(args.T, tol), _load(args.K, tol)
    try:
        cert = commutator_nilpotency(t, k, tol)
    except PreconditionViolation as exc:
        return _failure("triangularize", exc, "precondition_violated"), EXIT_PRECONDITION
    return {"command": "triangularize", "status": "certified", "certificate": cert.to_dict()}, EXIT_OK


def parse_dims(text: str) -> tuple:
    """'4', '3,5,8' or '3-8' (inclusive)."""
    dims = []
    for part in text.split(","):
        part = part.strip()
        lo, sep, hi = part.partition("-")
        try:
            dims.extend(range(int(lo), int(hi) + 1) if sep else [int(part)])
        except ValueError:
            raise UsageError(f"bad dimension list {text!r}") from None
    return tuple(dims)


def cmd_suite(args, tol):
    try:
        config = SuiteConfig(n_range=parse_dims(args.n), trials=args.trials, seed=args.seed,
                             tolerances=tol,
                             properties=tuple(args.only.split(",")) if args.only else None)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = run_theorem_suite(config)
    out = {"command": "suite", "status": "pass" if report.all_passed else "fail"}
    out.update(report.to_dict(include_time=not args.no_time))
    return out, EXIT_OK if report.all_passed else EXIT_SUITE_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", help="tolerance override: a float (zero threshold) or name=value pairs; "
                                      "defaults to $PF_LATTICE_TOL")
    common.add_argument("--report", help="write the JSON report here instead of standard output")

    p = _Parser(prog="pf-lattice", description="Perron-Frobenius structure of positive matrices.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", parents=[common], help="spectrum and peripheral cycle structure")
    a.add_argument("matrix")
    a.set_defaults(func=cmd_analyze)

    i = sub.add_parser("irreducible", parents=[common], help="ideal irreducibility certificate")
    i.add_argument("matrices", nargs="+")
    g = i.add_mutually_exclusive_group()
    for flag in ("plain", "super-right", "super-left"):
        g.add_argument(f"--{flag}", dest="mode", action="store_const", const=flag)
    i.set_defaults(func=cmd_irreducible)

    c = sub.add_parser("commutant", parents=[common], help="super-commutant gaps, relation or samples")
    c.add_argument("matrix")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--gap", action="store_true")
    g.add_argument("--relation", action="store_true")
    g.add_argument("--sample", type=int, metavar="N")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--side", choices=[s.value for s in Side], default=Side.RIGHT.value)
    c.add_argument("--exact", action="store_true", help="rational arithmetic LPs (small n)")
    c.set_defaults(func=cmd_commutant)

    t = sub.add_parser("triangularize", parents=[common], help="nilpotency certificate for TK - KT")
    t.add_argument("T")
    t.add_argument("K")
    t.set_defaults(func=cmd_triangularize)

    s = sub.add_parser("suite", parents=[common], help="seeded property suite")
    s.add_argument("--n", default="4", help="dimensions: '4', '3,5' or '3-8'")
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--only", help="comma-separated property names or aliases")
    s.add_argument("--no-time", action="store_true", help="omit the wall_time field")
    s.set_defaults(func=cmd_suite)
    return p


def _emit(report: dict, path) -> None:
    text = dumps(report) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        tol = Tolerances.parse(args.tol) if args.tol else Tolerances.from_env()
    except UsageError as exc:
        print(f"pf-lattice: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"pf-lattice: bad tolerance: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        report, code = args.func(args, tol)
    except UsageError as exc:
        print(f"pf-lattice: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, MatrixFormatError) as exc:
        print(f"pf-lattice: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SolverFailure as exc:
        print(f"pf-lattice: LP failure: {exc}", file=sys.stderr)
        return EXIT_LP if args.command == "commutant" else EXIT_ERROR
    except LatticeError as exc:
        print(f"pf-lattice: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        _emit(report, args.report)
    except OSError as exc:
        print(f"pf-lattice: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if code not in (EXIT_OK,):
        print(f"pf-lattice: {report.get('reason') or report.get('status')}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
