"""Command line front end.

Exit status: 0 on success, 1 for usage and parse errors, 2 for
mathematical failures (non-MUM operator, failed monodromy check,
non-integral instanton number under ``--strict``).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import cone, monodromy
from .errors import MirrorCountError, ParseError, SemanticError
from .linalg import parse_matrices
from .model import DEFAULT_TRUNCATION, PRESETS, ModelConfig, parse_model, preset_text, monodromy_table_text
from .picard_fuchs import frobenius_mum
from .series import parse_rational
from .pipeline import (
    PredictionTable,
    build_mirror_map,
    canonical_coupling,
    extract_instantons,
)

log = logging.getLogger("mirror_count")

ENV_TRUNCATION = "MIRROR_COUNT_TRUNCATION"

EXIT_OK, EXIT_USAGE, EXIT_MATH = 0, 1, 2


class StageError(MirrorCountError):
    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {cause}")


def run_predict(cfg: ModelConfig) -> PredictionTable:
    def stage(name, fn, *args):
        try:
            return fn(*args)
        except MirrorCountError as exc:
            raise StageError(name, exc) from exc

    basis = stage("frobenius", frobenius_mum, cfg.operator, cfg.truncation)
    mmap = stage("mirror_map", build_mirror_map, basis, cfg.q_rescale)
    coupling = stage("coupling", canonical_coupling, cfg.operator, basis, mmap, cfg.kappa, cfg.truncation)
    return stage("extract", extract_instantons, coupling, cfg.max_degree)


@dataclass(frozen=True)
class MonodromyReport:
    results: tuple[monodromy.RowResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)


def run_monodromy(fixture: str | Path | None = None) -> MonodromyReport:
    """Check every row of a table fixture (the shipped table when ``fixture`` is None)."""
    text = monodromy_table_text() if fixture is None else Path(fixture).read_text()
    rows = monodromy.parse_table(text)
    if not rows:
        log.warning("monodromy table has no rows")
    results = tuple(
        monodromy.verify_table_row(r.a, r.m_prime, r.a_prime, r.lambda_mu, k=r.k) for r in rows
    )
    return MonodromyReport(results)


def run_cone(a: int, b: int, c: int, count: int) -> list[cone.Ray]:
    return cone.subdivide_cone(cone.WallQuadratic(a, b, c), count)


# formatting


def format_table_tsv(table: PredictionTable, truncation: int) -> str:
    lines = [f"# kappa = {table.kappa}", f"# truncation = {truncation}"]
    lines += [f"{d}\t{n}" for d, n in table.entries]
    return "\n".join(lines) + "\n"


def format_table_pretty(table: PredictionTable, cfg: ModelConfig) -> str:
    lines = [f"model {cfg.name}: kappa = {table.kappa}, truncation = {cfg.truncation}"]
    if not table.entries:
        lines.append("all instanton numbers vanish up to degree %d" % table.max_degree)
        return "\n".join(lines) + "\n"
    width = max(len(str(n)) for _, n in table.entries)
    lines.append(f"{'d':>3}  {'n_d':>{width}}")
    for d, n in table.entries:
        mark = "  (not an integer)" if isinstance(n, Fraction) else ""
        lines.append(f"{d:>3}  {str(n):>{width}}{mark}")
    return "\n".join(lines) + "\n"


def format_monodromy(report: MonodromyReport) -> str:
    lines = []
    for r in report.results:
        if r.ok:
            lines.append(f"row {r.k}: ok  (lambda, mu) = ({r.lam}, {r.mu})")
        else:
            msg = r.message.replace("\n", "\n    ")
            lines.append(f"row {r.k}: FAILED at stage {r.stage}: {msg}")
    lines.append(f"{sum(r.ok for r in report.results)}/{len(report.results)} rows passed")
    return "\n".join(lines) + "\n"


def format_mum(rep: monodromy.MUMReport) -> str:
    lines = [
        f"dim W0 = {rep.dim_w0}",
        f"dim W1 = {rep.dim_w1}",
        f"dim W2 = {rep.dim_w2}",
    ]
    if rep.m_matrix is None:
        lines.append("m = undefined")
    else:
        lines.append("m =")
        lines += ["  " + " ".join(str(x) for x in row) for row in rep.m_matrix.rows]
    lines += [
        f"invertible = {str(rep.invertible).lower()}",
        f"invertible over Z = {str(rep.invertible_over_Z).lower()}",
        f"maximally unipotent = {str(rep.is_mum).lower()}",
    ]
    return "\n".join(lines) + "\n"


# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_triple(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected a,b,c")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("coefficients must be integers") from None


def _weights(text: str) -> list[Fraction]:
    try:
        return [parse_rational(p) for p in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mirror-count", description="Mirror-symmetry enumerative predictions and monodromy checks.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("predict", help="instanton numbers from a Picard-Fuchs operator")
    p.add_argument("--model", required=True, help=f"model file, or a preset name ({', '.join(PRESETS)})")
    p.add_argument("--degrees", type=int, help="highest degree to report")
    p.add_argument("--truncation", type=int, help="series truncation order")
    p.add_argument("--strict", action="store_true", help="fail if an instanton number is not an integer")
    p.add_argument("--format", choices=("tsv", "pretty"), default="tsv")

    p = sub.add_parser("monodromy", help="verify a table of monodromy matrices")
    p.add_argument("--table", help="table fixture (default: the shipped one-parameter table)")

    p = sub.add_parser("mum", help="classify a point from its nilpotent monodromy logarithms")
    p.add_argument("--matrices", required=True, help="file of matrix blocks")
    p.add_argument("--weights", type=_weights, help="positive coefficients a_1,...,a_r")
    p.add_argument("--log", action="store_true", help="inputs are unipotent monodromies; take -log first")

    p = sub.add_parser("cone", help="subdivide a cone with irrational walls")
    p.add_argument("--quadratic", type=_int_triple, required=True, help="a,b,c of a s^2 + b s + c = 0")
    p.add_argument("--count", type=int, required=True, help="rays on each side of (0, 1)")
    p.add_argument("--slopes", action="store_true", help="also print y/x")
    return parser


def _default_truncation() -> int:
    env = os.environ.get(ENV_TRUNCATION)
    if env is None:
        return DEFAULT_TRUNCATION
    try:
        value = int(env)
    except ValueError:
        raise SemanticError(f"{ENV_TRUNCATION} must be an integer, got {env!r}") from None
    return value


def _load_model(args) -> ModelConfig:
    if args.model in PRESETS and not Path(args.model).exists():
        text = preset_text(args.model)
    else:
        text = Path(args.model).read_text()
    return parse_model(
        text,
        default_truncation=_default_truncation(),
        truncation=args.truncation,
        max_degree=args.degrees,
    )


def _cmd_predict(args, out) -> int:
    cfg = _load_model(args)
    try:
        table = run_predict(cfg)
    except StageError as exc:
        print(f"error in stage {exc.stage}: {exc.cause}", file=sys.stderr)
        return EXIT_MATH
    for diag in table.diagnostics:
        print(f"warning: {diag}", file=sys.stderr)
    if args.format == "tsv":
        out.write(format_table_tsv(table, cfg.truncation))
    else:
        out.write(format_table_pretty(table, cfg))
    if args.strict and table.diagnostics:
        return EXIT_MATH
    return EXIT_OK


def _cmd_monodromy(args, out) -> int:
    report = run_monodromy(args.table)
    out.write(format_monodromy(report))
    return EXIT_OK if report.ok else EXIT_MATH


def _cmd_mum(args, out) -> int:
    mats = parse_matrices(Path(args.matrices).read_text())
    if not mats:
        raise ParseError("no matrices in file")
    if args.log:
        mats = [monodromy.nilpotent_log(m) for m in mats]
    rep = monodromy.mum_classify(mats, args.weights)
    out.write(format_mum(rep))
    return EXIT_OK


def _cmd_cone(args, out) -> int:
    a, b, c = args.quadratic
    rays = run_cone(a, b, c, args.count)
    for r in rays:
        line = f"{r.x} {r.y}"
        if args.slopes:
            line += f"\t{r.slope()}"
        out.write(line + "\n")
    return EXIT_OK


_USAGE_ERRORS = (ParseError, SemanticError, OSError, KeyError, ValueError)


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    handler = {
        "predict": _cmd_predict,
        "monodromy": _cmd_monodromy,
        "mum": _cmd_mum,
        "cone": _cmd_cone,
    }[args.command]
    try:
        return handler(args, out)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MirrorCountError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
