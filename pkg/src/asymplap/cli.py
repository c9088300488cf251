"""Command-line front end.

Subcommands::

    pi-p           pi_p and lambda_{1,p}(0, L)
    spectrum       Dirichlet eigenvalues k = 1..k_max
    eigenfunction  samples (t, u, u') of a principal or k-th eigenfunction
    fucik          sampled points (mu, nu, P, N) of Fucik curves
    verify         the oracle suite, as a pass/fail report

Exit status: 0 on success, 1 on invalid input or a domain error, 2 when
``verify`` finds a failing check.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import __version__
from .eigenfunctions import build_kth, build_principal
from .errors import AccuracyError, DomainError, SearchError
from .ptrig import DEFAULT_RESOLUTION, MIN_RESOLUTION, compute_pi_p, default_resolution, get_table, lambda_k_symmetric
from .spectra import FucikCurveId, ProblemParams, all_curves, curve_asymptote, dirichlet_spectrum, sample_fucik_curve
from .verify import run_suite

COMMANDS = ("pi-p", "spectrum", "eigenfunction", "fucik", "verify")
SCHEMA_VERSION = 1


class UsageError(Exception):
    """Bad command line; reported on one line with exit status 1."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: ProblemParams
    resolution: int = DEFAULT_RESOLUTION
    fmt: str = "csv"
    output: str | None = None
    seed: int = 0
    options: dict[str, Any] = field(default_factory=dict)

    def meta(self) -> dict[str, Any]:
        return {
            "artifact": "asymplap",
            "version": __version__,
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "p": self.params.p,
            "a": self.params.a,
            "b": self.params.b,
            "L": self.params.L,
            "resolution": self.resolution,
            "seed": self.seed,
            "format": self.fmt,
            **self.options,
        }


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _curve(text: str) -> FucikCurveId:
    try:
        P, N = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected P,N but got {text!r}") from None
    return FucikCurveId(P, N)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--p", type=float, default=2.0, help="exponent, in [1.05, 20] (default 2)")
    common.add_argument("--a", type=float, default=1.0, help="conductivity for rising slopes (default 1)")
    common.add_argument("--b", type=float, default=1.0, help="conductivity for falling slopes (default 1)")
    common.add_argument("--L", type=float, default=1.0, help="interval length (default 1)")
    common.add_argument("--resolution", type=int, default=None, help=f"p-sine table nodes (default {DEFAULT_RESOLUTION})")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--output", default=None, help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")

    parser = _Parser(prog="asymplap", description="Spectra of the asymmetric p-Laplacian on (0, L).")
    parser.add_argument("--version", action="version", version=f"asymplap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("pi-p", parents=[common], help="pi_p and lambda_{1,p}(0, L)")

    sp = sub.add_parser("spectrum", parents=[common], help="Dirichlet eigenvalues")
    sp.add_argument("--k-max", type=int, default=5)

    ep = sub.add_parser("eigenfunction", parents=[common], help="eigenfunction samples")
    ep.add_argument("--k", type=int, default=1, help="eigenvalue index (default 1)")
    ep.add_argument("--variant", choices=("unshifted", "shifted"), default="unshifted")
    ep.add_argument("--sign", type=int, choices=(1, -1), default=None, help="principal eigenfunction of this sign (k must be 1)")
    ep.add_argument("--samples", type=int, default=201)

    fp = sub.add_parser("fucik", parents=[common], help="Fucik curve samples")
    fp.add_argument("--curve", type=_curve, action="append", default=None, metavar="P,N", help="repeatable; default all curves up to --max-humps")
    fp.add_argument("--max-humps", type=int, default=4)
    fp.add_argument("--mu-range", type=float, nargs=2, default=(1.5, 6.0), metavar=("LO", "HI"), help="mu range as multiples of each curve's asymptote")
    fp.add_argument("--samples", type=int, default=5)

    vp = sub.add_parser("verify", parents=[common], help="run the oracle suite")
    vp.add_argument("--picone-samples", type=int, default=1000)
    return parser


def parse_config(argv: Sequence[str] | None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    params = ProblemParams(ns.p, ns.a, ns.b, ns.L)
    resolution = ns.resolution if ns.resolution is not None else default_resolution()
    if resolution < MIN_RESOLUTION:
        raise DomainError(f"resolution must be at least {MIN_RESOLUTION}, got {resolution}")
    opts: dict[str, Any] = {}
    if ns.command == "spectrum":
        if ns.k_max < 1:
            raise DomainError(f"--k-max must be >= 1, got {ns.k_max}")
        opts["k_max"] = ns.k_max
    elif ns.command == "eigenfunction":
        if ns.k < 1:
            raise DomainError(f"--k must be >= 1, got {ns.k}")
        if ns.sign is not None and ns.k != 1:
            raise DomainError("--sign selects a principal eigenfunction and needs --k 1")
        if ns.samples < 2:
            raise DomainError(f"--samples must be >= 2, got {ns.samples}")
        opts.update(k=ns.k, variant=ns.variant, sign=ns.sign, samples=ns.samples)
    elif ns.command == "fucik":
        lo, hi = ns.mu_range
        if not 1.0 < lo < hi:
            raise DomainError(f"--mu-range needs 1 < LO < HI, got {lo} {hi}")
        if ns.samples < 2:
            raise DomainError(f"--samples must be >= 2, got {ns.samples}")
        if ns.curve is None and ns.max_humps < 2:
            raise DomainError(f"--max-humps must be >= 2, got {ns.max_humps}")
        curves = ns.curve if ns.curve is not None else all_curves(ns.max_humps)
        opts.update(curves=[[c.P, c.N] for c in curves], mu_range=[lo, hi], samples=ns.samples)
    elif ns.command == "verify":
        if ns.picone_samples < 1:
            raise DomainError(f"--picone-samples must be >= 1, got {ns.picone_samples}")
        opts["picone_samples"] = ns.picone_samples
    return RunConfig(ns.command, params, resolution, ns.fmt, ns.output, ns.seed, opts)


def _rows(cfg: RunConfig) -> tuple[list[str], list[list[Any]], bool]:
    """Header, rows and an ``ok`` flag for the configured command."""
    params, opts = cfg.params, cfg.options
    if cfg.command == "pi-p":
        pi_p = compute_pi_p(params.p)
        return ["p", "pi_p", "lambda_1"], [[params.p, pi_p, lambda_k_symmetric(params.p, params.L, 1)]], True
    if cfg.command == "spectrum":
        return ["k", "lambda"], [[ev.k, ev.value] for ev in dirichlet_spectrum(params, opts["k_max"])], True
    if cfg.command == "eigenfunction":
        if opts["sign"] is not None:
            sol = build_principal(params, opts["sign"])
        else:
            sol = build_kth(params, opts["k"], opts["variant"])
        sol = dataclasses.replace(sol, table=get_table(params.p, cfg.resolution))
        t = np.linspace(0.0, params.L, opts["samples"])
        u, du = sol.evaluate_pair(t)
        return ["t", "u", "du"], [[float(a), float(b), float(c)] for a, b, c in zip(t, u, du)], True
    if cfg.command == "fucik":
        lo, hi = opts["mu_range"]
        rows = []
        for P, N in opts["curves"]:
            curve = FucikCurveId(P, N)
            bound = curve_asymptote(params, curve)
            for pt in sample_fucik_curve(params, curve, lo * bound, hi * bound, opts["samples"]):
                rows.append([pt.mu, pt.nu, P, N])
        return ["mu", "nu", "P", "N"], rows, True
    results = run_suite(params, cfg.seed, opts["picone_samples"])
    rows = [[r.name, r.measured, r.tolerance, "pass" if r.passed else "fail"] for r in results]
    return ["check", "measured", "tolerance", "status"], rows, all(r.passed for r in results)


def _cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.16e" % value
    return str(value)


def render(header: list[str], rows: list[list[Any]], fmt: str, meta: dict[str, Any]) -> str:
    """Serialize a rectangular table as CSV (17 significant digits) or JSON."""
    if not rows or any(len(r) != len(header) for r in rows):
        raise DomainError("refusing to emit an empty or ragged table")
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(_cell(v) for v in row) + "\n")
        return buf.getvalue()
    records = [dict(zip(header, row)) for row in rows]
    return json.dumps({"meta": meta, "rows": records}, indent=2, allow_nan=True) + "\n"


def emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def dispatch(cfg: RunConfig) -> int:
    header, rows, ok = _rows(cfg)
    emit(render(header, rows, cfg.fmt, cfg.meta()), cfg.output)
    return 0 if ok else 2


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
        return dispatch(cfg)
    except UsageError as exc:
        print(f"asymplap: error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, OSError) as exc:
        msg = str(exc).replace("\n", " ")
        print(f"asymplap: error: {msg}", file=sys.stderr)
        return 1
    except (AccuracyError, SearchError) as exc:
        print(f"asymplap: verification failed: {exc}", file=sys.stderr)
        return 2
