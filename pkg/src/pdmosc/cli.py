"""Command-line front end.

Subcommands::

    pdmosc spectrum --omega 1 --alpha 1 --l 0 --d 3 --nmax 4
    pdmosc verify   --omega 1 --alpha 0.5 --l 1 -N 24
    pdmosc verify   --default-matrix --format csv
    pdmosc oracle   --omega 1 --alpha 0.5 --l 0 --refinements 1000 2000 4000
    pdmosc limit    --omega 1 --l 0 --alphas 0.1 0.01 0.001

Exit status is 0 when every check passes, 1 when a check fails and 2 for
invalid input.  ``PDMOSC_TOLERANCE`` overrides every relation tolerance
unless ``--tol`` is given.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import algebra, oracle
from .errors import DomainError, NumericalError, ParameterError
from .gridops import SCHEMES
from .params import OscParams, derive_params, lowest_weights
from .report import dumps_json, reports_to_csv, reports_to_json
from .states import energy

__all__ = ["RunConfig", "build_parser", "parse_config", "run", "main"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
TOLERANCE_ENV = "PDMOSC_TOLERANCE"


class UsageError(Exception):
    """Invalid command line or environment; maps to exit status 2."""


class _Parser(argparse.ArgumentParser):
    # argparse prints the whole usage block; keep diagnostics to one line
    def error(self, message):
        raise UsageError(message)


def _finite(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return x


def _positive(text):
    x = _finite(text)
    if x <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return x


def _count(text):
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


@dataclass
class RunConfig:
    """Validated invocation; ``params`` is empty only for ``verify --default-matrix``."""

    command: str
    params: list = field(default_factory=list)
    nmax: int = 4
    basis: int = 24
    grid: Optional[str] = None
    grid_size: Optional[int] = None
    radius: Optional[float] = None
    fmt: str = "json"
    output: Optional[str] = None
    tol: Optional[float] = None
    refinements: tuple = (1000, 2000, 4000)
    model: Optional[str] = None
    mapping: Optional[str] = None
    alphas: tuple = (0.1, 0.01, 0.001)


def _add_params(sp, alpha=True):
    sp.add_argument("--omega", type=_positive, default=1.0, help="frequency (default 1)")
    if alpha:
        sp.add_argument("--alpha", type=_finite, default=0.0, help="deformation >= 0 (default 0)")
    sp.add_argument("--l", type=_count, default=0, help="angular momentum (default 0)")
    sp.add_argument("--d", type=_count, default=3, help="dimension (default 3)")
    sp.add_argument("--one-dim", choices=("even", "odd"), help="line oscillator of the given parity")


def _add_output(sp):
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--output", "-o", help="write here instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pdmosc", description="Radial oscillator with position-dependent mass: spectra and algebra checks.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("spectrum", help="tabulate the closed-form levels")
    _add_params(sp)
    sp.add_argument("--nmax", type=_count, default=4, help="highest n (default 4)")
    _add_output(sp)

    sp = sub.add_parser("verify", help="check commutation relations, ladder actions and Casimirs")
    _add_params(sp)
    sp.add_argument("--basis", "-N", type=_count, default=24, help="basis size (default 24)")
    sp.add_argument("--grid", choices=SCHEMES, help="quadrature scheme (default: exact Gauss rule)")
    sp.add_argument("--grid-size", type=_count, help="number of quadrature nodes")
    sp.add_argument("--radius", type=_positive, help="truncation radius for truncated_uniform")
    sp.add_argument("--default-matrix", action="store_true", help="run the built-in parameter matrix")
    sp.add_argument("--tol", type=_positive, help="override every tolerance")
    _add_output(sp)

    sp = sub.add_parser("oracle", help="finite-difference spectrum against the closed form")
    _add_params(sp)
    sp.add_argument("--nmax", type=_count, default=4, help="highest n compared (default 4, at most 9)")
    sp.add_argument("--refinements", type=_count, nargs="+", default=[1000, 2000, 4000])
    sp.add_argument("--model", choices=("const", "pdm"), help="default: pdm when alpha > 0")
    sp.add_argument("--mapping", choices=("geodesic", "uniform"), help="PDM grid (default geodesic)")
    sp.add_argument("--radius", type=_positive, help="truncation radius for uniform grids")
    sp.add_argument("--tol", type=_positive, help="override the extrapolated-error tolerance")
    _add_output(sp)

    sp = sub.add_parser("limit", help="deformed generators against su(1,1) as alpha -> 0")
    _add_params(sp, alpha=False)
    sp.add_argument("--alphas", type=_positive, nargs="+", default=[0.1, 0.01, 0.001])
    sp.add_argument("--basis", "-N", type=_count, default=20)
    _add_output(sp)
    return ap


def _env_tolerance():
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{TOLERANCE_ENV} is not a number: {raw!r}") from None
    if not math.isfinite(tol) or tol <= 0:
        raise UsageError(f"{TOLERANCE_ENV} must be a finite positive number, got {raw!r}")
    return tol


def _params_from(ns, alpha=None):
    a = ns.alpha if alpha is None else alpha
    return derive_params(ns.omega, a, ns.l, ns.d, ns.one_dim)


def parse_config(argv=None) -> RunConfig:
    """Parse and validate ``argv``; raises :class:`UsageError` on bad input."""
    ns = build_parser().parse_args(argv)
    if ns.command is None:
        raise UsageError("missing command (spectrum, verify, oracle or limit)")
    cfg = RunConfig(command=ns.command, fmt=ns.format, output=ns.output)
    try:
        if ns.command == "limit":
            cfg.params = [_params_from(ns, 0.0)]
            cfg.alphas = tuple(ns.alphas)
            if len(set(cfg.alphas)) < 2:
                raise UsageError("--alphas needs at least two distinct values")
        elif ns.command == "verify" and ns.default_matrix:
            cfg.params = algebra.default_parameter_sets()
        else:
            cfg.params = [_params_from(ns)]
    except ParameterError as exc:
        raise UsageError(str(exc)) from None

    if ns.command in ("spectrum", "oracle"):
        cfg.nmax = ns.nmax
        if cfg.nmax < 0:
            raise UsageError(f"--nmax must be >= 0, got {cfg.nmax}")
    if ns.command in ("verify", "limit"):
        cfg.basis = ns.basis
        if cfg.basis < 4:
            raise UsageError(f"--basis must be >= 4, got {cfg.basis}")
    if ns.command == "verify":
        cfg.grid, cfg.grid_size, cfg.radius = ns.grid, ns.grid_size, ns.radius
        if cfg.grid == "truncated_uniform" and cfg.radius is None:
            raise UsageError("--grid truncated_uniform needs --radius")
    if ns.command == "oracle":
        if cfg.nmax > 9:
            raise UsageError(f"--nmax must be <= 9 for the oracle, got {cfg.nmax}")
        cfg.refinements = tuple(ns.refinements)
        if len(set(cfg.refinements)) < 2 or min(cfg.refinements) < 200:
            raise UsageError("--refinements needs at least two distinct sizes, each >= 200")
        cfg.model = ns.model or ("pdm" if cfg.params[0].deformed else "const")
        if cfg.model == "pdm" and not cfg.params[0].deformed:
            raise UsageError("--model pdm needs --alpha > 0")
        cfg.mapping, cfg.radius = ns.mapping, ns.radius
    if ns.command in ("verify", "oracle"):
        cfg.tol = ns.tol if ns.tol is not None else _env_tolerance()
    return cfg


def _spectrum_payload(p: OscParams, nmax):
    k, p0 = lowest_weights(p)
    model = "pdm" if p.deformed else "const"
    header = {"model": model, "lambda": p.lam, "Delta": p.Delta, "s": p.s if p.deformed else None, "k": k, "p0": p0}
    rows = [{"n": n, "energy": energy(p, n, model)} for n in range(nmax + 1)]
    return {"params": p.as_dict(), "header": header, "rows": rows}


def _spectrum_csv(payloads):
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ("omega", "alpha", "L", "model", "lambda", "Delta", "s", "k", "p0", "n", "energy")
    w.writerow(cols)
    for pl in payloads:
        prm, hd = pl["params"], pl["header"]
        for row in pl["rows"]:
            vals = (prm["omega"], prm["alpha"], prm["L"], hd["model"], hd["lambda"], hd["Delta"], hd["s"], hd["k"], hd["p0"], row["n"], row["energy"])
            w.writerow(["" if v is None else (format(v, ".17g") if isinstance(v, float) else v) for v in vals])
    return buf.getvalue()


def cmd_spectrum(cfg: RunConfig):
    payloads = [_spectrum_payload(p, cfg.nmax) for p in cfg.params]
    if cfg.fmt == "csv":
        return _spectrum_csv(payloads), EXIT_OK
    text = dumps_json(payloads[0] if len(payloads) == 1 else payloads) + "\n"
    return text, EXIT_OK


def cmd_verify(cfg: RunConfig):
    reports = []
    for p in cfg.params:
        reports.extend(algebra.verify(p, cfg.basis, cfg.tol, cfg.grid, cfg.grid_size, cfg.radius))
    return reports


def cmd_oracle(cfg: RunConfig):
    kw = {} if cfg.tol is None else {"tol": cfg.tol}
    p = cfg.params[0]
    return [
        oracle.compare_to_analytic(p, cfg.model, count=cfg.nmax + 1, refinements=cfg.refinements, mapping=cfg.mapping, R=cfg.radius, **kw)
    ]


def cmd_limit(cfg: RunConfig):
    return [algebra.verify_limit(cfg.params[0], cfg.alphas, cfg.basis)]


_COMMANDS = {"verify": cmd_verify, "oracle": cmd_oracle, "limit": cmd_limit}


def run(cfg: RunConfig):
    """Execute ``cfg``; returns ``(text, exit_code)``."""
    if cfg.command == "spectrum":
        return cmd_spectrum(cfg)
    reports = _COMMANDS[cfg.command](cfg)
    text = reports_to_csv(reports) if cfg.fmt == "csv" else reports_to_json(reports)
    return text, EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        text, code = run(cfg)
    except UsageError as exc:
        print(f"pdmosc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, DomainError) as exc:
        print(f"pdmosc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"pdmosc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    try:
        _emit(text, cfg.output)
    except OSError as exc:
        print(f"pdmosc: error: cannot write {cfg.output}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
