"""Command-line front end.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 parameters outside the region where the truncation bound is proven.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BoundNotProvenError, DomainError, FunnelZetaError, NumericalError, ResourceError, StateError
from .hyperbolic import make_surface
from .lfunction import Character, evaluate_L, l_table
from .svgplot import Layer, render_svg
from .symdyn import M_CEILING
from .zerofinder import (
    THREADS_ENV,
    ZeroSet,
    find_real_delta,
    find_zeros_rect,
    zeros_from_csv,
    zeros_to_csv,
)
from .zerogeom import (
    almost_period_test,
    curves_to_csv,
    lattice_compare,
    rescale_zeros,
    sample_curves,
    windowed_hausdorff,
)
from .zetacore import CoefficientTable, evaluate_Zn, spectra_to_csv, truncation_bound

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_BOUND = 0, 2, 3, 4
FORMATS = ("csv", "json", "svg")


@dataclass
class RunConfig:
    """Settings shared by the subcommands; loadable from a JSON object."""

    b: float = 4.0
    n: int = 14
    rect: tuple[float, float, float, float] | None = None
    grid_step: float | None = None
    tol: float = 1e-9
    output_path: str | None = None
    format: str = "csv"
    threads: int = 0

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise DomainError("config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        if data.get("rect") is not None:
            data["rect"] = tuple(data["rect"])
        cfg = cls(**data)
        cfg.validate(table_ceiling=False)
        return cfg

    def validate(self, table_ceiling: bool = True) -> None:
        if not (isinstance(self.b, (int, float)) and self.b > 0 and math.isfinite(self.b)):
            raise DomainError("b must be a positive real")
        if not isinstance(self.n, int) or self.n < 0 or self.n % 2:
            raise DomainError("n must be a nonnegative even integer")
        if table_ceiling and self.n > M_CEILING:
            raise DomainError(f"n must be at most {M_CEILING}")
        if self.rect is not None:
            if len(self.rect) != 4 or not all(isinstance(x, (int, float)) for x in self.rect):
                raise DomainError("rect must be four numbers")
            a, b, c, d = self.rect
            if not (a < b and c < d) or a < -0.1 or b > 1.0:
                raise DomainError("rect must satisfy -0.1 <= sigma_min < sigma_max <= 1 and t_min < t_max")
        if self.grid_step is not None and not self.grid_step > 0:
            raise DomainError("grid_step must be positive")
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.format not in FORMATS:
            raise DomainError(f"format must be one of {FORMATS}")
        if not isinstance(self.threads, int) or self.threads < 0:
            raise DomainError("threads must be a nonnegative integer")


def _g(x: float) -> str:
    return f"{x:.17g}"


def _complex_str(z: complex) -> str:
    return f"{_g(z.real)}{'+' if z.imag >= 0 or math.isnan(z.imag) else '-'}{_g(abs(z.imag))}i"


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise DomainError(f"cannot parse complex number {text!r}") from exc


def _parse_rect(text: str) -> tuple[float, float, float, float]:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise DomainError(f"cannot parse rect {text!r}") from exc
    if len(vals) != 4:
        raise DomainError("rect needs four comma-separated numbers")
    return vals


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output_path:
        Path(cfg.output_path).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _table(cfg: RunConfig, character: int | None = None) -> CoefficientTable:
    return CoefficientTable.build(make_surface(cfg.b), cfg.n, character=character)


def _load_zeros(path: str, cfg: RunConfig) -> ZeroSet:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc
    return zeros_from_csv(text, cfg.b, cfg.n, cfg.rect)


def _zeros_output(zs: ZeroSet, cfg: RunConfig, extra: dict | None = None) -> str:
    if cfg.format == "json":
        rows = [{"re": _g(s.real), "im": _g(s.imag), "residual": _g(r), "iterations": int(k),
                 "multiplicity": int(m), **(extra or {})}
                for s, r, k, m in zip(zs.s, zs.residual, zs.iterations, zs.multiplicity)]
        return json.dumps({"b": zs.b, "n": zs.n_used, "rect": zs.rect, "audit": zs.audit, "zeros": rows},
                          indent=1) + "\n"
    if cfg.format != "csv":
        raise DomainError("zero sets are written as csv or json")
    return zeros_to_csv(zs, extra)


# -- subcommands ---------------------------------------------------------------

def cmd_surface(args, cfg):
    p = make_surface(cfg.b)
    d = dataclasses.asdict(p)
    _emit(json.dumps({k: (list(v) if isinstance(v, tuple) else v) for k, v in d.items()}, indent=1) + "\n", cfg)


def cmd_spectrum(args, cfg):
    p = make_surface(cfg.b)
    ms = [args.m] if args.m is not None else list(range(2, cfg.n + 1, 2))
    table = CoefficientTable.build(p, max(ms))
    _emit(spectra_to_csv(table.spectra[m] for m in ms), cfg)


def cmd_eval(args, cfg):
    s = _parse_complex(args.s)
    val = evaluate_Zn(s, cfg.n, _table(cfg))
    _emit(_complex_str(complex(val)) + "\n", cfg)


def cmd_delta(args, cfg):
    _emit(_g(find_real_delta(_table(cfg), cfg.n)) + "\n", cfg)


def cmd_zeros(args, cfg):
    if cfg.rect is None:
        raise DomainError("zeros needs --rect")
    zs = find_zeros_rect(_table(cfg), cfg.n, cfg.rect, cfg.grid_step, cfg.tol,
                         audit=args.audit, threads=cfg.threads or None)
    _emit(_zeros_output(zs, cfg), cfg)
    if args.audit and zs.audit[0] != zs.audit[1]:
        raise NumericalError(f"audit mismatch: winding {zs.audit[0]} vs found {zs.audit[1]}")


def cmd_rescale(args, cfg):
    zs = _load_zeros(args.input, cfg)
    r = rescale_zeros(zs, cfg.b)
    lines = ["re,im"] + [f"{_g(z.real)},{_g(z.imag)}" for z in r]
    _emit("\n".join(lines) + "\n", cfg)


def cmd_curves(args, cfg):
    _emit(curves_to_csv(sample_curves(-args.t_max, args.t_max, args.dt)), cfg)


def cmd_compare(args, cfg):
    zs = _load_zeros(args.input, cfg)
    S = args.window
    cur = sample_curves(-S - 1, S + 1, args.dt)
    rep = windowed_hausdorff(rescale_zeros(zs, cfg.b), cur.points(), (0.0, math.log(2), -S, S),
                             args.margin, cur.discretisation_error())
    out = {k: (_g(v) if isinstance(v, float) else v) for k, v in dataclasses.asdict(rep).items()}
    out["distance_times_sqrt_b"] = _g(rep.distance * math.sqrt(cfg.b))
    _emit(json.dumps(out, indent=1) + "\n", cfg)


def cmd_translate(args, cfg):
    zs = _load_zeros(args.input, cfg)
    rep = almost_period_test(zs, args.tau, args.eps, args.t0, args.height, args.edge_margin)
    out = {k: (_g(v) if isinstance(v, float) else v) for k, v in dataclasses.asdict(rep).items()}
    _emit(json.dumps(out, indent=1) + "\n", cfg)
    if not rep.passed:
        return 1
    return 0


def cmd_lattice(args, cfg):
    table = _table(cfg)
    delta = find_real_delta(table, cfg.n)
    if args.input:
        zs = _load_zeros(args.input, cfg)
    else:
        h = args.kappa + 1.0
        zs = find_zeros_rect(table, cfg.n, (max(-delta, -0.1), delta, -h, h), cfg.grid_step, cfg.tol,
                             delta=delta, threads=cfg.threads or None)
    d = lattice_compare(zs, cfg.b, args.kappa, delta)
    _emit(json.dumps({"b": cfg.b, "kappa": args.kappa, "distance": _g(d),
                      "distance_times_sqrt_b": _g(d * math.sqrt(cfg.b))}, indent=1) + "\n", cfg)


def cmd_lfunction(args, cfg):
    chi = Character(args.generator)
    if cfg.rect is None:
        s = _parse_complex(args.s or "0")
        val = evaluate_L(s, cfg.n, make_surface(cfg.b), chi)
        _emit(_complex_str(complex(val)) + "\n", cfg)
        return 0
    table = l_table(make_surface(cfg.b), chi, cfg.n)
    delta = find_real_delta(_table(cfg), cfg.n)
    zs = find_zeros_rect(table, cfg.n, cfg.rect, cfg.grid_step, cfg.tol, delta=delta,
                         threads=cfg.threads or None)
    _emit(_zeros_output(zs, cfg, {"character": chi.label}), cfg)
    return 0


def cmd_plot(args, cfg):
    layers = []
    S = args.window
    if args.curves:
        cur = sample_curves(-S, S, 1e-3)
        for j in range(4):
            layers.append(Layer(f"C{j + 1}", np.c_[cur.sigma[j], cur.t], kind="line"))
    if args.input:
        zs = _load_zeros(args.input, cfg)
        r = rescale_zeros(zs, cfg.b) if args.rescaled else zs.s
        layers.append(Layer("zeros", np.c_[r.real, r.imag], color="black", size=1.2))
    if not layers:
        raise DomainError("nothing to plot: give --input and/or --curves")
    if args.rescaled or not args.input:
        xlim, ylim = (-0.2, math.log(2) + 0.05), (-S, S)
    else:
        xlim, ylim = (cfg.rect[0], cfg.rect[1]) if cfg.rect else (-0.02, 0.25), \
                     (cfg.rect[2], cfg.rect[3]) if cfg.rect else (0.0, float(np.abs(zs.s.imag).max() or 1))
    text = render_svg(layers, xlim, ylim, title=f"b = {cfg.b:g}, n = {cfg.n}")
    _emit(text, cfg)


def cmd_bound(args, cfg):
    rep = truncation_bound(cfg.b, cfg.n, args.T, args.kappa, args.k2)
    out = {"b": cfg.b, "n": cfg.n, "T": args.T, "kappa": args.kappa, "k2": args.k2,
           "eta": _g(rep.eta), "log_eta": _g(rep.log_eta), "k0": _g(rep.k0),
           "inequality_holds": rep.inequality_holds, "lhs": _g(rep.lhs), "rhs": _g(rep.rhs)}
    _emit(json.dumps(out, indent=1) + "\n", cfg)


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--b", type=float, help="half boundary length")
    common.add_argument("--n", type=int, help="truncation order (even)")
    common.add_argument("--rect", type=str, help="sigma_min,sigma_max,t_min,t_max")
    common.add_argument("--grid-step", type=float, dest="grid_step")
    common.add_argument("--tol", type=float)
    common.add_argument("--output", "-o", dest="output_path")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--threads", type=int, help=f"worker count (overrides ${THREADS_ENV})")

    p = argparse.ArgumentParser(prog="funnelzeta", description="Zeros of Selberg zeta functions of "
                                "symmetric three-funnelled surfaces.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    add("surface", cmd_surface, "print the reflection configuration")
    sp = add("spectrum", cmd_spectrum, "length spectra as CSV")
    sp.add_argument("--m", type=int)
    sp = add("eval", cmd_eval, "evaluate Z_n at s")
    sp.add_argument("--s", required=True)
    add("delta", cmd_delta, "largest real zero of Z_n")
    sp = add("zeros", cmd_zeros, "zeros of Z_n in a rectangle")
    sp.add_argument("--audit", action="store_true", help="check against the argument principle")
    sp = add("rescale", cmd_rescale, "rescale a zero CSV")
    sp.add_argument("--input", required=True)
    sp = add("curves", cmd_curves, "sample the limit curves")
    sp.add_argument("--t-max", type=float, default=math.pi, dest="t_max")
    sp.add_argument("--dt", type=float, default=1e-3)
    sp = add("compare", cmd_compare, "Hausdorff distance between rescaled zeros and the curves")
    sp.add_argument("--input", required=True)
    sp.add_argument("--window", type=float, default=math.pi)
    sp.add_argument("--margin", type=float, default=0.1)
    sp.add_argument("--dt", type=float, default=1e-3)
    sp = add("translate", cmd_translate, "almost-period test for a vertical translation")
    sp.add_argument("--input", required=True)
    sp.add_argument("--tau", type=float, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--t0", type=float)
    sp.add_argument("--height", type=float)
    sp.add_argument("--edge-margin", type=float, default=0.0, dest="edge_margin")
    sp = add("lattice", cmd_lattice, "distance of b*zeros near the axis to the lattice")
    sp.add_argument("--kappa", type=float, default=1.05)
    sp.add_argument("--input")
    sp = add("lfunction", cmd_lfunction, "twisted zeta function: value at s, or zeros with --rect")
    sp.add_argument("--s")
    sp.add_argument("--generator", type=int, default=1, choices=(1, 2, 3))
    sp = add("plot", cmd_plot, "SVG of zeros and/or curves")
    sp.add_argument("--input")
    sp.add_argument("--curves", action="store_true")
    sp.add_argument("--rescaled", action="store_true")
    sp.add_argument("--window", type=float, default=math.pi)
    sp = add("bound", cmd_bound, "truncation bound eta(b, n, T)")
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--kappa", type=float, default=1.05)
    sp.add_argument("--k2", type=float, default=0.95)
    return p


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            cfg = RunConfig.from_json(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise DomainError(f"cannot read config: {exc}") from exc
    for name in ("b", "n", "grid_step", "tol", "output_path", "format", "threads"):
        v = getattr(args, name, None)
        if v is not None:
            setattr(cfg, name, v)
    if getattr(args, "rect", None):
        cfg.rect = _parse_rect(args.rect)
    if args.command == "plot" and getattr(args, "format", None) is None:
        cfg.format = "svg"
    # the bound is a closed formula and takes any even n; everything else needs spectra
    cfg.validate(table_ceiling=args.command != "bound")
    return cfg


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        code = args.func(args, cfg)
        return int(code or EXIT_OK)
    except BoundNotProvenError as exc:
        print(f"bound not proven: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (DomainError, ResourceError, StateError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FunnelZetaError as exc:  # pragma: no cover - all subclasses handled above
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
