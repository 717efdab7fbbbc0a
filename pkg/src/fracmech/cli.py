"""
Command-line front end.

Every subcommand writes a CSV table (``t,value[,residual]``, values printed
with 17 significant digits) or a single-series SVG line plot. Settings come
from an optional ``key = value`` config file and are overridden by flags.

Exit status: 0 success, 1 I/O failure, 2 invalid configuration,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from . import combinatorics, fracops, mechanics, ostro
from .fracops import UniformGrid
from .smooth import FunctionSpecError, SmoothFn

COMMANDS = ("deriv", "faa", "el-solve", "hamilton-check", "ostro", "sweep")


class ConfigError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"invalid {field}: {message}")
        self.field = field


@dataclass(frozen=True)
class RunConfig:
    command: str
    alpha: float = 0.5
    a: float = 0.0
    b: float = 1.0
    n_points: int = 1025
    c: float = 1.0
    K: int = 8
    fn: str = "t^2"
    F: str = "y^2"
    h: str = "t"
    q: str = "t"
    x0: float = 0.0
    side: str = "left"
    g: str = "discrete"
    kind: str = "power"
    ns: str = "513,1025,2049,4097"
    tol: float | None = None
    output: str | None = None
    format: str = "csv"

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError("command", f"expected one of {', '.join(COMMANDS)}, got {self.command!r}")
        if not (math.isfinite(self.alpha) and 0 < self.alpha <= 1):
            raise ConfigError("alpha", f"must lie in (0, 1], got {self.alpha}")
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ConfigError("a", f"need finite a < b, got a={self.a}, b={self.b}")
        if self.n_points < 2:
            raise ConfigError("n_points", f"must be >= 2, got {self.n_points}")
        if not 1 <= self.K <= combinatorics.MAX_PARTITION_ORDER:
            raise ConfigError("K", f"must lie in [1, {combinatorics.MAX_PARTITION_ORDER}], got {self.K}")
        if not math.isfinite(self.c):
            raise ConfigError("c", "must be finite")
        for name, allowed in (("side", ("left", "right")), ("g", ("discrete", "analytic")),
                              ("kind", ("power", "equivalence")), ("format", ("csv", "svg"))):
            if getattr(self, name) not in allowed:
                raise ConfigError(name, f"expected one of {', '.join(allowed)}, got {getattr(self, name)!r}")
        for name in ("fn", "F", "h", "q"):
            self.function(name)
        self.sweep_sizes()
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol", f"must be positive, got {self.tol}")
        return self

    def function(self, name: str) -> SmoothFn:
        try:
            return SmoothFn.parse(getattr(self, name))
        except FunctionSpecError as exc:
            raise ConfigError(name, str(exc)) from None

    def sweep_sizes(self) -> list[int]:
        try:
            sizes = [int(s) for s in self.ns.split(",") if s.strip()]
        except ValueError:
            raise ConfigError("ns", f"expected comma-separated integers, got {self.ns!r}") from None
        if len(sizes) < 2 or any(n < 2 for n in sizes):
            raise ConfigError("ns", "need at least two grid sizes >= 2")
        return sizes

    @property
    def grid(self) -> UniformGrid:
        return UniformGrid(self.a, self.b, self.n_points)

    def dump(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            lines.append(f"{f.name} = {v!r}" if isinstance(v, float) else f"{f.name} = {v}")
        return "\n".join(lines) + "\n"


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "int":
            return int(raw)
        if kind in ("float", "float | None"):
            return float(raw)
    except ValueError:
        raise ConfigError(key, f"cannot convert {raw!r}") from None
    return raw


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"line {lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigError(key, f"unknown key on line {lineno}")
        out[key] = _convert(key, raw)
    return out


# {{{ argument parsing

def _add_common(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="key = value config file")
    p.add_argument("--dump-config", action="store_true", default=S,
                   help="print the effective configuration and exit")
    p.add_argument("--alpha", type=float, default=S)
    p.add_argument("--a", type=float, default=S)
    p.add_argument("--b", type=float, default=S)
    p.add_argument("--n", dest="n_points", type=int, default=S)
    p.add_argument("--c", type=float, default=S)
    p.add_argument("--K", type=int, default=S, help="truncation order")
    p.add_argument("--fn", default=S, help="function of t for 'deriv' and 'sweep'")
    p.add_argument("--F", default=S, help="outer function F(y)")
    p.add_argument("--h", default=S, help="inner function h(t)")
    p.add_argument("--q", default=S, help="chiral profile q(y)")
    p.add_argument("--x0", type=float, default=S)
    p.add_argument("--side", default=S)
    p.add_argument("--g", default=S, help="constant term: discrete or analytic")
    p.add_argument("--kind", default=S, help="sweep kind: power or equivalence")
    p.add_argument("--ns", default=S, help="comma-separated grid sizes for 'sweep'")
    p.add_argument("--tol", type=float, default=S)
    p.add_argument("--out", dest="output", default=S)
    p.add_argument("--format", default=S)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracmech", description="Fractional Riemann-Liouville operators and mechanics."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "deriv": "discrete RL derivative of --fn",
        "faa": "fractional derivative of F(h(t)) via the Faa di Bruno series",
        "el-solve": "solve the free particle plus C D^alpha q equation of motion",
        "hamilton-check": "compare the Euler-Lagrange and Hamilton routes",
        "ostro": "Ostrogradski Euler-Lagrange forms for a chiral profile",
        "sweep": "grid-refinement convergence study",
    }
    for name in COMMANDS:
        _add_common(sub.add_parser(name, help=helps[name]))
    return parser


def load_config(argv: Sequence[str] | None) -> tuple[RunConfig, bool]:
    ns = vars(build_parser().parse_args(argv))
    dump = ns.pop("dump_config", False)
    values = {}
    path = ns.pop("config", None)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                values.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path!r}: {exc.strerror}") from None
    values.pop("command", None)
    values.update(ns)
    return RunConfig(**values).validate(), dump

# }}}


# {{{ commands

def _deriv(cfg: RunConfig):
    grid = cfg.grid
    op = fracops.rl_left if cfg.side == "left" else fracops.rl_right
    return grid.nodes, op(cfg.function("fn"), cfg.alpha, grid).values, None


def _faa(cfg: RunConfig):
    grid = cfg.grid
    spec = combinatorics.CompositeSpec(cfg.function("F"), cfg.function("h"))
    gl = fracops.rl_left(fracops.SampledPath(grid, spec(grid.nodes)), cfg.alpha, grid).values
    t = grid.nodes[1:]
    vals = np.array([combinatorics.frac_faa_di_bruno(spec, cfg.alpha, cfg.a, ti, cfg.K) for ti in t])
    return t, vals, vals - gl[1:]


def _el_solve(cfg: RunConfig):
    q = mechanics.solve_example1(cfg.alpha, cfg.c, cfg.grid, cfg.g)
    return q.nodes, q.values, mechanics.example1_residual(cfg.alpha, cfg.c, q, cfg.g)


def _hamilton(cfg: RunConfig):
    rep = mechanics.el_hamilton_equivalence(cfg.alpha, cfg.c, cfg.grid, cfg.g)
    print(f"max_discrepancy = {rep.discrepancy:.17g}", file=sys.stderr)
    print(f"route_gap = {rep.route_gap:.17g}", file=sys.stderr)
    if cfg.tol is not None and rep.discrepancy > cfg.tol:
        raise mechanics.NumericalError(f"discrepancy {rep.discrepancy:.3e} exceeds tol {cfg.tol:.3e}")
    return rep.q.nodes, rep.p.values, rep.hamilton_residual


def _ostro(cfg: RunConfig):
    F, field = cfg.function("F"), ostro.ChiralField(cfg.function("q"), cfg.x0)
    t = cfg.grid.nodes[1:]
    exp = np.array([ostro.el_expanded(F, cfg.alpha, cfg.a, field, ti, cfg.K) for ti in t])
    cmp_ = np.array([ostro.el_compact(F, cfg.alpha, cfg.a, field, ti, cfg.K) for ti in t])
    return t, exp, exp - cmp_


def _sweep_one(cfg: RunConfig, n: int) -> float:
    grid = UniformGrid(cfg.a, cfg.b, n)
    width = cfg.b - cfg.a
    if cfg.kind == "power":
        f = cfg.function("fn")
        mask = grid.nodes >= cfg.a + 0.25 * width
        t = grid.nodes[mask]
        exact = np.asarray(fracops.rl_left_exact(f, cfg.alpha, cfg.a, t))
        approx = fracops.rl_left(f, cfg.alpha, grid).values[mask]
        return float(np.max(np.abs(approx / exact - 1.0)))
    rep = mechanics.el_hamilton_equivalence(
        cfg.alpha, cfg.c, grid, "analytic", window=(cfg.a, cfg.b - 0.25 * width)
    )
    return rep.discrepancy


def _sweep(cfg: RunConfig):
    sizes = cfg.sweep_sizes()
    workers = int(os.environ.get("FRACMECH_NUM_THREADS", "0")) or min(4, len(sizes))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        errors = list(pool.map(lambda n: _sweep_one(cfg, n), sizes))
    orders = [math.nan]
    for i in range(1, len(sizes)):
        h0, h1 = 1.0 / (sizes[i - 1] - 1), 1.0 / (sizes[i] - 1)
        orders.append(math.log(errors[i - 1] / errors[i]) / math.log(h0 / h1))
    return np.array(sizes, dtype=np.float64), np.array(errors), np.array(orders)


_RUNNERS = {
    "deriv": _deriv,
    "faa": _faa,
    "el-solve": _el_solve,
    "hamilton-check": _hamilton,
    "ostro": _ostro,
    "sweep": _sweep,
}

# }}}


# {{{ output

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def render_csv(header: Sequence[str], columns: Sequence[np.ndarray]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in zip(*columns):
        w.writerow([str(int(row[0])) if header[0] == "n_points" else _fmt(row[0])]
                   + [_fmt(v) for v in row[1:]])
    return buf.getvalue()


def render_svg(x: np.ndarray, y: np.ndarray, xlabel: str, ylabel: str) -> str:
    W, H, m = 640, 400, 50
    finite = np.isfinite(y)
    x, y = x[finite], y[finite]
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = float(y.min()), float(y.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    px = m + (x - x0) / (x1 - x0) * (W - 2 * m)
    py = H - m - (y - y0) / (y1 - y0) * (H - 2 * m)
    pts = " ".join(f"{a:.3f},{b:.3f}" for a, b in zip(px, py))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">\n'
        f'<rect x="{m}" y="{m}" width="{W - 2 * m}" height="{H - 2 * m}" fill="none" stroke="black"/>\n'
        f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{pts}"/>\n'
        f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle" font-size="14">{xlabel}</text>\n'
        f'<text x="14" y="{H / 2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 14 {H / 2})">{ylabel}</text>\n'
        f'<text x="{m}" y="{H - m + 16}" font-size="11">{_fmt(x0)[:10]}</text>\n'
        f'<text x="{W - m}" y="{H - m + 16}" text-anchor="end" font-size="11">{_fmt(x1)[:10]}</text>\n'
        f'<text x="{m - 4}" y="{H - m}" text-anchor="end" font-size="11">{_fmt(y0)[:10]}</text>\n'
        f'<text x="{m - 4}" y="{m + 4}" text-anchor="end" font-size="11">{_fmt(y1)[:10]}</text>\n'
        "</svg>\n"
    )


def execute(cfg: RunConfig) -> str:
    """Run a validated config and return the rendered output."""
    x, v, r = _RUNNERS[cfg.command](cfg)
    if not np.all(np.isfinite(v)):
        raise mechanics.NumericalError("non-finite values in the result")
    if cfg.command == "sweep":
        header, cols = ["n_points", "error", "observed_order"], [x, v, r]
    else:
        header = ["t", "value"] + (["residual"] if r is not None else [])
        cols = [x, v] + ([r] if r is not None else [])
    if cfg.format == "svg":
        return render_svg(x, v, header[0], header[1])
    return render_csv(header, cols)

# }}}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg, dump = load_config(argv)
    except ConfigError as exc:
        print(f"fracmech: {exc}", file=sys.stderr)
        return 2
    except TypeError as exc:
        print(f"fracmech: invalid configuration: {exc}", file=sys.stderr)
        return 2
    if dump:
        sys.stdout.write(cfg.dump())
        return 0
    try:
        text = execute(cfg)
    except (ArithmeticError, ValueError) as exc:
        print(f"fracmech: numerical failure: {exc}", file=sys.stderr)
        return 3
    try:
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"fracmech: cannot write output: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
