"""Command-line front end.

Examples
--------
::

    fracevo kernel --weight discrete:0.5 --which k1 --t 0.1:10:50
    fracevo density --weight constant --kind rl --t 1 --tau 0:20:200
    fracevo coeffs --weight discrete:0.5 --kind caputo --s 2 --n 3
    fracevo solve --weight discrete:0.5 --generator laplace1d:16 --a sine --t 0.5,1,2
    fracevo verify --suite convolution --weight constant

Exit codes: 0 success, 1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import FracEvoError
from .generators import Generator, parse_generator
from .kernels import KernelId, k1_eval, kernel_eval
from .laplace import DENSITY_CONTOUR, FixedTalbot
from .parallel import max_workers
from .solvers.postwidder import MAX_N, postwidder_coeffs, solve_postwidder
from .solvers.resolvent import solve_resolvent
from .solvers.subordination import TAIL_TOL, solve_subordination, subordination_density
from .solvers.volterra import solve_volterra
from .symbols import ProblemKind, format_weight, parse_weight, validate
from .verify import SUITES, run_suite

COMMANDS = ("kernel", "density", "coeffs", "solve", "verify")
SOLVE_METHODS = ("resolvent", "subordination", "volterra", "postwidder")
FLOAT_FMT = "%.15g"


class UsageError(Exception):
    """Bad command-line input (exit code 2)."""


@dataclass(frozen=True)
class GridSpec:
    """Explicit values or ``START:STOP:COUNT`` (linear or log spaced)."""

    text: str
    log: bool = False

    def values(self) -> np.ndarray:
        parts = self.text.split(":")
        try:
            if len(parts) == 3:
                start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
                if count < 1:
                    raise ValueError("count must be >= 1")
                if self.log:
                    if start <= 0 or stop <= 0:
                        raise ValueError("log grids need positive endpoints")
                    return np.geomspace(start, stop, count)
                return np.linspace(start, stop, count)
            if len(parts) == 1:
                return np.array([float(v) for v in self.text.split(",")])
        except ValueError as exc:
            raise UsageError(f"bad grid {self.text!r}: {exc}") from None
        raise UsageError(f"bad grid {self.text!r}: use START:STOP:COUNT or a comma list")


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one invocation."""

    command: str
    weight: str
    kind: str = "caputo"
    generator: str = "scalar:-1"
    initial: str = "ones"
    t: str = "1"
    log_grid: bool = False
    tau: str = "0:10:101"
    which: str = "k1"
    kernel_method: str = "auto"
    method: str = "resolvent"
    s: float = 1.0
    n: int = 16
    steps: int = 1024
    contour_nodes: int = 32
    tail_tol: float = TAIL_TOL
    suite: str = "all"
    format: str = "csv"
    output: str = "-"

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        _check_config(cfg)
        return cfg

    def time_grid(self) -> np.ndarray:
        return GridSpec(self.t, self.log_grid).values()


# ------------------------------------------------------------------ parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p: argparse.ArgumentParser, kind: bool = True):
    p.add_argument("--weight", required=True, help="discrete:ALPHA[,AJ:BJ]* | constant | poly:C0,C1,...")
    if kind:
        p.add_argument("--kind", default="caputo", help="caputo or rl")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default="-", help="output path ('-' for stdout)")


def _add_grid(p: argparse.ArgumentParser, default: str | None = None):
    p.add_argument("--t", required=default is None, default=default,
                   help="times: START:STOP:COUNT or comma list")
    p.add_argument("--log", dest="log_grid", action="store_true", help="log-spaced START:STOP:COUNT")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracevo", description="Distributed-order fractional evolution equations")
    parser.add_argument("--config", help="replay a RunConfig JSON file instead of parsing flags")
    parser.add_argument("--save-config", help="write the parsed RunConfig as JSON to this path")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("kernel", help="evaluate k1 or k2 on a time grid")
    _add_common(p, kind=False)
    _add_grid(p)
    p.add_argument("--which", choices=("k1", "k2"), default="k1")
    p.add_argument("--method", dest="kernel_method", default="auto",
                   choices=("auto", "closed", "spectral", "inversion"))

    p = sub.add_parser("density", help="subordination density phi(t, tau)")
    _add_common(p)
    _add_grid(p)
    p.add_argument("--tau", default="0:10:101", help="tau grid: START:STOP:COUNT or comma list")

    p = sub.add_parser("coeffs", help="Post-Widder coefficients b_{n,k,p}(s)")
    _add_common(p)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--n", type=int, default=4)

    p = sub.add_parser("solve", help="solve u(t) for a generator and initial datum")
    _add_common(p)
    _add_grid(p)
    p.add_argument("--generator", default="scalar:-1",
                   help="scalar:LAM | diag:L1,... | laplace1d:N[,H] | zero[:N]")
    p.add_argument("--a", dest="initial", default="ones",
                   help="ones | sine | e:K | comma list of values")
    p.add_argument("--method", choices=SOLVE_METHODS, default="resolvent")
    p.add_argument("--steps", type=int, default=1024, help="Volterra steps up to max(t)")
    p.add_argument("--n", type=int, default=16, help="Post-Widder order")
    p.add_argument("--contour-nodes", type=int, default=32, help="FixedTalbot nodes")
    p.add_argument("--tail-tol", type=float, default=TAIL_TOL, help="subordination tail mass")

    p = sub.add_parser("verify", help="run a verification suite")
    _add_common(p)
    _add_grid(p, default="0.1,1,10")
    p.add_argument("--suite", default="all", choices=SUITES + ("all",))
    p.add_argument("--generator", default="scalar:-1")
    return parser


def _check_config(cfg: RunConfig) -> None:
    """Validate every spec before any computation (raises UsageError)."""
    if cfg.command not in COMMANDS:
        raise UsageError(f"unknown command {cfg.command!r}")
    try:
        w = parse_weight(cfg.weight)
    except ValueError as exc:
        raise UsageError(f"argument --weight: {exc}") from None
    errors = [d.message for d in validate(w) if d.level == "error"]
    if errors:
        raise UsageError(f"argument --weight: {'; '.join(errors)}")
    try:
        ProblemKind.parse(cfg.kind)
    except ValueError as exc:
        raise UsageError(f"argument --kind: {exc}") from None
    if cfg.command in ("solve", "verify"):
        try:
            A = parse_generator(cfg.generator)
        except (ValueError, FracEvoError) as exc:
            raise UsageError(f"argument --generator: {exc}") from None
        if cfg.command == "solve":
            try:
                _initial(cfg.initial, A)
            except ValueError as exc:
                raise UsageError(f"argument --a: {exc}") from None
    if cfg.command in ("kernel", "density", "solve", "verify"):
        t = GridSpec(cfg.t, cfg.log_grid).values()
        if np.any(t < 0) or (cfg.command != "solve" and np.any(t <= 0)):
            raise UsageError("argument --t: times must be > 0")
    if cfg.command == "density":
        if np.any(GridSpec(cfg.tau).values() < 0):
            raise UsageError("argument --tau: tau must be >= 0")
    if cfg.command in ("coeffs",) or (cfg.command == "solve" and cfg.method == "postwidder"):
        if not 1 <= cfg.n <= MAX_N:
            raise UsageError(f"argument --n: must be in 1..{MAX_N}")
    if cfg.command == "coeffs" and not cfg.s > 0:
        raise UsageError("argument --s: must be > 0")
    if cfg.command == "solve":
        if cfg.steps < 2:
            raise UsageError("argument --steps: must be >= 2")
        if cfg.contour_nodes < 4:
            raise UsageError("argument --contour-nodes: must be >= 4")
        if not cfg.tail_tol > 0:
            raise UsageError("argument --tail-tol: must be > 0")


def parse_args(argv) -> RunConfig:
    """Parse command-line arguments into a validated :class:`RunConfig`.

    Raises
    ------
    UsageError
        On unknown flags, malformed specs or invariant violations.
    """
    ns = build_parser().parse_args(list(argv))
    if ns.config:
        with open(ns.config) as fh:
            return RunConfig.from_json(fh.read())
    if ns.command is None:
        raise UsageError("a command is required: " + ", ".join(COMMANDS))
    data = {k: v for k, v in vars(ns).items() if k in {f.name for f in fields(RunConfig)}}
    cfg = RunConfig(**data)
    _check_config(cfg)
    if ns.save_config:
        with open(ns.save_config, "w") as fh:
            fh.write(cfg.to_json() + "\n")
    return cfg


def _initial(text: str, A: Generator) -> np.ndarray:
    n = A.dim
    key = text.strip().lower()
    if key == "ones":
        return np.ones(n)
    if key == "sine":
        return np.sin(np.arange(1, n + 1) * math.pi / (n + 1))
    if key.startswith("e:"):
        k = int(key[2:])
        if not 1 <= k <= n:
            raise ValueError(f"unit vector index {k} outside 1..{n}")
        return np.eye(n)[k - 1]
    vals = np.array([float(v) for v in text.split(",")])
    if vals.size != n:
        raise ValueError(f"initial datum has {vals.size} entries, generator dimension is {n}")
    return vals


# ------------------------------------------------------------------ running


def _emit(cfg: RunConfig, columns: list[str], rows, meta: dict, out) -> None:
    if cfg.format == "json":
        payload = {"meta": meta, "columns": columns,
                   "rows": [[float(v) for v in r] for r in rows]}
        out.write(json.dumps(payload, indent=1) + "\n")
        return
    for key in sorted(meta):
        out.write(f"# {key}: {meta[key]}\n")
    out.write(",".join(columns) + "\n")
    for r in rows:
        out.write(",".join(FLOAT_FMT % v for v in r) + "\n")


def _execute(cfg: RunConfig, out, err) -> int:
    w = parse_weight(cfg.weight)
    kind = ProblemKind.parse(cfg.kind)
    meta = {"command": cfg.command, "weight": format_weight(w), "kind": kind.value}
    if cfg.command == "kernel":
        t = cfg.time_grid()
        which = KernelId.parse(cfg.which)
        if which is KernelId.K1:
            vals = k1_eval(w, t, cfg.kernel_method)
        else:
            vals = kernel_eval(w, which, t)
        meta.update(kernel=which.value, method=cfg.kernel_method)
        _emit(cfg, ["t", "value"], zip(t, np.atleast_1d(vals)), meta, out)
        return 0
    if cfg.command == "density":
        taus = GridSpec(cfg.tau).values()
        rows = []
        for ti in cfg.time_grid():
            phi = subordination_density(w, kind, ti, taus, DENSITY_CONTOUR)
            rows.extend((ti, tau, p) for tau, p in zip(taus, phi))
        meta.update(method="inversion", contour=repr(DENSITY_CONTOUR))
        _emit(cfg, ["t", "tau", "phi"], rows, meta, out)
        return 0
    if cfg.command == "coeffs":
        table = postwidder_coeffs(w, kind, cfg.s, cfg.n)
        b = table.entries
        rows = [(k, p, b[(k, p)], table.scaled[(k, p)]) for (k, p) in sorted(b)]
        meta.update(n=cfg.n, s=cfg.s, g=table.g, leibniz_sum=table.leibniz_sum())
        _emit(cfg, ["k", "p", "b", "b_scaled"], rows, meta, out)
        return 0
    if cfg.command == "solve":
        A = parse_generator(cfg.generator)
        a = _initial(cfg.initial, A)
        t = cfg.time_grid()
        meta.update(method=cfg.method, generator=str(A))
        if cfg.method == "resolvent":
            traj = solve_resolvent(w, kind, A, a, t, FixedTalbot(cfg.contour_nodes), include_origin=False)
            times, states = traj.times, traj.states
            meta["contour"] = repr(FixedTalbot(cfg.contour_nodes))
        elif cfg.method == "subordination":
            traj = solve_subordination(w, kind, A, a, t, tail_tol=cfg.tail_tol, include_origin=False)
            times, states = traj.times, traj.states
            meta["tail_tol"] = cfg.tail_tol
        elif cfg.method == "postwidder":
            times = np.unique(t)
            states = np.array([a if ti == 0 else solve_postwidder(w, kind, A, a, ti, cfg.n) for ti in times])
            meta["n"] = cfg.n
        else:
            t_end = float(np.max(t))
            traj = solve_volterra(w, kind, A, a, t_end, cfg.steps)
            # report the grid points nearest to the requested times
            idx = np.unique(np.rint(np.unique(t) / traj.meta["dt"]).astype(int))
            times, states = traj.times[idx], traj.states[idx]
            meta.update(steps=cfg.steps, dt=traj.meta["dt"])
        cols = ["t"] + [f"u_{i + 1}" for i in range(A.dim)]
        _emit(cfg, cols, (np.concatenate(([ti], u)) for ti, u in zip(times, states)), meta, out)
        return 0
    # verify
    A = parse_generator(cfg.generator)
    results = run_suite(cfg.suite, w, kind, A, cfg.time_grid())
    ok = all(r.passed for r in results)
    if cfg.format == "json":
        payload = {"meta": meta, "passed": ok,
                   "suites": [{"name": r.name, "passed": r.passed, "lines": r.lines} for r in results]}
        out.write(json.dumps(payload, indent=1, default=str) + "\n")
    else:
        for r in results:
            out.write(f"[{r.name}] {'PASS' if r.passed else 'FAIL'}\n")
            for line in r.lines:
                out.write(f"  {line}\n")
    return 0 if ok else 1


def run(cfg: RunConfig, out=None, err=None) -> int:
    """Execute a config; returns the exit code."""
    err = sys.stderr if err is None else err
    try:
        _check_config(cfg)
    except UsageError as exc:
        err.write(f"fracevo: usage error: {exc}\n")
        return 2
    try:
        if cfg.output != "-" and out is None:
            with open(cfg.output, "w") as fh:
                return _execute(cfg, fh, err)
        return _execute(cfg, sys.stdout if out is None else out, err)
    except FracEvoError as exc:
        err.write(f"fracevo: {type(exc).__name__}: {exc}\n")
        return 1


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
        max_workers()
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"fracevo: usage error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"fracevo: {exc}\n")
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
