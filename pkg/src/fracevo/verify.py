"""Verification suites: each returns a :class:`SuiteResult` with a verdict.

These wrap the library checks with the default tolerances so they can run
as regression gates from the command line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .generators import DirichletLaplacian1D, Generator, Scalar, hille_yosida_check
from .kernels import KernelId, cm_check, convolution_identity_check
from .symbols import DiscreteWeight, ProblemKind, WeightSpec, check_weight, sector_angle_check
from .solvers.postwidder import postwidder_coeffs
from .solvers.resolvent import solve_resolvent
from .solvers.subordination import solve_subordination, tau_rule
from .solvers.volterra import solve_volterra

DEFAULT_TIMES = (0.1, 1.0, 10.0)


@dataclass
class SuiteResult:
    name: str
    passed: bool = True
    lines: list[str] = field(default_factory=list)
    metrics: dict = field(default_factory=dict)

    def record(self, ok: bool, line: str):
        self.passed &= bool(ok)
        self.lines.append(("ok    " if ok else "FAIL  ") + line)


def random_sector_samples(count: int, seed: int = 0, log_radius: float = 6.0) -> np.ndarray:
    """Points ``r e^{i phi}`` with ``log10 r`` uniform and ``|phi| < pi``."""
    rng = np.random.default_rng(seed)
    r = 10.0 ** rng.uniform(-log_radius, log_radius, count)
    phi = rng.uniform(-math.pi, math.pi, count) * (1.0 - 1e-9)
    return r * np.exp(1j * phi)


def convolution_suite(w: WeightSpec, times=DEFAULT_TIMES, tol: float | None = None) -> SuiteResult:
    if tol is None:
        tol = 1e-6 if isinstance(w, DiscreteWeight) else 1e-5
    res = SuiteResult("convolution")
    errs = [abs(convolution_identity_check(w, t) - 1.0) for t in times]
    worst = max(errs)
    res.metrics["max_abs_error"] = worst
    res.record(worst <= tol, f"max |k1*k2 - 1| = {worst:.3e} <= {tol:g} over t in {[float(t) for t in times]}")
    return res


def cm_suite(w: WeightSpec, grid=None) -> SuiteResult:
    grid = np.geomspace(1e-2, 1e2, 41) if grid is None else np.asarray(grid)
    res = SuiteResult("cm")
    for which in KernelId:
        rep = cm_check(w, which, grid)
        res.metrics[which.value] = rep.worst
        extra = "" if rep.spectral_min is None else f", min K(r) = {rep.spectral_min:.3e}"
        res.record(rep.passed, f"{which.value}: divided-difference signs through order 4{extra}")
    return res


def sector_suite(w: WeightSpec, samples: int = 500, seed: int = 0, tol: float = 1e-12) -> SuiteResult:
    res = SuiteResult("sector")
    z = random_sector_samples(samples, seed)
    for kind in ProblemKind:
        rep = sector_angle_check(w, kind, z, tol)
        res.metrics[kind.value] = rep.slack
        res.record(rep.passed, f"{kind.value}: |arg g| <= {rep.factor:g} |arg s|, min slack "
                   f"{rep.slack:.3e} ({rep.violations}/{rep.samples} violations)")
    return res


def density_suite(w: WeightSpec, times=DEFAULT_TIMES, tol: float = 1e-6,
                  neg_tol: float = 1e-9) -> SuiteResult:
    res = SuiteResult("density")
    for kind in ProblemKind:
        for t in times:
            rule = tau_rule(w, kind, t)
            ok = abs(rule.mass - 1.0) <= tol and rule.min_density >= -neg_tol
            res.record(ok, f"{kind.value} t={t:g}: |int phi - 1| = {abs(rule.mass - 1):.3e}, "
                       f"min phi = {rule.min_density:.3e}")
    return res


def postwidder_suite(w: WeightSpec, n_max: int = 16, s_grid=(0.1, 1.0, 10.0)) -> SuiteResult:
    res = SuiteResult("postwidder")
    for kind in ProblemKind:
        worst_neg = 0.0
        worst_id = 0.0
        for n in range(1, n_max + 1):
            for s in s_grid:
                table = postwidder_coeffs(w, kind, s, n)
                worst_neg = min(worst_neg, table.min_ratio())
                worst_id = max(worst_id, abs(table.leibniz_sum() - 1.0))
        ok = worst_neg >= -1e-12 and worst_id <= 1e-9
        res.record(ok, f"{kind.value}: min b/max|b| = {worst_neg:.3e}, "
                   f"Leibniz identity error {worst_id:.3e} (n <= {n_max})")
    return res


def crossmethod_suite(w: WeightSpec, kind, A: Generator | None = None, a=None, t: float = 1.0,
                      steps: int = 1024, tol_sub: float = 1e-5, tol_vol: float = 2e-3) -> SuiteResult:
    kind = ProblemKind.parse(kind)
    A = Scalar(-1.0) if A is None else A
    a = np.ones(A.dim) if a is None else np.asarray(a, dtype=float)
    res = SuiteResult("crossmethod")
    ref = solve_resolvent(w, kind, A, a, [t], include_origin=False).states[0]
    sub = solve_subordination(w, kind, A, a, [t], include_origin=False).states[0]
    vol = solve_volterra(w, kind, A, a, t, steps).states[-1]
    scale = float(np.max(np.abs(ref)))
    e_sub = float(np.max(np.abs(sub - ref))) / scale
    e_vol = float(np.max(np.abs(vol - ref))) / scale
    res.metrics.update(subordination=e_sub, volterra=e_vol)
    res.record(e_sub <= tol_sub, f"resolvent vs subordination: {e_sub:.3e} <= {tol_sub:g}")
    res.record(e_vol <= tol_vol, f"resolvent vs volterra ({steps} steps): {e_vol:.3e} <= {tol_vol:g}")
    return res


def hille_yosida_suite(A: Generator | None = None, s_grid=(0.1, 1.0, 10.0), n_max: int = 5) -> SuiteResult:
    A = DirichletLaplacian1D(16, 1.0) if A is None else A
    res = SuiteResult("hille-yosida")
    rep = hille_yosida_check(A, s_grid, n_max)
    res.record(rep.passed, f"max ||R(s,A)^n|| s^n = {float(rep.worst_ratio):.6f} <= 1 for n <= {n_max}")
    return res


SUITES = ("convolution", "cm", "sector", "density", "postwidder", "crossmethod", "hille-yosida")


def run_suite(name: str, w: WeightSpec, kind=ProblemKind.CAPUTO, A: Generator | None = None,
              times=None) -> list[SuiteResult]:
    """Run one named suite, or all of them for ``name == "all"``."""
    check_weight(w)
    times = DEFAULT_TIMES if times is None else tuple(times)
    if name == "all":
        out = []
        for n in SUITES:
            out.extend(run_suite(n, w, kind, A, times))
        return out
    if name == "convolution":
        return [convolution_suite(w, times)]
    if name == "cm":
        return [cm_suite(w)]
    if name == "sector":
        return [sector_suite(w)]
    if name == "density":
        return [density_suite(w, times)]
    if name == "postwidder":
        return [postwidder_suite(w)]
    if name == "crossmethod":
        return [crossmethod_suite(w, kind, A)]
    if name == "hille-yosida":
        return [hille_yosida_suite(A)]
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
