"""Subordination: ``u(t) = int_0^inf phi(t, tau) T(tau) a dtau``.

The density ``phi(t, .)`` is the inverse transform (in t) of
``(g(s)/s) exp(-tau g(s))``. Its mean in tau is the original of
``1/(s g(s))``, i.e. the integral of the Volterra kernel, which sets the
tau length scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ContourError, DomainError, TailMassError
from ..generators import Generator, semigroup_apply
from ..kernels import k1_integral, k2_integral
from ..laplace import DENSITY_CONTOUR, ContourSpec
from ..parallel import thread_map
from ..quadrature import panel_rule
from ..symbols import ProblemKind, WeightSpec, check_weight, g_eval
from .resolvent import base_meta, initial_state, prepare_times
from .trajectory import Trajectory

TAIL_TOL = 1e-8
GEOMETRIC_LEVELS = 30
PANELS_PER_SCALE = 8
MAX_SCALES = 2000
_GL_POINTS = 16


class _DensityEvaluator:
    """Contour nodes for one t, reused for many tau."""

    def __init__(self, w: WeightSpec, kind: ProblemKind, t: float, contour: ContourSpec):
        if not t > 0:
            raise DomainError("the density needs t > 0")
        s, wts = contour.discretize(t)
        g = g_eval(w, kind, s)
        self.g = g
        self.base = wts * g / s
        self.contour = contour

    def __call__(self, taus: np.ndarray) -> np.ndarray:
        taus = np.asarray(taus, dtype=float)
        with np.errstate(all="ignore"):
            vals = np.imag(np.exp(-np.multiply.outer(taus, self.g)) @ self.base)
        if not np.all(np.isfinite(vals)):
            raise ContourError(
                f"non-finite density values on {self.contour!r}; try a HankelSector "
                "with theta closer to pi/2"
            )
        return vals


def subordination_density(w: WeightSpec, kind, t: float, tau,
                          contour: ContourSpec = DENSITY_CONTOUR):
    """``phi(t, tau)`` for scalar ``t`` and scalar or array ``tau >= 0``."""
    kind = ProblemKind.parse(kind)
    check_weight(w)
    taus = np.asarray(tau, dtype=float)
    if np.any(taus < 0):
        raise DomainError("tau must be >= 0")
    vals = _DensityEvaluator(w, kind, float(t), contour)(np.atleast_1d(taus))
    return float(vals[0]) if taus.ndim == 0 else vals


def tau_mean(w: WeightSpec, kind, t: float) -> float:
    """``int tau phi(t, tau) dtau``, the original of ``1/(s g(s))``."""
    kind = ProblemKind.parse(kind)
    return float(k1_integral(w, t) if kind is ProblemKind.CAPUTO else k2_integral(w, t))


@dataclass(frozen=True)
class TauRule:
    """Quadrature in tau for one t: ``int f(tau) phi dtau ~ sum weights * f(nodes)``.

    ``weights`` already include the density values.
    """

    nodes: np.ndarray
    weights: np.ndarray
    mass: float
    tau_max: float
    tail_estimate: float
    min_density: float


def tau_rule(w: WeightSpec, kind, t: float, contour: ContourSpec = DENSITY_CONTOUR,
             tail_tol: float = TAIL_TOL) -> TauRule:
    """Build the composite tau grid for time ``t``.

    Geometric panels near 0, then uniform panels of width ``scale/8``
    appended one scale at a time until the exponentially extrapolated tail
    mass beyond the last panel is below ``tail_tol``.

    Raises
    ------
    TailMassError
        If the tail is not certified within ``MAX_SCALES`` scales.
    """
    kind = ProblemKind.parse(kind)
    if not tail_tol > 0:
        raise DomainError("tail_tol must be > 0")
    phi = _DensityEvaluator(w, kind, t, contour)
    scale = tau_mean(w, kind, t)
    if not (scale > 0 and math.isfinite(scale)):
        raise TailMassError(f"tau scale {scale} is not usable at t={t:g}")
    width = scale / PANELS_PER_SCALE
    edges = list(scale * 0.5 ** np.arange(GEOMETRIC_LEVELS, -1, -1))
    edges.insert(0, 0.0)
    x, wx = panel_rule(np.array(edges), _GL_POINTS)
    nodes, weights, values = [x], [wx], [phi(x)]
    end = edges[-1]
    tail = math.inf
    for _ in range(MAX_SCALES):
        chunk = end + width * np.arange(PANELS_PER_SCALE + 1)
        x, wx = panel_rule(chunk, _GL_POINTS)
        nodes.append(x)
        weights.append(wx)
        values.append(phi(x))
        end = chunk[-1]
        f_end, f_prev = phi(np.array([end, end - width]))
        if abs(f_end) * scale <= 1e-3 * tail_tol and abs(f_prev) * scale <= 1e-2 * tail_tol:
            tail = abs(f_end) * scale
            break
        if 0 < f_end < f_prev:
            rate = math.log(f_prev / f_end) / width
            tail = f_end / rate
            if tail < tail_tol:
                break
    else:
        raise TailMassError(
            f"tail mass of phi({t:g}, .) not below {tail_tol:g} by tau={end:g}"
        )
    x = np.concatenate(nodes)
    vals = np.concatenate(values)
    wt = np.concatenate(weights) * vals
    return TauRule(x, wt, float(np.sum(wt)), float(end), float(tail), float(np.min(vals)))


def solve_subordination(w: WeightSpec, kind, A: Generator, a, times,
                        contour: ContourSpec = DENSITY_CONTOUR, tail_tol: float = TAIL_TOL,
                        include_origin: bool = True) -> Trajectory:
    """Average the classical semigroup against ``phi(t, .)`` at each time."""
    kind = ProblemKind.parse(kind)
    check_weight(w)
    a = initial_state(A, a)
    tt, _ = prepare_times(times, include_origin)
    states = np.empty((tt.size, A.dim))
    states[tt == 0] = a

    def one(ti):
        rule = tau_rule(w, kind, ti, contour, tail_tol)
        return rule, rule.weights @ semigroup_apply(A, rule.nodes, a)

    results = thread_map(one, tt[tt > 0])
    states[tt > 0] = [u for _, u in results] if results else np.empty((0, A.dim))
    masses = [r.mass for r, _ in results]
    tau_max = [r.tau_max for r, _ in results]
    min_phi = [r.min_density for r, _ in results]
    meta = base_meta(w, kind)
    meta.update(contour=repr(contour), tail_tol=tail_tol, mass=masses, tau_max=tau_max,
                min_density=min_phi)
    return Trajectory(tt, states, kind, "subordination", meta)
