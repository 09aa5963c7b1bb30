"""Solution by contour inversion of ``H(s) a = (g(s)/s) R(g(s), A) a``."""

from __future__ import annotations

import numpy as np

from ..generators import Generator, resolvent_apply
from ..laplace import DEFAULT_CONTOUR, ContourSpec, invert_vector
from ..symbols import DiscreteWeight, ProblemKind, WeightSpec, check_weight, g_eval, theta0
from .trajectory import Trajectory


def prepare_times(times, include_origin: bool) -> tuple[np.ndarray, np.ndarray]:
    """Sorted unique grid (optionally with 0 prepended) and its positive part."""
    tt = np.unique(np.atleast_1d(np.asarray(times, dtype=float)))
    if tt.size == 0 or tt[0] < 0 or not np.all(np.isfinite(tt)):
        raise ValueError("times must be finite and non-negative")
    if include_origin and tt[0] > 0:
        tt = np.concatenate(([0.0], tt))
    return tt, tt[tt > 0]


def initial_state(A: Generator, a) -> np.ndarray:
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if a.shape != (A.dim,):
        raise ValueError(f"initial datum has shape {a.shape}, expected ({A.dim},)")
    return a


def base_meta(w: WeightSpec, kind: ProblemKind) -> dict:
    meta = {"weight": str(w), "kind": kind.value}
    if isinstance(w, DiscreteWeight):
        meta["theta0"] = theta0(w)
    return meta


def solve_resolvent(w: WeightSpec, kind, A: Generator, a, times,
                    contour: ContourSpec = DEFAULT_CONTOUR, include_origin: bool = True) -> Trajectory:
    """Invert ``(g(s)/s) R(g(s), A) a`` at the requested times.

    Times equal to 0 get the initial datum exactly; with ``include_origin``
    the point ``(0, a)`` is prepended if missing.
    """
    kind = ProblemKind.parse(kind)
    check_weight(w)
    a = initial_state(A, a)
    tt, tpos = prepare_times(times, include_origin)

    def transform(s):
        g = g_eval(w, kind, s)
        return (g / s)[:, None] * resolvent_apply(A, g, a)

    states = np.empty((tt.size, A.dim))
    states[tt == 0] = a
    if tpos.size:
        states[tt > 0] = invert_vector(transform, tpos, contour, batched=True)
    meta = base_meta(w, kind)
    meta["contour"] = repr(contour)
    return Trajectory(tt, states, kind, "resolvent", meta)
