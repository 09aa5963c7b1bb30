"""Common output type of the solvers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..symbols import ProblemKind


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States ``u(t_i)`` on an increasing time grid.

    Attributes
    ----------
    times : ndarray, shape (m,)
    states : ndarray, shape (m, n)
    kind : ProblemKind
    method : str
        Which solver produced the states.
    meta : dict
        Solver-specific details (contour, step size, theta0, ...).
    """

    times: np.ndarray
    states: np.ndarray
    kind: ProblemKind
    method: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        u = np.asarray(self.states, dtype=float)
        if u.ndim == 1:
            u = u[:, None]
        if t.ndim != 1 or u.shape[0] != t.size:
            raise ValueError("times and states must have matching lengths")
        if t.size and (t[0] < 0 or np.any(np.diff(t) <= 0)):
            raise ValueError("times must be non-negative and strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", u)

    def __len__(self):
        return self.times.size

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def at(self, t: float) -> np.ndarray:
        """State at a grid time (exact match required)."""
        i = np.flatnonzero(self.times == t)
        if i.size == 0:
            raise KeyError(f"t={t} is not on the trajectory grid")
        return self.states[i[0]]
