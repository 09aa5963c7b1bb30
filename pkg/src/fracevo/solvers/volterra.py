"""Product integration for ``u(t) = a + int_0^t k(t - tau) A u(tau) dtau``.

The state is piecewise constant (right endpoint values) on a uniform grid,
and the kernel is integrated exactly over each cell:
``omega_m = K((m+1) dt) - K(m dt)`` with ``K = int_0 k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..generators import Generator, apply, resolvent_apply
from ..kernels import KernelId, kernel_integral
from ..symbols import ProblemKind, WeightSpec, check_weight
from .resolvent import base_meta, initial_state
from .trajectory import Trajectory


def kernel_for(kind: ProblemKind) -> KernelId:
    """Caputo problems use k1, Riemann-Liouville problems use k2."""
    return KernelId.K1 if ProblemKind.parse(kind) is ProblemKind.CAPUTO else KernelId.K2


@dataclass(frozen=True, eq=False)
class ConvolutionWeights:
    """Cell integrals of the kernel on a uniform grid (immutable cache)."""

    dt: float
    omega: np.ndarray

    @classmethod
    def build(cls, w: WeightSpec, kind: ProblemKind, dt: float, steps: int) -> "ConvolutionWeights":
        K = np.asarray(kernel_integral(w, kernel_for(kind), dt * np.arange(1, steps + 1)), dtype=float)
        omega = np.diff(np.concatenate(([0.0], K)))
        omega.setflags(write=False)
        return cls(dt, omega)


def solve_volterra(w: WeightSpec, kind, A: Generator, a, t_end: float, steps: int) -> Trajectory:
    """March the product-integration scheme to ``t_end`` in ``steps`` steps.

    Each step solves ``(I - omega_0 A) u_n = a + sum_{m=1}^{n-1} omega_m A u_{n-m}``.
    """
    kind = ProblemKind.parse(kind)
    check_weight(w)
    if int(steps) != steps or steps < 2:
        raise ValueError("steps must be an integer >= 2")
    if not t_end > 0:
        raise ValueError("t_end must be > 0")
    steps = int(steps)
    a = initial_state(A, a)
    dt = t_end / steps
    weights = ConvolutionWeights.build(w, kind, dt, steps)
    om = weights.omega
    u = np.empty((steps + 1, A.dim))
    Au = np.empty((steps + 1, A.dim))
    u[0] = a
    Au[0] = apply(A, a)
    shift = 1.0 / om[0]
    for n in range(1, steps + 1):
        # history: sum_{m=1}^{n-1} omega_m A u_{n-m}
        hist = om[1:n] @ Au[n - 1 : 0 : -1] if n > 1 else 0.0
        rhs = a + hist
        # (I - om0 A) x = rhs  <=>  (1/om0 - A) x = rhs / om0
        u[n] = np.real(resolvent_apply(A, shift, rhs * shift))
        Au[n] = apply(A, u[n])
    meta = base_meta(w, kind)
    meta.update(dt=dt, steps=steps, kernel=kernel_for(kind).value)
    return Trajectory(dt * np.arange(steps + 1), u, kind, "volterra", meta)
