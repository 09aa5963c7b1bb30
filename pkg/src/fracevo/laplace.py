"""Numerical inversion of Laplace transforms along deformed contours.

Every contour is discretized into nodes ``s_k`` in the upper half plane and
complex weights ``w_k`` (which already contain the factor ``exp(s_k t)``) so
that, for a real-symmetric transform ``F(conj s) = conj F(s)``::

    f(t) ~= Im( sum_k w_k F(s_k) )

The lower half of the contour is recovered from the symmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import ContourError, DomainError
from .quadrature import gauss_legendre, panel_rule

# optimal cotangent contour of Weideman and Trefethen
_COT_A, _COT_B, _COT_C, _COT_D = 0.5017, 0.6407, 0.6122, 0.2645
_SYMMETRY_RTOL = 1e-8


@dataclass(frozen=True)
class FixedTalbot:
    """Cotangent (Talbot-type) contour scaled by ``nodes / t``."""

    nodes: int = 32

    def __post_init__(self):
        if int(self.nodes) != self.nodes or self.nodes < 4:
            raise DomainError("FixedTalbot needs an integer node count >= 4")

    def discretize(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        n = int(self.nodes)
        h = 2.0 * math.pi / n
        k = np.arange(n // 2, n)
        th = -math.pi + (k + 0.5) * h
        scale = n / t
        with np.errstate(invalid="ignore", divide="ignore"):
            cot = np.where(th == 0, 0.0, 1.0 / np.tan(_COT_B * th))
            csc2 = np.where(th == 0, 0.0, 1.0 / np.sin(_COT_B * th) ** 2)
        # theta*cot(B theta) -> 1/B at theta = 0
        tc = np.where(th == 0, 1.0 / _COT_B, th * cot)
        dtc = np.where(th == 0, 0.0, cot - _COT_B * th * csc2)
        s = scale * (_COT_A * tc - _COT_C + 1j * _COT_D * th)
        ds = scale * (_COT_A * dtc + 1j * _COT_D)
        w = (2.0 / n) * np.exp(s * t) * ds
        # the node at theta = 0 (odd n) is its own mirror image
        w = np.where(th == 0, 0.5 * w, w)
        return s, w


@dataclass(frozen=True)
class BromwichLine:
    """Vertical line ``Re s = abscissa`` truncated at ``|Im s| <= halfheight``."""

    abscissa: float
    halfheight: float
    nodes: int = 400

    def __post_init__(self):
        if not self.abscissa > 0:
            raise DomainError("BromwichLine abscissa must be > 0")
        if not self.halfheight > 0:
            raise DomainError("BromwichLine halfheight must be > 0")
        if int(self.nodes) != self.nodes or self.nodes < 4:
            raise DomainError("BromwichLine needs an integer node count >= 4")

    def discretize(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        panels = max(1, int(self.nodes) // 16)
        per = int(self.nodes) // panels
        y, wy = panel_rule(np.linspace(0.0, self.halfheight, panels + 1), per)
        s = self.abscissa + 1j * y
        # (1/pi) int_0^H Re(e^{st} F) dy, and Re(z) = Im(i z)
        w = 1j * wy * np.exp(s * t) / math.pi
        return s, w


@dataclass(frozen=True)
class HankelSector:
    """Arc of radius ``rho`` joined to rays at angles ``+-theta``.

    ``rho=None`` means ``rho = 1/t``. The rays are truncated where
    ``exp(Re(s) t)`` has decayed by ``exp(-ray_cutoff)``.
    """

    rho: float | None = None
    theta: float = 5.0 * math.pi / 6.0
    arc_nodes: int = 64
    ray_nodes: int = 600
    ray_cutoff: float = 45.0

    def __post_init__(self):
        if self.rho is not None and not self.rho > 0:
            raise DomainError("HankelSector rho must be > 0")
        if not math.pi / 2 < self.theta < math.pi:
            raise DomainError("HankelSector theta must lie in (pi/2, pi)")
        for name in ("arc_nodes", "ray_nodes"):
            v = getattr(self, name)
            if int(v) != v or v < 4:
                raise DomainError(f"HankelSector {name} must be an integer >= 4")
        if not self.ray_cutoff > 0:
            raise DomainError("HankelSector ray_cutoff must be > 0")

    def discretize(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        rho = 1.0 / t if self.rho is None else float(self.rho)
        x, wx = gauss_legendre(int(self.arc_nodes))
        psi = self.theta * x
        s_arc = rho * np.exp(1j * psi)
        w_arc = self.theta * wx * 1j * s_arc
        length = self.ray_cutoff / (t * abs(math.cos(self.theta)))
        edges = np.concatenate(([0.0], np.geomspace(1e-3, 1.0, 12))) * length
        per = max(4, int(self.ray_nodes) // (edges.size - 1))
        r, wr = panel_rule(edges, per)
        direction = np.exp(1j * self.theta)
        s_ray = (rho + r) * direction
        w_ray = wr * direction
        s = np.concatenate((s_arc, s_ray))
        w = np.concatenate((w_arc, w_ray)) * np.exp(s * t) / math.pi
        return s, w


ContourSpec = Union[FixedTalbot, BromwichLine, HankelSector]

DEFAULT_CONTOUR = FixedTalbot(32)
# A narrow sector keeps exp(-tau g(s)) from growing along the rays, which
# breaks the cotangent contour for the subordination density.
DENSITY_CONTOUR = HankelSector(None, math.pi / 2 + 0.15, 64, 600, 45.0)


def _check_times(t) -> tuple[np.ndarray, bool]:
    tt = np.asarray(t, dtype=float)
    scalar = tt.ndim == 0
    tt = np.atleast_1d(tt)
    if tt.ndim != 1 or np.any(~(tt > 0)) or np.any(~np.isfinite(tt)):
        raise DomainError("inversion times must be finite and > 0")
    return tt, scalar


def _check_symmetry(F, s0: complex, batched: bool):
    a = np.asarray(F(np.array([s0])) if batched else F(s0), dtype=complex)
    b = np.asarray(F(np.array([np.conj(s0)])) if batched else F(np.conj(s0)), dtype=complex)
    scale = np.max(np.abs(a), initial=0.0)
    if np.max(np.abs(np.conj(a) - b), initial=0.0) > _SYMMETRY_RTOL * max(scale, 1e-300):
        raise ContourError(
            "transform is not real-symmetric: F(conj s) != conj F(s); the inverse "
            "would not be real"
        )


def _raise_nonfinite(c: ContourSpec):
    raise ContourError(
        f"non-finite transform values on contour {c!r}; try a different contour "
        "(e.g. HankelSector with a smaller theta, or more nodes)"
    )


def invert_scalar(F: Callable, t, c: ContourSpec = DEFAULT_CONTOUR, *, check_symmetry: bool = True):
    """Invert a scalar transform at time(s) ``t``.

    Parameters
    ----------
    F : callable
        Vectorized transform, complex array in, complex array out.
    t : float or array_like
        Positive times.
    c : ContourSpec
        Contour; defaults to ``FixedTalbot(32)``.

    Returns
    -------
    float or ndarray
    """
    tt, scalar = _check_times(t)
    nodes = [c.discretize(ti) for ti in tt]
    s_all = np.concatenate([s for s, _ in nodes])
    if check_symmetry:
        _check_symmetry(F, complex(s_all[0]), batched=True)
    with np.errstate(all="ignore"):
        vals = np.asarray(F(s_all), dtype=complex)
    if vals.shape != s_all.shape:
        vals = np.broadcast_to(vals, s_all.shape)
    out = np.empty(tt.size)
    pos = 0
    for i, (s, w) in enumerate(nodes):
        with np.errstate(all="ignore"):
            # same reduction as invert_vector so both routes agree bitwise
            val = np.imag(w @ vals[pos : pos + s.size].reshape(s.size, 1))[0]
        pos += s.size
        if not np.isfinite(val):
            _raise_nonfinite(c)
        out[i] = val
    return float(out[0]) if scalar else out


def invert_vector(F: Callable, t, c: ContourSpec = DEFAULT_CONTOUR, *, batched: bool = False,
                  check_symmetry: bool = True):
    """Invert a vector-valued transform componentwise.

    ``F(s)`` returns a vector for a scalar node ``s``; with ``batched=True``
    it instead receives a 1-d array of nodes and returns shape
    ``(len(s), n)``. All components share the contour nodes.

    Returns an array of shape ``(n,)`` for scalar ``t``, else ``(len(t), n)``.
    """
    tt, scalar = _check_times(t)
    if check_symmetry:
        s0, _ = c.discretize(float(tt[0]))
        _check_symmetry(F, complex(s0[0]), batched=batched)
    rows = []
    for ti in tt:
        s, w = c.discretize(float(ti))
        with np.errstate(all="ignore"):
            if batched:
                vals = np.asarray(F(s), dtype=complex)
            else:
                vals = np.array([np.asarray(F(sk), dtype=complex) for sk in s])
            vals = vals.reshape(s.size, -1)
            row = np.imag(w @ vals)
        if not np.all(np.isfinite(row)):
            _raise_nonfinite(c)
        rows.append(row)
    out = np.array(rows)
    return out[0] if scalar else out
