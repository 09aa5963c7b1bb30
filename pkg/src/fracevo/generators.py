"""Finite-dimensional generators with nonpositive spectrum.

Each generator is a normal matrix with spectrum in ``(-inf, 0]``, so its
semigroup is a contraction in the Euclidean norm and the Hille-Yosida bound
holds with ``M = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy import fft

from .errors import DomainError, SingularResolventError

_SINGULAR_RTOL = 1e-14


def _as_state(b, n: int) -> np.ndarray:
    v = np.asarray(b)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.shape[-1] != n:
        raise DomainError(f"vector has length {v.shape[-1]}, generator has dimension {n}")
    return v


@dataclass(frozen=True)
class Scalar:
    """Multiplication by ``lam <= 0`` on a one-dimensional space."""

    lam: float

    def __post_init__(self):
        object.__setattr__(self, "lam", float(self.lam))
        if not (math.isfinite(self.lam) and self.lam <= 0):
            raise DomainError("Scalar generator needs a finite lambda <= 0")

    @property
    def dim(self) -> int:
        return 1

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([self.lam])

    def matrix(self) -> np.ndarray:
        return np.array([[self.lam]])

    def __str__(self):
        return f"scalar:{self.lam!r}"


@dataclass(frozen=True)
class Diagonal:
    """Diagonal matrix with entries ``lambdas <= 0``."""

    lambdas: tuple[float, ...]

    def __post_init__(self):
        lam = tuple(float(x) for x in np.atleast_1d(self.lambdas))
        object.__setattr__(self, "lambdas", lam)
        if not lam or not all(math.isfinite(x) and x <= 0 for x in lam):
            raise DomainError("Diagonal generator needs finite lambdas <= 0")

    @property
    def dim(self) -> int:
        return len(self.lambdas)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array(self.lambdas)

    def matrix(self) -> np.ndarray:
        return np.diag(self.lambdas)

    def __str__(self):
        return "diag:" + ",".join(repr(x) for x in self.lambdas)


@dataclass(frozen=True)
class DirichletLaplacian1D:
    """``tridiag(1, -2, 1) / spacing**2`` of size ``n``."""

    n: int
    spacing: float = 1.0
    _eig: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError("DirichletLaplacian1D needs an integer n >= 2")
        if not (math.isfinite(self.spacing) and self.spacing > 0):
            raise DomainError("DirichletLaplacian1D spacing must be > 0")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "spacing", float(self.spacing))
        k = np.arange(1, self.n + 1)
        lam = -(4.0 / self.spacing**2) * np.sin(k * math.pi / (2 * (self.n + 1))) ** 2
        lam.setflags(write=False)
        object.__setattr__(self, "_eig", lam)

    @property
    def dim(self) -> int:
        return self.n

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eig

    def matrix(self) -> np.ndarray:
        h2 = self.spacing**2
        return (np.diag(np.full(self.n, -2.0)) + np.diag(np.ones(self.n - 1), 1)
                + np.diag(np.ones(self.n - 1), -1)) / h2

    def __str__(self):
        return f"laplace1d:{self.n},{self.spacing!r}"


Generator = Union[Scalar, Diagonal, DirichletLaplacian1D]


def parse_generator(text: str) -> Generator:
    """Parse ``scalar:LAM``, ``diag:L1,L2,...``, ``laplace1d:N[,SPACING]`` or ``zero[:N]``."""
    head, _, body = text.strip().partition(":")
    head = head.lower()
    try:
        if head == "scalar":
            return Scalar(float(body))
        if head == "zero":
            n = int(body) if body else 1
            return Scalar(0.0) if n == 1 else Diagonal((0.0,) * n)
        if head == "diag":
            return Diagonal(tuple(float(x) for x in body.split(",")))
        if head == "laplace1d":
            parts = body.split(",")
            spacing = float(parts[1]) if len(parts) > 1 else 1.0
            return DirichletLaplacian1D(int(parts[0]), spacing)
    except ValueError as exc:
        raise ValueError(f"cannot parse generator {text!r}: {exc}") from None
    raise ValueError(f"unknown generator {text!r} (use scalar:, diag:, laplace1d: or zero)")


def apply(A: Generator, x) -> np.ndarray:
    """``A x`` for a vector or a stack of vectors (last axis)."""
    x = _as_state(x, A.dim)
    if isinstance(A, (Scalar, Diagonal)):
        return A.eigenvalues * x
    y = -2.0 * x
    y[..., 1:] += x[..., :-1]
    y[..., :-1] += x[..., 1:]
    return y / A.spacing**2


def resolvent_apply(A: Generator, z, b) -> np.ndarray:
    """Solve ``(z I - A) x = b``.

    ``z`` may be a scalar or a 1-d array of shifts; in the latter case ``b``
    is broadcast and the result has shape ``(len(z), dim)``.

    Raises
    ------
    SingularResolventError
        If ``z`` is (numerically) an eigenvalue of ``A``.
    """
    zz = np.asarray(z, dtype=complex)
    b = _as_state(b, A.dim)
    eig = A.eigenvalues
    gap = np.min(np.abs(zz[..., None] - eig), axis=-1)
    scale = np.maximum(np.abs(zz), np.max(np.abs(eig)))
    if np.any(gap <= _SINGULAR_RTOL * np.maximum(scale, 1.0)):
        raise SingularResolventError("resolvent evaluated at an eigenvalue of the generator")
    if isinstance(A, (Scalar, Diagonal)):
        return b / (zz[..., None] - eig)
    return _thomas(zz, b, A.spacing)


def _thomas(z: np.ndarray, b: np.ndarray, spacing: float) -> np.ndarray:
    """Batched tridiagonal solve of ``(z I - L) x = b``, ``L = tridiag(1,-2,1)/h^2``."""
    n = b.shape[-1]
    batch = np.broadcast_shapes(z.shape, b.shape[:-1])
    off = -1.0 / spacing**2
    diag = np.broadcast_to(z + 2.0 / spacing**2, batch)
    rhs = np.broadcast_to(b, batch + (n,)).astype(complex)
    cp = np.empty(batch + (n,), dtype=complex)
    dp = np.empty(batch + (n,), dtype=complex)
    denom = diag
    cp[..., 0] = off / denom
    dp[..., 0] = rhs[..., 0] / denom
    for i in range(1, n):
        denom = diag - off * cp[..., i - 1]
        cp[..., i] = off / denom
        dp[..., i] = (rhs[..., i] - off * dp[..., i - 1]) / denom
    x = np.empty_like(dp)
    x[..., -1] = dp[..., -1]
    for i in range(n - 2, -1, -1):
        x[..., i] = dp[..., i] - cp[..., i] * x[..., i + 1]
    return x


def _dst_modes(A: DirichletLaplacian1D, a: np.ndarray) -> np.ndarray:
    # orthonormal DST-I diagonalizes the Dirichlet Laplacian
    return fft.dst(a, type=1, norm="ortho", axis=-1)


def semigroup_apply(A: Generator, t, a) -> np.ndarray:
    """``exp(t A) a`` for ``t >= 0`` (scalar or 1-d array of times)."""
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0):
        raise DomainError("semigroup time must be >= 0")
    a = _as_state(a, A.dim)
    decay = np.exp(tt[..., None] * A.eigenvalues)
    if isinstance(A, (Scalar, Diagonal)):
        return decay * a
    modes = _dst_modes(A, np.asarray(a, dtype=float))
    return fft.idst(decay * modes, type=1, norm="ortho", axis=-1)


@dataclass(frozen=True)
class HilleYosidaReport:
    passed: bool
    worst_ratio: float  # max over (s, n) of ||R(s,A)^n|| * s**n
    worst_s: float
    worst_n: int


def hille_yosida_check(A: Generator, s_grid, n_max: int, tol: float = 1e-10) -> HilleYosidaReport:
    """Check ``||R(s, A)**n||_2 <= 1 / s**n`` for ``n <= n_max``.

    For a normal matrix the operator norm of ``R(s,A)**n`` is the largest
    ``|s - lambda|**-n``; it is computed here from repeated resolvent solves
    on the eigenvector basis so that the check exercises the solver.
    """
    s_grid = np.asarray(s_grid, dtype=float)
    if np.any(s_grid <= 0):
        raise DomainError("Hille-Yosida check needs s > 0")
    basis = _eigenbasis(A)
    worst = (-math.inf, float("nan"), 0)
    ok = True
    for s in s_grid:
        v = basis.copy()
        for n in range(1, n_max + 1):
            v = np.real(resolvent_apply(A, s, v))
            norm = float(np.max(np.linalg.norm(v, axis=-1)))
            bound = s**-n
            ok &= norm <= bound + tol
            ratio = norm * s**n
            if ratio > worst[0]:
                worst = (ratio, float(s), n)
    return HilleYosidaReport(bool(ok), float(worst[0]), worst[1], worst[2])


def _eigenbasis(A: Generator) -> np.ndarray:
    """Rows are orthonormal eigenvectors of ``A``."""
    n = A.dim
    if isinstance(A, (Scalar, Diagonal)):
        return np.eye(n)
    j = np.arange(1, n + 1)
    return math.sqrt(2.0 / (n + 1)) * np.sin(np.outer(j, j) * math.pi / (n + 1))
