"""Truncated Taylor series ("jets") for high-order derivatives.

A :class:`Jet` stores ``f(c), f'(c), f''(c)/2!, ...`` at a positive center
``c``. Arithmetic on jets propagates derivatives exactly up to the stored
order, which is what the Post-Widder coefficient recurrence needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, DomainError

MAX_ORDER = 64


def _check_order(order: int) -> int:
    order = int(order)
    if order < 0:
        raise DomainError("jet order must be non-negative")
    if order > MAX_ORDER:
        raise CapabilityError(
            f"jet order {order} exceeds {MAX_ORDER}; Cauchy products lose "
            "accuracy in double precision beyond this"
        )
    return order


@dataclass(frozen=True, eq=False)
class Jet:
    """Taylor coefficients of a scalar function around ``center``."""

    center: float
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise DomainError("jet coefficients must be a non-empty 1-d array")
        _check_order(c.size - 1)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "center", float(self.center))

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    def derivative_value(self, k: int) -> float:
        """k-th derivative at the center."""
        return float(self.coeffs[k]) * math.factorial(k)

    def __repr__(self):
        return f"Jet(center={self.center!r}, order={self.order})"

    @classmethod
    def constant(cls, center: float, value: float, order: int) -> "Jet":
        c = np.zeros(_check_order(order) + 1)
        c[0] = value
        return cls(center, c)

    @classmethod
    def identity(cls, center: float, order: int) -> "Jet":
        """The jet of ``s -> s``."""
        c = np.zeros(_check_order(order) + 1)
        c[0] = center
        if order >= 1:
            c[1] = 1.0
        return cls(center, c)

    @classmethod
    def power(cls, center: float, beta: float, order: int) -> "Jet":
        """The jet of ``s -> s**beta`` (binomial series)."""
        return cls(center, power_coeffs(center, np.array([beta]), order)[0])

    @classmethod
    def log(cls, center: float, order: int) -> "Jet":
        """The jet of ``s -> log(s)``."""
        order = _check_order(order)
        if center <= 0:
            raise DomainError("log jet needs a positive center")
        k = np.arange(1, order + 1)
        c = np.empty(order + 1)
        c[0] = math.log(center)
        c[1:] = (-1.0) ** (k + 1) / (k * center**k)
        return cls(center, c)

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.center != self.center:
                raise DomainError("jets expanded at different centers")
            return other
        return Jet.constant(self.center, float(other), self.order)

    def truncate(self, order: int) -> "Jet":
        return Jet(self.center, self.coeffs[: order + 1])

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order) + 1
        return Jet(self.center, self.coeffs[:n] + other.coeffs[:n])

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.center, -self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.center, self.coeffs * float(other))
        other = self._coerce(other)
        n = min(self.order, other.order) + 1
        return Jet(self.center, np.convolve(self.coeffs[:n], other.coeffs[:n])[:n])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.center, self.coeffs / float(other))
        other = self._coerce(other)
        n = min(self.order, other.order) + 1
        a, b = self.coeffs[:n], other.coeffs[:n]
        if b[0] == 0.0:
            raise ZeroDivisionError("jet division by a function vanishing at the center")
        q = np.empty(n)
        for k in range(n):
            q[k] = (a[k] - np.dot(q[:k], b[k:0:-1])) / b[0]
        return Jet(self.center, q)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def derivative(self) -> "Jet":
        """Jet of ``f'``; the order drops by one."""
        if self.order == 0:
            raise DomainError("cannot differentiate a zeroth-order jet")
        k = np.arange(1, self.order + 1)
        return Jet(self.center, self.coeffs[1:] * k)

    def shift(self, delta: float) -> "Jet":
        """Re-expand the truncated polynomial around ``center + delta``."""
        n = self.order
        # Taylor shift of a polynomial: c'_j = sum_k C(k, j) c_k delta^(k-j)
        out = np.zeros(n + 1)
        for j in range(n + 1):
            k = np.arange(j, n + 1)
            binom = np.array([math.comb(int(kk), j) for kk in k], dtype=float)
            out[j] = np.sum(binom * self.coeffs[j:] * delta ** (k - j))
        return Jet(self.center + delta, out)

    def __call__(self, s):
        """Evaluate the truncated polynomial at ``s``."""
        return np.polynomial.polynomial.polyval(np.asarray(s) - self.center, self.coeffs)


def power_coeffs(center: float, betas: np.ndarray, order: int) -> np.ndarray:
    """Taylor coefficients of ``s**beta`` at ``center`` for each beta.

    Returns an array of shape ``(len(betas), order + 1)`` whose k-th column is
    ``binom(beta, k) * center**(beta - k)``.
    """
    order = _check_order(order)
    if center <= 0:
        raise DomainError("power jets need a positive center")
    betas = np.asarray(betas, dtype=float)
    out = np.empty((betas.size, order + 1))
    col = center**betas
    out[:, 0] = col
    for k in range(1, order + 1):
        col = col * (betas - k + 1) / (k * center)
        out[:, k] = col
    return out
