"""Post-Widder representation of the solution operator.

With ``H(s) = (g(s)/s) R(g(s), A)``,

    u(t) = lim_n (-1)**n / n! (n/t)**(n+1) H^(n)(n/t) a,

and the n-th derivative expands as

    (-1)**n H^(n)(s) = sum_{k,p} b_{n,k,p}(s) R(g(s), A)**(p+1),
    b_{n,k,p} = (-1)**(n+p) C(n,k) (g/s)^(n-k) a_{k,p} p!,

where ``d^k/ds^k R(g(s), A) = sum_p (-1)**p p! a_{k,p} R**(p+1)`` and the
``a_{k,p}`` obey ``a_{k+1,p} = a_{k,p-1} g' + a_{k,p}'`` with ``a_{1,1} = g'``.
The ``k = 0`` term (``a_{0,0} = 1``) carries ``(g/s)^(n)`` and is included.

Everything is computed in the scaled variable ``y = sigma / s`` so that
jets have O(1) coefficients, and the coefficients are stored as

    c_{k,p} = b_{n,k,p} s**(n+1) / n!,

which satisfy ``sum c_{k,p} g**-(p+1) = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import CapabilityError, DomainError
from ..generators import Generator, resolvent_apply
from ..jets import Jet
from ..symbols import ProblemKind, WeightSpec, check_weight, g_jet
from .resolvent import initial_state

MAX_N = 40


@dataclass(frozen=True)
class PWTable:
    """Post-Widder coefficients at one point ``s``.

    Attributes
    ----------
    n, s : order and evaluation point
    g : value ``g(s)``
    scaled : dict (k, p) -> ``b_{n,k,p}(s) s**(n+1) / n!``
    a : dict (k, p) -> ``a_{k,p}(s)``
    """

    n: int
    s: float
    g: float
    scaled: dict
    a: dict

    @property
    def entries(self) -> dict:
        """``b_{n,k,p}(s)`` (unscaled; may overflow for extreme s)."""
        f = math.factorial(self.n) / self.s ** (self.n + 1)
        return {kp: v * f for kp, v in self.scaled.items()}

    def leibniz_sum(self) -> float:
        """``sum_{k,p} c_{k,p} g**-(p+1)``, equal to 1 (the case A = 0)."""
        return float(sum(v * self.g ** -(p + 1) for (k, p), v in self.scaled.items()))

    def min_ratio(self) -> float:
        """Smallest entry divided by the largest magnitude."""
        vals = np.array(list(self.scaled.values()))
        return float(np.min(vals) / np.max(np.abs(vals)))

    def by_power(self) -> np.ndarray:
        """``C_p = sum_k c_{k,p} g**-(p+1)`` for p = 0..n."""
        out = np.zeros(self.n + 1)
        for (k, p), v in self.scaled.items():
            out[p] += v * self.g ** -(p + 1)
        return out


def _scaled_jet(j: Jet) -> Jet:
    # coefficients of sigma -> f(s * y) around y = 1
    k = np.arange(j.order + 1)
    return Jet(1.0, j.coeffs * j.center**k)


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise DomainError("Post-Widder order must be a positive integer")
    if n > MAX_N:
        raise CapabilityError(f"Post-Widder order {n} exceeds {MAX_N} (double precision limit)")
    return int(n)


def postwidder_coeffs(w: WeightSpec, kind, s: float, n: int) -> PWTable:
    """Build ``b_{n,k,p}(s)`` for ``0 <= k <= n`` via jet arithmetic."""
    kind = ProblemKind.parse(kind)
    check_weight(w)
    n = _check_n(n)
    s = float(s)
    if not s > 0:
        raise DomainError("Post-Widder coefficients need s > 0")
    gj = g_jet(w, kind, s, n + 1)
    G = _scaled_jet(gj)
    Q = _scaled_jet(gj / Jet.identity(s, n + 1))  # g/s in scaled form
    dG = G.derivative()
    # a[p] holds the jet of (scaled) a_{k,p} for the current k
    a = {1: dG.truncate(n - 1)}
    table_a = {(0, 0): 1.0, (1, 1): dG.value / s}
    scaled = {(0, 0): (-1.0) ** n * Q.coeffs[n] * s}
    for k in range(1, n + 1):
        if k > 1:
            new = {}
            for p in range(1, k + 1):
                terms = []
                if p - 1 in a:
                    terms.append(a[p - 1] * dG)
                if p in a:
                    terms.append(a[p].derivative())
                order = min(t.order for t in terms)
                acc = terms[0].truncate(order)
                for t in terms[1:]:
                    acc = acc + t.truncate(order)
                new[p] = acc
            a = new
            for p, jp in a.items():
                table_a[(k, p)] = jp.value / s**k
        # c_{k,p} = (-1)^(n+p) q_{n-k} a_{k,p} p! s / k!  (scaled units)
        qk = Q.coeffs[n - k]
        for p, jp in a.items():
            scaled[(k, p)] = ((-1.0) ** (n + p) * qk * jp.value * math.factorial(p) * s
                              / math.factorial(k))
    return PWTable(n, s, gj.value, scaled, table_a)


def solve_postwidder(w: WeightSpec, kind, A: Generator, a, t: float, n: int) -> np.ndarray:
    """Post-Widder approximation of ``u(t)`` of order ``n``.

    ``R(g, A)**(p+1) a`` is built by ``p + 1`` sequential resolvent solves,
    scaled by ``g`` at each step to stay O(1).
    """
    if not t > 0:
        raise DomainError("Post-Widder evaluation needs t > 0")
    a = initial_state(A, a)
    table = postwidder_coeffs(w, kind, n / t, n)
    weights = table.by_power()
    g = table.g
    v = a.astype(complex)
    out = np.zeros(A.dim)
    for p in range(table.n + 1):
        v = g * resolvent_apply(A, g, v)  # (g R)^(p+1) a
        out += weights[p] * np.real(v)
    return out


@dataclass(frozen=True)
class GenerationReport:
    passed: bool
    worst_ratio: float  # max ||(-1)^n H^(n)(s) a|| s^(n+1) / (n! ||a||)
    worst_s: float
    worst_n: int


def generation_bound_check(w: WeightSpec, kind, A: Generator, a, s_grid, n_max: int = 8,
                           tol: float = 1e-10) -> GenerationReport:
    """Sample ``||H^(n)(s) a|| <= n! s**-(n+1) ||a||`` for ``n <= n_max``."""
    a = initial_state(A, a)
    norm_a = float(np.linalg.norm(a))
    worst = (-math.inf, float("nan"), 0)
    for s in np.atleast_1d(np.asarray(s_grid, dtype=float)):
        for n in range(1, n_max + 1):
            table = postwidder_coeffs(w, kind, s, n)
            weights = table.by_power()
            v = a.astype(complex)
            acc = np.zeros(A.dim)
            for p in range(n + 1):
                v = table.g * resolvent_apply(A, table.g, v)
                acc += weights[p] * np.real(v)
            ratio = float(np.linalg.norm(acc)) / norm_a
            if ratio > worst[0]:
                worst = (ratio, float(s), n)
    return GenerationReport(worst[0] <= 1.0 + tol, worst[0], worst[1], worst[2])
