"""Weight distributions, the symbol ``h(s)`` and the functions ``g1``, ``g2``.

A distributed-order operator with weight ``mu(beta)`` on ``[0, 1]`` has
Laplace symbol ``h(s) = int_0^1 mu(beta) s**beta dbeta``. The Caputo problem
is governed by ``g1 = h`` and the Riemann-Liouville problem by ``g2 = s / h``.
Three weight families are supported:

* :class:`DiscreteWeight` -- ``s**alpha + sum_j b_j s**alpha_j``,
* :class:`PolynomialWeight` -- ``mu(beta) = c0 + c1 beta + ...``,
* :class:`ConstantWeight` -- ``mu = 1``, with ``h(s) = (s - 1) / log(s)``.

All powers use the principal branch; the cut ``(-inf, 0]`` is excluded.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError, WeightError
from .jets import Jet, power_coeffs
from .quadrature import gauss_legendre

# |s - 1| below this uses the Taylor series of (s - 1)/log(s) in log(s)
CONSTANT_SERIES_RADIUS = 1e-4


class ProblemKind(enum.Enum):
    """Caputo (``g = h``) or Riemann-Liouville (``g = s / h``)."""

    CAPUTO = "caputo"
    RL = "rl"

    @classmethod
    def parse(cls, text: "str | ProblemKind") -> "ProblemKind":
        if isinstance(text, ProblemKind):
            return text
        key = str(text).strip().lower()
        aliases = {"c": "caputo", "caputo": "caputo", "rl": "rl",
                   "riemann-liouville": "rl", "riemannliouville": "rl"}
        if key not in aliases:
            raise ValueError(f"unknown problem kind {text!r} (use 'caputo' or 'rl')")
        return cls(aliases[key])


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" or "warning"
    message: str

    def __str__(self):
        return f"{self.level}: {self.message}"


@dataclass(frozen=True)
class DiscreteWeight:
    """``mu = delta(beta - alpha) + sum_j b_j delta(beta - alpha_j)``.

    Parameters
    ----------
    alpha : float
        Leading order, ``0 < alpha < 1``.
    terms : tuple of (alpha_j, b_j)
        Lower-order terms with ``alpha > alpha_1 > ... > alpha_m > 0`` and
        ``b_j > 0``.
    """

    alpha: float
    terms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(
            self, "terms", tuple((float(a), float(b)) for a, b in self.terms)
        )

    @property
    def orders(self) -> np.ndarray:
        return np.array([self.alpha] + [a for a, _ in self.terms])

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([1.0] + [b for _, b in self.terms])

    @property
    def alpha_min(self) -> float:
        return self.terms[-1][0] if self.terms else self.alpha

    def __str__(self):
        return format_weight(self)


@dataclass(frozen=True)
class PolynomialWeight:
    """Continuous density ``mu(beta) = sum_k c_k beta**k`` on ``[0, 1]``."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    def density(self, beta):
        return np.polynomial.polynomial.polyval(beta, self.coeffs)

    def __str__(self):
        return format_weight(self)


@dataclass(frozen=True)
class ConstantWeight:
    """The density ``mu = 1``; ``h(s) = (s - 1) / log(s)``."""

    coeffs: tuple[float, ...] = field(default=(1.0,), init=False, repr=False)

    def density(self, beta):
        return np.ones_like(np.asarray(beta, dtype=float))

    def __str__(self):
        return "constant"


WeightSpec = Union[DiscreteWeight, PolynomialWeight, ConstantWeight]


def is_continuous(w: WeightSpec) -> bool:
    return isinstance(w, (PolynomialWeight, ConstantWeight))


# ---------------------------------------------------------------- validation


def validate(w: WeightSpec) -> list[Diagnostic]:
    """Check a weight against the hard invariants and the smoothness hypotheses.

    Errors flag violations that make the problem ill-posed (ordering, signs,
    negative density). Warnings flag continuous densities for which the
    sufficient conditions ``mu(1) != 0`` and ``mu(0) != 0`` or
    ``mu(beta) = a beta**nu`` near 0 cannot be confirmed.
    """
    out: list[Diagnostic] = []
    if isinstance(w, DiscreteWeight):
        orders = w.orders
        if not np.all(np.isfinite(orders)) or not np.all(np.isfinite(w.coefficients)):
            return [Diagnostic("error", "non-finite weight parameter")]
        if not 0.0 < w.alpha < 1.0:
            out.append(Diagnostic("error", f"alpha={w.alpha:g} must lie in (0, 1)"))
        if np.any(np.diff(orders) >= 0):
            out.append(
                Diagnostic(
                    "error",
                    "ordering violated: need 1 > alpha > alpha_1 > ... > alpha_m > 0, "
                    f"got orders {[float(o) for o in orders]}",
                )
            )
        if w.terms and w.alpha_min <= 0.0:
            out.append(Diagnostic("error", "ordering violated: alpha_m must be > 0"))
        for a, b in w.terms:
            if not b > 0:
                out.append(Diagnostic("error", f"coefficient b={b:g} of order {a:g} must be > 0"))
        return out

    c = np.asarray(w.coeffs, dtype=float)
    if c.size == 0 or not np.all(np.isfinite(c)):
        return [Diagnostic("error", "density needs finite polynomial coefficients")]
    if np.all(c == 0):
        return [Diagnostic("error", "density is identically zero")]
    low = _poly_min_on_unit(c)
    if low < -1e-14 * np.max(np.abs(c)):
        out.append(Diagnostic("error", f"density is negative on [0,1] (min {low:.3g})"))
        return out
    mu1 = float(np.sum(c))
    if mu1 == 0.0:
        out.append(
            Diagnostic("warning", "mu(1)=0: the condition mu(1)!=0 fails; complete "
                       "monotonicity of the kernels is not guaranteed")
        )
    if c[0] == 0.0:
        nu = int(np.flatnonzero(c)[0])
        out.append(
            Diagnostic("warning", f"mu(0)=0: relying on the condition mu(beta)=a*beta^nu "
                       f"as beta->0 with nu={nu}, a={c[nu]:g}")
        )
    return out


def check_weight(w: WeightSpec) -> WeightSpec:
    """Raise :class:`WeightError` if ``validate`` reports any error."""
    errors = [d.message for d in validate(w) if d.level == "error"]
    if errors:
        raise WeightError("; ".join(errors))
    return w


def _poly_min_on_unit(c: np.ndarray) -> float:
    cand = [0.0, 1.0]
    if c.size > 2:
        for r in np.polynomial.polynomial.polyroots(np.polynomial.polynomial.polyder(c)):
            if abs(r.imag) < 1e-12 and 0.0 < r.real < 1.0:
                cand.append(r.real)
    cand.extend(np.linspace(0.0, 1.0, 65))
    return float(np.min(np.polynomial.polynomial.polyval(np.array(cand), c)))


# ------------------------------------------------------------------- grammar


def parse_weight(text: str) -> WeightSpec:
    """Parse ``discrete:ALPHA[,AJ:BJ]*``, ``constant`` or ``poly:C0,C1,...``.

    Only syntax is checked here; use :func:`validate` for the invariants.
    """
    text = text.strip()
    if text.lower() == "constant":
        return ConstantWeight()
    head, sep, body = text.partition(":")
    head = head.strip().lower()
    if not sep or not body.strip():
        raise ValueError(f"cannot parse weight {text!r}")
    parts = [p.strip() for p in body.split(",")]
    try:
        if head == "discrete":
            alpha = float(parts[0])
            terms = []
            for p in parts[1:]:
                a, colon, b = p.partition(":")
                if not colon:
                    raise ValueError(f"term {p!r} is not of the form ALPHA_J:B_J")
                terms.append((float(a), float(b)))
            return DiscreteWeight(alpha, tuple(terms))
        if head == "poly":
            return PolynomialWeight(tuple(float(p) for p in parts))
    except ValueError as exc:
        raise ValueError(f"cannot parse weight {text!r}: {exc}") from None
    raise ValueError(f"unknown weight family {head!r} in {text!r}")


def format_weight(w: WeightSpec) -> str:
    """Inverse of :func:`parse_weight` (``repr`` floats round-trip exactly)."""
    if isinstance(w, ConstantWeight):
        return "constant"
    if isinstance(w, DiscreteWeight):
        items = [repr(w.alpha)] + [f"{a!r}:{b!r}" for a, b in w.terms]
        return "discrete:" + ",".join(items)
    return "poly:" + ",".join(repr(c) for c in w.coeffs)


# ----------------------------------------------------------------- h and g


def _as_complex_off_cut(s):
    z = np.asarray(s, dtype=complex)
    if np.any((z.imag == 0) & (z.real <= 0)):
        raise DomainError("s lies on the branch cut (-inf, 0]")
    return z


def _beta_rule(deg: int, log_s) -> tuple[np.ndarray, np.ndarray]:
    # exp(beta*L) is entire in beta; enough nodes to resolve |L| oscillations
    n = 24 + deg + int(np.max(np.abs(log_s), initial=0.0))
    return gauss_legendre(min(n, 400))


def h_eval(w: WeightSpec, s):
    """``h(s)`` for scalar or array ``s`` off the cut."""
    z = _as_complex_off_cut(s)
    if isinstance(w, DiscreteWeight):
        out = z**w.alpha
        for a, b in w.terms:
            out = out + b * z**a
    elif isinstance(w, ConstantWeight):
        out = _h_constant(z)
    else:
        logz = np.log(z)
        x, wt = _beta_rule(len(w.coeffs), logz)
        mu = w.density(x)
        out = np.exp(np.multiply.outer(logz, x)) @ (wt * mu)
    return out[()] if np.ndim(out) == 0 else out


def _h_constant(z: np.ndarray) -> np.ndarray:
    logz = np.log(z)
    near = np.abs(z - 1.0) < CONSTANT_SERIES_RADIUS
    with np.errstate(invalid="ignore", divide="ignore"):
        out = (z - 1.0) / logz
    if np.any(near):
        L = logz[near]
        # (e^L - 1)/L = sum L^k/(k+1)!
        acc = np.zeros_like(L)
        for k in range(7, -1, -1):
            acc = acc * L + 1.0 / math.factorial(k + 1)
        out = np.where(near, 0, out)
        out[near] = acc
    return out


def g_eval(w: WeightSpec, kind: ProblemKind, s):
    """``g1(s) = h(s)`` (Caputo) or ``g2(s) = s / h(s)`` (RL)."""
    kind = ProblemKind.parse(kind)
    h = h_eval(w, s)
    if kind is ProblemKind.CAPUTO:
        return h
    if np.any(h == 0):
        raise DomainError("h(s) vanishes; g2 = s/h(s) undefined")
    return np.asarray(s, dtype=complex) / h if np.ndim(h) else complex(s) / h


def g_real(w: WeightSpec, kind: ProblemKind, s: float) -> float:
    """``g`` at a positive real point as a float."""
    if s <= 0:
        raise DomainError("g_real needs s > 0")
    return float(np.real(g_eval(w, kind, s)))


# --------------------------------------------------------------------- jets


def h_jet(w: WeightSpec, s: float, order: int) -> Jet:
    """Taylor coefficients of ``h`` at ``s > 0``."""
    s = float(s)
    if s <= 0:
        raise DomainError("jets are taken at s > 0")
    if isinstance(w, DiscreteWeight):
        coeffs = w.coefficients @ power_coeffs(s, w.orders, order)
        return Jet(s, coeffs)
    # Dividing by the log jet amplifies rounding badly for high orders, so
    # the constant weight goes through the same quadrature as polynomials:
    # int mu(beta) binom(beta, k) s^(beta - k) dbeta; for beta in (0, 1) the
    # sign of binom(beta, k) does not depend on beta, so no cancellation
    x, wt = _beta_rule(len(w.coeffs) + order, math.log(s))
    coeffs = (wt * w.density(x)) @ power_coeffs(s, x, order)
    return Jet(s, coeffs)


def g_jet(w: WeightSpec, kind: ProblemKind, s: float, order: int) -> Jet:
    """Jet of ``g`` at ``s > 0`` through the given order."""
    kind = ProblemKind.parse(kind)
    h = h_jet(w, s, order)
    if kind is ProblemKind.CAPUTO:
        return h
    return Jet.identity(h.center, order) / h


# ------------------------------------------------------------ sector bound


@dataclass(frozen=True)
class SectorReport:
    """Outcome of :func:`sector_angle_check`.

    ``slack`` is ``factor * |arg s| - |arg g(s)|`` minimized over samples;
    the check passes when ``slack >= -tol``.
    """

    factor: float
    passed: bool
    slack: float
    worst_sample: complex
    violations: int
    samples: int


def sector_factor(w: WeightSpec) -> float:
    """The stated angle factor: ``alpha`` for discrete weights, 1 otherwise."""
    return w.alpha if isinstance(w, DiscreteWeight) else 1.0


def sector_angle_check(w: WeightSpec, kind: ProblemKind, samples, tol: float = 1e-12,
                       factor: float | None = None) -> SectorReport:
    """Sample ``|arg g(s)| <= factor * |arg s|`` over points off the cut.

    ``factor`` defaults to :func:`sector_factor`.
    """
    z = _as_complex_off_cut(np.atleast_1d(samples))
    if factor is None:
        factor = sector_factor(w)
    g = np.atleast_1d(g_eval(w, kind, z))
    slack = factor * np.abs(np.angle(z)) - np.abs(np.angle(g))
    i = int(np.argmin(slack))
    bad = int(np.sum(slack < -tol))
    return SectorReport(float(factor), bad == 0, float(slack[i]), complex(z[i]), bad, z.size)


def theta0(w: DiscreteWeight, eps: float = 0.01) -> float:
    """Analyticity half-angle ``min((1/alpha - 1) pi/2, pi/2) - eps``."""
    return min((1.0 / w.alpha - 1.0) * math.pi / 2, math.pi / 2) - eps
