"""The Volterra kernels k1 (Caputo) and k2 (Riemann-Liouville).

Their Laplace transforms are ``1/h(s)`` and ``h(s)/s``, so ``k1 * k2 = 1``.
For discrete weights ``k1`` has the spectral representation

    k1(t) = int_0^inf exp(-r t) K(r) dr,    K(r) = -Im(1/h(r e^{i pi})) / pi,

and ``K > 0`` certifies that ``k1`` is completely monotone.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sps

from .errors import DomainError, QuadratureError
from .laplace import DEFAULT_CONTOUR, invert_scalar
from .quadrature import gauss_legendre, panel_rule
from .special import gamma, mittag_leffler, rgamma
from .symbols import DiscreteWeight, WeightSpec, check_weight, h_eval

# spectral quadrature in x = r t: [0, X_INNER] by substitution, dyadic panels
# up to X_SPLIT, unit-width-2 panels up to X_MAX, analytic tail beyond
X_INNER = 1e-6
X_SPLIT = 2.0
X_MAX = 40.0
_GL_POINTS = 20
_INNER_LEVELS = 48


class KernelId(enum.Enum):
    K1 = "k1"
    K2 = "k2"

    @classmethod
    def parse(cls, text: "str | KernelId") -> "KernelId":
        return text if isinstance(text, KernelId) else cls(str(text).strip().lower())


def _times(t) -> tuple[np.ndarray, bool]:
    tt = np.asarray(t, dtype=float)
    scalar = tt.ndim == 0
    tt = np.atleast_1d(tt)
    if np.any(~(tt > 0)) or np.any(~np.isfinite(tt)):
        raise DomainError("kernels are evaluated at finite t > 0")
    return tt, scalar


def _out(v: np.ndarray, scalar: bool):
    return float(v[0]) if scalar else v


def _beta_nodes(extra: float):
    return gauss_legendre(min(400, 32 + int(extra)))


# ---------------------------------------------------------------------- k2


def k2_eval(w: WeightSpec, t):
    """``k2(t) = int mu(beta) t**-beta / Gamma(1 - beta) dbeta``."""
    tt, scalar = _times(t)
    check_weight(w)
    if isinstance(w, DiscreteWeight):
        out = np.zeros_like(tt)
        for a, b in zip(w.orders, w.coefficients):
            out += b * tt**-a * rgamma(1.0 - a)
        return _out(out, scalar)
    logt = np.log(tt)
    x, wx = _beta_nodes(len(w.coeffs) + np.max(np.abs(logt)))
    vals = np.exp(-np.outer(logt, x)) * (wx * w.density(x) * sps.rgamma(1.0 - x))
    return _out(vals.sum(axis=1), scalar)


def k2_integral(w: WeightSpec, t):
    """``int_0^t k2 = int mu(beta) t**(1-beta) / Gamma(2 - beta) dbeta``."""
    tt, scalar = _times(t)
    if isinstance(w, DiscreteWeight):
        out = np.zeros_like(tt)
        for a, b in zip(w.orders, w.coefficients):
            out += b * tt ** (1.0 - a) * rgamma(2.0 - a)
        return _out(out, scalar)
    logt = np.log(tt)
    x, wx = _beta_nodes(len(w.coeffs) + np.max(np.abs(logt)))
    vals = np.exp(np.outer(logt, 1.0 - x)) * (wx * w.density(x) * sps.rgamma(2.0 - x))
    return _out(vals.sum(axis=1), scalar)


# ------------------------------------------------------------- spectral K


def _require_discrete(w: WeightSpec) -> DiscreteWeight:
    if not isinstance(w, DiscreteWeight):
        raise DomainError("the spectral density is only implemented for discrete weights")
    check_weight(w)
    return w


def _scaled_density(w: DiscreteWeight, log_r: np.ndarray) -> np.ndarray:
    """``K(r) * r**alpha_m`` from ``log(r)``.

    Only non-negative powers of r appear, so this is bounded as r -> 0; taking
    log(r) avoids underflow when ``r = x**p`` is astronomically small.
    """
    am = w.alpha_min
    re = np.zeros_like(log_r)
    im = np.zeros_like(log_r)
    for a, b in zip(w.orders, w.coefficients):
        p = b * np.exp((a - am) * log_r)
        re += p * math.cos(math.pi * a)
        im += p * math.sin(math.pi * a)
    return im / (math.pi * (re * re + im * im))


def k1_spectral_density(w: WeightSpec, r):
    """``K(r) = B / (pi (A**2 + B**2))`` with ``h(r e^{i pi}) = A + i B``."""
    w = _require_discrete(w)
    rr = np.asarray(r, dtype=float)
    if np.any(~(rr > 0)):
        raise DomainError("the spectral density is defined for r > 0")
    out = _scaled_density(w, np.log(rr)) * rr ** (-w.alpha_min)
    return float(out) if out.ndim == 0 else out


def _spectral_rule(w: DiscreteWeight):
    """Nodes/weights in x = r t for ``int_0^X_MAX e^{-x} K(x/t) dx / t``.

    Returns ``(u, wu, x, wxx)``: the inner part uses ``x = u**p`` with
    ``p = 1/(1 - alpha_m)``, which cancels the ``x**-alpha_m`` endpoint
    behavior; the outer part is plain composite Gauss-Legendre in x.
    """
    p = 1.0 / (1.0 - w.alpha_min)
    u0 = X_INNER ** (1.0 / p)
    u_edges = np.concatenate(([0.0], u0 * 0.5 ** np.arange(_INNER_LEVELS, -1, -1)))
    u, wu = panel_rule(u_edges, _GL_POINTS)
    dyadic = X_INNER * 2.0 ** np.arange(int(math.log2(X_SPLIT / X_INNER)) + 1)
    x_edges = np.concatenate((dyadic[dyadic < X_SPLIT], np.arange(X_SPLIT, X_MAX + 1.0, 2.0)))
    x, wxx = panel_rule(x_edges, _GL_POINTS)
    return p, u, wu, x, wxx


def k1_spectral(w: WeightSpec, t):
    """``k1(t)`` by quadrature of the spectral representation (discrete weights)."""
    w = _require_discrete(w)
    tt, scalar = _times(t)
    am = w.alpha_min
    p, u, wu, x, wxx = _spectral_rule(w)
    log_u = np.log(u)
    xu = u**p
    log_x = np.log(x)
    out = np.empty_like(tt)
    for i, ti in enumerate(tt):
        lt = math.log(ti)
        # inner: dx = p u^{p-1} du and x^{-am} u^{p-1} = 1
        inner = p * np.sum(wu * np.exp(-xu) * _scaled_density(w, p * log_u - lt)) * ti ** (am - 1.0)
        outer = np.sum(wxx * np.exp(-x) * _scaled_density(w, log_x - lt) * (x / ti) ** -am) / ti
        tail = math.exp(-X_MAX) * float(k1_spectral_density(w, X_MAX / ti)) / ti
        out[i] = inner + outer + tail
    return _out(out, scalar)


# --------------------------------------------------------------------- k1


def k1_eval(w: WeightSpec, t, method: str = "auto"):
    """Evaluate ``k1(t)``.

    Parameters
    ----------
    method : {"auto", "closed", "spectral", "inversion"}
        ``auto`` uses the closed forms for one or two discrete terms, the
        spectral quadrature for longer discrete weights, and contour
        inversion of ``1/h`` for continuous weights.
    """
    tt, scalar = _times(t)
    check_weight(w)
    if method == "auto":
        if isinstance(w, DiscreteWeight):
            method = "closed" if len(w.terms) <= 1 else "spectral"
        else:
            method = "inversion"
    if method == "closed":
        out = _k1_closed(w, tt)
    elif method == "spectral":
        out = np.atleast_1d(k1_spectral(w, tt))
    elif method == "inversion":
        out = np.atleast_1d(invert_scalar(lambda s: 1.0 / h_eval(w, s), tt, DEFAULT_CONTOUR))
    else:
        raise ValueError(f"unknown k1 method {method!r}")
    return _out(out, scalar)


def _k1_closed(w: WeightSpec, tt: np.ndarray) -> np.ndarray:
    if not isinstance(w, DiscreteWeight) or len(w.terms) > 1:
        raise DomainError("closed-form k1 needs a discrete weight with at most two terms")
    a = w.alpha
    if not w.terms:
        return tt ** (a - 1.0) / gamma(a)
    a1, b1 = w.terms[0]
    return tt ** (a - 1.0) * mittag_leffler(a - a1, a, -b1 * tt ** (a - a1))


def k1_integral(w: WeightSpec, t):
    """``int_0^t k1``, the original of ``1/(s h(s))``."""
    tt, scalar = _times(t)
    if isinstance(w, DiscreteWeight) and len(w.terms) <= 1:
        a = w.alpha
        if not w.terms:
            out = tt**a / gamma(a + 1.0)
        else:
            a1, b1 = w.terms[0]
            out = tt**a * mittag_leffler(a - a1, a + 1.0, -b1 * tt ** (a - a1))
        return _out(out, scalar)
    out = invert_scalar(lambda s: 1.0 / (s * h_eval(w, s)), tt, DEFAULT_CONTOUR)
    return _out(np.atleast_1d(out), scalar)


def kernel_eval(w: WeightSpec, which: KernelId, t):
    which = KernelId.parse(which)
    return k1_eval(w, t) if which is KernelId.K1 else k2_eval(w, t)


def kernel_integral(w: WeightSpec, which: KernelId, t):
    which = KernelId.parse(which)
    return k1_integral(w, t) if which is KernelId.K1 else k2_integral(w, t)


# ------------------------------------------------------ convolution check

_CONV_LEVELS = 60


def convolution_identity_check(w: WeightSpec, t: float) -> float:
    """``(k1 * k2)(t)``, which should equal 1.

    The integral is split at ``t/2`` so each half has one endpoint
    singularity. Each half uses dyadic panels refined toward that endpoint;
    on the innermost panel ``[0, d]`` the smooth factor is frozen and the
    singular factor is integrated exactly via ``int_0^d k``.
    """
    t = float(t)
    if not t > 0:
        raise DomainError("convolution check needs t > 0")
    check_weight(w)
    half = 0.5 * t
    edges = half * 0.5 ** np.arange(_CONV_LEVELS, -1, -1)
    d = edges[0]
    x, wx = panel_rule(edges, _GL_POINTS)
    # k2 singular at 0, k1 smooth near t
    left = np.sum(wx * k2_eval(w, x) * k1_eval(w, t - x)) + k2_integral(w, d) * k1_eval(w, t)
    # k1 singular at 0, k2 smooth near t
    right = np.sum(wx * k1_eval(w, x) * k2_eval(w, t - x)) + k1_integral(w, d) * k2_eval(w, t)
    total = float(left + right)
    if not math.isfinite(total):
        raise QuadratureError(f"convolution quadrature produced {total} at t={t:g}")
    return total


# ---------------------------------------------------------------- CM check


@dataclass(frozen=True)
class CMReport:
    """Sampled complete-monotonicity evidence.

    ``worst`` holds, for derivative orders 0..4, the minimum of
    ``(-1)**n f[x_i..x_{i+n}] / bound_i`` where ``bound_i`` is the rounding
    allowance of that divided difference; the order passes if it is >= -1.
    """

    passed: bool
    orders_passed: tuple[bool, ...]
    worst: tuple[float, ...]
    spectral_min: float | None = None


def divided_differences(x: np.ndarray, f: np.ndarray, order: int) -> list[np.ndarray]:
    """All divided differences of orders 0..order on consecutive nodes."""
    out = [np.asarray(f, dtype=float)]
    cur = out[0]
    for n in range(1, order + 1):
        cur = (cur[1:] - cur[:-1]) / (x[n:] - x[:-n])
        out.append(cur)
    return out


def _dd_rounding_bound(x: np.ndarray, f: np.ndarray, order: int, rel: float) -> list[np.ndarray]:
    # |error| <= sum_i rel |f_i| / prod_{j != i} |x_i - x_j| over each window
    out = [rel * np.abs(f)]
    for n in range(1, order + 1):
        m = x.size - n
        b = np.zeros(m)
        for i in range(n + 1):
            xi = x[i : i + m]
            prod = np.ones(m)
            for j in range(n + 1):
                if j != i:
                    prod *= np.abs(xi - x[j : j + m])
            b += rel * np.abs(f[i : i + m]) / prod
        out.append(b)
    return out


def cm_check(w: WeightSpec, which: KernelId, grid, rel_accuracy: float = 1e-9,
             max_order: int = 4) -> CMReport:
    """Check sign alternation of divided differences of ``k`` on ``grid``.

    For ``K1`` with a discrete weight the exact certificate ``K(r) > 0`` is
    also sampled on a log grid spanning ``[1e-6, 1e6]``.
    """
    which = KernelId.parse(which)
    x = np.asarray(grid, dtype=float)
    if np.any(x <= 0) or np.any(np.diff(x) <= 0):
        raise DomainError("cm_check needs a positive increasing grid")
    f = np.asarray(kernel_eval(w, which, x), dtype=float)
    dds = divided_differences(x, f, max_order)
    bounds = _dd_rounding_bound(x, f, max_order, rel_accuracy)
    worst = []
    ok = []
    for n, (dd, bd) in enumerate(zip(dds, bounds)):
        signed = (-1.0) ** n * dd
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(signed >= 0, np.inf, signed / np.maximum(bd, 1e-300))
        m = float(np.min(ratio)) if ratio.size else math.inf
        worst.append(m)
        ok.append(m >= -1.0)
    spec_min = None
    if which is KernelId.K1 and isinstance(w, DiscreteWeight):
        spec_min = float(np.min(k1_spectral_density(w, np.geomspace(1e-6, 1e6, 200))))
        ok_spec = spec_min > 0
    else:
        ok_spec = True
    return CMReport(bool(all(ok) and ok_spec), tuple(ok), tuple(worst), spec_min)
