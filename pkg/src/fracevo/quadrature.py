"""Gauss-Legendre building blocks shared by the kernel and solver modules."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point rule on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(edges, n: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes/weights over consecutive panels.

    Parameters
    ----------
    edges : array_like
        Increasing panel boundaries.
    n : int
        Points per panel.
    """
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(n)
    a = edges[:-1, None]
    width = np.diff(edges)[:, None]
    nodes = (a + width * x).ravel()
    weights = (width * w).ravel()
    return nodes, weights


def geometric_edges(a: float, b: float, levels: int, ratio: float = 0.5) -> np.ndarray:
    """Panel edges on [a, b] refined geometrically toward ``a``.

    The first panel is ``[a, a + (b - a) * ratio**levels]``.
    """
    k = np.arange(levels, -1, -1)
    return np.concatenate(([a], a + (b - a) * ratio**k))
