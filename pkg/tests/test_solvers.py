from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracevo.errors import DomainError, TailMassError
from fracevo.generators import Diagonal, DirichletLaplacian1D, Scalar
from fracevo.laplace import FixedTalbot, HankelSector
from fracevo.solvers import (Trajectory, solve_resolvent, solve_subordination, solve_volterra,
                             subordination_density, tau_mean, tau_rule)
from fracevo.special import mittag_leffler
from fracevo.symbols import ConstantWeight, DiscreteWeight, ProblemKind, parse_weight
from oracles import DENSITY_CONSTANT, SCALAR_SOLUTIONS

CAPUTO, RL = ProblemKind.CAPUTO, ProblemKind.RL
HALF = DiscreteWeight(0.5)
E_HALF = math.e * math.erfc(1.0)  # E_{1/2}(-1)
WEIGHTS = [HALF, parse_weight("discrete:0.8,0.4:1.0"), ConstantWeight()]
LAP = DirichletLaplacian1D(16, 1.0)


def test_trajectory_validation():
    tr = Trajectory([0.0, 1.0], [[1.0], [2.0]], CAPUTO, "x")
    assert tr.dim == 1 and len(tr) == 2 and tr.at(1.0)[0] == 2.0
    with pytest.raises(ValueError):
        Trajectory([1.0, 0.5], [[1.0], [2.0]], CAPUTO, "x")
    with pytest.raises(ValueError):
        Trajectory([0.0, 1.0], [[1.0]], CAPUTO, "x")
    with pytest.raises(KeyError):
        tr.at(0.5)


# ---------------------------------------------------------------- resolvent


def test_resolvent_examples():
    for kind in (CAPUTO, RL):
        tr = solve_resolvent(HALF, kind, Scalar(-1.0), [1.0], [1.0])
        assert tr.times[0] == 0.0 and tr.states[0, 0] == 1.0
        assert tr.at(1.0)[0] == pytest.approx(E_HALF, rel=1e-9)
    for w in WEIGHTS:
        for kind in (CAPUTO, RL):
            tr = solve_resolvent(w, kind, Scalar(0.0), [1.0], [0.3, 1.0, 7.0], include_origin=False)
            np.testing.assert_allclose(tr.states[:, 0], 1.0, rtol=1e-10)


@given(st.floats(0.1, 0.9), st.floats(-3.0, -0.1))
def test_resolvent_single_term_exact(alpha, lam):
    t = np.array([0.5, 1.0, 2.0])
    w = DiscreteWeight(alpha)
    cap = solve_resolvent(w, CAPUTO, Scalar(lam), [1.0], t, include_origin=False).states[:, 0]
    np.testing.assert_allclose(cap, mittag_leffler(alpha, 1.0, lam * t**alpha), rtol=1e-8)
    rl = solve_resolvent(w, RL, Scalar(lam), [1.0], t, include_origin=False).states[:, 0]
    np.testing.assert_allclose(rl, mittag_leffler(1 - alpha, 1.0, lam * t ** (1 - alpha)), rtol=1e-8)


@pytest.mark.parametrize("key", sorted(SCALAR_SOLUTIONS))
def test_resolvent_oracle(key):
    tag, kind = key
    ts = [t for t, _ in SCALAR_SOLUTIONS[key]]
    tr = solve_resolvent(parse_weight(tag), kind, Scalar(-1.0), [1.0], ts, include_origin=False)
    np.testing.assert_allclose(tr.states[:, 0], [v for _, v in SCALAR_SOLUTIONS[key]], rtol=1e-10)


def test_resolvent_contour_choice():
    t = [0.5, 2.0]
    a = solve_resolvent(HALF, RL, LAP, np.ones(16), t, FixedTalbot(48), include_origin=False)
    b = solve_resolvent(HALF, RL, LAP, np.ones(16), t, HankelSector(), include_origin=False)
    np.testing.assert_allclose(a.states, b.states, rtol=1e-8)


def test_resolvent_metadata():
    tr = solve_resolvent(DiscreteWeight(0.8), CAPUTO, Scalar(-1.0), [1.0], [1.0])
    assert tr.meta["theta0"] == pytest.approx(0.25 * math.pi / 2 - 0.01)
    assert tr.method == "resolvent"


# ------------------------------------------------------------ subordination


def test_density_half_order_heat_kernel():
    tau = np.linspace(0.0, 8.0, 33)
    for t in (0.1, 1.0, 10.0):
        ref = np.exp(-tau**2 / (4 * t)) / math.sqrt(math.pi * t)
        np.testing.assert_allclose(subordination_density(HALF, CAPUTO, t, tau), ref, atol=1e-7)
    assert subordination_density(HALF, CAPUTO, 1.0, 1.0) == pytest.approx(0.4393912, abs=1e-7)


@pytest.mark.parametrize("kind", ["caputo", "rl"])
def test_density_constant_oracle(kind):
    for t, tau, ref in DENSITY_CONSTANT[kind]:
        assert subordination_density(ConstantWeight(), kind, t, tau) == pytest.approx(ref, abs=1e-9)


def test_density_at_origin_is_inverse_of_g_over_s():
    # single term RL: g/s = s^-alpha, original t^(alpha-1)/Gamma(alpha)
    v = subordination_density(DiscreteWeight(0.3), RL, 2.0, 0.0)
    assert v == pytest.approx(2.0 ** (0.3 - 1) / math.gamma(0.3), rel=1e-8)


@pytest.mark.parametrize("w", WEIGHTS, ids=str)
@pytest.mark.parametrize("kind", [CAPUTO, RL])
def test_density_is_probability_density(w, kind):
    for t in (0.1, 1.0, 10.0):
        rule = tau_rule(w, kind, t)
        assert abs(rule.mass - 1.0) <= 1e-6
        assert rule.min_density >= -1e-9
        assert rule.tail_estimate < 1e-8
        # first moment equals the integral of the Volterra kernel
        mean = float(rule.weights @ rule.nodes)
        assert mean == pytest.approx(tau_mean(w, kind, t), rel=1e-6)


def test_density_rejects_negative_tau():
    with pytest.raises(DomainError):
        subordination_density(HALF, CAPUTO, 1.0, -0.5)


def test_tail_not_certified(monkeypatch):
    from fracevo.solvers import subordination

    monkeypatch.setattr(subordination, "MAX_SCALES", 2)
    with pytest.raises(TailMassError, match="tail mass"):
        tau_rule(HALF, CAPUTO, 1.0, tail_tol=1e-12)
    with pytest.raises(DomainError):
        tau_rule(HALF, CAPUTO, 1.0, tail_tol=0.0)


def test_subordination_examples():
    for kind in (CAPUTO, RL):
        tr = solve_subordination(ConstantWeight(), kind, Scalar(0.0), [2.0], [0.5, 3.0])
        np.testing.assert_allclose(tr.states[:, 0], 2.0, rtol=1e-7)
    tr = solve_subordination(HALF, CAPUTO, Scalar(-1.0), [1.0], [1.0], include_origin=False)
    assert tr.states[0, 0] == pytest.approx(E_HALF, rel=1e-7)
    e8 = np.eye(16)[7]
    tr = solve_subordination(HALF, CAPUTO, LAP, e8, [0.5])
    assert np.all(tr.states >= -1e-7)


def test_subordination_thread_count_invariant(monkeypatch):
    t = [0.2, 0.9, 3.0]
    monkeypatch.setenv("FRACEVO_THREADS", "1")
    one = solve_subordination(HALF, RL, LAP, np.ones(16), t).states
    monkeypatch.setenv("FRACEVO_THREADS", "4")
    many = solve_subordination(HALF, RL, LAP, np.ones(16), t).states
    np.testing.assert_array_equal(one, many)


# ----------------------------------------------------------------- volterra


def test_volterra_near_classical():
    tr = solve_volterra(DiscreteWeight(0.999), CAPUTO, Scalar(-1.0), [1.0], 1.0, 512)
    assert tr.states[-1, 0] == pytest.approx(math.exp(-1), abs=5e-3)


def test_volterra_first_order_convergence():
    errs = []
    for steps in (256, 512, 1024):
        tr = solve_volterra(HALF, CAPUTO, Scalar(-1.0), [1.0], 1.0, steps)
        errs.append(abs(tr.states[-1, 0] - E_HALF))
    assert errs[-1] <= 2e-3
    for coarse, fine in zip(errs, errs[1:]):
        assert 0.4 <= fine / coarse <= 0.6


def test_volterra_origin_and_validation():
    for steps in (2, 4):
        tr = solve_volterra(HALF, RL, Diagonal((-1.0, -3.0)), [1.0, 2.0], 1e-9, steps)
        np.testing.assert_array_equal(tr.states[0], [1.0, 2.0])
        assert tr.times[0] == 0.0
    with pytest.raises(ValueError):
        solve_volterra(HALF, RL, Scalar(-1.0), [1.0], 1.0, 1)


# ------------------------------------------------------ cross-method checks


@pytest.mark.parametrize("w", WEIGHTS, ids=str)
@pytest.mark.parametrize("kind", [CAPUTO, RL])
def test_cross_method_agreement(w, kind):
    a = np.sin(np.arange(1, 17) * math.pi / 17) + 0.3 * np.cos(np.arange(16))
    ref = solve_resolvent(w, kind, LAP, a, [1.0], include_origin=False).states[0]
    sub = solve_subordination(w, kind, LAP, a, [1.0], include_origin=False).states[0]
    vol = solve_volterra(w, kind, LAP, a, 1.0, 1024).states[-1]
    scale = np.max(np.abs(ref))
    assert np.max(np.abs(sub - ref)) <= 1e-5 * scale
    assert np.max(np.abs(vol - ref)) <= 1e-3 * scale
    assert np.max(np.abs(vol - sub)) <= 1e-3 * scale


@pytest.mark.parametrize("w", WEIGHTS, ids=str)
@pytest.mark.parametrize("kind", [CAPUTO, RL])
def test_norm_bound_and_positivity(w, kind):
    rng = np.random.default_rng(7)
    a = rng.uniform(0, 1, 16)
    a[rng.integers(0, 16, 4)] = 0.0
    t = [0.05, 0.5, 2.0, 8.0]
    trs = [solve_resolvent(w, kind, LAP, a, t), solve_subordination(w, kind, LAP, a, t),
           solve_volterra(w, kind, LAP, a, 8.0, 256)]
    for tr in trs:
        assert np.all(np.linalg.norm(tr.states, axis=1) <= np.linalg.norm(a) + 1e-8)
        assert np.all(tr.states >= -1e-7)
