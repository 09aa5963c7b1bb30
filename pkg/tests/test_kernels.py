from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracevo.errors import DomainError
from fracevo.kernels import (KernelId, cm_check, convolution_identity_check, divided_differences,
                             k1_eval, k1_integral, k1_spectral, k1_spectral_density, k2_eval, k2_integral, kernel_eval)
from fracevo.quadrature import panel_rule
from fracevo.special import mittag_leffler
from fracevo.symbols import ConstantWeight, DiscreteWeight, PolynomialWeight, h_eval, parse_weight
from oracles import K1_CONST, K1_POLY12, K1_THREE, K2_CONST

TWO = DiscreteWeight(0.6, ((0.3, 0.5),))
THREE = DiscreteWeight(0.8, ((0.5, 0.7), (0.2, 1.3)))


@st.composite
def spaced_discrete(draw, max_terms=3, gap=0.05):
    m = draw(st.integers(1, max_terms))
    orders = [draw(st.floats(0.06 + gap * m, 0.95))]
    for i in range(m):
        room = 0.05 + gap * (m - 1 - i)
        hi = max(orders[-1] - gap, room)
        orders.append(draw(st.floats(max(room, orders[-1] - 0.4), hi)))
    coeffs = draw(st.lists(st.floats(0.1, 4.0), min_size=m, max_size=m))
    return DiscreteWeight(orders[0], tuple(zip(orders[1:], coeffs)))


# -------------------------------------------------------------------- k2


def test_k2_examples():
    assert k2_eval(DiscreteWeight(0.5), 1.0) == pytest.approx(0.5641895835, abs=1e-10)
    w = DiscreteWeight(0.5, ((0.25, 2.0),))
    assert k2_eval(w, 1.0) == pytest.approx(1 / math.gamma(0.5) + 2 / math.gamma(0.75), rel=1e-14)


@pytest.mark.parametrize("t, ref", K2_CONST)
def test_k2_constant_oracle(t, ref):
    assert k2_eval(ConstantWeight(), t) == pytest.approx(ref, rel=1e-10)


def test_k2_integral_is_antiderivative():
    for w in (TWO, ConstantWeight(), PolynomialWeight((1.0, 2.0))):
        x, wx = panel_rule(np.geomspace(1e-14, 2.0, 30), 20)
        quad = np.sum(wx * k2_eval(w, x)) + k2_integral(w, 1e-14)
        assert quad == pytest.approx(k2_integral(w, 2.0), rel=1e-10)


def test_kernels_reject_nonpositive_t():
    for fn in (k1_eval, k2_eval):
        with pytest.raises(DomainError):
            fn(TWO, 0.0)
        with pytest.raises(DomainError):
            fn(TWO, [1.0, -1.0])


# ------------------------------------------------------------ spectral K


@given(st.floats(0.05, 0.95), st.floats(1e-4, 1e4))
def test_spectral_density_single_term(alpha, r):
    ref = math.sin(alpha * math.pi) / (math.pi * r**alpha)
    assert k1_spectral_density(DiscreteWeight(alpha), r) == pytest.approx(ref, rel=1e-13)


def test_spectral_density_complex_oracle():
    ref = -(1 / h_eval(TWO, complex(-1.0, 1e-300))).imag / math.pi
    h = np.exp(1j * math.pi * 0.6) + 0.5 * np.exp(1j * math.pi * 0.3)
    assert k1_spectral_density(TWO, 1.0) == pytest.approx(-(1 / h).imag / math.pi, rel=1e-14)
    assert ref == pytest.approx(k1_spectral_density(TWO, 1.0), rel=1e-12)


@given(spaced_discrete(), st.floats(-8, 8))
def test_spectral_density_positive(w, logr):
    assert k1_spectral_density(w, 10.0**logr) > 0


def test_spectral_density_rejects_continuous():
    with pytest.raises(DomainError):
        k1_spectral_density(ConstantWeight(), 1.0)


# -------------------------------------------------------------------- k1


def test_k1_examples():
    assert k1_eval(DiscreteWeight(0.5), 1.0) == pytest.approx(0.5641895835, abs=1e-10)
    closed = 2.0 ** -0.4 * mittag_leffler(0.3, 0.6, -0.5 * 2.0**0.3)
    assert k1_eval(TWO, 2.0, "closed") == pytest.approx(closed, rel=1e-14)
    assert k1_spectral(TWO, 2.0) == pytest.approx(closed, rel=1e-8)


@given(st.floats(0.05, 0.95))
def test_k1_small_time_single_term(alpha):
    t = np.array([1e-8, 1e-4])
    ratio = k1_eval(DiscreteWeight(alpha), t) * math.gamma(alpha) * t ** (1 - alpha)
    np.testing.assert_allclose(ratio, 1.0, rtol=1e-12)


@given(spaced_discrete(max_terms=1), st.floats(-2, 2))
def test_k1_closed_vs_spectral(w, logt):
    t = 10.0**logt
    assert k1_eval(w, t, "spectral") == pytest.approx(k1_eval(w, t, "closed"), rel=1e-8)


@pytest.mark.parametrize("t, ref", K1_THREE)
def test_k1_three_term_oracle(t, ref):
    assert k1_eval(THREE, t) == pytest.approx(ref, rel=1e-8)
    assert k1_eval(THREE, t, "inversion") == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("w, table", [(ConstantWeight(), K1_CONST),
                                      (PolynomialWeight((1.0, 2.0)), K1_POLY12)])
def test_k1_continuous_oracle(w, table):
    for t, ref in table:
        assert k1_eval(w, t) == pytest.approx(ref, rel=1e-6)


def test_k1_integral_matches_quadrature():
    for w in (TWO, THREE, ConstantWeight()):
        x, wx = panel_rule(np.concatenate(([0.0], np.geomspace(1e-30, 1.5, 40))), 16)
        x, wx = x[x > 0], wx[x > 0]
        quad = np.sum(wx * k1_eval(w, x))
        assert quad == pytest.approx(k1_integral(w, 1.5), rel=1e-7)


@pytest.mark.parametrize("w", [TWO, THREE, ConstantWeight(), PolynomialWeight((1.0, 2.0))], ids=str)
@pytest.mark.parametrize("s", [0.1, 1.0, 10.0])
def test_k1_laplace_pair(w, s):
    # int_0^T e^{-st} k1(t) dt on geometric panels; beyond T = 60/s is negligible
    edges = np.geomspace(1e-30, 60.0 / s, 64)
    x, wx = panel_rule(edges, 16)
    lap = np.sum(wx * np.exp(-s * x) * k1_eval(w, x)) + k1_integral(w, 1e-30)
    assert lap == pytest.approx(1.0 / h_eval(w, s).real, rel=1e-5)


@pytest.mark.parametrize("w", [TWO, THREE, ConstantWeight()], ids=str)
def test_kernels_decay(w):
    t = np.array([1e2, 1e3, 1e4])
    for which in KernelId:
        k = np.asarray(kernel_eval(w, which, t))
        assert np.all(k > 0) and np.all(np.diff(k) < 0)


@pytest.mark.parametrize("text", ["discrete:0.6,0.3:0.5", "discrete:0.9,0.5:1"])
def test_long_time_exponent(text):
    w = parse_weight(text)
    t = 1e6
    assert math.log(k1_eval(w, t)) / math.log(t) == pytest.approx(w.alpha_min - 1.0, abs=0.05)


@pytest.mark.parametrize("text", ["discrete:0.6,0.3:0.5", "discrete:0.8,0.5:0.7,0.2:1.3",
                                  "discrete:0.5,0.25:2", "discrete:0.95,0.6:0.3,0.4:1"])
def test_long_time_local_slope(text):
    # log k1 / log t also carries log(C)/log t from the prefactor; the local
    # slope isolates the exponent
    w = parse_weight(text)
    t = np.array([1e6, 1.1e6])
    k = k1_eval(w, t)
    slope = np.diff(np.log(k))[0] / np.diff(np.log(t))[0]
    assert slope == pytest.approx(w.alpha_min - 1.0, abs=0.01)


def test_constant_weight_short_time():
    t = np.geomspace(1e-8, 1e-3, 30)
    v = k2_eval(ConstantWeight(), t) * t * np.log(t) ** 2
    assert np.all(v > 0) and np.max(v) < 5.0
    # the leading behavior is 1/(t log^2 t) with a slowly converging correction
    assert np.max(v) / np.min(v) < 2.0


# ------------------------------------------------------ identities and CM


@pytest.mark.parametrize("w, t, tol", [
    (DiscreteWeight(0.5), 1.0, 1e-12),
    (parse_weight("discrete:0.7,0.2:1.5"), 3.0, 1e-6),
    (ConstantWeight(), 1.0, 1e-5),
    (PolynomialWeight((0.5, 1.0, 1.0)), 2.0, 1e-5),
])
def test_convolution_identity(w, t, tol):
    assert convolution_identity_check(w, t) == pytest.approx(1.0, abs=tol)


@pytest.mark.parametrize("w, which", [
    (DiscreteWeight(0.5), KernelId.K2),
    (TWO, KernelId.K1),
    (ConstantWeight(), KernelId.K1),
    (ConstantWeight(), KernelId.K2),
])
def test_cm_examples(w, which):
    rep = cm_check(w, which, np.geomspace(1e-2, 1e2, 41))
    assert rep.passed and all(rep.orders_passed)
    if which is KernelId.K1 and isinstance(w, DiscreteWeight):
        assert rep.spectral_min > 0


def test_divided_difference_signs():
    # t^0.3 increases and is concave: the order-1 and order-2 signs are wrong for CM
    x = np.geomspace(0.1, 10, 20)
    dd = divided_differences(x, x**0.3, 2)
    assert np.all(dd[1] > 0) and np.all(dd[2] < 0)


def test_cm_check_grid_validation():
    with pytest.raises(DomainError):
        cm_check(TWO, KernelId.K1, [1.0, 0.5])
