from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import linalg

from fracevo.errors import DomainError, SingularResolventError
from fracevo.generators import (Diagonal, DirichletLaplacian1D, Scalar, apply, hille_yosida_check,
                                parse_generator, resolvent_apply, semigroup_apply)

GENERATORS = [Scalar(-1.0), Diagonal((-1.0, -5.0, 0.0)), DirichletLaplacian1D(8, 1.0),
              DirichletLaplacian1D(16, 0.3)]
gens = st.sampled_from(GENERATORS)


def vec(draw, n, lo=-1.0):
    return np.array(draw(st.lists(st.floats(lo, 1.0), min_size=n, max_size=n)))


def test_resolvent_examples():
    assert resolvent_apply(Scalar(-1.0), 1.0, [1.0])[0] == pytest.approx(0.5)
    np.testing.assert_allclose(resolvent_apply(Diagonal((-1.0, -2.0)), 2.0, [1.0, 1.0]),
                               [1 / 3, 1 / 4])
    A = DirichletLaplacian1D(8, 1.0)
    e1 = np.eye(8)[0]
    ref = np.linalg.solve(np.eye(8) - A.matrix(), e1)
    np.testing.assert_allclose(resolvent_apply(A, 1.0, e1).real, ref, rtol=1e-12, atol=1e-15)


@given(gens, st.floats(-5, 5), st.floats(-5, 5), st.data())
def test_resolvent_residual(A, x, y, data):
    z = complex(abs(x) + 0.01, y)
    b = vec(data.draw, A.dim)
    sol = resolvent_apply(A, z, b)
    resid = z * sol - apply(A, sol) - b
    assert np.linalg.norm(resid) <= 1e-12 * max(np.linalg.norm(b), 1e-300) * (1 + abs(z))


@given(gens, st.floats(0.1, 5), st.floats(0.1, 5), st.data())
def test_resolvent_identity(A, z1, z2, data):
    b = vec(data.draw, A.dim)
    lhs = resolvent_apply(A, z1, b) - resolvent_apply(A, z2, b)
    rhs = (z2 - z1) * resolvent_apply(A, z1, resolvent_apply(A, z2, b))
    np.testing.assert_allclose(lhs, rhs, atol=1e-10 * (1 + np.linalg.norm(b)))


def test_resolvent_batched_shifts():
    A = DirichletLaplacian1D(6)
    z = np.array([0.5, 1 + 2j, 3.0])
    b = np.arange(6.0)
    batched = resolvent_apply(A, z, b)
    for i, zi in enumerate(z):
        np.testing.assert_allclose(batched[i], resolvent_apply(A, zi, b), rtol=1e-14)


def test_singular_resolvent():
    with pytest.raises(SingularResolventError):
        resolvent_apply(Diagonal((-1.0, -2.0)), -2.0, [1.0, 1.0])
    A = DirichletLaplacian1D(5)
    with pytest.raises(SingularResolventError):
        resolvent_apply(A, A.eigenvalues[2], np.ones(5))


def test_semigroup_examples():
    for A in GENERATORS:
        a = np.linspace(1, 2, A.dim)
        np.testing.assert_allclose(semigroup_apply(A, 0.0, a), a, rtol=1e-14)
    assert semigroup_apply(Scalar(-2.0), 1.0, [3.0])[0] == pytest.approx(3 * math.exp(-2))


@pytest.mark.parametrize("A", GENERATORS, ids=str)
def test_semigroup_matches_expm(A):
    a = np.cos(np.arange(A.dim))
    for t in (0.01, 0.7, 5.0):
        ref = linalg.expm(t * A.matrix()) @ a
        np.testing.assert_allclose(semigroup_apply(A, t, a), ref, rtol=1e-11, atol=1e-13)


def test_eigenvalue_formula():
    A = DirichletLaplacian1D(12, 0.5)
    np.testing.assert_allclose(np.sort(A.eigenvalues), np.linalg.eigvalsh(A.matrix()), rtol=1e-12)


@given(gens, st.floats(0, 10), st.floats(0, 10), st.data())
def test_semigroup_property(A, t, s, data):
    a = vec(data.draw, A.dim)
    lhs = semigroup_apply(A, t + s, a)
    rhs = semigroup_apply(A, t, semigroup_apply(A, s, a))
    np.testing.assert_allclose(lhs, rhs, atol=1e-11 * (1 + np.linalg.norm(a)))


@given(gens, st.floats(0, 50), st.data())
def test_contraction_and_positivity(A, t, data):
    a = vec(data.draw, A.dim)
    assert np.linalg.norm(semigroup_apply(A, t, a)) <= np.linalg.norm(a) * (1 + 1e-14)
    pos = np.abs(a)
    assert np.all(semigroup_apply(A, t, pos) >= -1e-12)


def test_hille_yosida_examples():
    # ||R(1, A)^n|| = 2**-n, so the ratio to the bound 1/s**n peaks at n = 1
    rep = hille_yosida_check(Scalar(-1.0), [1.0], 3)
    assert rep.passed and rep.worst_ratio == pytest.approx(0.5) and rep.worst_n == 1
    np.testing.assert_allclose(resolvent_apply(Scalar(-1.0), 1.0, resolvent_apply(
        Scalar(-1.0), 1.0, resolvent_apply(Scalar(-1.0), 1.0, [1.0]))).real, [1 / 8])
    rep = hille_yosida_check(Diagonal((-1.0, -5.0)), [2.0], 2)
    assert rep.passed and rep.worst_ratio <= 1.0
    assert hille_yosida_check(DirichletLaplacian1D(16, 1.0), [0.1, 1.0, 10.0], 5).passed
    with pytest.raises(DomainError):
        hille_yosida_check(Scalar(-1.0), [0.0], 2)


def test_parse_and_format():
    for text in ("scalar:-1.5", "diag:-1.0,-2.0", "laplace1d:16,0.5"):
        assert str(parse_generator(text)) == text
    assert parse_generator("laplace1d:8") == DirichletLaplacian1D(8, 1.0)
    assert parse_generator("zero") == Scalar(0.0)
    assert parse_generator("zero:3") == Diagonal((0.0, 0.0, 0.0))
    for bad in ("scalar:x", "matrix:1", "laplace1d:"):
        with pytest.raises(ValueError):
            parse_generator(bad)
    with pytest.raises(DomainError):
        Scalar(1.0)
    with pytest.raises(DomainError):
        DirichletLaplacian1D(1)
