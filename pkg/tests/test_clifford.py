import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from superkit import clifford as cl
from superkit.algebra import ODD, Context
from superkit.errors import RepresentationIncompatible

seeds = st.integers(0, 2**32)
REP = cl.GammaRep.majorana()


def _random_form(rng, n):
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            B[i][j] = B[j][i] = rng.randint(-2, 2)
    return cl.BilinearForm(B, rng.choice([1, -1]))


def _random_element(rng, form, n_terms=3):
    terms = {}
    for _ in range(n_terms):
        w = tuple(sorted(rng.sample(range(form.n), rng.randint(0, form.n))))
        terms[w] = terms.get(w, 0) + rng.randint(-3, 3)
    return cl.CliffordElement(form, terms)


def _chevalley_vector(x, ops):
    dim = ops[0].shape[0] if ops else 1
    vac = np.array([Fraction(int(i == 0)) for i in range(dim)], dtype=object)
    out = vac * 0
    for w, c in x.terms.items():
        v = vac
        for i in reversed(w):
            v = ops[i].dot(v)
        out = out + v * c
    return out


def _chevalley_matrix(x, ops):
    dim = ops[0].shape[0]
    out = cl.eye(dim) * 0
    for w, c in x.terms.items():
        m = cl.eye(dim)
        for i in w:
            m = m.dot(ops[i])
        out = out + m * c
    return out


def test_form_validation():
    with pytest.raises(ValueError):
        cl.BilinearForm([[1, 2], [0, 1]])
    with pytest.raises(ValueError):
        cl.BilinearForm([[1]], sigma=2)


def test_relation_signs():
    for sigma in (1, -1):
        f = cl.BilinearForm([[1, 0], [0, -1]], sigma)
        e1, e2 = (cl.CliffordElement.generator(f, i) for i in range(2))
        assert e1 * e1 == sigma
        assert e2 * e2 == -sigma
        assert e1 * e2 == -(e2 * e1)
        assert str(e2 * e1) == "-1*e1e2"


@given(seeds, st.integers(1, 4))
def test_product_matches_chevalley_model(seed, n):
    rng = random.Random(seed)
    form = _random_form(rng, n)
    ops = cl.chevalley_operators(form)
    for i in range(n):
        for j in range(n):
            anti = ops[i].dot(ops[j]) + ops[j].dot(ops[i])
            assert cl.mat_equal(anti, cl.eye(2 ** n) * (2 * form.sigma * form(i, j)))
    a, b = _random_element(rng, form), _random_element(rng, form)
    assert np.all(_chevalley_vector(a * b, ops) == _chevalley_matrix(a, ops).dot(_chevalley_vector(b, ops)))


@given(seeds, st.integers(1, 4))
def test_associativity(seed, n):
    rng = random.Random(seed)
    form = _random_form(rng, n)
    x, y, z = (_random_element(rng, form) for _ in range(3))
    assert (x * y) * z == x * (y * z)


def test_zero_form_is_grassmann():
    rng = random.Random(3)
    form = cl.BilinearForm([[0] * 3 for _ in range(3)])
    ctx = Context()
    xs = [ctx.coordinate(f"x{i}", ODD) for i in range(3)]

    def to_grassmann(el):
        out = ctx.zero()
        for w, c in el.terms.items():
            term = ctx.const(c)
            for i in w:
                term = term * ctx.expr(xs[i])
            out = out + term
        return out

    for _ in range(20):
        a, b = _random_element(rng, form), _random_element(rng, form)
        assert to_grassmann(a * b) == to_grassmann(a) * to_grassmann(b)


def test_clifford_dirac_and_negative_control():
    r = cl.verify_clifford_dirac(REP)
    assert r.passed and r.checked == 10
    g0 = REP.gammas[0]
    assert cl.mat_equal(g0.dot(g0), -cl.eye(4))
    bad = cl.verify_clifford_dirac(REP.perturbed(1, 0, 0))
    assert not bad.passed
    assert (1, 1) in bad.failures


def test_spin_representation():
    r = cl.verify_lorentz_spin_rep(REP)
    assert r.passed and r.checked == 256
    assert not cl.verify_lorentz_spin_rep(REP.perturbed(2, 0, 1)).passed


def test_charge_conjugation():
    C, cg = cl.charge_conjugation(REP)
    assert cl.mat_equal(C.components, -REP.gammas[0])
    Cinv = cl.mat_inverse(C.components)
    for g in REP.gammas:
        assert cl.mat_equal(C.components.dot(g).dot(Cinv), -g.T)
    assert all(t.symmetric for t in cg)
    assert not C.symmetric          # C itself is antisymmetric here
    with pytest.raises(RepresentationIncompatible):
        cl.charge_conjugation(REP.perturbed(3, 1, 2))


def test_gamma5():
    g5 = cl.gamma5(REP)
    assert cl.mat_equal(g5.dot(g5), -cl.eye(4))
    for g in REP.gammas:
        assert cl.mat_equal(g5.dot(g) + g.dot(g5), cl.eye(4) * 0)


def test_lorentz_action_on_spinor():
    u = [Fraction(1), Fraction(-2), Fraction(0), Fraction(5)]
    om = [[0] * 4 for _ in range(4)]
    om[1][3], om[3][1] = 2, -2
    got = cl.infinitesimal_lorentz_on_spinor(REP, om, u)
    want = list((cl.sigma(REP, 1, 3) * 2).dot(np.array(u, dtype=object)))
    assert got == want
    with pytest.raises(ValueError):
        cl.infinitesimal_lorentz_on_spinor(REP, [[1, 0, 0, 0]] + [[0] * 4] * 3, u)


def test_exp_matrix_against_scipy():
    S = np.array(cl.sigma(REP, 0, 1) * 3 + cl.sigma(REP, 1, 2), dtype=float)
    assert np.allclose(cl.exp_matrix(S), expm(S), atol=1e-12)
    assert np.allclose(cl.exp_matrix(np.zeros((4, 4))), np.eye(4))
    # finite boost and rotation generators compose to the identity with their inverses
    assert np.allclose(cl.exp_matrix(S) @ cl.exp_matrix(-S), np.eye(4), atol=1e-10)


@pytest.mark.parametrize("m", [0, 1, Fraction(3, 2)])
def test_dirac_squares_to_klein_gordon(m):
    assert cl.dirac_square(REP, m).passed


def test_dirac_square_negative_control():
    assert not cl.dirac_square(REP.perturbed(2, 1, 3), 1).passed
