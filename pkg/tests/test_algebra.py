import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from superkit.algebra import (
    EVEN, ODD, Atom, Context, berezin, degree_part, derivation, invert_even, jet_partial,
    nilpotent_taylor, odd_component, partial, substitute,
)
from superkit.errors import (
    ContextMismatch, DuplicateName, InvalidDeclaration, InvalidTarget, NonInvertible,
    ParityViolation, UnsupportedArgument,
)
from superkit.oracle import GrassmannOracle
from superkit.random_exprs import grassmann_context, random_expr, random_fraction

seeds = st.integers(0, 2**32)


def _setup(seed, q=4, n_even=1):
    rng = random.Random(seed)
    ctx, odd, even = grassmann_context(q, n_even)
    return rng, ctx, odd, even


# -- declarations and basic arithmetic ---------------------------------------

def test_duplicate_and_bad_declarations():
    ctx = Context()
    t = ctx.coordinate("t")
    th = ctx.coordinate("theta", ODD)
    with pytest.raises(DuplicateName):
        ctx.coordinate("t")
    with pytest.raises(InvalidDeclaration):
        ctx.function("f", EVEN, [th])
    with pytest.raises(InvalidDeclaration):
        ctx.declare("p", EVEN, "parameter", [t])
    with pytest.raises(InvalidDeclaration):
        ctx.declare("z", EVEN, "whatever")


def test_context_mismatch():
    a, b = Context("a"), Context("b")
    x = a.coordinate("x")
    with pytest.raises(ContextMismatch):
        b.expr(x)
    y = b.coordinate("y")
    with pytest.raises(ContextMismatch):
        a.expr(x) * b.expr(y)


def test_odd_generators_square_to_zero_and_anticommute():
    ctx, (x1, x2), _ = grassmann_context(2, 0)
    a, b = ctx.expr(x1), ctx.expr(x2)
    assert a * a == 0
    assert a * b == -(b * a)
    assert (a * b).parity == EVEN
    assert (a + b).parity == ODD
    assert (a + a * b).parity is None


def test_even_coordinates_commute():
    ctx, odd, (x,) = grassmann_context(1)
    X, xi = ctx.expr(x), ctx.expr(odd[0])
    assert X * xi == xi * X
    assert (X + 1) ** 2 == X * X + 2 * X + 1


def test_rational_coefficients_exact():
    ctx, (x1,), _ = grassmann_context(1, 0)
    e = ctx.expr(x1) * Fraction(1, 3) + ctx.expr(x1) * Fraction(2, 3)
    assert e == ctx.expr(x1)
    assert str(ctx.expr(x1) * Fraction(-1, 4)) == "-1/4*xi1"
    assert str(ctx.expr(x1) * Fraction(3, 2) + 1) == "1 + 3/2*xi1"


def test_field_needs_arguments():
    ctx = Context()
    W = ctx.function("W")
    with pytest.raises(InvalidTarget):
        ctx.expr(W)


@given(seeds)
def test_associative_and_distributive(seed):
    rng, ctx, odd, even = _setup(seed)
    f, g, h = (random_expr(rng, ctx, odd, even) for _ in range(3))
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@given(seeds)
def test_supercommutativity(seed):
    rng, ctx, odd, even = _setup(seed)
    pf, pg = rng.choice([EVEN, ODD]), rng.choice([EVEN, ODD])
    f = random_expr(rng, ctx, odd, even, parity=pf)
    g = random_expr(rng, ctx, odd, even, parity=pg)
    assert f * g == g * f * (-1 if pf == pg == ODD else 1)


@given(seeds)
def test_odd_elements_square_to_zero(seed):
    rng, ctx, odd, even = _setup(seed)
    f = random_expr(rng, ctx, odd, even, parity=ODD)
    assert f * f == 0


# -- derivatives ---------------------------------------------------------------

@given(seeds)
def test_graded_leibniz(seed):
    rng, ctx, odd, even = _setup(seed)
    p = rng.choice([EVEN, ODD])
    f = random_expr(rng, ctx, odd, even, parity=p)
    g = random_expr(rng, ctx, odd, even)
    for x in odd:
        assert partial(f * g, x) == partial(f, x) * g + (-1) ** int(p) * f * partial(g, x)
    X = even[0]
    assert partial(f * g, X) == partial(f, X) * g + f * partial(g, X)


@given(seeds)
def test_odd_derivatives_anticommute(seed):
    rng, ctx, odd, even = _setup(seed)
    f = random_expr(rng, ctx, odd, even, n_terms=8)
    a, b = rng.sample(odd, 2)
    assert partial(partial(f, a), b) == -partial(partial(f, b), a)
    assert partial(partial(f, a), a) == 0
    assert partial(partial(f, a), even[0]) == partial(partial(f, even[0]), a)


def test_left_derivative_sign():
    ctx, (x1, x2), _ = grassmann_context(2, 0)
    m = ctx.expr(x1) * ctx.expr(x2)
    assert partial(m, x1) == ctx.expr(x2)
    assert partial(m, x2) == -ctx.expr(x1)


def test_field_time_derivative_and_jet_partial():
    ctx = Context()
    t = ctx.coordinate("t")
    q = ctx.function("q", EVEN, [t])
    psi = ctx.function("psi", ODD, [t])
    L = ctx.expr(q, (1,)) ** 2 * Fraction(1, 4) - ctx.expr(psi, (1,)) * ctx.expr(psi)
    assert partial(ctx.expr(q), t) == ctx.expr(q, (1,))
    assert jet_partial(L, Atom(q, (1,))) == ctx.expr(q, (1,)) / 2
    assert jet_partial(L, Atom(psi, (0,))) == ctx.expr(psi, (1,))
    with pytest.raises(InvalidTarget):
        jet_partial(L, ctx.expr(q) + ctx.expr(q, (1,)))


def test_derivation_from_atom_rule():
    ctx, (x1, x2), _ = grassmann_context(2, 0)
    swap = {Atom(x1): ctx.expr(x2)}
    f = ctx.expr(x1) * ctx.expr(x2) + ctx.expr(x1)
    # even derivation sending xi1 -> xi2
    assert derivation(f, lambda a: swap.get(a), EVEN) == ctx.expr(x2)


# -- Berezin integral ------------------------------------------------------------

@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_berezin_normalisation(q):
    ctx, odd, _ = grassmann_context(q, 0)
    top = ctx.one()
    for x in odd:
        top = top * ctx.expr(x)
    assert berezin(top, odd) == 1
    assert berezin(ctx.one(), odd) == 0


@given(seeds, st.integers(1, 4))
def test_berezin_properties(seed, q):
    rng, ctx, odd, even = _setup(seed, q)
    f = random_expr(rng, ctx, odd, even, n_terms=6)
    assert berezin(partial(f, rng.choice(odd)), odd) == 0
    g = f
    for x in odd:
        g = partial(g, x)
    assert berezin(f, odd) == g
    nested = f
    for x in odd:
        nested = berezin(nested, [x])
    assert berezin(f, odd) == nested


def test_odd_component():
    ctx, (x1, x2), (y,) = grassmann_context(2)
    f = ctx.expr(y) + ctx.expr(x1) * 3 + ctx.expr(x1) * ctx.expr(x2) * ctx.expr(y)
    assert odd_component(f, (), [x1, x2]) == ctx.expr(y)
    assert odd_component(f, (x1,), [x1, x2]) == 3
    assert odd_component(f, (x2, x1), [x1, x2]) == -ctx.expr(y)


# -- functions of even superfields -----------------------------------------------

def test_nilpotent_taylor_terminates():
    ctx = Context()
    t = ctx.coordinate("t")
    a, b = ctx.coordinate("a", ODD), ctx.coordinate("b", ODD)
    q = ctx.function("q", EVEN, [t])
    W = ctx.function("W")
    n = ctx.expr(a) * ctx.expr(b)
    got = nilpotent_taylor(W, ctx.expr(q) + n)
    assert got == nilpotent_taylor(W, ctx.expr(q)) + n * nilpotent_taylor(W, ctx.expr(q), 1)
    with pytest.raises(ParityViolation):
        nilpotent_taylor(W, ctx.expr(a))
    with pytest.raises(UnsupportedArgument):
        nilpotent_taylor(q, ctx.expr(q))


@given(seeds)
def test_invert_even(seed):
    rng, ctx, odd, _ = _setup(seed, 4, 0)
    u = ctx.const(random_fraction(rng, nonzero=True)) + random_expr(rng, ctx, odd, parity=EVEN).soul()
    assert u * invert_even(u) == 1


def test_invert_even_errors():
    ctx, (x1, x2), _ = grassmann_context(2, 0)
    with pytest.raises(NonInvertible):
        invert_even(ctx.expr(x1) * ctx.expr(x2))
    with pytest.raises(ParityViolation):
        invert_even(ctx.expr(x1) + 1)


def test_degree_part():
    ctx, (x1, x2), _ = grassmann_context(2, 0)
    f = 1 + ctx.expr(x1) + ctx.expr(x1) * ctx.expr(x2)
    assert degree_part(f, [x1], 1) == ctx.expr(x1) + ctx.expr(x1) * ctx.expr(x2)
    assert degree_part(f, [x1, x2], 2) == ctx.expr(x1) * ctx.expr(x2)


# -- substitution ------------------------------------------------------------------

def test_substitution_is_morphism(rng):
    ctx, (a, b, c), (x,) = grassmann_context(3)
    E = ctx.expr
    mapping = {a: E(a) + E(b) * E(c) * E(a), x: E(x) + E(b) * E(c)}
    for _ in range(20):
        f = random_expr(rng, ctx, [a, b, c], [x])
        g = random_expr(rng, ctx, [a, b, c], [x])
        assert substitute(f * g, mapping) == substitute(f, mapping) * substitute(g, mapping)


def test_substitution_taylor_expands_fields():
    ctx = Context()
    t = ctx.coordinate("t")
    e, th = ctx.parameter("e", ODD), ctx.coordinate("th", ODD)
    q = ctx.function("q", EVEN, [t])
    shift = ctx.expr(e) * ctx.expr(th)
    got = substitute(ctx.expr(q), {t: ctx.expr(t) + shift})
    assert got == ctx.expr(q) + shift * ctx.expr(q, (1,))


def test_substitution_rejects_parity_change():
    ctx = Context()
    t, th = ctx.coordinate("t"), ctx.coordinate("th", ODD)
    with pytest.raises(ParityViolation):
        substitute(ctx.expr(th), {th: ctx.expr(t)})


# -- independent oracle -------------------------------------------------------------

@given(seeds, st.integers(1, 4))
def test_matches_fock_space_oracle(seed, q):
    rng, ctx, odd, even = _setup(seed, q, 2)
    order = [Atom(x) for x in odd]
    rng.shuffle(order)
    orc = GrassmannOracle(order, {Atom(e): random_fraction(rng, nonzero=True) for e in even})
    f, g = random_expr(rng, ctx, odd, even), random_expr(rng, ctx, odd, even)
    x = rng.choice(odd)
    assert orc.equal(orc.vector(f * g), orc.multiply(f, g))
    assert orc.equal(orc.vector(f + g), orc.vector(f) + orc.vector(g))
    assert orc.equal(orc.vector(partial(f, x)), orc.derivative(orc.vector(f), Atom(x)))
    assert orc.equal(orc.vector(berezin(f, odd)), orc.berezin(orc.vector(f), [Atom(o) for o in odd]))


def test_oracle_detects_wrong_sign():
    ctx, (x1, x2), _ = grassmann_context(2, 0)
    orc = GrassmannOracle([Atom(x1), Atom(x2)], {})
    right = ctx.expr(x1) * ctx.expr(x2)
    assert not orc.equal(orc.vector(right), orc.vector(-right))
    assert orc.equal(orc.matrix(right).dot(orc.vacuum()), orc.vector(right))
