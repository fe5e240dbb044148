"""Built-in verification suites.

Each suite is a list of :class:`CheckSpec`.  A check returns
``(ok, expected, actual)``; negative controls run a deliberately broken
fixture and pass only when that fixture fails.  With ``perturb=True`` the
negative controls are reported as ordinary checks, so the broken fixture
makes the run fail.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable

import numpy as np

from .. import clifford as cl
from ..algebra import (
    EVEN, ODD, Atom, Context, berezin, invert_even, nilpotent_taylor, partial, substitute,
)
from ..errors import ParityViolation, SuperError
from ..mechanics import (
    ActionSpec, apply_variation, eliminate_auxiliary, euler_lagrange, is_total_derivative,
    reduce_action,
)
from ..models import (
    Superfield, TranslationElement, build_poincare, build_R1_1, build_R1_2,
    build_super_minkowski, cbh_compose, component_variations, expand, killing_report,
    poincare_brackets, shift_berezinian, shift_variation, translation_structure,
)
from ..oracle import GrassmannOracle
from ..random_exprs import grassmann_context, random_expr, random_fraction, random_supermatrix
from ..supermatrix import SuperMatrix, berezinian, det_even, jacobian
from ..susy_qm import verify_susy_qm
from ..vectorfield import (
    Distribution, SuperVectorField, coordinate_field, frobenius_curvature,
    is_maximally_nonintegrable, killing_check, superbracket,
)

__all__ = ["CheckSpec", "Options", "SUITES", "suite_checks", "suite_names"]


@dataclass
class Options:
    seed: int = 0
    perturb: bool = False


@dataclass
class CheckSpec:
    id: str
    anchor: str
    run: Callable[[], tuple]
    negative: bool = False


def eq(actual, expected) -> tuple:
    return actual == expected, str(expected), str(actual)


def count(results, what="cases") -> tuple:
    results = list(results)
    bad = sum(1 for r in results if not r)
    return not bad, f"{len(results)}/{len(results)} {what}", f"{len(results) - bad}/{len(results)} {what}"


def raises(fn, exc=SuperError) -> tuple:
    """A check that passes if ``fn`` raises; for negative controls this is a 'failure'."""
    try:
        fn()
    except exc as e:
        return False, "accepted", f"rejected: {type(e).__name__}"
    return True, "accepted", "accepted"


class _Builder:
    def __init__(self, prefix):
        self.prefix = prefix
        self.checks: list[CheckSpec] = []

    def add(self, name, anchor, negative=False):
        def deco(fn):
            cid = f"{self.prefix}/{len(self.checks) + 1:02d}-{name}"
            self.checks.append(CheckSpec(cid, anchor, fn, negative))
            return fn
        return deco


# ---------------------------------------------------------------------------
# shared fixtures

@lru_cache(maxsize=None)
def _n1():
    m = build_R1_1()
    Phi = Superfield.full(m, ["q", "psi"])
    eps = m.odd_parameters()
    L = reduce_action(ActionSpec(-(m.D[0](expand(m, Phi)) * partial(expand(m, Phi), m.even[0])),
                                 m.even[0], m.odd))
    return m, Phi, eps, L


@lru_cache(maxsize=None)
def _n2():
    m = build_R1_2()
    Phi = Superfield.full(m, ["q", "psi1", "psi2", "F"])
    eps = m.odd_parameters()
    W = m.ctx.function("W", EVEN)
    X = expand(m, Phi)
    L = reduce_action(ActionSpec(m.D[0](X) * m.D[1](X) - nilpotent_taylor(W, X), m.even[0], m.odd))
    return m, Phi, eps, W, L


@lru_cache(maxsize=None)
def _m4():
    return build_super_minkowski()


def _model_file(name):
    from .interp import run_model
    text = resources.files("superkit.cli").joinpath("models", name).read_text()
    r = run_model(text, name)
    bad = [c.label for c in r.checks if not c.passed]
    return not bad, f"{len(r.checks)} embedded checks pass", \
        ("all pass" if not bad else "failed: " + "; ".join(bad))


# ---------------------------------------------------------------------------

def grassmann(opts: Options) -> list:
    b = _Builder("grassmann")
    A_GR = "Grassmann algebra"
    A_CALC = "calculus with anticommuting variables"
    A_BER = "Berezin integral"

    @b.add("anticommutation", A_GR)
    def _():
        ctx, (x1, x2), _ = grassmann_context(2, 0)
        a, c = ctx.expr(x1), ctx.expr(x2)
        ok = a * c == -(c * a) and not a * a
        return ok, "xi1*xi2 = -xi2*xi1, xi1*xi1 = 0", f"xi2*xi1 = {c * a}, xi1*xi1 = {a * a}"

    @b.add("superfield-square", "superfield expansion q + theta psi")
    def _():
        m, Phi, _, _ = _n1()
        X = expand(m, Phi)
        q, psi = (m.ctx.expr(Phi.component(n)) for n in ("q", "psi"))
        th = m.ctx.expr(m.odd[0])
        return eq(X * X, q * q + 2 * q * th * psi)

    @b.add("supercommutativity", A_GR)
    def _():
        rng = random.Random(opts.seed)
        ctx, odd, even = grassmann_context(4)
        res = []
        for _ in range(50):
            pf, pg = rng.choice([EVEN, ODD]), rng.choice([EVEN, ODD])
            f = random_expr(rng, ctx, odd, even, parity=pf)
            g = random_expr(rng, ctx, odd, even, parity=pg)
            res.append(f * g == g * f * (-1 if pf and pg else 1))
        return count(res, "pairs")

    @b.add("derivative-of-product", A_CALC)
    def _():
        ctx, odd, _ = grassmann_context(3, 0)
        res = []
        for a in odd:
            for c in odd:
                for g in odd:
                    lhs = partial(ctx.expr(a) * ctx.expr(c), g)
                    rhs = ctx.expr(c) * int(g is a) - ctx.expr(a) * int(g is c)
                    res.append(lhs == rhs)
        return count(res, "index triples")

    @b.add("derivatives-anticommute", A_CALC)
    def _():
        rng = random.Random(opts.seed + 1)
        ctx, odd, even = grassmann_context(4)
        res = []
        for _ in range(40):
            f = random_expr(rng, ctx, odd, even, n_terms=6)
            a, c = rng.sample(odd, 2)
            res.append(partial(partial(f, c), a) == -partial(partial(f, a), c)
                       and not partial(partial(f, a), a))
        return count(res)

    @b.add("graded-leibniz", A_CALC)
    def _():
        rng = random.Random(opts.seed + 2)
        ctx, odd, even = grassmann_context(4)
        res = []
        for _ in range(40):
            p = rng.choice([EVEN, ODD])
            f = random_expr(rng, ctx, odd, even, parity=p)
            g = random_expr(rng, ctx, odd, even)
            x = rng.choice(odd)
            res.append(partial(f * g, x) == partial(f, x) * g + f * partial(g, x) * (-1 if p else 1))
        return count(res)

    @b.add("berezin-normalisation", A_BER)
    def _():
        res = []
        for q in range(1, 5):
            ctx, odd, _ = grassmann_context(q, 0)
            top = ctx.one()
            for x in odd:
                top = top * ctx.expr(x)
            res.append(berezin(top, odd) == 1)
        return count(res, "generator counts")

    @b.add("berezin-kills-derivatives", A_BER)
    def _():
        rng = random.Random(opts.seed + 3)
        res = []
        for _ in range(40):
            q = rng.randint(1, 4)
            ctx, odd, even = grassmann_context(q)
            f = random_expr(rng, ctx, odd, even, n_terms=6)
            res.append(not berezin(partial(f, rng.choice(odd)), odd))
        return count(res)

    @b.add("integration-is-differentiation", A_BER)
    def _():
        rng = random.Random(opts.seed + 4)
        res = []
        for _ in range(40):
            q = rng.randint(1, 4)
            ctx, odd, even = grassmann_context(q)
            f = random_expr(rng, ctx, odd, even, n_terms=6)
            g = f
            for x in odd:
                g = partial(g, x)
            nested = f
            for x in odd:
                nested = berezin(nested, [x])
            res.append(berezin(f, odd) == g == nested)
        return count(res)

    @b.add("oracle-equivalence", "faithful matrix representation")
    def _():
        rng = random.Random(opts.seed + 5)
        res = []
        for _ in range(60):
            q = rng.randint(1, 4)
            ctx, odd, even = grassmann_context(q)
            order = [Atom(x) for x in odd]
            rng.shuffle(order)
            vals = {Atom(e): random_fraction(rng, nonzero=True) for e in even}
            orc = GrassmannOracle(order, vals)
            f = random_expr(rng, ctx, odd, even)
            g = random_expr(rng, ctx, odd, even)
            x = rng.choice(odd)
            res.append(orc.equal(orc.vector(f * g), orc.multiply(f, g))
                       and orc.equal(orc.vector(partial(f, x)), orc.derivative(orc.vector(f), Atom(x)))
                       and orc.equal(orc.vector(berezin(f, odd)),
                                     orc.berezin(orc.vector(f), [Atom(o) for o in odd])))
        return count(res, "identities")

    @b.add("nilpotent-taylor", "superpotential expansion W(Phi)")
    def _():
        m, Phi, _, W, _ = _n2()
        ctx = m.ctx
        q, p1, p2, F = (ctx.expr(Phi.component(n)) for n in ("q", "psi1", "psi2", "F"))
        t1, t2 = (ctx.expr(s) for s in m.odd)
        Wq, W1, W2 = (nilpotent_taylor(W, q, k) for k in range(3))
        expected = Wq + W1 * (t1 * p1 + t2 * p2 + t1 * t2 * F) - t1 * t2 * p1 * p2 * W2
        return eq(nilpotent_taylor(W, expand(m, Phi)), expected)

    @b.add("invert-even", A_GR)
    def _():
        ctx, (x1, x2), _ = grassmann_context(2, 0)
        n = ctx.expr(x1) * ctx.expr(x2)
        return eq(invert_even(1 + n), 1 - n)

    @b.add("pullback-example", "parity-preserving morphisms")
    def _():
        src = Context("R1|1")
        t = src.coordinate("t", EVEN)
        tau = src.coordinate("tau", ODD)
        tgt = Context("R1|2")
        x = tgt.coordinate("x", EVEN)
        th1, th2 = tgt.coordinate("theta1", ODD), tgt.coordinate("theta2", ODD)
        tx, s = tgt.function("t", EVEN, [x]), tgt.function("s", EVEN, [x])
        tau1, tau2 = tgt.function("tau1", EVEN, [x]), tgt.function("tau2", EVEN, [x])
        E = tgt.expr
        mapping = {t: E(tx) + E(th1) * E(th2) * E(s), tau: E(th1) * E(tau1) + E(th2) * E(tau2)}
        got = substitute(src.expr(t) * src.expr(tau), mapping, tgt)
        return eq(got, E(tx) * (E(th1) * E(tau1) + E(th2) * E(tau2)))

    @b.add("pullback-rejects-parity-change", "parity-preserving morphisms")
    def _():
        src = Context("src")
        tau = src.coordinate("tau", ODD)
        t = src.coordinate("t", EVEN)
        try:
            substitute(src.expr(tau), {tau: src.expr(t)})
        except ParityViolation as e:
            return True, "ParityViolation", f"ParityViolation: {e}"
        return False, "ParityViolation", "accepted"

    @b.add("negative-wrong-sign", A_GR, negative=True)
    def _():
        ctx, (x1, x2), _ = grassmann_context(2, 0)
        return eq(ctx.expr(x2) * ctx.expr(x1), ctx.expr(x1) * ctx.expr(x2))

    return b.checks


def berezinian_suite(opts: Options) -> list:
    b = _Builder("berezinian")
    A = "Berezinian and Jacobians"

    @b.add("jacobian-n1-shift", A)
    def _():
        m = build_R1_1()
        J, _ = shift_berezinian(m)
        e = m.ctx.expr(m.odd_parameters()[0])
        one, zero = m.ctx.one(), m.ctx.zero()
        return eq(J, SuperMatrix([[one]], [[e * Fraction(1, 4)]], [[zero]], [[one]], m.ctx))

    @b.add("ber-n1-shift", A)
    def _():
        return eq(shift_berezinian(build_R1_1())[1], 1)

    @b.add("ber-n2-shift", A)
    def _():
        return eq(shift_berezinian(build_R1_2())[1], 1)

    @b.add("ber-identity", A)
    def _():
        ctx = Context("id")
        return count(berezinian(SuperMatrix.identity(ctx, p, q)) == 1
                     for p in range(3) for q in range(3) if p + q)

    @b.add("ber-even-scaling", A)
    def _():
        ctx = Context("x")
        x = ctx.coordinate("x", EVEN)
        return eq(berezinian(jacobian({x: 2 * ctx.expr(x)}, [x])), 2)

    @b.add("ber-block-diagonal", A)
    def _():
        rng = random.Random(opts.seed)
        ctx, odd, _ = grassmann_context(4, 0)
        res = []
        for _ in range(10):
            M = random_supermatrix(rng, ctx, odd, 2, 2)
            Z = [[ctx.zero()] * 2 for _ in range(2)]
            bd = SuperMatrix(M.A, Z, Z, M.D, ctx)
            res.append(berezinian(bd) == det_even(M.A) * invert_even(det_even(M.D)))
        return count(res)

    @b.add("ber-multiplicative", A)
    def _():
        rng = random.Random(opts.seed + 1)
        ctx, odd, _ = grassmann_context(4, 0)
        res = []
        for p, q in ((1, 1), (2, 2)):
            for _ in range(20):
                X = random_supermatrix(rng, ctx, odd, p, q)
                Y = random_supermatrix(rng, ctx, odd, p, q)
                res.append(berezinian(X @ Y) == berezinian(X) * berezinian(Y))
        return count(res, "pairs")

    @b.add("negative-odd-rescaling", A, negative=True)
    def _():
        ctx = Context("r")
        th = ctx.coordinate("theta", ODD)
        return eq(berezinian(jacobian({th: 2 * ctx.expr(th)}, [th])), 1)

    return b.checks


def _vf_checks(b, model, anchor):
    for (x, y), expected, actual in model.verify():
        b.add(f"bracket-{x}-{y}", anchor)(lambda e=expected, a=actual: eq(a, e))


def n1_mechanics(opts: Options) -> list:
    b = _Builder("n1-mechanics")
    A_ALG = "N=1 supersymmetry algebra"
    A_COMP = "N=1 component transformations"
    A_ACT = "N=1 superspace action"
    m, Phi, eps, L = _n1()
    ctx = m.ctx
    q, psi = Phi.component("q"), Phi.component("psi")
    E = ctx.expr
    e = E(eps[0])
    t = m.even[0]

    _vf_checks(b, m, A_ALG)

    @b.add("Q-on-superfield", A_COMP)
    def _():
        return eq(m.Q[0](expand(m, Phi)), E(psi) + E(m.odd[0]) * E(q, (1,)) * Fraction(1, 4))

    @b.add("delta-q", A_COMP)
    def _():
        return eq(component_variations(m, Phi)[q], e * E(psi))

    @b.add("delta-psi", A_COMP)
    def _():
        return eq(component_variations(m, Phi)[psi], -(e * E(q, (1,))) * Fraction(1, 4))

    @b.add("shift-equals-variation", A_COMP)
    def _():
        X = expand(m, Phi)
        return eq(shift_variation(m, X), e * m.Q[0](X))

    @b.add("component-action", A_ACT)
    def _():
        return eq(L, E(q, (1,)) ** 2 * Fraction(1, 4) - E(psi, (1,)) * E(psi))

    @b.add("quasi-invariance", A_ACT)
    def _():
        dL = apply_variation(L, component_variations(m, Phi))
        return eq(dL, e * partial(E(q, (1,)) * E(psi), t) * Fraction(1, 4))

    @b.add("total-derivative", A_ACT)
    def _():
        dL = apply_variation(L, component_variations(m, Phi))
        return is_total_derivative(dL), "True", str(is_total_derivative(dL))

    @b.add("measure-invariance", "Berezinian and Jacobians")
    def _():
        return eq(shift_berezinian(m)[1], 1)

    @b.add("contact-structure", "SUSY structure in one dimension")
    def _():
        D = m.distribution()
        ok = is_maximally_nonintegrable(D) and D.corank == (1, 0)
        return ok, "maximally non-integrable, corank (1|0)", \
            f"{is_maximally_nonintegrable(D)}, corank {D.corank}"

    @b.add("curvature-D-D", "Frobenius curvature")
    def _():
        D = m.distribution()
        return eq(frobenius_curvature(D, m.D[0], m.D[0]), Fraction(-1, 2) * m.P[0])

    @b.add("integrable-coordinate-distribution", "Frobenius curvature")
    def _():
        dth = coordinate_field(ctx, m.odd[0])
        D = Distribution([dth], [m.P[0]])
        ok = not is_maximally_nonintegrable(D) and frobenius_curvature(D, dth, dth).is_zero()
        return ok, "curvature 0, not maximally non-integrable", str(ok)

    b.add("model-file", "N=1 superspace action")(lambda: _model_file("n1.sk"))

    @b.add("negative-coefficient-half", A_ALG, negative=True)
    def _():
        return raises(lambda: build_R1_1(Fraction(1, 2)))

    @b.add("negative-model-file", A_ALG, negative=True)
    def _():
        return _model_file("n1_perturbed.sk")

    return b.checks


def n2_mechanics(opts: Options) -> list:
    b = _Builder("n2-mechanics")
    A_ALG = "N=2 supersymmetry algebra"
    A_COMP = "N=2 off-shell transformations"
    A_ACT = "N=2 action with superpotential"
    m, Phi, eps, W, L = _n2()
    ctx = m.ctx
    E = ctx.expr
    q, p1, p2, F = (Phi.component(n) for n in ("q", "psi1", "psi2", "F"))
    e1, e2 = (E(x) for x in eps)
    dt = lambda s: E(s, (1,))
    W1, W2 = (nilpotent_taylor(W, E(q), k) for k in (1, 2))
    quarter = Fraction(1, 4)

    _vf_checks(b, m, A_ALG)

    var = component_variations(m, Phi)
    expected = {
        q: e1 * E(p1) + e2 * E(p2),
        p1: -(e1 * dt(q)) * quarter + e2 * E(F),
        p2: -(e2 * dt(q)) * quarter - e1 * E(F),
        F: e1 * dt(p2) * quarter - e2 * dt(p1) * quarter,
    }
    for sym in (q, p1, p2, F):
        b.add(f"delta-{sym.name}", A_COMP)(lambda s=sym: eq(var[s], expected[s]))

    @b.add("shift-equals-variation", A_COMP)
    def _():
        X = expand(m, Phi)
        return eq(shift_variation(m, X), e1 * m.Q[0](X) + e2 * m.Q[1](X))

    kinetic = dt(q) ** 2 * Fraction(1, 16) - (dt(p1) * E(p1) + dt(p2) * E(p2)) * quarter

    @b.add("component-action", A_ACT)
    def _():
        return eq(L, kinetic + E(F) ** 2 - E(F) * W1 + E(p1) * E(p2) * W2)

    @b.add("auxiliary-equation", A_ACT)
    def _():
        return eq(euler_lagrange(L, F), 2 * E(F) - W1)

    @b.add("eliminate-auxiliary", A_ACT)
    def _():
        return eq(eliminate_auxiliary(L, F), kinetic - W1 ** 2 * quarter + E(p1) * E(p2) * W2)

    @b.add("total-derivative", A_ACT)
    def _():
        ok = is_total_derivative(apply_variation(L, var))
        return ok, "True", str(ok)

    @b.add("measure-invariance", "Berezinian and Jacobians")
    def _():
        return eq(shift_berezinian(m)[1], 1)

    @b.add("contact-structure", "SUSY structure in one dimension")
    def _():
        ok = is_maximally_nonintegrable(m.distribution())
        return ok, "True", str(ok)

    b.add("model-file", A_ACT)(lambda: _model_file("n2.sk"))

    @b.add("negative-coefficient-half", A_ALG, negative=True)
    def _():
        return raises(lambda: build_R1_2(Fraction(1, 2)))

    @b.add("negative-broken-invariance", A_ACT, negative=True)
    def _():
        broken = L + dt(q) ** 2 * Fraction(1, 16)    # doubled kinetic term
        ok = is_total_derivative(apply_variation(broken, var))
        return ok, "True", str(ok)

    return b.checks


def poincare(opts: Options) -> list:
    b = _Builder("poincare")
    A_K = "Killing equation on Minkowski space"
    A_P = "Poincare algebra"
    pm = build_poincare()
    for label, ok in killing_report(pm):
        b.add(f"killing-{label}", A_K)(lambda ok=ok: (ok, "True", str(ok)))
    table = poincare_brackets(pm)
    families = {
        "P-P": [r for r in table if r[0].startswith("[P") and "J" not in r[0]],
        "P-J": [r for r in table if r[0].startswith("[P") and "J" in r[0]],
        "J-J": [r for r in table if r[0].startswith("[J")],
    }
    for name, rows in families.items():
        b.add(f"brackets-{name}", A_P)(lambda rows=rows: count((a == e for _, e, a in rows), "brackets"))

    @b.add("negative-dilation", A_K, negative=True)
    def _():
        x1 = pm.coords[1]
        X = SuperVectorField(pm.ctx, {x1: pm.ctx.expr(x1)})
        ok = killing_check(X, pm.eta)
        return ok, "True", str(ok)

    @b.add("negative-perturbed-generator", A_P, negative=True)
    def _():
        bad = pm.j(0, 1) + pm.P[2]
        exp = SuperVectorField(pm.ctx, {})
        for (a, c), k in cl.lorentz_rhs(pm.eta, 0, 1, 1, 2).items():
            exp = exp + Fraction(k) * pm.j(a, c)
        return eq(superbracket(bad, pm.j(1, 2)), exp)

    return b.checks


def clifford_suite(opts: Options) -> list:
    b = _Builder("clifford")
    A_ABS = "abstract Clifford algebras"
    A_DIR = "Clifford-Dirac relation"
    A_SPIN = "spin representation"
    A_C = "charge conjugation"
    rep = cl.GammaRep.majorana()

    @b.add("grassmann-limit", A_ABS)
    def _():
        f = cl.BilinearForm([[0, 0], [0, 0]])
        e1, e2 = (cl.CliffordElement.generator(f, i) for i in range(2))
        ok = e1 * e2 == -(e2 * e1) and e1 * e1 == 0
        return ok, "e1e2 = -e2e1, e1^2 = 0", f"e2e1 = {e2 * e1}, e1^2 = {e1 * e1}"

    @b.add("complex-numbers", A_ABS)
    def _():
        f = cl.BilinearForm([[1]], sigma=-1)
        e = cl.CliffordElement.generator(f, 0)
        return eq(e * e, cl.CliffordElement.scalar(f, -1))

    @b.add("rewriting-step", A_ABS)
    def _():
        f = cl.BilinearForm([[1, 0], [0, 3]], sigma=-1)
        e1, e2 = (cl.CliffordElement.generator(f, i) for i in range(2))
        return eq(e1 * e2 * e2, e1 * Fraction(-3))

    @b.add("associativity", A_ABS)
    def _():
        rng = random.Random(opts.seed)
        res = []
        for _ in range(20):
            n = rng.randint(1, 4)
            B = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    B[i][j] = B[j][i] = rng.randint(-2, 2)
            f = cl.BilinearForm(B, rng.choice([1, -1]))
            words = [cl.CliffordElement(f, {tuple(sorted(rng.sample(range(n), rng.randint(0, n)))): 1})
                     for _ in range(3)]
            x, y, z = words
            res.append((x * y) * z == x * (y * z))
        return count(res, "triples")

    @b.add("clifford-dirac", A_DIR)
    def _():
        r = cl.verify_clifford_dirac(rep)
        return r.passed, "10/10 pairs", f"{r.checked - len(r.failures)}/{r.checked} pairs"

    @b.add("gamma0-squared", A_DIR)
    def _():
        g = rep.gammas[0]
        ok = cl.mat_equal(g.dot(g), -cl.eye(4))
        return ok, "-1", "-1" if ok else str(g.dot(g).tolist())

    @b.add("spin-representation", A_SPIN)
    def _():
        r = cl.verify_lorentz_spin_rep(rep)
        return r.passed, f"{r.checked}/{r.checked} index combinations", \
            f"{r.checked - len(r.failures)}/{r.checked} index combinations"

    @b.add("sigma-antisymmetric", A_SPIN)
    def _():
        return count((cl.mat_equal(cl.sigma(rep, a, c), -cl.sigma(rep, c, a))
                      for a in range(4) for c in range(4)), "pairs")

    @b.add("charge-conjugation", A_C)
    def _():
        C, _ = cl.charge_conjugation(rep)
        ok = cl.mat_equal(C.components, -rep.gammas[0])
        return ok, "C = -gamma^0", C.name

    @b.add("C-gamma-symmetric", A_C)
    def _():
        _, cg = cl.charge_conjugation(rep)
        return count((t.symmetric for t in cg), "tensors")

    @b.add("gamma5-squared", "chirality")
    def _():
        g5 = cl.gamma5(rep)
        ok = cl.mat_equal(g5.dot(g5), -cl.eye(4))
        return ok, "-1", "-1" if ok else str(g5.dot(g5).tolist())

    @b.add("lorentz-on-spinor", A_SPIN)
    def _():
        om = [[0] * 4 for _ in range(4)]
        om[0][1], om[1][0] = 1, -1
        u = [Fraction(1), Fraction(2), Fraction(-1), Fraction(3)]
        got = cl.infinitesimal_lorentz_on_spinor(rep, om, u)
        # 1/4 (omega_01 gamma^01 + omega_10 gamma^10) = gamma^01 / 2 = Sigma^01
        want = list(cl.sigma(rep, 0, 1).dot(np.array(u, dtype=object)))
        return eq(got, want)

    @b.add("exp-group-inverse", "finite Lorentz transformations")
    def _():
        S = np.array(cl.sigma(rep, 0, 1) + cl.sigma(rep, 2, 3), dtype=float)
        err = float(np.abs(cl.exp_matrix(S) @ cl.exp_matrix(-S) - np.eye(4)).max())
        return err < 1e-10, "< 1e-10", f"{err:.2e}"

    @b.add("exp-derivative", "finite Lorentz transformations")
    def _():
        S = np.array(cl.sigma(rep, 1, 2), dtype=float)
        h = 1e-5
        fd = (cl.exp_matrix(h * S) - cl.exp_matrix(-h * S)) / (2 * h)
        err = float(np.abs(fd - S).max())
        return err < 1e-6, "< 1e-6", f"{err:.2e}"

    for mass in (0, 1):
        b.add(f"dirac-squares-to-klein-gordon-m{mass}", "Dirac and Klein-Gordon equations")(
            lambda mass=mass: (lambda r: (r.passed, "identity holds", str(r.failures or "identity holds")))(
                cl.dirac_square(rep, mass)))

    @b.add("negative-perturbed-gamma", A_DIR, negative=True)
    def _():
        r = cl.verify_clifford_dirac(rep.perturbed())
        return r.passed, "10/10 pairs", f"failing pairs {r.failures}"

    @b.add("negative-perturbed-dirac-square", "Dirac and Klein-Gordon equations", negative=True)
    def _():
        r = cl.dirac_square(rep.perturbed(2, 1, 3), 1)
        return r.passed, "identity holds", f"failing terms {r.failures}"

    return b.checks


def super_minkowski(opts: Options) -> list:
    b = _Builder("super-minkowski")
    A_ALG = "super-Poincare translation algebra"
    A_FR = "SUSY structure"
    A_CBH = "super-translation group law"
    m = _m4()
    ctx = m.ctx
    rows = m.verify()
    groups = {
        "Q-Q": [r for r in rows if r[0][0][0] == r[0][1][0] == "Q"],
        "D-Q": [r for r in rows if r[0][0][0] == "D" and r[0][1][0] == "Q"],
        "D-D": [r for r in rows if r[0][0][0] == r[0][1][0] == "D"],
        "P-any": [r for r in rows if r[0][0][0] == "P"],
    }
    for name, grp in groups.items():
        b.add(f"brackets-{name}", A_ALG)(lambda grp=grp: count((a == e for _, e, a in grp), "pairs"))

    @b.add("frobenius-curvature", A_FR)
    def _():
        X_coeffs = [ctx.expr(ctx.function(f"X{a + 1}", EVEN, m.even)) if f"X{a + 1}" not in ctx
                    else ctx.expr(ctx[f"X{a + 1}"]) for a in range(4)]
        X = SuperVectorField(ctx, {})
        for c, Da in zip(X_coeffs, m.D):
            X = X + c * Da
        D = m.distribution()
        res = []
        for beta in range(4):
            got = frobenius_curvature(D, X, m.D[beta])
            want = SuperVectorField(ctx, {})
            for a in range(4):
                for mu in range(4):
                    s = m.structure[mu][a][beta]
                    if s:
                        want = want + (X_coeffs[a] * (Fraction(-1, 2) * s)) * m.P[mu]
            res.append(got == want)
        return count(res, "beta (R(X,D) = -1/2 X_a (C gamma)^{a b} d_mu)")

    @b.add("maximally-non-integrable", A_FR)
    def _():
        D = m.distribution()
        ok = is_maximally_nonintegrable(D) and D.corank == (4, 0)
        return ok, "True, corank (4|0)", f"{is_maximally_nonintegrable(D)}, corank {D.corank}"

    @b.add("measure-invariance", "Berezinian and Jacobians")
    def _():
        return eq(shift_berezinian(m, m.odd_parameters())[1], 1)

    @b.add("shift-equals-variation", "SUSY transformations on super-Minkowski space")
    def _():
        eps = m.odd_parameters()
        E = ctx.expr
        x0, x2 = m.even[0], m.even[2]
        f = E(x0) * E(m.odd[0]) * E(m.odd[1]) + E(x2) ** 2 * E(m.odd[2]) + E(m.odd[3])
        want = ctx.zero()
        for e, Q in zip(eps, m.Q):
            want = want + E(e) * Q(f)
        return eq(shift_variation(m, f, eps), want)

    def elements(tags):
        out = []
        for tag in tags:
            if f"x{tag}_0" in ctx:
                out.append(TranslationElement([ctx.expr(ctx[f"x{tag}_{mu}"]) for mu in range(4)],
                                              [ctx.expr(ctx[f"th{tag}_{a + 1}"]) for a in range(4)]))
            else:
                out.append(TranslationElement.generic(m, tag))
        return out

    @b.add("cbh-group-law", A_CBH)
    def _():
        A, B = elements("ab")
        AB = cbh_compose(A, B, m)
        f = translation_structure(m)
        res = [AB.theta[a] == A.theta[a] + B.theta[a] for a in range(4)]
        kappas = set()
        for mu in range(4):
            shape = ctx.zero()
            for a in range(4):
                for c in range(4):
                    s = m.structure[mu][a][c]
                    if s:
                        shape = shape + B.theta[c] * A.theta[a] * s
            rest = AB.x[mu] - A.x[mu] - B.x[mu]
            key = next(iter(shape.terms))
            k = rest.terms.get(key, Fraction(0)) / shape.terms[key]
            res.append(rest == shape * k)
            kappas.add(k)
        ok = all(res) and len(kappas) == 1
        return ok, "x'' = x + x' + k theta'_b theta_a (C gamma)^{ab}, one k for all mu", \
            f"k = {', '.join(map(str, sorted(kappas)))} (reference group law: 1/2)"

    @b.add("cbh-identity", A_CBH)
    def _():
        (A,) = elements("a")
        return eq(cbh_compose(A, TranslationElement.zero(m), m), A)

    @b.add("cbh-associativity", A_CBH)
    def _():
        A, B, C = elements("abc")
        ok = cbh_compose(cbh_compose(A, B, m), C, m) == cbh_compose(A, cbh_compose(B, C, m), m)
        return ok, "associative", str(ok)

    @b.add("negative-coefficient-half", A_ALG, negative=True)
    def _():
        return raises(lambda: build_super_minkowski(coefficient=Fraction(1, 2)))

    @b.add("negative-perturbed-representation", A_ALG, negative=True)
    def _():
        return raises(lambda: build_super_minkowski(cl.GammaRep.majorana().perturbed()))

    return b.checks


def susy_qm(opts: Options) -> list:
    b = _Builder("susy-qm")
    A = "N=1 supersymmetric oscillator"

    @lru_cache(maxsize=None)
    def report(weight):
        return verify_susy_qm(12, 1e-10, opts.seed, weight)

    names = [c.name for c in verify_susy_qm(3).checks]
    for i, name in enumerate(names):
        slug = "".join(ch if ch.isalnum() else "-" for ch in name.lower()).strip("-")
        while "--" in slug:
            slug = slug.replace("--", "-")

        def run(i=i):
            c = report(1).checks[i]
            return c.passed, "holds", c.detail or ("holds" if c.passed else "violated")
        b.add(slug, A)(run)

    @b.add("negative-unbalanced-hamiltonian", A, negative=True)
    def _():
        r = report(2)
        return r.passed, "all checks hold", "violated: " + ", ".join(c.name for c in r.failures())

    return b.checks


SUITES = {
    "grassmann": grassmann,
    "berezinian": berezinian_suite,
    "n1-mechanics": n1_mechanics,
    "n2-mechanics": n2_mechanics,
    "poincare": poincare,
    "clifford": clifford_suite,
    "super-minkowski": super_minkowski,
    "susy-qm": susy_qm,
}


def suite_names() -> list:
    return list(SUITES) + ["all"]


def suite_checks(name: str, opts: Options) -> list:
    if name == "all":
        return [c for n in SUITES for c in SUITES[n](opts)]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; available: {', '.join(suite_names())}")
    return SUITES[name](opts)
