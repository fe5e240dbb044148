"""Concrete superspace charts with SUSY generators and covariant derivatives.

Every model is built from a list of "structure tensors" ``M^mu`` (one per
even coordinate) with

    Q_a = d/dtheta_a + k * theta_b M^mu_{ba} d/dx^mu
    D_a = d/dtheta_a - k * theta_b M^mu_{ba} d/dx^mu

and the default ``k = 1/4``.  For mechanics ``M`` is the identity, for
super-Minkowski space it is ``(C gamma^mu)``.  The bracket table

    {Q_a, Q_b} = 1/2 M^mu_{ab} P_mu,   {D_a, D_b} = -1/2 M^mu_{ab} P_mu,
    {D_a, Q_b} = 0,                    [P, anything] = 0

is checked when the model is built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .algebra import (
    EVEN, ODD, PARAMETER, Context, Parity, SuperExpr, Symbol, degree_part,
    odd_component, substitute,
)
from .clifford import GammaRep, charge_conjugation, lorentz_rhs
from .errors import (
    BasisExtractionFailure, BracketVerificationFailure, CBHOrderUnsupported,
    InvalidDeclaration, ParityViolation,
)
from .supermatrix import berezinian, jacobian
from .vectorfield import (
    Distribution, SuperVectorField, coordinate_field, killing_check, superbracket,
)

__all__ = [
    "SuperspaceModel", "build_R1_1", "build_R1_2", "build_super_minkowski", "build_model",
    "MODEL_NAMES", "Superfield", "expand", "component_variations", "susy_shift",
    "shift_variation", "shift_berezinian", "TranslationElement", "cbh_compose",
    "translation_structure", "PoincareModel", "build_poincare", "poincare_brackets", "killing_report",
]

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


@dataclass
class SuperspaceModel:
    name: str
    ctx: Context
    even: list
    odd: list
    P: list
    Q: list
    D: list
    structure: list          # M^mu as rows of Fractions, indexed [a][b]
    coefficient: Fraction
    rep: GammaRep | None = None
    eps: list = field(default_factory=list)

    def generator(self, label: str) -> SuperVectorField:
        """Look up ``P0``, ``Q1``, ``D2`` (0-based indices)."""
        kind, idx = label[0], int(label[1:])
        return {"P": self.P, "Q": self.Q, "D": self.D}[kind][idx]

    def expected_table(self) -> dict:
        """Expected superbracket for each labelled pair, as a vector field."""
        ctx = self.ctx
        zero = SuperVectorField(ctx, {})
        n, q = len(self.P), len(self.Q)
        table = {}

        def comb(sign):
            def f(a, b):
                coeffs = {}
                for mu in range(n):
                    c = self.structure[mu][a][b] * sign * HALF
                    if c:
                        coeffs[self.even[mu]] = ctx.const(c)
                return SuperVectorField(ctx, coeffs, EVEN)
            return f

        qq, dd = comb(1), comb(-1)
        for mu in range(n):
            for nu in range(mu, n):
                table[(f"P{mu}", f"P{nu}")] = zero
            for a in range(q):
                table[(f"P{mu}", f"Q{a}")] = SuperVectorField(ctx, {}, ODD)
                table[(f"P{mu}", f"D{a}")] = SuperVectorField(ctx, {}, ODD)
        for a in range(q):
            for b in range(a, q):
                table[(f"Q{a}", f"Q{b}")] = qq(a, b)
                table[(f"D{a}", f"D{b}")] = dd(a, b)
            for b in range(q):
                table[(f"D{a}", f"Q{b}")] = zero
        return table

    def verify(self) -> list:
        """All (pair, expected, actual) triples, in table order."""
        out = []
        for (x, y), expected in self.expected_table().items():
            actual = superbracket(self.generator(x), self.generator(y))
            out.append(((x, y), expected, actual))
        return out

    def odd_parameters(self, prefix: str = "eps") -> list:
        """Odd parameters ``eps1..epsq`` (declared once, then reused)."""
        names = [f"{prefix}{i + 1}" for i in range(len(self.odd))]
        if all(n in self.ctx for n in names):
            return [self.ctx[n] for n in names]
        return [self.ctx.parameter(n, ODD) for n in names]

    def distribution(self) -> Distribution:
        return Distribution(self.D, self.P)


def _check(model: SuperspaceModel) -> SuperspaceModel:
    for pair, expected, actual in model.verify():
        if actual != expected:
            raise BracketVerificationFailure(pair, expected, actual)
    return model


def _assemble(name, ctx, even, odd, structure, k, rep=None) -> SuperspaceModel:
    k = Fraction(k)
    P = [coordinate_field(ctx, x) for x in even]
    Q, D = [], []
    for a, th in enumerate(odd):
        for sign, out in ((1, Q), (-1, D)):
            coeffs = {th: ctx.one()}
            for mu, x in enumerate(even):
                c = ctx.zero()
                for b, thb in enumerate(odd):
                    m = structure[mu][b][a]
                    if m:
                        c = c + ctx.expr(thb) * (sign * k * m)
                if c:
                    coeffs[x] = c
            out.append(SuperVectorField(ctx, coeffs, ODD))
    return _check(SuperspaceModel(name, ctx, even, odd, P, Q, D, structure, k, rep))


def build_R1_1(coefficient=QUARTER) -> SuperspaceModel:
    ctx = Context("R1|1")
    t = ctx.coordinate("t", EVEN)
    th = ctx.coordinate("theta", ODD)
    return _assemble("R1|1", ctx, [t], [th], [[[Fraction(1)]]], coefficient)


def build_R1_2(coefficient=QUARTER) -> SuperspaceModel:
    ctx = Context("R1|2")
    t = ctx.coordinate("t", EVEN)
    odd = [ctx.coordinate(f"theta{i}", ODD) for i in (1, 2)]
    delta = [[Fraction(int(i == j)) for j in range(2)] for i in range(2)]
    return _assemble("R1|2", ctx, [t], odd, [delta], coefficient)


def build_super_minkowski(rep: GammaRep | None = None, coefficient=QUARTER) -> SuperspaceModel:
    rep = rep or GammaRep.majorana()
    _, cg = charge_conjugation(rep)
    for tensor in cg:
        if not tensor.symmetric:
            raise BracketVerificationFailure(tensor.name, "symmetric", "not symmetric")
    ctx = Context("M3,1|4")
    even = [ctx.coordinate(f"x{mu}", EVEN) for mu in range(4)]
    odd = [ctx.coordinate(f"theta{a + 1}", ODD) for a in range(4)]
    structure = [[[Fraction(x) for x in row] for row in t.components.tolist()] for t in cg]
    return _assemble("M3,1|4", ctx, even, odd, structure, coefficient, rep)


MODEL_NAMES = {"R1|1": build_R1_1, "R1|2": build_R1_2, "M3,1|4": build_super_minkowski}


def build_model(name: str) -> SuperspaceModel:
    try:
        return MODEL_NAMES[name]()
    except KeyError:
        raise KeyError(f"unknown model {name!r}; choose from {sorted(MODEL_NAMES)}") from None


# ---------------------------------------------------------------------------
# superfields

class Superfield:
    """Component map from odd monomials (tuples of odd coordinates) to function symbols."""

    def __init__(self, model: SuperspaceModel, components: Mapping[tuple, Symbol], parity=EVEN):
        self.model = model
        self.parity = Parity(int(parity))
        self.components = {}
        for mono, sym in components.items():
            mono = tuple(mono)
            if any(m not in model.odd for m in mono) or len(set(mono)) != len(mono):
                raise InvalidDeclaration(f"{mono} is not an odd monomial of {model.name}")
            want = self.parity + len(mono) % 2
            if sym.parity != want:
                raise ParityViolation(
                    f"component {sym} of a {self.parity.name.lower()} superfield at {mono} "
                    f"must be {want.name.lower()}")
            self.components[mono] = sym

    @classmethod
    def declare(cls, model: SuperspaceModel, names: Mapping[tuple, str], parity=EVEN):
        """Declare the component function symbols on the even coordinates."""
        parity = Parity(int(parity))
        comps = {}
        for mono, name in names.items():
            p = parity + len(mono) % 2
            comps[tuple(mono)] = model.ctx.function(name, p, model.even)
        return cls(model, comps, parity)

    @classmethod
    def full(cls, model: SuperspaceModel, names: Sequence[str], parity=EVEN):
        """Superfield on every odd monomial, named in order of degree then position."""
        monos = [c for r in range(len(model.odd) + 1) for c in combinations(model.odd, r)]
        if len(names) != len(monos):
            raise InvalidDeclaration(f"need {len(monos)} component names")
        return cls.declare(model, dict(zip(monos, names)), parity)

    def component(self, name: str) -> Symbol:
        for sym in self.components.values():
            if sym.name == name:
                return sym
        raise KeyError(name)


def _mono(ctx: Context, mono) -> SuperExpr:
    out = ctx.one()
    for s in mono:
        out = out * ctx.expr(s)
    return out


def expand(model: SuperspaceModel, field: Superfield) -> SuperExpr:
    ctx = model.ctx
    out = ctx.zero()
    for mono, sym in field.components.items():
        out = out + _mono(ctx, mono) * ctx.expr(sym)
    return out


def component_variations(model: SuperspaceModel, field: Superfield,
                         eps: Sequence[Symbol] | None = None) -> dict:
    """``delta Phi = sum_I eps_I Q_I(Phi)`` split into component variations."""
    ctx = model.ctx
    eps = list(eps) if eps is not None else model.odd_parameters()
    if len(eps) != len(model.Q):
        raise ValueError("need one odd parameter per SUSY generator")
    Phi = expand(model, field)
    delta = ctx.zero()
    for e, Q in zip(eps, model.Q):
        if not (e.kind == PARAMETER and e.parity == ODD):
            raise ValueError(f"{e} is not an odd parameter")
        delta = delta + ctx.expr(e) * Q(Phi)
    out = {}
    rebuilt = ctx.zero()
    for mono, sym in field.components.items():
        c = odd_component(delta, mono, model.odd)
        out[sym] = c
        rebuilt = rebuilt + _mono(ctx, mono) * c
    if rebuilt != delta:
        raise BasisExtractionFailure(f"variation has terms outside the basis: {delta - rebuilt}")
    return out


# ---------------------------------------------------------------------------
# finite SUSY shift as a coordinate substitution

def susy_shift(model: SuperspaceModel, eps: Sequence[Symbol] | None = None) -> dict:
    """``x^mu -> x^mu + k eps_b theta_a M^mu_{ab}``, ``theta_a -> theta_a + eps_a``."""
    ctx = model.ctx
    eps = list(eps) if eps is not None else model.odd_parameters()
    mapping = {}
    for mu, x in enumerate(model.even):
        img = ctx.expr(x)
        for a, th in enumerate(model.odd):
            for b, e in enumerate(eps):
                m = model.structure[mu][a][b]
                if m:
                    img = img + ctx.expr(e) * ctx.expr(th) * (model.coefficient * m)
        mapping[x] = img
    for th, e in zip(model.odd, eps):
        mapping[th] = ctx.expr(th) + ctx.expr(e)
    return mapping


def shift_variation(model: SuperspaceModel, expr: SuperExpr,
                    eps: Sequence[Symbol] | None = None) -> SuperExpr:
    """First-order (in eps) part of the pulled-back expression."""
    eps = list(eps) if eps is not None else model.odd_parameters()
    return degree_part(substitute(expr, susy_shift(model, eps)), eps, 1)


def shift_berezinian(model: SuperspaceModel, eps: Sequence[Symbol] | None = None):
    mapping = susy_shift(model, eps)
    J = jacobian(mapping, model.even + model.odd)
    return J, berezinian(J)


# ---------------------------------------------------------------------------
# CBH composition in the super-translation group

@dataclass
class TranslationElement:
    """``A = x^mu P_mu + theta_a Q^a`` with even ``x`` and odd ``theta`` coefficients."""

    x: list
    theta: list

    def __post_init__(self):
        for c in self.x:
            if c and c.parity != EVEN:
                raise ParityViolation("translation coefficients must be even")
        for c in self.theta:
            if c and c.parity != ODD:
                raise ParityViolation("spinor coefficients must be odd")

    @classmethod
    def generic(cls, model: SuperspaceModel, tag: str) -> "TranslationElement":
        ctx = model.ctx
        xs = [ctx.expr(ctx.parameter(f"x{tag}_{mu}", EVEN)) for mu in range(len(model.even))]
        ths = [ctx.expr(ctx.parameter(f"th{tag}_{a + 1}", ODD)) for a in range(len(model.odd))]
        return cls(xs, ths)

    @classmethod
    def zero(cls, model: SuperspaceModel) -> "TranslationElement":
        z = model.ctx.zero()
        return cls([z] * len(model.even), [z] * len(model.odd))

    def __eq__(self, other):
        return self.x == other.x and self.theta == other.theta


def translation_structure(model: SuperspaceModel) -> list:
    """``f[a][b][mu]`` with ``{Q^a, Q^b} = f[a][b][mu] P_mu``, read off the brackets.

    Also verifies the algebra is 2-step nilpotent: brackets land in span{P}
    and P is central.
    """
    basis = Distribution(model.Q, model.P)
    q = len(model.Q)
    for X in model.P:
        for Y in model.P + model.Q:
            if not superbracket(X, Y).is_zero():
                raise CBHOrderUnsupported("P is not central")
    f = []
    for a in range(q):
        row = []
        for b in range(q):
            cs = basis.decompose(superbracket(model.Q[a], model.Q[b]))
            if any(not c.is_constant() for c in cs) or any(cs[:q]):
                raise CBHOrderUnsupported("bracket of Q's leaves the centre")
            row.append([c.scalar_part() for c in cs[q:]])
        f.append(row)
    return f


def cbh_compose(A: TranslationElement, B: TranslationElement,
                model: SuperspaceModel) -> TranslationElement:
    """``A o B = A + B + 1/2 [A, B]`` with the bracket from the verified structure constants.

    For coefficient ``c`` and generator ``X``, ``[cX, dY] = (-1)^{|X||d|} c d [X, Y]``,
    so ``[theta_a Q^a, theta'_b Q^b] = -theta_a theta'_b {Q^a, Q^b}``.
    """
    f = translation_structure(model)
    ctx = model.ctx
    bracket = [ctx.zero() for _ in model.even]
    for a, ta in enumerate(A.theta):
        for b, tb in enumerate(B.theta):
            if not (ta and tb):
                continue
            prod = -(ta * tb)
            for mu, c in enumerate(f[a][b]):
                if c:
                    bracket[mu] = bracket[mu] + prod * c
    x = [xa + xb + br * HALF for xa, xb, br in zip(A.x, B.x, bracket)]
    th = [ta + tb for ta, tb in zip(A.theta, B.theta)]
    return TranslationElement(x, th)


# ---------------------------------------------------------------------------
# Poincare algebra as Killing fields on Minkowski space

@dataclass
class PoincareModel:
    ctx: Context
    coords: list
    eta: tuple
    P: list
    J: dict          # (mu, nu) with mu < nu -> field; J[(nu, mu)] = -J[(mu, nu)]

    def j(self, mu: int, nu: int) -> SuperVectorField:
        if mu == nu:
            return SuperVectorField(self.ctx, {})
        if mu < nu:
            return self.J[(mu, nu)]
        return -self.J[(nu, mu)]

    def generators(self) -> list:
        return self.P + [self.J[k] for k in sorted(self.J)]


def build_poincare(eta=None) -> PoincareModel:
    from .clifford import MINKOWSKI
    eta = eta or MINKOWSKI
    n = len(eta)
    ctx = Context("Minkowski")
    xs = [ctx.coordinate(f"x{mu}", EVEN) for mu in range(n)]
    P = [coordinate_field(ctx, x) for x in xs]
    J = {}
    for mu in range(n):
        for nu in range(mu + 1, n):
            coeffs = {}
            for lam in range(n):
                c = ctx.expr(xs[mu]) * Fraction(eta[nu][lam]) - ctx.expr(xs[nu]) * Fraction(eta[mu][lam])
                if c:
                    coeffs[xs[lam]] = c
            J[(mu, nu)] = SuperVectorField(ctx, coeffs, EVEN)
    return PoincareModel(ctx, xs, eta, P, J)


def poincare_brackets(model: PoincareModel) -> list:
    """All (label, expected, actual) for the three families of relations."""
    n = len(model.coords)
    eta = model.eta
    ctx = model.ctx
    out = []
    zero = SuperVectorField(ctx, {})
    for mu in range(n):
        for nu in range(n):
            out.append((f"[P{mu},P{nu}]", zero, superbracket(model.P[mu], model.P[nu])))
    for mu in range(n):
        for lam in range(n):
            for sg in range(n):
                exp = zero
                for rho in range(n):
                    c = int(lam == mu) * eta[sg][rho] - int(sg == mu) * eta[lam][rho]
                    if c:
                        exp = exp + Fraction(c) * model.P[rho]
                out.append((f"[P{mu},J{lam}{sg}]", exp,
                            superbracket(model.P[mu], model.j(lam, sg))))
    for mu in range(n):
        for nu in range(n):
            for rho in range(n):
                for sg in range(n):
                    exp = zero
                    for (a, b), c in lorentz_rhs(eta, mu, nu, rho, sg).items():
                        exp = exp + Fraction(c) * model.j(a, b)
                    out.append((f"[J{mu}{nu},J{rho}{sg}]", exp,
                                superbracket(model.j(mu, nu), model.j(rho, sg))))
    return out


def killing_report(model: PoincareModel) -> list:
    labels = [f"P{mu}" for mu in range(len(model.P))] + [f"J{a}{b}" for a, b in sorted(model.J)]
    return [(lab, killing_check(X, model.eta)) for lab, X in zip(labels, model.generators())]
