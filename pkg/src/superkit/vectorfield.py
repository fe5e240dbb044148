"""Graded derivations on a coordinate chart.

A :class:`SuperVectorField` is ``X = sum_a X^a d/dx^a`` with coefficients
written to the left of the derivatives.  Brackets are computed on the
coefficients, ``[X,Y]^a = X(Y^a) - (-1)^{|X||Y|} Y(X^a)``, so results stay
in normal form.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

import sympy

from .algebra import COORDINATE, EVEN, ODD, Context, Parity, SuperExpr, Symbol, partial
from .errors import (
    ContextMismatch,
    DegenerateDistribution,
    InvalidParameter,
    ParityUndetermined,
    ParityViolation,
    SingularBlock,
    UnsupportedArgument,
    UnsupportedChart,
)
from .supermatrix import inverse

__all__ = [
    "SuperVectorField", "coordinate_field", "apply", "superbracket", "susy_variation",
    "killing_check", "Distribution", "frobenius_curvature", "is_maximally_nonintegrable",
]


class SuperVectorField:
    def __init__(self, ctx: Context, coeffs: Mapping[Symbol, SuperExpr], parity=None):
        self.ctx = ctx
        self.chart = tuple(ctx.coordinates())
        cs = {}
        for a, c in coeffs.items():
            if isinstance(c, (int, Fraction)):
                c = ctx.const(c)
            if a.context is not ctx or c.ctx is not ctx:
                raise ContextMismatch("coefficients from another context")
            if a.kind != COORDINATE:
                raise UnsupportedChart(f"{a} is not a chart coordinate")
            if c:
                cs[a] = c
        implied = set()
        for a, c in cs.items():
            if c.parity is None:
                raise ParityUndetermined(f"coefficient of d/d{a} is inhomogeneous")
            implied.add(c.parity + a.parity)
        if len(implied) > 1:
            raise ParityUndetermined("vector field mixes even and odd parts")
        if parity is None:
            parity = implied.pop() if implied else EVEN
        parity = Parity(int(parity))
        if implied and parity not in implied:
            raise ParityViolation("declared parity disagrees with coefficients")
        self.parity = parity
        self.coeffs = cs

    def coefficient(self, a: Symbol) -> SuperExpr:
        return self.coeffs.get(a, self.ctx.zero())

    def __call__(self, f: SuperExpr) -> SuperExpr:
        return apply(self, f)

    def _check(self, other):
        if other.ctx is not self.ctx:
            raise ContextMismatch("vector fields on different charts")

    def __add__(self, other: "SuperVectorField"):
        self._check(other)
        if self.coeffs and other.coeffs and self.parity != other.parity:
            raise ParityUndetermined("sum of even and odd vector fields")
        parity = self.parity if self.coeffs else other.parity
        keys = list(self.coeffs) + [k for k in other.coeffs if k not in self.coeffs]
        return SuperVectorField(self.ctx, {a: self.coefficient(a) + other.coefficient(a)
                                           for a in keys}, parity)

    def __neg__(self):
        return SuperVectorField(self.ctx, {a: -c for a, c in self.coeffs.items()}, self.parity)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, f):
        """Left multiplication by a rational or a homogeneous function."""
        if isinstance(f, (int, Fraction)):
            return SuperVectorField(self.ctx, {a: c * f for a, c in self.coeffs.items()},
                                    self.parity)
        if f.parity is None:
            raise ParityUndetermined("multiplier is inhomogeneous")
        return SuperVectorField(self.ctx, {a: f * c for a, c in self.coeffs.items()},
                                self.parity + f.parity)

    def __eq__(self, other):
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coefficient(a) == other.coefficient(a) for a in keys)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for a in self.chart:
            if a in self.coeffs:
                c = self.coeffs[a]
                cs = str(c)
                if c == 1:
                    parts.append(f"d/d({a})")
                else:
                    parts.append(f"({cs})*d/d({a})")
        return " + ".join(parts)

    __repr__ = __str__


def coordinate_field(ctx: Context, a: Symbol) -> SuperVectorField:
    return SuperVectorField(ctx, {a: ctx.one()}, a.parity)


def apply(X: SuperVectorField, f: SuperExpr) -> SuperExpr:
    """``X(f) = sum_a X^a * df/dx^a``."""
    if f.ctx is not X.ctx:
        raise ContextMismatch("function and vector field on different contexts")
    out = f.ctx.zero()
    for a, c in X.coeffs.items():
        out = out + c * partial(f, a)
    return out


def superbracket(X: SuperVectorField, Y: SuperVectorField) -> SuperVectorField:
    X._check(Y)
    sign = -1 if (X.parity and Y.parity) else 1
    coeffs = {}
    for a in X.chart:
        c = apply(X, Y.coefficient(a)) - apply(Y, X.coefficient(a)) * sign
        if c:
            coeffs[a] = c
    return SuperVectorField(X.ctx, coeffs, X.parity + Y.parity)


def susy_variation(X: SuperVectorField, Phi: SuperExpr, eps: Symbol) -> SuperExpr:
    """``delta_eps Phi = eps * X(Phi)``."""
    if eps.kind != "parameter" or eps.parity != ODD:
        raise InvalidParameter(f"{eps} is not an odd parameter")
    return X.ctx.expr(eps) * apply(X, Phi)


def killing_check(X: SuperVectorField, eta: Sequence[Sequence]) -> bool:
    """True iff ``d_mu X_nu + d_nu X_mu = 0`` with ``X_mu = eta_{mu nu} X^nu``."""
    chart = X.chart
    if any(a.parity == ODD for a in chart):
        raise UnsupportedChart("Killing check needs a purely even chart")
    n = len(chart)
    ctx = X.ctx
    lowered = []
    for mu in range(n):
        acc = ctx.zero()
        for nu in range(n):
            if eta[mu][nu]:
                acc = acc + X.coefficient(chart[nu]) * Fraction(eta[mu][nu])
        lowered.append(acc)
    for mu in range(n):
        for nu in range(mu, n):
            if partial(lowered[nu], chart[mu]) + partial(lowered[mu], chart[nu]):
                return False
    return True


class Distribution:
    """Span of ``span`` with an explicit complement basis ``complement``."""

    def __init__(self, span: Sequence[SuperVectorField], complement: Sequence[SuperVectorField]):
        self.span = list(span)
        self.complement = list(complement)
        basis = self.span + self.complement
        if not basis:
            raise DegenerateDistribution("empty basis")
        self.ctx = basis[0].ctx
        chart = basis[0].chart
        if len(basis) != len(chart):
            raise DegenerateDistribution(
                f"{len(basis)} fields cannot form a basis of a {len(chart)}-dimensional chart")
        self.chart = chart
        M = [[V.coefficient(a) for a in chart] for V in basis]
        try:
            self._inv = inverse(M)
        except SingularBlock as exc:
            raise DegenerateDistribution(f"basis matrix is not invertible: {exc}") from exc

    @property
    def corank(self) -> tuple[int, int]:
        even = sum(1 for N in self.complement if N.parity == EVEN)
        return even, len(self.complement) - even

    def decompose(self, Z: SuperVectorField) -> list[SuperExpr]:
        """Coefficients ``c_i`` with ``Z = sum_i c_i V_i`` over span + complement."""
        out = []
        for j in range(len(self.chart)):
            acc = self.ctx.zero()
            for a_idx, a in enumerate(self.chart):
                z = Z.coefficient(a)
                if z:
                    acc = acc + z * self._inv[a_idx][j]
            out.append(acc)
        return out

    def contains(self, Z: SuperVectorField) -> bool:
        return all(not c for c in self.decompose(Z)[len(self.span):])

    def project(self, Z: SuperVectorField) -> SuperVectorField:
        """Component of Z along the complement (the quotient map)."""
        cs = self.decompose(Z)[len(self.span):]
        out = SuperVectorField(self.ctx, {}, Z.parity)
        for c, N in zip(cs, self.complement):
            if c:
                out = out + c * N
        return out


def frobenius_curvature(D: Distribution, X: SuperVectorField, Y: SuperVectorField) -> SuperVectorField:
    for V in (X, Y):
        if not D.contains(V):
            raise ValueError(f"{V} is not in the distribution")
    return D.project(superbracket(X, Y))


def curvature_tensor(D: Distribution) -> list[list[list[SuperExpr]]]:
    """``K[i][j][n]``: coefficient of complement field n in R(span_i, span_j)."""
    k = len(D.span)
    out = []
    for i in range(k):
        row = []
        for j in range(k):
            cs = D.decompose(superbracket(D.span[i], D.span[j]))[k:]
            row.append(cs)
        out.append(row)
    return out


def is_maximally_nonintegrable(D: Distribution) -> bool:
    """True iff no nonzero ``X = sum X_i span_i`` has ``R(X, span_j) = 0`` for all j.

    ``R`` is function-linear in its first slot, so the question is whether
    the matrix ``K[i][(j, n)]`` has a nontrivial left kernel.  The entries
    must be constants.
    """
    K = curvature_tensor(D)
    rows = []
    for i in range(len(D.span)):
        row = []
        for j in range(len(D.span)):
            for c in K[i][j]:
                if not c.is_constant():
                    raise UnsupportedArgument("curvature coefficients are not constant")
                row.append(sympy.Rational(c.scalar_part().numerator, c.scalar_part().denominator))
        rows.append(row)
    if not rows:
        return True
    if not rows[0]:
        return False
    return sympy.Matrix(rows).rank() == len(D.span)
