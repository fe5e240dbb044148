"""Component Lagrangians: Berezin reduction, Euler-Lagrange, auxiliary fields.

Densities are SuperExprs in jet variables (field instances such as
``q``, ``q_t``, ``psi_t``) over a single even coordinate ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .algebra import (
    EVEN, Atom, SuperExpr, Symbol, berezin, derivation, invert_even, jet_partial, partial,
    substitute,
)
from .errors import NonInvertible, NotAuxiliary, ParityViolation, UnsupportedArgument

__all__ = [
    "ActionSpec", "reduce_action", "euler_lagrange", "is_total_derivative",
    "eliminate_auxiliary", "apply_variation", "solve_auxiliary",
]

MAX_ORDER = 2


@dataclass
class ActionSpec:
    """``integral D[t, theta...] integrand`` with measure ``D[theta^q]...D[theta^1]``.

    The reduced density must be even, so the integrand's parity has to match
    the number of odd measure variables (odd for R^{1|1}, even for R^{1|2}).
    """

    integrand: SuperExpr
    time: Symbol
    measure: Sequence[Symbol]

    def __post_init__(self):
        want = len(self.measure) % 2
        if self.integrand and self.integrand.parity != want:
            raise ParityViolation("integrand parity does not give an even density")
        if self.time.parity != EVEN:
            raise ParityViolation("integration variable must be even")


def reduce_action(spec: ActionSpec) -> SuperExpr:
    """Component density in ``t`` obtained by integrating out the odd coordinates."""
    return berezin(spec.integrand, list(spec.measure))


def _orders(L: SuperExpr, field: Symbol) -> list:
    """Derivative orders of ``field`` present in L, including inside composites."""
    found = set()
    stack = [L]
    while stack:
        for a in stack.pop().atoms():
            if a.arg is not None:
                stack.append(a.arg)
            elif a.symbol is field:
                found.add(a.order[0])
    return sorted(found)


def _time(field: Symbol) -> Symbol:
    if len(field.args) != 1:
        raise UnsupportedArgument(f"{field} must depend on exactly one coordinate")
    return field.args[0]


def euler_lagrange(L: SuperExpr, field: Symbol) -> SuperExpr:
    """``sum_k (-d/dt)^k dL/d(field^(k))`` with left derivatives."""
    t = _time(field)
    orders = _orders(L, field)
    if orders and orders[-1] > MAX_ORDER:
        raise UnsupportedArgument(f"{field} appears with derivative order {orders[-1]} > {MAX_ORDER}")
    out = L.ctx.zero()
    for k in orders:
        term = jet_partial(L, Atom(field, (k,)))
        for _ in range(k):
            term = -partial(term, t)
        out = out + term
    return out


def is_total_derivative(L: SuperExpr, fields: Sequence[Symbol] | None = None) -> bool:
    fields = list(fields) if fields is not None else L.ctx.fields()
    return all(not euler_lagrange(L, f) for f in fields)


def apply_variation(L: SuperExpr, variations: Mapping[Symbol, SuperExpr]) -> SuperExpr:
    """Even derivation with ``delta field = variations[field]``, commuting with d/dt."""
    for f, v in variations.items():
        if v and v.parity != f.parity:
            raise ParityViolation(f"variation of {f} has the wrong parity")
    ctx = L.ctx

    def atom_d(a: Atom):
        if a.arg is not None:
            d_arg = apply_variation(a.arg, variations)
            if not d_arg:
                return None
            return ctx.atom(Atom(a.symbol, (a.order[0] + 1,), a.arg)) * d_arg
        v = variations.get(a.symbol)
        if v is None or not a.symbol.is_field:
            return None
        for s, k in zip(a.symbol.args, a.order):
            for _ in range(k):
                v = partial(v, s)
        return v

    return derivation(L, atom_d, EVEN)


def solve_auxiliary(L: SuperExpr, F: Symbol) -> SuperExpr:
    """The solution of the (linear) equation of motion of F."""
    if any(k > 0 for k in _orders(L, F)):
        raise NotAuxiliary(f"{F} appears with time derivatives")
    E = euler_lagrange(L, F)
    Fa = Atom(F, (0,) * len(F.args))
    a = jet_partial(E, Fa)
    if not a:
        raise NotAuxiliary(f"equation of motion of {F} does not involve {F}")
    if jet_partial(a, Fa):
        raise NotAuxiliary(f"equation of motion of {F} is not linear in {F}")
    if a.parity != EVEN:
        raise NotAuxiliary("coefficient of the auxiliary field is not even")
    try:
        inv = invert_even(a)
    except NonInvertible as exc:
        raise NotAuxiliary(f"coefficient {a} of {F} is not invertible") from exc
    b = E - a * L.ctx.atom(Fa)
    return -(inv * b)


def eliminate_auxiliary(L: SuperExpr, F: Symbol) -> SuperExpr:
    return substitute(L, {F: solve_auxiliary(L, F)})
