"""Exact supercommutative algebra over the rationals.

A :class:`Context` owns a list of declared symbols.  Expressions
(:class:`SuperExpr`) are finite sums of monomials kept in a unique normal
form: an even part (a multiset of commuting atoms) and an odd part (a
strictly increasing tuple of anticommuting atoms).  Sorting signs are
absorbed into the rational coefficient, so equality of expressions is
plain equality of normal forms.

Atoms come in three flavours:

* coordinate / parameter symbols (``t``, ``theta``, ``eps``),
* instances of function symbols of even coordinates, possibly
  differentiated (``q``, ``q_t``, ``psi_tt``),
* composites ``W^(k)(b)`` of a free function symbol with an even,
  odd-free argument ``b`` (``W'(q)``).

Odd derivatives are left derivatives.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    ContextMismatch,
    DuplicateName,
    InvalidDeclaration,
    InvalidMeasure,
    InvalidTarget,
    NonInvertible,
    ParityViolation,
    UnsupportedArgument,
)

__all__ = [
    "Parity", "EVEN", "ODD", "Symbol", "Atom", "Context", "SuperExpr",
    "declare", "mul", "partial", "jet_partial", "substitute", "berezin",
    "nilpotent_taylor", "invert_even", "derivation", "odd_component",
    "degree_part",
]


class Parity(IntEnum):
    EVEN = 0
    ODD = 1

    def __add__(self, other):
        return Parity((int(self) + int(other)) % 2)

    __radd__ = __add__


EVEN = Parity.EVEN
ODD = Parity.ODD

COORDINATE = "coordinate"
PARAMETER = "parameter"
FUNCTION = "function"
_KINDS = (COORDINATE, PARAMETER, FUNCTION)


@dataclass(frozen=True, eq=False)
class Symbol:
    """A declared name.  Identity is the object itself."""

    name: str
    parity: Parity
    kind: str
    index: int
    args: tuple = ()
    context: "Context" = field(default=None, repr=False, compare=False)

    @property
    def is_field(self) -> bool:
        return self.kind == FUNCTION and bool(self.args)

    @property
    def is_composable(self) -> bool:
        return self.kind == FUNCTION and not self.args

    def __call__(self, *order) -> "SuperExpr":
        return self.context.expr(self, order or None)

    def __str__(self):
        return self.name


class Atom:
    """Indivisible generator of the algebra (see module docstring)."""

    __slots__ = ("symbol", "order", "arg", "key", "_hash")

    def __init__(self, symbol: Symbol, order: tuple = (), arg: "SuperExpr | None" = None):
        self.symbol = symbol
        self.order = tuple(order)
        self.arg = arg
        self.key = (symbol.index, self.order, arg.key if arg is not None else ())
        self._hash = hash(self.key)

    @property
    def parity(self) -> Parity:
        return self.symbol.parity

    @property
    def context(self) -> "Context":
        return self.symbol.context

    def __eq__(self, other):
        return (isinstance(other, Atom) and self.key == other.key
                and self.symbol.context is other.symbol.context)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __str__(self):
        s = self.symbol
        if self.arg is not None:
            return f"{s.name}{chr(39) * self.order[0]}({self.arg})"
        if not any(self.order):
            return s.name
        names = [a.name for k, a in zip(self.order, s.args) for _ in range(k)]
        sep = "" if all(len(n) == 1 for n in names) else ","
        return f"{s.name}_{sep.join(names)}" if not sep else f"{s.name}_{{{sep.join(names)}}}"

    __repr__ = __str__


class Context:
    """Registry of symbols; fixes the total order on atoms used by normal forms.

    The registry is append-only: declaring new symbols never changes the
    relative order of existing ones, so existing expressions stay valid.
    """

    def __init__(self, name: str = ""):
        self.name = name
        self._symbols: list[Symbol] = []
        self._by_name: dict[str, Symbol] = {}

    # -- declarations ---------------------------------------------------
    def declare(self, name: str, parity=EVEN, kind: str = COORDINATE,
                args: Sequence[Symbol] = ()) -> Symbol:
        if name in self._by_name:
            raise DuplicateName(f"symbol {name!r} already declared")
        if kind not in _KINDS:
            raise InvalidDeclaration(f"unknown symbol kind {kind!r}")
        parity = Parity(int(parity))
        args = tuple(args)
        if args and kind != FUNCTION:
            raise InvalidDeclaration("only function symbols take arguments")
        for a in args:
            if a.context is not self or a.kind != COORDINATE:
                raise InvalidDeclaration(f"argument {a} is not a coordinate of this context")
            if a.parity != EVEN:
                raise InvalidDeclaration(
                    f"function {name!r} cannot depend on odd coordinate {a}")
        sym = Symbol(name, parity, kind, len(self._symbols), args, self)
        self._symbols.append(sym)
        self._by_name[name] = sym
        return sym

    def coordinate(self, name, parity=EVEN) -> Symbol:
        return self.declare(name, parity, COORDINATE)

    def parameter(self, name, parity=ODD) -> Symbol:
        return self.declare(name, parity, PARAMETER)

    def function(self, name, parity=EVEN, args=()) -> Symbol:
        return self.declare(name, parity, FUNCTION, args)

    # -- lookup ---------------------------------------------------------
    def __getitem__(self, name: str) -> Symbol:
        return self._by_name[name]

    def __contains__(self, name) -> bool:
        return name in self._by_name

    @property
    def symbols(self) -> tuple[Symbol, ...]:
        return tuple(self._symbols)

    def coordinates(self, parity=None) -> list[Symbol]:
        return [s for s in self._symbols if s.kind == COORDINATE
                and (parity is None or s.parity == parity)]

    def fields(self) -> list[Symbol]:
        return [s for s in self._symbols if s.is_field]

    # -- expression constructors ---------------------------------------
    def zero(self) -> "SuperExpr":
        return SuperExpr(self, {})

    def const(self, c) -> "SuperExpr":
        c = Fraction(c)
        return SuperExpr(self, {((), ()): c} if c else {})

    def one(self) -> "SuperExpr":
        return self.const(1)

    def atom(self, a: Atom) -> "SuperExpr":
        if a.parity == ODD:
            return SuperExpr(self, {((), (a,)): Fraction(1)})
        return SuperExpr(self, {(((a, 1),), ()): Fraction(1)})

    def expr(self, sym, order=None) -> "SuperExpr":
        """The expression for a coordinate, parameter or field instance."""
        if isinstance(sym, str):
            sym = self[sym]
        if sym.context is not self:
            raise ContextMismatch(f"{sym} belongs to another context")
        if sym.kind == FUNCTION:
            if not sym.args:
                raise InvalidTarget(f"{sym} needs an argument; use nilpotent_taylor")
            order = tuple(order) if order else (0,) * len(sym.args)
            if len(order) != len(sym.args) or any(k < 0 for k in order):
                raise InvalidDeclaration(f"bad derivative order {order} for {sym}")
            return self.atom(Atom(sym, order))
        if order:
            raise InvalidDeclaration(f"{sym} is not a function symbol")
        return self.atom(Atom(sym))

    def __repr__(self):
        return f"Context({self.name!r}, {[s.name for s in self._symbols]})"


def declare(ctx: Context, name: str, parity, kind: str = COORDINATE, args=()) -> Symbol:
    return ctx.declare(name, parity, kind, args)


# ---------------------------------------------------------------------------
# monomial kernel

def _merge_even(e1, e2):
    if not e1:
        return e2
    if not e2:
        return e1
    d = dict(e1)
    for a, n in e2:
        d[a] = d.get(a, 0) + n
    return tuple(sorted(d.items(), key=lambda p: p[0].key))


def _merge_odd(o1, o2):
    """Merge two sorted odd tuples; returns (sign, merged) or None if an atom repeats."""
    if not o2:
        return 1, o1
    if not o1:
        return 1, o2
    out = []
    sign = 1
    i = j = 0
    n1 = len(o1)
    while i < n1 and j < len(o2):
        a, b = o1[i], o2[j]
        if a.key < b.key:
            out.append(a)
            i += 1
        elif b.key < a.key:
            out.append(b)
            j += 1
            if (n1 - i) % 2:
                sign = -sign
        else:
            return None
    out.extend(o1[i:])
    out.extend(o2[j:])
    return sign, tuple(out)


def _permutation_sign(seq_keys) -> int:
    inv = 0
    n = len(seq_keys)
    for i in range(n):
        for j in range(i + 1, n):
            if seq_keys[i] > seq_keys[j]:
                inv += 1
    return -1 if inv % 2 else 1


def _mono_key(mono):
    even, odd = mono
    return (len(odd), sum(n for _, n in even),
            tuple((a.key, n) for a, n in even), tuple(a.key for a in odd))


class SuperExpr:
    """Normal-form element of the supercommutative algebra of a Context."""

    __slots__ = ("ctx", "_terms", "_key", "_hash")

    def __init__(self, ctx: Context, terms: Mapping):
        self.ctx = ctx
        self._terms = {m: Fraction(c) for m, c in terms.items() if c}
        self._key = None
        self._hash = None

    # -- coercion -------------------------------------------------------
    def _lift(self, other) -> "SuperExpr":
        if isinstance(other, SuperExpr):
            if other.ctx is not self.ctx:
                raise ContextMismatch("expressions belong to different contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.const(other)
        return NotImplemented

    # -- basic structure ------------------------------------------------
    @property
    def terms(self):
        return dict(self._terms)

    @property
    def key(self):
        if self._key is None:
            self._key = tuple(sorted(
                (tuple((a.key, n) for a, n in e), tuple(a.key for a in o),
                 (c.numerator, c.denominator))
                for (e, o), c in self._terms.items()))
        return self._key

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def parity(self) -> Parity | None:
        """Parity if homogeneous (zero counts as even), else None."""
        ps = {len(o) % 2 for (_, o) in self._terms}
        if not ps:
            return EVEN
        if len(ps) == 1:
            return Parity(ps.pop())
        return None

    def is_homogeneous(self) -> bool:
        return self.parity is not None

    def scalar_part(self) -> Fraction:
        return self._terms.get(((), ()), Fraction(0))

    def is_constant(self) -> bool:
        return all(m == ((), ()) for m in self._terms)

    def body(self) -> "SuperExpr":
        """Part free of odd atoms."""
        return SuperExpr(self.ctx, {m: c for m, c in self._terms.items() if not m[1]})

    def soul(self) -> "SuperExpr":
        """Part in which every monomial contains an odd atom (nilpotent)."""
        return SuperExpr(self.ctx, {m: c for m, c in self._terms.items() if m[1]})

    def atoms(self) -> set:
        out = set()
        for e, o in self._terms:
            out.update(a for a, _ in e)
            out.update(o)
        return out

    def odd_atoms(self) -> set:
        return {a for _, o in self._terms for a in o}

    def monomials(self):
        """Yield (coefficient, single-monomial expression) pairs in canonical order."""
        for m in sorted(self._terms, key=_mono_key):
            yield self._terms[m], SuperExpr(self.ctx, {m: 1})

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        d = dict(self._terms)
        for m, c in other._terms.items():
            d[m] = d.get(m, 0) + c
        return SuperExpr(self.ctx, d)

    __radd__ = __add__

    def __neg__(self):
        return SuperExpr(self.ctx, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SuperExpr(self.ctx, {m: c * other for m, c in self._terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return mul(self, invert_even(self._lift(other)))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._terms == ({((), ()): Fraction(other)} if other else {})
        if isinstance(other, SuperExpr):
            return self.ctx is other.ctx and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    # -- rendering ------------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m in sorted(self._terms, key=_mono_key):
            c = self._terms[m]
            even, odd = m
            factors = [str(a) if n == 1 else f"{a}^{n}" for a, n in even]
            factors += [str(a) for a in odd]
            mag = abs(c)
            if not factors:
                body = _fmt_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = _fmt_rational(mag) + "*" + "*".join(factors)
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"SuperExpr({self})"


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _mono_expr(ctx, even=(), odd=(), coeff=1) -> SuperExpr:
    return SuperExpr(ctx, {(tuple(even), tuple(odd)): coeff})


# ---------------------------------------------------------------------------
# operations

def mul(a: SuperExpr, b: SuperExpr) -> SuperExpr:
    """Normal-form product; Koszul signs from sorting odd atoms."""
    if a.ctx is not b.ctx:
        raise ContextMismatch("expressions belong to different contexts")
    out = defaultdict(Fraction)
    for (e1, o1), c1 in a._terms.items():
        for (e2, o2), c2 in b._terms.items():
            merged = _merge_odd(o1, o2)
            if merged is None:
                continue
            sign, odd = merged
            out[(_merge_even(e1, e2), odd)] += sign * c1 * c2
    return SuperExpr(a.ctx, out)


def derivation(expr: SuperExpr, atom_derivative: Callable[[Atom], SuperExpr | None],
               parity) -> SuperExpr:
    """Extend an action on atoms to a (graded) derivation of the algebra.

    ``parity`` is the parity of the derivation; odd derivations pick up a
    sign for every odd atom they move past (left convention).
    """
    ctx = expr.ctx
    result = ctx.zero()
    cache: dict = {}

    def d(a):
        if a not in cache:
            cache[a] = atom_derivative(a)
        return cache[a]

    for (even, odd), c in expr._terms.items():
        for i, (a, n) in enumerate(even):
            da = d(a)
            if not da:
                continue
            rest = list(even)
            if n == 1:
                del rest[i]
            else:
                rest[i] = (a, n - 1)
            result = result + _mono_expr(ctx, rest, (), c * n) * da * _mono_expr(ctx, (), odd)
        for p, o in enumerate(odd):
            do = d(o)
            if not do:
                continue
            sign = -1 if (parity and p % 2) else 1
            result = result + (_mono_expr(ctx, even, odd[:p], sign * c) * do
                               * _mono_expr(ctx, (), odd[p + 1:]))
    return result


def _composite(sym: Symbol, k: int, arg: SuperExpr) -> SuperExpr:
    return arg.ctx.atom(Atom(sym, (k,), arg))


def _coordinate_derivative(s: Symbol):
    ctx = s.context

    def atom_d(a: Atom):
        sym = a.symbol
        if a.arg is not None:
            darg = partial(a.arg, s)
            if not darg:
                return None
            return _composite(sym, a.order[0] + 1, a.arg) * darg
        if sym is s:
            return ctx.one()
        if s.parity == EVEN and sym.is_field and s in sym.args:
            order = list(a.order)
            order[sym.args.index(s)] += 1
            return ctx.atom(Atom(sym, tuple(order)))
        return None

    return atom_d


def partial(expr: SuperExpr, s: Symbol) -> SuperExpr:
    """Partial derivative by a coordinate or parameter.

    Odd targets give the left derivative.  Even coordinates act on field
    instances by raising their derivative order, so ``partial(., t)`` is
    the total time derivative on component fields.
    """
    if s.kind == FUNCTION:
        raise InvalidTarget(f"cannot differentiate by function symbol {s}")
    if s.context is not expr.ctx:
        raise ContextMismatch(f"{s} belongs to another context")
    return derivation(expr, _coordinate_derivative(s), s.parity)


def jet_partial(expr: SuperExpr, target) -> SuperExpr:
    """Derivative treating one atom (e.g. a field instance ``psi_t``) as a variable."""
    if isinstance(target, SuperExpr):
        atoms = target.atoms()
        if len(target.terms) != 1 or len(atoms) != 1 or target != expr.ctx.atom(next(iter(atoms))):
            raise InvalidTarget("jet_partial target must be a single atom")
        target = next(iter(atoms))
    ctx = expr.ctx

    def atom_d(a: Atom):
        if a == target:
            return ctx.one()
        if a.arg is not None:
            darg = jet_partial(a.arg, target)
            if darg:
                return _composite(a.symbol, a.order[0] + 1, a.arg) * darg
        return None

    return derivation(expr, atom_d, target.parity)


def _strip_front(odd: tuple, front: Sequence[Atom]):
    """Sign and remainder of rewriting ``odd`` as ``front[0]...front[-1] * rest``."""
    fset = set(front)
    rest = tuple(a for a in odd if a not in fset)
    # position of each front atom, in the requested order, followed by the rest
    sequence = list(front) + list(rest)
    pos = {a: i for i, a in enumerate(odd)}
    return _permutation_sign([pos[a] for a in sequence]), rest


def odd_component(expr: SuperExpr, monomial: Sequence[Symbol],
                  among: Iterable[Symbol]) -> SuperExpr:
    """Coefficient ``c`` in ``expr = ... + m*c + ...`` for the odd monomial ``m``.

    Only monomials whose content in the ``among`` generators is exactly ``m``
    contribute; ``m`` is taken in the given order.
    """
    ctx = expr.ctx
    front = [Atom(s) for s in monomial]
    fset = set(front)
    among_atoms = {Atom(s) for s in among}
    out = defaultdict(Fraction)
    for (even, odd), c in expr._terms.items():
        if {a for a in odd if a in among_atoms} != fset:
            continue
        sign, rest = _strip_front(odd, front)
        out[(even, rest)] += sign * c
    return SuperExpr(ctx, out)


def berezin(expr: SuperExpr, odd_list: Sequence[Symbol]) -> SuperExpr:
    """Berezin integral with measure ``D[xi^q]...D[xi^1]`` for ``odd_list = [xi^1..xi^q]``.

    Normalised so that the integral of ``xi^1 xi^2 ... xi^q`` is 1.
    """
    odd_list = list(odd_list)
    if not odd_list:
        return expr
    for s in odd_list:
        if s.context is not expr.ctx:
            raise ContextMismatch(f"{s} belongs to another context")
        if s.parity != ODD or s.kind == FUNCTION:
            raise InvalidMeasure(f"{s} is not an odd generator")
    if len(set(odd_list)) != len(odd_list):
        raise InvalidMeasure("repeated generator in measure")
    front = [Atom(s) for s in odd_list]
    fset = set(front)
    out = defaultdict(Fraction)
    for (even, odd), c in expr._terms.items():
        if not fset.issubset(odd):
            continue
        sign, rest = _strip_front(odd, front)
        out[(even, rest)] += sign * c
    return SuperExpr(expr.ctx, out)


def nilpotent_taylor(W: Symbol, arg: SuperExpr, order: int = 0) -> SuperExpr:
    """``W^(order)(arg)`` expanded around the odd-free body of ``arg``.

    The expansion ``sum_k W^(order+k)(body) n^k / k!`` terminates because
    the correction ``n`` lies in the nilpotent ideal.
    """
    if not W.is_composable:
        raise UnsupportedArgument(f"{W} is not a composable function symbol")
    if W.context is not arg.ctx:
        raise ContextMismatch(f"{W} belongs to another context")
    if arg.parity != EVEN:
        raise ParityViolation("function arguments must be even")
    body, nil = arg.body(), arg.soul()
    ctx = arg.ctx
    limit = len(nil.odd_atoms()) + 1
    result = ctx.zero()
    power = ctx.one()
    for k in range(limit + 1):
        if not power:
            break
        result = result + _composite(W, order + k, body) * power * Fraction(1, factorial(k))
        power = power * nil
    else:
        if power:
            raise UnsupportedArgument("correction term is not nilpotent")
    return result


def invert_even(expr: SuperExpr) -> SuperExpr:
    """Inverse of an even unit ``c + n`` (``c`` nonzero rational, ``n`` nilpotent)."""
    if expr.parity != EVEN:
        raise ParityViolation("only even elements can be inverted")
    c = expr.scalar_part()
    if c == 0:
        raise NonInvertible(f"{expr} has zero scalar part")
    n = expr - c
    if any(not o for (_, o) in n._terms):
        raise NonInvertible(f"{expr} has a non-constant body")
    u = n * (1 / c)
    result = expr.ctx.one()
    term = expr.ctx.one()
    while True:
        term = -(term * u)
        if not term:
            break
        result = result + term
    return result * (1 / c)


def degree_part(expr: SuperExpr, symbols: Iterable[Symbol], k: int) -> SuperExpr:
    """Monomials containing exactly ``k`` factors from the given odd symbols."""
    atoms = {Atom(s) for s in symbols}
    return SuperExpr(expr.ctx, {m: c for m, c in expr._terms.items()
                                if sum(1 for a in m[1] if a in atoms) == k})


# ---------------------------------------------------------------------------
# substitution

def _taylor_field(a: Atom, shifts: dict, target: Context) -> SuperExpr:
    """f(x + n) for a field instance whose arguments are shifted by nilpotents."""
    sym = a.symbol
    terms = [(tuple(a.order), Fraction(1), target.one())]
    for i, s in enumerate(sym.args):
        n = shifts.get(s)
        if n is None or not n:
            continue
        new_terms = []
        for order, coeff, factor in terms:
            power = target.one()
            k = 0
            while power:
                o = list(order)
                o[i] += k
                new_terms.append((tuple(o), coeff / factorial(k), factor * power))
                power = power * n
                k += 1
        terms = new_terms
    out = target.zero()
    for order, coeff, factor in terms:
        out = out + target.atom(Atom(sym, order)) * factor * coeff
    return out


def _differentiate_multi(expr: SuperExpr, args, order) -> SuperExpr:
    for s, k in zip(args, order):
        for _ in range(k):
            expr = partial(expr, s)
    return expr


def substitute(expr: SuperExpr, mapping: Mapping[Symbol, SuperExpr],
               target: Context | None = None) -> SuperExpr:
    """Parity-preserving algebra morphism determined by images of symbols.

    Keys may be coordinates, parameters or field symbols.  When a
    coordinate ``x`` is mapped to ``x + n`` with ``n`` nilpotent, field
    instances depending on ``x`` are Taylor expanded.  Unmapped symbols
    pass through unchanged when the target context is the source context.
    """
    ctx = expr.ctx
    if target is None:
        imgs = [v for v in mapping.values() if isinstance(v, SuperExpr)]
        target = imgs[0].ctx if imgs else ctx
    images: dict[Symbol, SuperExpr] = {}
    for s, img in mapping.items():
        if s.context is not ctx:
            raise ContextMismatch(f"{s} is not a symbol of the source context")
        if isinstance(img, (int, Fraction)):
            img = target.const(img)
        if img.ctx is not target:
            raise ContextMismatch(f"image of {s} lives in another context")
        if img and img.parity != s.parity:
            raise ParityViolation(f"image of {s} does not preserve parity")
        if s.is_composable:
            raise InvalidTarget(f"cannot substitute composable function {s}")
        images[s] = img
    same = target is ctx

    shifts = {}
    for s, img in images.items():
        if s.kind == COORDINATE and s.parity == EVEN:
            shift = img - target.expr(s) if same else None
            shifts[s] = shift

    cache: dict = {}

    def image(a: Atom) -> SuperExpr:
        if a in cache:
            return cache[a]
        sym = a.symbol
        if a.arg is not None:
            res = nilpotent_taylor(sym, substitute(a.arg, mapping, target), a.order[0]) \
                if same else _fail(sym)
        elif sym in images:
            res = images[sym] if not sym.is_field else \
                _differentiate_multi(images[sym], sym.args, a.order)
        elif sym.is_field and any(s in shifts for s in sym.args):
            if not same:
                raise ContextMismatch(f"cannot transport field {sym} to another context")
            bad = [s for s in sym.args if s in shifts and shifts[s].body()]
            if bad:
                raise UnsupportedArgument(
                    f"field {sym} evaluated at a non-infinitesimal shift of {bad[0]}")
            res = _taylor_field(a, shifts, target)
        elif same:
            res = ctx.atom(a)
        else:
            raise ContextMismatch(f"{sym} is unmapped and the target context differs")
        cache[a] = res
        return res

    result = target.zero()
    for (even, odd), c in expr._terms.items():
        term = target.const(c)
        for a, n in even:
            term = term * image(a) ** n
        for a in odd:
            term = term * image(a)
        result = result + term
    return result


def _fail(sym):
    raise ContextMismatch(f"cannot transport composite {sym} to another context")
