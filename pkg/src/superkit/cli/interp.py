"""Semantic evaluation of parsed model files."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .. import mechanics
from ..algebra import (
    COORDINATE, EVEN, ODD, PARAMETER, Context, SuperExpr, Symbol, berezin, nilpotent_taylor,
    odd_component, partial, substitute,
)
from ..errors import SuperError
from ..supermatrix import berezinian, jacobian
from ..vectorfield import SuperVectorField, apply, coordinate_field, superbracket
from . import dsl

__all__ = ["SemanticError", "EvaluationError", "Transform", "CheckOutcome", "Interpreter", "run_model", "render_value"]


class SemanticError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        super().__init__(f"line {line}, column {col}: {message}")


class EvaluationError(SemanticError):
    """An algebra-level failure while evaluating a well-formed expression."""


@dataclass
class Transform:
    """Coordinate images for ``map(x -> expr, ...)``."""

    mapping: dict


@dataclass
class CheckOutcome:
    id: str
    label: str
    line: int
    passed: bool
    expected: str
    actual: str
    error: str | None = None


def render_value(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Transform):
        return "map(" + ", ".join(f"{k} -> {e}" for k, e in v.mapping.items()) + ")"
    return str(v)


_PARITY = {"even": EVEN, "odd": ODD}


class Interpreter:
    def __init__(self, name: str = "model"):
        self.ctx = Context(name)
        self.env: dict = {}
        self.checks: list[CheckOutcome] = []

    # -- helpers -----------------------------------------------------
    def fail(self, node, msg):
        raise SemanticError(msg, node.line, node.col)

    def symbol(self, node, name) -> Symbol:
        if name not in self.ctx:
            self.fail(node, f"undeclared symbol {name!r}")
        return self.ctx[name]

    def lift(self, v):
        return self.ctx.const(v) if isinstance(v, Fraction) else v

    # -- statements --------------------------------------------------
    def run(self, program: dsl.Program):
        for stmt in program.stmts:
            try:
                self.stmt(stmt)
            except SuperError as exc:
                self.fail(stmt, f"{type(exc).__name__}: {exc}")
        return self

    def declare(self, node, name, parity, kind, args=()):
        if name in self.ctx or name in self.env:
            self.fail(node, f"{name!r} is already declared")
        self.ctx.declare(name, parity, kind, args)

    def stmt(self, s):
        if isinstance(s, dsl.Decl):
            self.declare(s, s.name, _PARITY[s.parity],
                         COORDINATE if s.kind == "coord" else PARAMETER)
        elif isinstance(s, dsl.FieldDecl):
            args = [self.symbol(s, a) for a in s.args]
            for a in args:
                if a.kind != COORDINATE or a.parity != EVEN:
                    self.fail(s, f"field argument {a} must be an even coordinate")
            self.declare(s, s.name, _PARITY[s.parity], "function", args)
        elif isinstance(s, dsl.FuncDecl):
            self.declare(s, s.name, _PARITY[s.parity], "function")
        elif isinstance(s, dsl.VfDecl):
            v = self.eval(s.expr)
            if isinstance(v, SuperExpr) and v.parity is None:
                self.fail(s, f"parity mismatch: {s.name} = {v} mixes even and odd parts")
            if not isinstance(v, SuperVectorField):
                self.fail(s, f"{s.name} is not a vector field (no d/d(...) terms)")
            self.bind(s, s.name, v)
        elif isinstance(s, dsl.SuperfieldDecl):
            v = self.lift(self.eval(s.expr))
            if not isinstance(v, SuperExpr):
                self.fail(s, f"superfield {s.name} must be a function on superspace")
            if v and v.parity is None:
                self.fail(s, f"parity mismatch: superfield {s.name} is inhomogeneous")
            self.bind(s, s.name, v)
        elif isinstance(s, dsl.LetDecl):
            self.bind(s, s.name, self.eval(s.expr))
        elif isinstance(s, dsl.ActionDecl):
            if not isinstance(s.expr, dsl.Integrate):
                self.fail(s, "action must be an integral D[...] expr")
            self.bind(s, s.name, self.eval(s.expr))
        elif isinstance(s, dsl.Check):
            self.checks.append(self.check(s))
        else:
            self.fail(s, f"unknown statement {type(s).__name__}")

    def bind(self, node, name, value):
        if name in self.ctx or name in self.env:
            self.fail(node, f"{name!r} is already declared")
        self.env[name] = value

    def check(self, s: dsl.Check) -> CheckOutcome:
        cid = f"check{len(self.checks) + 1}"
        label = s.label or dsl.pretty(s)[len("check "):-1]
        try:
            lhs = self.eval(s.lhs)
            if s.op == "is_total_derivative":
                lhs = self.lift(lhs)
                ok = mechanics.is_total_derivative(lhs)
                return CheckOutcome(cid, label, s.line, ok, "total derivative",
                                    f"{lhs}" if not ok else "total derivative")
            rhs = self.eval(s.rhs)
            if s.op == "ber_eq":
                if not isinstance(lhs, Transform):
                    self.fail(s, "ber_eq needs a map(...) on the left")
                lhs = self.berezinian(s, lhs)
            ok = self.equal(s, lhs, rhs)
            return CheckOutcome(cid, label, s.line, ok, render_value(rhs), render_value(lhs))
        except (SuperError, EvaluationError) as exc:
            msg = str(exc) if isinstance(exc, EvaluationError) else f"{type(exc).__name__}: {exc}"
            return CheckOutcome(cid, label, s.line, False, dsl.pretty(s.rhs) if s.rhs else "",
                                "", msg)

    def equal(self, node, a, b) -> bool:
        if isinstance(a, SuperVectorField) or isinstance(b, SuperVectorField):
            if isinstance(a, Fraction) and a == 0:
                a = SuperVectorField(self.ctx, {})
            if isinstance(b, Fraction) and b == 0:
                b = SuperVectorField(self.ctx, {})
            if not (isinstance(a, SuperVectorField) and isinstance(b, SuperVectorField)):
                self.fail(node, "cannot compare a vector field with a function")
            return a == b
        return self.lift(a) == self.lift(b)

    def berezinian(self, node, T: Transform):
        coords = self.ctx.coordinates()
        full = {c: T.mapping.get(c, self.ctx.expr(c)) for c in coords}
        return berezinian(jacobian(full, coords))

    # -- expressions -------------------------------------------------
    def eval(self, n):
        try:
            return self._eval(n)
        except SuperError as exc:
            raise EvaluationError(f"{type(exc).__name__}: {exc}", n.line, n.col) from exc

    def _eval(self, n):
        if isinstance(n, dsl.Num):
            return n.value
        if isinstance(n, dsl.Name):
            return self.name(n)
        if isinstance(n, dsl.Deriv):
            s = self.symbol(n, n.coord)
            if s.kind != COORDINATE:
                self.fail(n, f"d/d({s}) needs a coordinate")
            return coordinate_field(self.ctx, s)
        if isinstance(n, dsl.Neg):
            v = self.eval(n.operand)
            return -v
        if isinstance(n, dsl.Pow):
            v = self.eval(n.base)
            if isinstance(v, SuperVectorField):
                self.fail(n, "cannot raise a vector field to a power")
            return v ** n.exponent
        if isinstance(n, dsl.BinOp):
            return self.binop(n)
        if isinstance(n, dsl.Integrate):
            return self.integrate(n)
        if isinstance(n, dsl.Call):
            return self.call(n)
        if isinstance(n, dsl.Arrow):
            self.fail(n, "'->' is only allowed inside map(...)")
        self.fail(n, f"unknown expression {type(n).__name__}")

    def name(self, n: dsl.Name):
        base = n.ident.rstrip("'")
        primes = len(n.ident) - len(base)
        if base in self.env and not primes:
            return self.env[base]
        s = self.symbol(n, base)
        if s.kind == "function" and not s.args:
            self.fail(n, f"{s} is a function; call it, e.g. {s}(q)")
        e = self.ctx.expr(s)
        if primes:
            if not s.is_field or len(s.args) != 1:
                self.fail(n, f"primes need a field of one coordinate, not {s}")
            for _ in range(primes):
                e = partial(e, s.args[0])
        return e

    def binop(self, n: dsl.BinOp):
        a, b = self.eval(n.left), self.eval(n.right)
        va, vb = isinstance(a, SuperVectorField), isinstance(b, SuperVectorField)
        if n.op in "+-":
            if va != vb:
                if va and b == 0 or vb and a == 0:
                    return a if va else (b if n.op == "+" else -b)
                self.fail(n, "cannot add a vector field and a function")
            if not (va or isinstance(a, (Fraction, SuperExpr))):
                self.fail(n, "unsupported operands")
            return a + b if n.op == "+" else a - b
        if n.op == "*":
            if va and vb:
                self.fail(n, "product of vector fields is not a vector field; use bracket(...)")
            if vb:
                return self.lift(a) * b if isinstance(a, SuperExpr) else a * b
            if va:
                if isinstance(b, Fraction):
                    return b * a
                self.fail(n, "coefficients go to the left of a vector field")
            return a * b
        if n.op == "/":
            if vb or not isinstance(b, Fraction):
                self.fail(n, "can only divide by a nonzero rational")
            if b == 0:
                self.fail(n, "division by zero")
            return (Fraction(1) / b) * a
        self.fail(n, f"unknown operator {n.op}")

    def integrate(self, n: dsl.Integrate):
        syms = [self.symbol(n, m) for m in n.measure]
        even = [s for s in syms if s.parity == EVEN]
        odd = [s for s in syms if s.parity == ODD]
        if any(s.kind != COORDINATE for s in syms):
            self.fail(n, "measure may only contain coordinates")
        if len(even) > 1 or (even and syms[0] is not even[0]):
            self.fail(n, "mixed measure must be D[t, odd...] with one even coordinate first")
        body = self.lift(self.eval(n.body))
        if not isinstance(body, SuperExpr):
            self.fail(n, "integrand must be a function")
        if even:
            return mechanics.reduce_action(mechanics.ActionSpec(body, even[0], odd))
        return berezin(body, odd)

    def call(self, n: dsl.Call):
        f = n.func
        base = f.rstrip("'")
        primes = len(f) - len(base)
        if base in self.env and isinstance(self.env[base], SuperVectorField) and not primes:
            self.arity(n, 1)
            return apply(self.env[base], self.as_expr(n.args[0]))
        if base in self.ctx and self.ctx[base].is_composable:
            self.arity(n, 1)
            return nilpotent_taylor(self.ctx[base], self.as_expr(n.args[0]), primes)
        handler = getattr(self, f"fn_{f}", None)
        if handler is None:
            self.fail(n, f"unknown function {f!r}")
        return handler(n)

    def arity(self, n, k):
        if len(n.args) != k:
            self.fail(n, f"{n.func} takes {k} argument(s), got {len(n.args)}")

    def as_expr(self, node):
        v = self.lift(self.eval(node))
        if not isinstance(v, SuperExpr):
            self.fail(node, "expected a function, got a vector field")
        return v

    def as_vf(self, node):
        v = self.eval(node)
        if isinstance(v, SuperExpr) and v.parity is None:
            self.fail(node, f"parity mismatch: {v} is inhomogeneous and cannot act as a variation")
        if not isinstance(v, SuperVectorField):
            self.fail(node, "expected a vector field")
        return v

    def as_symbol(self, node):
        if not isinstance(node, dsl.Name):
            self.fail(node, "expected a symbol name")
        return self.symbol(node, node.ident)

    # -- builtins ----------------------------------------------------
    def fn_bracket(self, n):
        self.arity(n, 2)
        return superbracket(self.as_vf(n.args[0]), self.as_vf(n.args[1]))

    def fn_apply(self, n):
        self.arity(n, 2)
        return apply(self.as_vf(n.args[0]), self.as_expr(n.args[1]))

    def fn_partial(self, n):
        self.arity(n, 2)
        return partial(self.as_expr(n.args[0]), self.as_symbol(n.args[1]))

    def fn_el(self, n):
        self.arity(n, 2)
        return mechanics.euler_lagrange(self.as_expr(n.args[0]), self.as_symbol(n.args[1]))

    def fn_eliminate(self, n):
        self.arity(n, 2)
        return mechanics.eliminate_auxiliary(self.as_expr(n.args[0]), self.as_symbol(n.args[1]))

    def fn_component(self, n):
        """component(Phi, theta1, theta2): coefficient of the odd monomial theta1 theta2."""
        if len(n.args) < 1:
            self.fail(n, "component needs a superfield")
        mono = [self.as_symbol(a) for a in n.args[1:]]
        return odd_component(self.as_expr(n.args[0]), mono, self.ctx.coordinates(ODD))

    def fn_vary(self, n):
        """vary(L, Phi, V): apply the component variations of Phi induced by V(Phi)."""
        self.arity(n, 3)
        L, Phi, V = self.as_expr(n.args[0]), self.as_expr(n.args[1]), self.as_vf(n.args[2])
        return mechanics.apply_variation(L, self.component_variations(n, Phi, V))

    def component_variations(self, n, Phi, V):
        odd_coords = self.ctx.coordinates(ODD)
        delta = apply(V, Phi)
        out = {}
        seen = set()
        for _, odd in Phi.terms:
            mono = tuple(a.symbol for a in odd if a.symbol in odd_coords)
            if mono in seen:
                continue
            seen.add(mono)
            coeff = odd_component(Phi, mono, odd_coords)
            if len(coeff.terms) != 1:
                self.fail(n, "each odd monomial of a superfield needs exactly one component field")
            (k, unit), = coeff.monomials()
            atoms = unit.atoms()
            atom = next(iter(atoms))
            if len(atoms) != 1 or unit != self.ctx.atom(atom) or not atom.symbol.is_field \
                    or any(atom.order):
                self.fail(n, "superfield components must be undifferentiated fields")
            out[atom.symbol] = odd_component(delta, mono, odd_coords) * (Fraction(1) / k)
        return out

    def fn_map(self, n):
        mapping = {}
        for a in n.args:
            if not isinstance(a, dsl.Arrow):
                self.fail(a, "map(...) entries look like x -> expr")
            s = self.symbol(a, a.target)
            mapping[s] = self.as_expr(a.image)
        return Transform(mapping)

    def fn_pullback(self, n):
        self.arity(n, 2)
        T = self.eval(n.args[1])
        if not isinstance(T, Transform):
            self.fail(n, "pullback(f, map(...))")
        return substitute(self.as_expr(n.args[0]), T.mapping)

    def fn_ber(self, n):
        self.arity(n, 1)
        T = self.eval(n.args[0])
        if not isinstance(T, Transform):
            self.fail(n, "ber(map(...))")
        return self.berezinian(n, T)


def run_model(text: str, name: str = "model") -> Interpreter:
    """Parse and evaluate; ParseError / SemanticError propagate with positions."""
    return Interpreter(name).run(dsl.parse_model(text))
