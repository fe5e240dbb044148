"""Lexer, recursive-descent parser and pretty-printer for model files.

Example::

    coord t: even;
    coord theta: odd;
    vf P = d/d(t);
    vf Q = d/d(theta) + (1/4)*theta*d/d(t);
    check "susy algebra": bracket(Q, Q) == (1/2)*P;
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = [
    "ParseError", "Token", "tokenize", "parse_model", "pretty",
    "Program", "Decl", "FieldDecl", "FuncDecl", "VfDecl", "SuperfieldDecl", "LetDecl",
    "ActionDecl", "Check", "Num", "Name", "Call", "Deriv", "Integrate", "BinOp", "Neg",
    "Pow", "Arrow",
]


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected=()):
        self.message, self.line, self.col = message, line, col
        self.expected = tuple(sorted(set(expected)))
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"line {line}, column {col}: {message}{exp}")


# ---------------------------------------------------------------------------
# lexer

KEYWORDS = {"coord", "param", "field", "func", "vf", "superfield", "let", "action",
            "check", "even", "odd", "is_total_derivative", "ber_eq"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+) |
    (?P<nl>\n) |
    (?P<comment>\#[^\n]*) |
    (?P<deriv>d/d\() |
    (?P<measure>D\[) |
    (?P<number>\d+) |
    (?P<string>"[^"\n]*") |
    (?P<ident>[A-Za-z_][A-Za-z_0-9]*'*) |
    (?P<op>==|->|[-+*/^(),;:\]=])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind, s = m.lastgroup, m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind not in ("ws", "comment"):
                if kind == "ident" and s in KEYWORDS:
                    kind = "kw"
                out.append(Token(kind, s, line, col))
            col += len(s)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


# ---------------------------------------------------------------------------
# AST

@dataclass
class Node:
    line: int = field(default=0, compare=False, kw_only=True)
    col: int = field(default=0, compare=False, kw_only=True)


@dataclass
class Num(Node):
    value: Fraction


@dataclass
class Name(Node):
    ident: str


@dataclass
class Call(Node):
    func: str
    args: list


@dataclass
class Deriv(Node):
    coord: str


@dataclass
class Integrate(Node):
    measure: list
    body: Node


@dataclass
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass
class Neg(Node):
    operand: Node


@dataclass
class Pow(Node):
    base: Node
    exponent: int


@dataclass
class Arrow(Node):
    target: str
    image: Node


@dataclass
class Decl(Node):
    kind: str          # coord | param
    name: str
    parity: str


@dataclass
class FieldDecl(Node):
    name: str
    args: list
    parity: str


@dataclass
class FuncDecl(Node):
    name: str
    parity: str


@dataclass
class VfDecl(Node):
    name: str
    expr: Node


@dataclass
class SuperfieldDecl(Node):
    name: str
    expr: Node


@dataclass
class LetDecl(Node):
    name: str
    expr: Node


@dataclass
class ActionDecl(Node):
    name: str
    expr: Node


@dataclass
class Check(Node):
    label: str | None
    lhs: Node
    op: str            # == | is_total_derivative | ber_eq
    rhs: Node | None


@dataclass
class Program(Node):
    stmts: list


# ---------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def error(self, msg, expected=()):
        t = self.tok
        got = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"{msg}, got {got}", t.line, t.col, expected)

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "kw", "deriv", "measure")

    def expect(self, text) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}", [text])
        return self.advance()

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            self.error("expected identifier", ["identifier"])
        return self.advance()

    def parity(self) -> str:
        if self.tok.text not in ("even", "odd"):
            self.error("expected parity", ["even", "odd"])
        return self.advance().text

    # -- statements --------------------------------------------------
    def program(self) -> Program:
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.stmt())
        return Program(stmts, line=1, col=1)

    def stmt(self):
        t = self.tok
        pos = dict(line=t.line, col=t.col)
        kw = t.text if t.kind == "kw" else None
        if kw in ("coord", "param"):
            self.advance()
            name = self.ident().text
            self.expect(":")
            node = Decl(kw, name, self.parity(), **pos)
        elif kw == "field":
            self.advance()
            name = self.ident().text
            self.expect("(")
            args = [self.ident().text]
            while self.at(","):
                self.advance()
                args.append(self.ident().text)
            self.expect(")")
            self.expect(":")
            node = FieldDecl(name, args, self.parity(), **pos)
        elif kw == "func":
            self.advance()
            name = self.ident().text
            self.expect(":")
            node = FuncDecl(name, self.parity(), **pos)
        elif kw in ("vf", "superfield", "let", "action"):
            self.advance()
            name = self.ident().text
            self.expect("=")
            cls = {"vf": VfDecl, "superfield": SuperfieldDecl, "let": LetDecl,
                   "action": ActionDecl}[kw]
            node = cls(name, self.expr(), **pos)
        elif kw == "check":
            self.advance()
            label = None
            if self.tok.kind == "string":
                label = self.advance().text[1:-1]
                self.expect(":")
            lhs = self.expr()
            if self.at("=="):
                self.advance()
                node = Check(label, lhs, "==", self.expr(), **pos)
            elif self.at("ber_eq"):
                self.advance()
                node = Check(label, lhs, "ber_eq", self.expr(), **pos)
            elif self.at("is_total_derivative"):
                self.advance()
                node = Check(label, lhs, "is_total_derivative", None, **pos)
            else:
                self.error("expected check operator", ["==", "ber_eq", "is_total_derivative"])
        else:
            self.error("expected statement",
                       ["coord", "param", "field", "func", "vf", "superfield", "let",
                        "action", "check"])
        self.expect(";")
        return node

    # -- expressions -------------------------------------------------
    def expr(self):
        node = self.term()
        while self.at("+") or self.at("-"):
            t = self.advance()
            node = BinOp(t.text, node, self.term(), line=t.line, col=t.col)
        return node

    def term(self):
        node = self.unary()
        while self.at("*") or self.at("/"):
            t = self.advance()
            node = BinOp(t.text, node, self.unary(), line=t.line, col=t.col)
        return node

    def unary(self):
        if self.at("-"):
            t = self.advance()
            return Neg(self.unary(), line=t.line, col=t.col)
        if self.tok.kind == "measure":
            t = self.advance()
            measure = [self.ident().text]
            while self.at(","):
                self.advance()
                measure.append(self.ident().text)
            self.expect("]")
            return Integrate(measure, self.unary(), line=t.line, col=t.col)
        return self.power()

    def power(self):
        base = self.atom()
        if self.at("^"):
            t = self.advance()
            if self.tok.kind != "number":
                self.error("expected integer exponent", ["integer"])
            return Pow(base, int(self.advance().text), line=t.line, col=t.col)
        return base

    def atom(self):
        t = self.tok
        pos = dict(line=t.line, col=t.col)
        if t.kind == "number":
            self.advance()
            return Num(Fraction(int(t.text)), **pos)
        if t.kind == "deriv":
            self.advance()
            name = self.ident().text
            self.expect(")")
            return Deriv(name, **pos)
        if t.kind == "ident":
            self.advance()
            if self.at("("):
                self.advance()
                args = []
                if not self.at(")"):
                    args.append(self.arg())
                    while self.at(","):
                        self.advance()
                        args.append(self.arg())
                self.expect(")")
                return Call(t.text, args, **pos)
            return Name(t.text, **pos)
        if self.at("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.error("expected expression", ["number", "identifier", "(", "d/d(", "D[", "-"])

    def arg(self):
        if self.tok.kind == "ident" and self.toks[self.i + 1].text == "->":
            t = self.advance()
            self.advance()
            return Arrow(t.text, self.expr(), line=t.line, col=t.col)
        return self.expr()


def parse_model(text: str) -> Program:
    return _Parser(tokenize(text)).program()


# ---------------------------------------------------------------------------
# pretty printer

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _pe(node, prec: int = 0) -> str:
    if isinstance(node, Num):
        v = node.value
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"
    if isinstance(node, Name):
        return node.ident
    if isinstance(node, Deriv):
        return f"d/d({node.coord})"
    if isinstance(node, Call):
        return f"{node.func}({', '.join(_pe(a) for a in node.args)})"
    if isinstance(node, Arrow):
        return f"{node.target} -> {_pe(node.image)}"
    if isinstance(node, Neg):
        s = f"-{_pe(node.operand, 3)}"
        return f"({s})" if prec > 1 else s
    if isinstance(node, Pow):
        return f"{_pe(node.base, 4)}^{node.exponent}"
    if isinstance(node, Integrate):
        s = f"D[{', '.join(node.measure)}] {_pe(node.body, 3)}"
        return f"({s})" if prec > 0 else s
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        right_prec = p + 1
        s = f"{_pe(node.left, p)} {node.op} {_pe(node.right, right_prec)}" if p == 1 \
            else f"{_pe(node.left, p)}{node.op}{_pe(node.right, right_prec)}"
        return f"({s})" if p < prec else s
    raise TypeError(f"cannot print {node!r}")


def _ps(stmt) -> str:
    if isinstance(stmt, Decl):
        return f"{stmt.kind} {stmt.name}: {stmt.parity};"
    if isinstance(stmt, FieldDecl):
        return f"field {stmt.name}({', '.join(stmt.args)}): {stmt.parity};"
    if isinstance(stmt, FuncDecl):
        return f"func {stmt.name}: {stmt.parity};"
    if isinstance(stmt, (VfDecl, SuperfieldDecl, LetDecl, ActionDecl)):
        kw = {VfDecl: "vf", SuperfieldDecl: "superfield", LetDecl: "let",
              ActionDecl: "action"}[type(stmt)]
        return f"{kw} {stmt.name} = {_pe(stmt.expr)};"
    if isinstance(stmt, Check):
        label = f'"{stmt.label}": ' if stmt.label is not None else ""
        rhs = f" {_pe(stmt.rhs)}" if stmt.rhs is not None else ""
        return f"check {label}{_pe(stmt.lhs)} {stmt.op}{rhs};"
    raise TypeError(f"cannot print {stmt!r}")


def pretty(node) -> str:
    if isinstance(node, Program):
        return "".join(_ps(s) + "\n" for s in node.stmts)
    if hasattr(node, "name") or isinstance(node, Check):
        return _ps(node)
    return _pe(node)
