"""Clifford algebras, the real Majorana gamma matrices, and spinor identities.

Everything here is exact (``Fraction`` entries in numpy object arrays)
except :func:`exp_matrix`, which is the only floating-point routine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .errors import RepresentationIncompatible

__all__ = [
    "BilinearForm", "CliffordElement", "clifford_mul", "chevalley_operators",
    "GammaRep", "CheckReport", "SpinTensor", "MINKOWSKI",
    "verify_clifford_dirac", "sigma", "lorentz_rhs", "verify_lorentz_spin_rep",
    "charge_conjugation", "gamma5", "infinitesimal_lorentz_on_spinor", "exp_matrix",
    "dirac_square", "frac_matrix", "eye", "mat_equal", "mat_inverse",
]

MINKOWSKI = ((-1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


def frac_matrix(rows) -> np.ndarray:
    rows = [[Fraction(x) for x in r] for r in rows]
    m = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            m[i, j] = x
    return m


def eye(n: int) -> np.ndarray:
    return frac_matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def mat_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and bool(np.all(a == b))


def mat_inverse(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    work = np.concatenate([m.copy(), eye(n)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r, col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        work[[col, piv]] = work[[piv, col]]
        work[col] = work[col] / work[col, col]
        for r in range(n):
            if r != col and work[r, col] != 0:
                work[r] = work[r] - work[r, col] * work[col]
    return work[:, n:]


# ---------------------------------------------------------------------------
# abstract Clifford algebra

class BilinearForm:
    """Symmetric form with relation ``e_i e_j + e_j e_i = sigma * 2 B(e_i, e_j)``."""

    def __init__(self, matrix, sigma: int = -1):
        self.matrix = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        self.n = len(self.matrix)
        if any(len(r) != self.n for r in self.matrix):
            raise ValueError("form matrix must be square")
        if any(self.matrix[i][j] != self.matrix[j][i]
               for i in range(self.n) for j in range(self.n)):
            raise ValueError("bilinear form must be symmetric")
        if sigma not in (1, -1):
            raise ValueError("sigma must be +1 or -1")
        self.sigma = sigma
        self._cache: dict = {}

    def __call__(self, i: int, j: int) -> Fraction:
        return self.matrix[i][j]

    def reduce(self, word: tuple) -> dict:
        """Canonical form of an arbitrary word of generator indices."""
        if word in self._cache:
            return self._cache[word]
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if a < b:
                continue
            rest = word[:i] + word[i + 2:]
            out: dict = {}
            if a == b:
                c = self.sigma * self(a, a)
                if c:
                    for w, v in self.reduce(rest).items():
                        out[w] = out.get(w, 0) + c * v
            else:
                for w, v in self.reduce(word[:i] + (b, a) + word[i + 2:]).items():
                    out[w] = out.get(w, 0) - v
                c = 2 * self.sigma * self(a, b)
                if c:
                    for w, v in self.reduce(rest).items():
                        out[w] = out.get(w, 0) + c * v
            out = {w: v for w, v in out.items() if v}
            break
        else:
            out = {word: Fraction(1)}
        self._cache[word] = out
        return out


class CliffordElement:
    """Rational combination of sorted squarefree words; ``()`` is the unit."""

    def __init__(self, form: BilinearForm, terms=None):
        self.form = form
        self.terms = {tuple(w): Fraction(c) for w, c in (terms or {}).items() if c}

    @classmethod
    def generator(cls, form, i: int) -> "CliffordElement":
        if not 0 <= i < form.n:
            raise IndexError("generator index out of range")
        return cls(form, {(i,): 1})

    @classmethod
    def scalar(cls, form, c) -> "CliffordElement":
        return cls(form, {(): c})

    def _match(self, other):
        if isinstance(other, (int, Fraction)):
            return CliffordElement.scalar(self.form, other)
        if other.form is not self.form:
            if other.form.n != self.form.n:
                raise ValueError("dimension mismatch")
            raise ValueError("elements of different Clifford algebras")
        return other

    def __add__(self, other):
        other = self._match(other)
        d = dict(self.terms)
        for w, c in other.terms.items():
            d[w] = d.get(w, 0) + c
        return CliffordElement(self.form, d)

    __radd__ = __add__

    def __neg__(self):
        return CliffordElement(self.form, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._match(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CliffordElement(self.form, {w: c * other for w, c in self.terms.items()})
        return clifford_mul(self, self._match(other))

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CliffordElement.scalar(self.form, other)
        return isinstance(other, CliffordElement) and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            word = "".join(f"e{i + 1}" for i in w)
            parts.append(f"{c}" if not w else (word if c == 1 else f"{c}*{word}"))
        return " + ".join(parts)

    __repr__ = __str__


def clifford_mul(a: CliffordElement, b: CliffordElement, form: BilinearForm | None = None):
    form = form or a.form
    if a.form.n != form.n or b.form.n != form.n:
        raise ValueError("dimension mismatch")
    out: dict = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            for w, v in form.reduce(w1 + w2).items():
                out[w] = out.get(w, 0) + c1 * c2 * v
    return CliffordElement(form, out)


def chevalley_operators(form: BilinearForm) -> list[np.ndarray]:
    """Operators ``e_i -> e_i ^ . + sigma * contraction_i`` on the exterior algebra.

    They satisfy the Clifford relation and ``x |-> x.1`` is injective, so
    they give an independent model of the algebra.
    """
    n = form.n
    dim = 2 ** n
    ops = []
    for i in range(n):
        m = np.empty((dim, dim), dtype=object)
        m[:, :] = Fraction(0)
        for s in range(dim):
            if not s >> i & 1:
                sign = -1 if bin(s & ((1 << i) - 1)).count("1") % 2 else 1
                m[s | 1 << i, s] += sign
            for j in range(n):
                if s >> j & 1 and form(i, j):
                    sign = -1 if bin(s & ((1 << j) - 1)).count("1") % 2 else 1
                    m[s & ~(1 << j), s] += form.sigma * form(i, j) * sign
        ops.append(m)
    return ops


# ---------------------------------------------------------------------------
# concrete gamma matrices

_MAJORANA = (
    ((0, 1, 0, 0), (-1, 0, 0, 0), (0, 0, 0, -1), (0, 0, 1, 0)),
    ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0)),
    ((1, 0, 0, 0), (0, -1, 0, 0), (0, 0, 1, 0), (0, 0, 0, -1)),
    ((0, 0, 0, 1), (0, 0, -1, 0), (0, -1, 0, 0), (1, 0, 0, 0)),
)


@dataclass
class GammaRep:
    """Matrices ``(gamma^mu)_alpha^beta`` with a diagonal metric."""

    gammas: tuple
    eta: tuple = MINKOWSKI

    @classmethod
    def majorana(cls) -> "GammaRep":
        return cls(tuple(frac_matrix(g) for g in _MAJORANA))

    def perturbed(self, mu: int = 1, i: int = 0, j: int = 0, delta=1) -> "GammaRep":
        gs = [g.copy() for g in self.gammas]
        gs[mu][i, j] += Fraction(delta)
        return GammaRep(tuple(gs), self.eta)

    @property
    def dim(self) -> int:
        return len(self.gammas)

    def lower(self, mu: int) -> np.ndarray:
        acc = self.gammas[0] * 0
        for nu in range(self.dim):
            if self.eta[mu][nu]:
                acc = acc + self.gammas[nu] * Fraction(self.eta[mu][nu])
        return acc


@dataclass
class CheckReport:
    name: str
    passed: bool
    checked: int
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


@dataclass
class SpinTensor:
    name: str
    components: np.ndarray
    indices: tuple
    symmetric: bool = False


def verify_clifford_dirac(rep: GammaRep) -> CheckReport:
    n = rep.gammas[0].shape[0]
    one = eye(n)
    failures = []
    checked = 0
    for mu in range(rep.dim):
        for nu in range(mu, rep.dim):
            checked += 1
            g, h = rep.gammas[mu], rep.gammas[nu]
            if not mat_equal(g.dot(h) + h.dot(g), one * (2 * Fraction(rep.eta[mu][nu]))):
                failures.append((mu, nu))
    return CheckReport("clifford-dirac", not failures, checked, failures)


def sigma(rep: GammaRep, mu: int, nu: int) -> np.ndarray:
    g, h = rep.gammas[mu], rep.gammas[nu]
    return (g.dot(h) - h.dot(g)) * Fraction(1, 4)


def lorentz_rhs(eta, mu, nu, rho, sig) -> dict:
    """Structure constants of ``[J^{mu nu}, J^{rho sigma}]`` as {(a, b): coefficient}.

    Shared by the spinor check and the Killing-field check so both verify
    the same table.
    """
    out: dict = {}
    for coeff, pair in ((eta[nu][rho], (mu, sig)), (-eta[mu][rho], (nu, sig)),
                        (-eta[nu][sig], (mu, rho)), (eta[mu][sig], (nu, rho))):
        if coeff:
            out[pair] = out.get(pair, 0) + coeff
    return {k: v for k, v in out.items() if v}


def verify_lorentz_spin_rep(rep: GammaRep) -> CheckReport:
    d = rep.dim
    S = {(a, b): sigma(rep, a, b) for a in range(d) for b in range(d)}
    failures = []
    checked = 0
    for mu, nu, rho, sg in product(range(d), repeat=4):
        checked += 1
        lhs = S[mu, nu].dot(S[rho, sg]) - S[rho, sg].dot(S[mu, nu])
        rhs = S[0, 0] * 0
        for (a, b), c in lorentz_rhs(rep.eta, mu, nu, rho, sg).items():
            rhs = rhs + S[a, b] * Fraction(c)
        if not mat_equal(lhs, rhs):
            failures.append((mu, nu, rho, sg))
    return CheckReport("spin-rep", not failures, checked, failures)


def charge_conjugation(rep: GammaRep) -> tuple[SpinTensor, list[SpinTensor]]:
    """``C`` with ``C gamma^mu C^-1 = -(gamma^mu)^t`` (tried as -gamma^0, then +gamma^0).

    Returns C and the tensors ``(C gamma^mu)^{alpha beta} = C^{alpha delta}
    (gamma^mu)_delta^beta``, each flagged symmetric only after checking.
    """
    for sign in (-1, 1):
        C = rep.gammas[0] * Fraction(sign)
        try:
            Cinv = mat_inverse(C)
        except ZeroDivisionError:
            continue
        if all(mat_equal(C.dot(g).dot(Cinv), -g.T) for g in rep.gammas):
            label = "-gamma^0" if sign < 0 else "+gamma^0"
            ct = SpinTensor(f"C={label}", C, ("upper", "upper"), mat_equal(C, C.T))
            cg = []
            for mu, g in enumerate(rep.gammas):
                m = C.dot(g)
                cg.append(SpinTensor(f"(C gamma^{mu})", m, ("upper", "upper"), mat_equal(m, m.T)))
            return ct, cg
    raise RepresentationIncompatible("neither -gamma^0 nor +gamma^0 is a charge conjugation")


def gamma5(rep: GammaRep) -> np.ndarray:
    out = rep.lower(0)
    for mu in range(1, rep.dim):
        out = out.dot(rep.lower(mu))
    return out


def infinitesimal_lorentz_on_spinor(rep: GammaRep, omega, u: Sequence) -> list:
    """``delta u_alpha = 1/4 omega_{mu nu} (gamma^{mu nu})_alpha^beta u_beta``."""
    d = rep.dim
    om = [[Fraction(x) for x in row] for row in omega]
    if any(om[i][j] != -om[j][i] for i in range(d) for j in range(d)):
        raise ValueError("omega must be antisymmetric")
    gen = rep.gammas[0] * 0
    for mu in range(d):
        for nu in range(d):
            if om[mu][nu]:
                g_munu = sigma(rep, mu, nu) * 2
                gen = gen + g_munu * om[mu][nu]
    gen = gen * Fraction(1, 4)
    n = gen.shape[0]
    out = []
    for a in range(n):
        acc = 0
        for b in range(n):
            if gen[a, b]:
                acc = acc + u[b] * gen[a, b]
        out.append(acc)
    return out


def exp_matrix(M, tol: float = 1e-12) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a truncated Taylor series."""
    A = np.asarray(M, dtype=float)
    norm = np.linalg.norm(A, 1)
    s = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    A = A / (2 ** s)
    result = np.eye(A.shape[0])
    term = np.eye(A.shape[0])
    for k in range(1, 60):
        term = term @ A / k
        result = result + term
        if np.linalg.norm(term, 1) <= tol * 1e-4 * max(1.0, np.linalg.norm(result, 1)):
            break
    for _ in range(s):
        result = result @ result
    return result


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for k1, m1 in p.items():
        for k2, m2 in q.items():
            key = tuple(sorted(k1 + k2))
            out[key] = out[key] + m1.dot(m2) if key in out else m1.dot(m2)
    return out


def dirac_square(rep: GammaRep, m) -> CheckReport:
    """Check ``(gamma.d - m)(gamma.d + m) = (eta^{mu nu} d_mu d_nu - m^2) 1``.

    The d_mu are commuting formal symbols; polynomials are dicts from sorted
    index tuples to matrix coefficients.
    """
    m = Fraction(m)
    n = rep.gammas[0].shape[0]
    one = eye(n)
    left = {(mu,): g for mu, g in enumerate(rep.gammas)}
    right = dict(left)
    left[()] = one * (-m)
    right[()] = one * m
    lhs = _poly_mul(left, right)
    rhs: dict = {(): one * (-m * m)}
    for mu in range(rep.dim):
        for nu in range(rep.dim):
            if rep.eta[mu][nu]:
                key = tuple(sorted((mu, nu)))
                add = one * Fraction(rep.eta[mu][nu])
                rhs[key] = rhs[key] + add if key in rhs else add
    zero = one * 0
    failures = [k for k in sorted(set(lhs) | set(rhs), key=lambda k: (len(k), k))
                if not mat_equal(lhs.get(k, zero), rhs.get(k, zero))]
    return CheckReport(f"dirac-square(m={m})", not failures, len(set(lhs) | set(rhs)), failures)
