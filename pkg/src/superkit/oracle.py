"""Faithful matrix representation of a finite Grassmann algebra.

Used as an independent check on the normal-form kernel.  Odd generators
act as Jordan-Wigner creation operators on the 2^n dimensional Fock
space; an element ``f`` is identified with the vector ``f|0>`` (this map
is injective).  Left odd derivatives become annihilation operators.
Even atoms are replaced by rational sample values, so agreement is a
Schwartz-Zippel style check on the even coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .algebra import Atom, SuperExpr

__all__ = ["GrassmannOracle"]


class GrassmannOracle:
    """Creation operators are signed permutations of the Fock basis.

    Basis state ``s`` (a bitmask) is ``a_{j1}^+ ... a_{jk}^+ |0>`` with
    ``j1 < ... < jk``; ``a_j^+`` picks up ``(-1)^{#set bits below j}``.
    Operators are stored as (target index, sign) arrays and applied to
    vectors directly; :meth:`matrix` materialises them when needed.
    """

    def __init__(self, odd_atoms: Sequence[Atom], even_values: Mapping[Atom, Fraction]):
        self.odd_atoms = list(odd_atoms)
        self.even_values = dict(even_values)
        self.n = len(self.odd_atoms)
        self.dim = 2 ** self.n
        self._index = {a: i for i, a in enumerate(self.odd_atoms)}
        self._create = [self._creation(j) for j in range(self.n)]

    def _creation(self, j: int) -> list:
        """``[(s, s | 2^j, sign)]`` for every basis state ``s`` without bit j."""
        out = []
        for s in range(self.dim):
            if s >> j & 1:
                continue
            below = bin(s & ((1 << j) - 1)).count("1")
            out.append((s, s | (1 << j), -1 if below % 2 else 1))
        return out

    def _zero(self) -> np.ndarray:
        v = np.empty(self.dim, dtype=object)
        v[:] = Fraction(0)
        return v

    def create(self, j: int, vec: np.ndarray) -> np.ndarray:
        out = self._zero()
        for s, t, sign in self._create[j]:
            if vec[s]:
                out[t] = vec[s] * sign
        return out

    def annihilate(self, j: int, vec: np.ndarray) -> np.ndarray:
        out = self._zero()
        for s, t, sign in self._create[j]:
            if vec[t]:
                out[s] = vec[t] * sign
        return out

    def act(self, expr: SuperExpr, vec: np.ndarray) -> np.ndarray:
        """Left multiplication by ``expr`` applied to ``vec``."""
        total = self._zero()
        for (even, odd), c in expr.terms.items():
            scalar = Fraction(c)
            for a, k in even:
                scalar *= Fraction(self.even_values[a]) ** k
            v = vec
            for a in reversed(odd):
                v = self.create(self._index[a], v)
            total = total + v * scalar
        return total

    def identity(self) -> np.ndarray:
        m = np.empty((self.dim, self.dim), dtype=object)
        m[:, :] = Fraction(0)
        for i in range(self.dim):
            m[i, i] = Fraction(1)
        return m

    def vacuum(self) -> np.ndarray:
        v = self._zero()
        v[0] = Fraction(1)
        return v

    def matrix(self, expr: SuperExpr) -> np.ndarray:
        """Left-multiplication operator of ``expr`` as a dense matrix."""
        eye = self.identity()
        return np.array([self.act(expr, eye[:, i]) for i in range(self.dim)], dtype=object).T

    def vector(self, expr: SuperExpr) -> np.ndarray:
        return self.act(expr, self.vacuum())

    def multiply(self, a: SuperExpr, b: SuperExpr) -> np.ndarray:
        return self.act(a, self.vector(b))

    def derivative(self, vec: np.ndarray, atom: Atom) -> np.ndarray:
        return self.annihilate(self._index[atom], vec)

    def berezin(self, vec: np.ndarray, atoms: Sequence[Atom]) -> np.ndarray:
        for a in atoms:
            vec = self.derivative(vec, a)
        return vec

    @staticmethod
    def equal(u: np.ndarray, v: np.ndarray) -> bool:
        return bool(np.all(u == v))
