"""Seeded generators of random expressions for property checks."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .algebra import EVEN, ODD, Atom, Context, SuperExpr

__all__ = ["random_fraction", "random_expr", "grassmann_context", "random_unit_matrix",
           "random_supermatrix"]


def random_fraction(rng: random.Random, size: int = 5, nonzero: bool = False) -> Fraction:
    while True:
        f = Fraction(rng.randint(-size, size), rng.randint(1, 3))
        if f or not nonzero:
            return f


def random_expr(rng: random.Random, ctx: Context, odd: Sequence, even: Sequence = (),
                parity=None, n_terms: int = 4, max_power: int = 2) -> SuperExpr:
    """Random combination of odd monomials with optional even-atom factors.

    ``odd`` and ``even`` hold symbols or atoms; ``parity`` restricts to
    homogeneous results.
    """
    odd_atoms = [a if isinstance(a, Atom) else Atom(a) for a in odd]
    even_exprs = [ctx.atom(a) if isinstance(a, Atom) else ctx.expr(a) for a in even]
    subsets = [c for r in range(len(odd_atoms) + 1) for c in combinations(odd_atoms, r)]
    if parity is not None:
        subsets = [s for s in subsets if len(s) % 2 == int(parity)]
    out = ctx.zero()
    for _ in range(n_terms):
        subset = list(rng.choice(subsets))
        rng.shuffle(subset)
        term = ctx.const(random_fraction(rng, nonzero=True))
        for a in subset:
            term = term * ctx.atom(a)
        for e in even_exprs:
            term = term * e ** rng.randint(0, max_power)
        out = out + term
    return out


def grassmann_context(q: int, n_even: int = 1) -> tuple[Context, list, list]:
    """Context with ``q`` odd generators ``xi1..xiq`` and even coordinates ``x1..``."""
    ctx = Context(f"grassmann-{q}")
    even = [ctx.coordinate(f"x{i + 1}", EVEN) for i in range(n_even)]
    odd = [ctx.coordinate(f"xi{i + 1}", ODD) for i in range(q)]
    return ctx, odd, even


def random_unit_matrix(rng: random.Random, ctx: Context, odd: Sequence, n: int) -> list:
    """n x n even matrix whose body is an invertible rational matrix."""
    from .supermatrix import det_even
    while True:
        body = [[random_fraction(rng, 3) for _ in range(n)] for _ in range(n)]
        m = [[ctx.const(body[i][j]) + random_expr(rng, ctx, odd, parity=EVEN, n_terms=2).soul()
              for j in range(n)] for i in range(n)]
        if det_even(m).scalar_part() != 0:
            return m


def random_supermatrix(rng: random.Random, ctx: Context, odd: Sequence, p: int, q: int):
    """Random invertible (p|q) SuperMatrix over the Grassmann generators ``odd``."""
    from .supermatrix import SuperMatrix
    A = random_unit_matrix(rng, ctx, odd, p)
    D = random_unit_matrix(rng, ctx, odd, q)
    B = [[random_expr(rng, ctx, odd, parity=ODD, n_terms=2) for _ in range(q)] for _ in range(p)]
    C = [[random_expr(rng, ctx, odd, parity=ODD, n_terms=2) for _ in range(p)] for _ in range(q)]
    return SuperMatrix(A, B, C, D, ctx)
