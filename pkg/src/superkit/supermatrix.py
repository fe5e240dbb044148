"""Block-graded matrices over SuperExpr: determinants, inverses, Berezinians."""

from __future__ import annotations

from itertools import permutations
from typing import Mapping, Sequence

from .algebra import EVEN, ODD, Context, SuperExpr, Symbol, invert_even, partial
from .errors import ContextMismatch, NonInvertible, ParityViolation, SingularBlock

__all__ = ["SuperMatrix", "det_even", "inverse", "matmul", "berezinian", "jacobian"]

Matrix = list  # list[list[SuperExpr]]


def matmul(X: Matrix, Y: Matrix) -> Matrix:
    n, m, k = len(X), len(Y), len(Y[0]) if Y else 0
    if any(len(r) != m for r in X):
        raise ValueError("shape mismatch")
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = None
            for l in range(m):
                t = X[i][l] * Y[l][j]
                acc = t if acc is None else acc + t
            row.append(acc)
        out.append(row)
    return out


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def det_even(M: Matrix, ctx: Context | None = None) -> SuperExpr:
    """Leibniz determinant of a square matrix with even (mutually commuting) entries."""
    n = len(M)
    if n == 0:
        if ctx is None:
            raise ValueError("empty matrix needs a context")
        return ctx.one()
    for row in M:
        if len(row) != n:
            raise ValueError("matrix is not square")
        for e in row:
            if e.parity != EVEN:
                raise ParityViolation(f"entry {e} is not even")
    total = M[0][0].ctx.zero()
    for p in permutations(range(n)):
        term = M[0][0].ctx.const(_perm_sign(p))
        for i, j in enumerate(p):
            term = term * M[i][j]
            if not term:
                break
        total = total + term
    return total


def inverse(M: Matrix) -> Matrix:
    """Gauss-Jordan inverse with even, unit-scalar-part pivots.

    Works for even matrices and for block-graded ones whose body is
    invertible; only left multiplications are used, so the result is a
    genuine two-sided inverse in the associative algebra.
    """
    n = len(M)
    ctx = M[0][0].ctx
    work = [list(row) + [ctx.one() if i == j else ctx.zero() for j in range(n)]
            for i, row in enumerate(M)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            e = work[r][col]
            if e.parity == EVEN and e.scalar_part() != 0:
                if pivot is None or abs(e.scalar_part()) > abs(work[pivot][col].scalar_part()):
                    pivot = r
        if pivot is None:
            raise SingularBlock(f"no invertible pivot in column {col}")
        work[col], work[pivot] = work[pivot], work[col]
        try:
            inv = invert_even(work[col][col])
        except NonInvertible as exc:
            raise SingularBlock(str(exc)) from exc
        work[col] = [inv * e for e in work[col]]
        for r in range(n):
            if r == col or not work[r][col]:
                continue
            f = work[r][col]
            work[r] = [a - f * b for a, b in zip(work[r], work[col])]
    return [row[n:] for row in work]


class SuperMatrix:
    """(p|q) block matrix ``[[A, B], [C, D]]``: A, D even; B, C odd."""

    def __init__(self, A: Matrix, B: Matrix, C: Matrix, D: Matrix, ctx: Context | None = None):
        self.p, self.q = len(A), len(D)
        entries = [e for blk in (A, B, C, D) for row in blk for e in row]
        self.ctx = ctx or (entries[0].ctx if entries else None)
        if self.ctx is None:
            raise ValueError("empty SuperMatrix needs a context")
        if any(e.ctx is not self.ctx for e in entries):
            raise ContextMismatch("entries from different contexts")
        for name, blk, par in (("A", A, EVEN), ("B", B, ODD), ("C", C, ODD), ("D", D, EVEN)):
            for row in blk:
                for e in row:
                    if e and e.parity != par:
                        raise ParityViolation(f"block {name} entry {e} must be {par.name.lower()}")
        self.A, self.B, self.C, self.D = A, B, C, D
        if len(B) != self.p or len(C) != self.q:
            raise ValueError("block shapes disagree")

    @classmethod
    def from_rows(cls, rows: Matrix, p: int, ctx: Context | None = None) -> "SuperMatrix":
        A = [r[:p] for r in rows[:p]]
        B = [r[p:] for r in rows[:p]]
        C = [r[:p] for r in rows[p:]]
        D = [r[p:] for r in rows[p:]]
        return cls(A, B, C, D, ctx)

    @classmethod
    def identity(cls, ctx: Context, p: int, q: int) -> "SuperMatrix":
        n = p + q
        rows = [[ctx.one() if i == j else ctx.zero() for j in range(n)] for i in range(n)]
        return cls.from_rows(rows, p, ctx)

    @property
    def rows(self) -> Matrix:
        top = [a + b for a, b in zip(self.A, self.B)] if self.B else [list(a) for a in self.A]
        bottom = [c + d for c, d in zip(self.C, self.D)]
        if not self.p:
            bottom = [list(d) for d in self.D]
        return top + bottom

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        if (self.p, self.q) != (other.p, other.q):
            raise ValueError("block sizes differ")
        return SuperMatrix.from_rows(matmul(self.rows, other.rows), self.p, self.ctx)

    def __eq__(self, other):
        return (isinstance(other, SuperMatrix) and (self.p, self.q) == (other.p, other.q)
                and self.rows == other.rows)

    def inverse(self) -> "SuperMatrix":
        return SuperMatrix.from_rows(inverse(self.rows), self.p, self.ctx)

    def __str__(self):
        rows = self.rows
        return "[" + "; ".join(", ".join(str(e) for e in r) for r in rows) + "]"


def berezinian(J: SuperMatrix) -> SuperExpr:
    """``det(A - B D^-1 C) det(D)^-1``."""
    ctx = J.ctx
    if J.q == 0:
        return det_even(J.A, ctx)
    try:
        Dinv = inverse(J.D)
        det_d_inv = invert_even(det_even(J.D, ctx))
    except NonInvertible as exc:
        raise SingularBlock(f"D block is not invertible: {exc}") from exc
    if J.p == 0:
        return det_d_inv
    BDC = matmul(matmul(J.B, Dinv), J.C)
    S = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(J.A, BDC)]
    return det_even(S, ctx) * det_d_inv


def jacobian(transform: Mapping[Symbol, SuperExpr], old_coords: Sequence[Symbol]) -> SuperMatrix:
    """Jacobian of ``new_i = transform[new_i](old)`` with top-right block ``-dy/dxi``.

    Rows run over the new coordinates (even first), columns over the old
    ones (even first), preserving the given order within each parity.
    """
    keys = list(transform)
    if not keys:
        raise ValueError("empty transform")
    ctx = next(iter(transform.values())).ctx
    for k, v in transform.items():
        if v.ctx is not ctx:
            raise ContextMismatch("images from different contexts")
        if v and v.parity != k.parity:
            raise ParityViolation(f"image of {k} does not preserve parity")
    rows_syms = [k for k in keys if k.parity == EVEN] + [k for k in keys if k.parity == ODD]
    cols = [c for c in old_coords if c.parity == EVEN] + [c for c in old_coords if c.parity == ODD]
    p = sum(1 for k in rows_syms if k.parity == EVEN)
    if p != sum(1 for c in cols if c.parity == EVEN) or len(rows_syms) != len(cols):
        raise ValueError("transform and coordinate list have different dimensions")
    rows = []
    for k in rows_syms:
        row = []
        for c in cols:
            d = partial(transform[k], c)
            if k.parity == EVEN and c.parity == ODD:
                d = -d
            row.append(d)
        rows.append(row)
    return SuperMatrix.from_rows(rows, p, ctx)
