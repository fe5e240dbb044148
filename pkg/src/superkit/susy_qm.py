"""Truncated N=1 supersymmetric oscillator ``H = a^+a + c^+c``, ``Q = c^+a + a^+c``.

The Fock basis is sector ordered: index ``n_f * N_b + n_b`` for bosonic
level ``n_b < N_b`` and fermion number ``n_f in {0, 1}``.  Truncation
breaks ``[a, a^+] = 1`` only at the top bosonic level, so every algebraic
check is restricted to the "safe" states with ``n_b <= N_b - 2``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np
import sympy

__all__ = ["build_operators", "verify_susy_qm", "QMCheck", "QMReport", "index", "safe_states"]


def index(n_b: int, n_f: int, N_b: int) -> int:
    return n_f * N_b + n_b


def safe_states(N_b: int) -> list[int]:
    return [index(n, f, N_b) for f in (0, 1) for n in range(N_b - 1)]


def build_operators(N_b: int, exact: bool = False, fermion_weight=1) -> dict:
    """Matrices of a, a^+, c, c^+, H, Q as float arrays (or sympy matrices if ``exact``).

    ``fermion_weight`` scales the ``c^+c`` term of H; values other than 1
    break supersymmetry and serve as a negative control.
    """
    if N_b < 2:
        raise ValueError("boson cutoff must be at least 2")
    sqrt = sympy.sqrt if exact else np.sqrt
    ab = sympy.zeros(N_b, N_b) if exact else np.zeros((N_b, N_b))
    for n in range(1, N_b):
        ab[n - 1, n] = sqrt(n)
    cf = sympy.Matrix([[0, 1], [0, 0]]) if exact else np.array([[0.0, 1.0], [0.0, 0.0]])
    if exact:
        kron = sympy.kronecker_product
        I_b, I_f = sympy.eye(N_b), sympy.eye(2)
        a, c = kron(I_f, ab), kron(cf, I_b)
        ad, cd = a.T, c.T
        H = ad * a + cd * c * fermion_weight
        Q = cd * a + ad * c
    else:
        a, c = np.kron(np.eye(2), ab), np.kron(cf, np.eye(N_b))
        ad, cd = a.T.copy(), c.T.copy()
        H = ad @ a + fermion_weight * (cd @ c)
        Q = cd @ a + ad @ c
    return {"a": a, "a+": ad, "c": c, "c+": cd, "H": H, "Q": Q}


@dataclass
class QMCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class QMReport:
    N_b: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, passed, detail=""):
        self.checks.append(QMCheck(name, bool(passed), detail))

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]


def _restrict(M, cols):
    return M[:, cols] if isinstance(M, np.ndarray) else M.extract(list(range(M.rows)), cols)


def _is_zero(M) -> bool:
    return all(sympy.simplify(x) == 0 for x in M)


def verify_susy_qm(N_b: int = 12, tol: float = 1e-10, seed: int = 0,
                   fermion_weight=1) -> QMReport:
    rep = QMReport(N_b)
    ex = build_operators(N_b, exact=True, fermion_weight=fermion_weight)
    fl = build_operators(N_b, fermion_weight=fermion_weight)
    dim = 2 * N_b
    safe = safe_states(N_b)
    a, ad, c, cd, H, Q = (ex[k] for k in ("a", "a+", "c", "c+", "H", "Q"))

    rep.add("[a,c] = 0", _is_zero(a * c - c * a))
    rep.add("{c,c+} = 1", _is_zero(c * cd + cd * c - sympy.eye(dim)))
    rep.add("[a,a+] = 1 on safe states", _is_zero(_restrict(a * ad - ad * a - sympy.eye(dim), safe)))
    rep.add("Q = Q^+", _is_zero(Q - Q.T))
    rep.add("Q^2 = H on safe states (exact)", _is_zero(_restrict(Q * Q - H, safe)))
    err = float(np.abs((fl["Q"] @ fl["Q"] - fl["H"])[:, safe]).max())
    rep.add("Q^2 = H on safe states (float)", err <= tol, f"max |Q^2-H| = {err:.3g}")
    rep.add("[Q,H] = 0 on safe states", _is_zero(_restrict(Q * H - H * Q, safe)))

    bos = [index(n, 0, N_b) for n in range(N_b)]
    fer = [index(n, 1, N_b) for n in range(N_b)]
    off = all(Q[i, j] == 0 for i in bos for j in bos) and all(Q[i, j] == 0 for i in fer for j in fer)
    rep.add("Q is sector off-diagonal", off)

    vac = sympy.zeros(dim, 1)
    vac[0] = 1
    e01 = sympy.zeros(dim, 1)
    e01[index(0, 1, N_b)] = 1
    rep.add("c+|0> = |1>_f", cd * vac == e01)
    rep.add("c+|1>_f = 0", _is_zero(cd * e01))
    rep.add("Q a+|0,0> = |0,1>", Q * ad * vac == e01)
    rep.add("H|0,0> = 0 and Q|0,0> = 0", _is_zero(H * vac) and _is_zero(Q * vac))

    evals, evecs = np.linalg.eigh(fl["H"])
    expected = sorted(n + f * fermion_weight for f in (0, 1) for n in range(N_b))
    spec_err = float(np.abs(np.sort(evals) - np.array(expected, dtype=float)).max())
    rep.add("spectrum = {n_b + n_f}", spec_err <= tol, f"max deviation {spec_err:.3g}")
    rep.add("spectrum non-negative", float(evals.min()) >= -tol, f"min {evals.min():.3g}")
    zero = [i for i, e in enumerate(evals) if abs(e) <= tol]
    simple = len(zero) == 1 and abs(abs(evecs[0, zero[0]]) - 1) <= tol
    rep.add("simple zero level spanned by |0,0>", simple, f"{len(zero)} zero eigenvalues")

    lines = []
    ok = True
    for E in range(1, N_b - 1):
        mult = int(np.sum(np.abs(evals - E) <= tol))
        b, f = index(E, 0, N_b), index(E - 1, 1, N_b)
        ok &= mult == 2 and Q[f, b] != 0 and Q[b, f] != 0
        lines.append(f"E={E}:{mult}")
    rep.add("positive levels pair boson/fermion (E <= N_b-2)", ok, " ".join(lines))

    rng = random.Random(seed)
    worst, positive = 0.0, True
    for _ in range(20):
        psi = np.zeros(dim)
        psi[safe] = [rng.uniform(-1, 1) for _ in safe]
        lhs = psi @ fl["Q"] @ fl["Q"] @ psi
        rhs = float(np.linalg.norm(fl["Q"] @ psi) ** 2)
        worst = max(worst, abs(lhs - rhs))
        positive &= rhs >= 0
    rep.add("<psi|Q^2|psi> = |Q psi|^2 >= 0", worst <= tol and positive, f"max deviation {worst:.3g}")
    return rep
