"""Exact integer and rational linear algebra.

Matrices are plain lists of rows holding Python ints (or ``Fraction`` where
noted), so there is no overflow and no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Matrix = list[list[int]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence], cols: Optional[int] = None) -> list[list]:
    if not A:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence], inner: Optional[int] = None) -> list[list]:
    if not A:
        return []
    n = len(B[0]) if B else 0
    k = len(B)
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(n)] for i in range(len(A))]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def determinant(A: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithForm:
    """``P @ A @ Q == D`` with ``P``, ``Q`` unimodular and ``D`` diagonal."""

    D: Matrix
    P: Matrix
    Q: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.Q)))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(A: Sequence[Sequence[int]], cols: Optional[int] = None) -> SmithForm:
    """Smith normal form with transforms.

    ``cols`` is only needed when ``A`` has no rows.
    """
    m = len(A)
    n = len(A[0]) if m else (cols or 0)
    D = [list(map(int, row)) for row in A]
    P = identity(m)
    Q = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for M in (D, Q):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row[dst] += f * row[src]
        D[dst] = [a + f * b for a, b in zip(D[dst], D[src])]
        P[dst] = [a + f * b for a, b in zip(P[dst], P[src])]

    def add_col(dst, src, f):  # col[dst] += f * col[src]
        for M in (D, Q):
            for row in M:
                row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        done = False
            if not done:
                # move the smallest remaining entry of row/col t into the pivot
                cand = [(abs(D[i][t]), i, t) for i in range(t, m) if D[i][t]]
                cand += [(abs(D[t][j]), t, j) for j in range(t, n) if D[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                if j != t:
                    swap_cols(t, j)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            P[t] = [-x for x in P[t]]
        t += 1
    return SmithForm(D, P, Q)


def cokernel_structure(A: Sequence[Sequence[int]], cols: Optional[int] = None) -> tuple[int, list[int]]:
    """Structure of ``Z^rows / A Z^cols`` as (free rank, invariant factors > 1)."""
    rows = len(A)
    snf = smith_normal_form(A, cols)
    diag = snf.diagonal
    nonzero = [d for d in diag if d]
    return rows - len(nonzero), [d for d in nonzero if d > 1]


def rank(A: Sequence[Sequence]) -> int:
    """Rank over Q."""
    return len(row_echelon_rational(A)[1])


def integer_kernel(A: Sequence[Sequence[int]], cols: Optional[int] = None) -> list[list[int]]:
    """A basis of the saturated lattice ``{x in Z^cols : A x = 0}``."""
    n = len(A[0]) if A else (cols or 0)
    snf = smith_normal_form(A, n)
    r = snf.rank
    return [[snf.Q[i][j] for i in range(n)] for j in range(r, n)]


# --------------------------------------------------------------------------
# Rational linear algebra
# --------------------------------------------------------------------------


def row_echelon_rational(A: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and its pivot columns."""
    M = [[Fraction(x) for x in row] for row in A]
    pivots: list[int] = []
    if not M:
        return M, pivots
    r = 0
    for c in range(len(M[0])):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rational_kernel(A: Sequence[Sequence], cols: Optional[int] = None) -> list[list[Fraction]]:
    """A basis of ``{x in Q^cols : A x = 0}``."""
    n = len(A[0]) if A else (cols or 0)
    R, pivots = row_echelon_rational(A)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def rational_solve(A: Sequence[Sequence], b: Sequence, cols: Optional[int] = None) -> Optional[list[Fraction]]:
    """Some rational solution of ``A x = b`` or None."""
    n = len(A[0]) if A else (cols or 0)
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    if not aug:
        return [Fraction(0)] * n
    R, pivots = row_echelon_rational(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(R, pivots):
        x[p] = row[n]
    return x


# --------------------------------------------------------------------------
# Lattices
# --------------------------------------------------------------------------


def _hermite_rows(gens: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """Echelon basis of the row span: positive pivots, earlier rows reduced
    into ``[0, pivot)`` in every later pivot column."""
    rows = [list(map(int, g)) for g in gens if any(g)]
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        active = [r for r in rows if r[col] != 0]
        if not active:
            col += 1
            continue
        rest = [r for r in rows if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            p = active[0]
            nxt = [p]
            for r in active[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            active = nxt
        p = active[0]
        if p[col] < 0:
            p = [-x for x in p]
        basis.append(p)
        rows = rest
        col += 1
    pivots = [next(j for j, x in enumerate(b) if x) for b in basis]
    for i, (b, pc) in enumerate(zip(basis, pivots)):
        for k in range(i):
            q = basis[k][pc] // b[pc]
            if q:
                basis[k] = [a - q * c for a, c in zip(basis[k], b)]
    return basis


@dataclass(frozen=True)
class Lattice:
    """Subgroup of ``Z^dim`` generated by ``generators`` (each a vector)."""

    dim: int
    generators: tuple[tuple[int, ...], ...] = ()
    _hermite: list = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        for g in self.generators:
            if len(g) != self.dim:
                raise ValueError(f"generator {g} does not have length {self.dim}")
        object.__setattr__(self, "generators", tuple(tuple(int(x) for x in g) for g in self.generators))

    @classmethod
    def from_vectors(cls, dim: int, vectors) -> "Lattice":
        return cls(dim, tuple(tuple(v) for v in vectors))

    @property
    def hermite_basis(self) -> list[list[int]]:
        if self._hermite is None:
            object.__setattr__(self, "_hermite", _hermite_rows(self.generators, self.dim))
        return self._hermite

    @property
    def rank(self) -> int:
        return len(self.hermite_basis)

    def __contains__(self, v) -> bool:
        return not any(coset_canonical(self, v))


def coset_canonical(L: Lattice, v: Sequence[int]) -> list[int]:
    """Canonical representative of ``v + L``."""
    if len(v) != L.dim:
        raise ValueError("vector length does not match lattice rank")
    v = list(map(int, v))
    for b in L.hermite_basis:
        pc = next(j for j, x in enumerate(b) if x)
        q = v[pc] // b[pc]
        if q:
            v = [a - q * c for a, c in zip(v, b)]
    return v


def lattice_membership(L: Lattice, v: Sequence[int], rational: bool = False) -> Optional[list]:
    """Coefficients ``c`` with ``sum c_i g_i == v``, or None.

    With ``rational=True`` membership is tested in the Q-span and ``c`` holds
    Fractions.
    """
    if len(v) != L.dim:
        raise ValueError("vector length does not match lattice rank")
    m = len(L.generators)
    G = [[L.generators[j][i] for j in range(m)] for i in range(L.dim)]  # dim x m
    if rational:
        return rational_solve(G, v, m)
    if m == 0:
        return [] if not any(v) else None
    snf = smith_normal_form(G, m)
    Pv = matvec(snf.P, v)
    y = [0] * m
    for i in range(L.dim):
        d = snf.D[i][i] if i < m else 0
        if d == 0:
            if Pv[i] != 0:
                return None
        else:
            if Pv[i] % d:
                return None
            y[i] = Pv[i] // d
    return matvec(snf.Q, y)


def primitive(v: Sequence[int]) -> list[int]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return [int(x) // g for x in v] if g else [0] * len(v)


def saturation_index(vectors: Sequence[Sequence[int]], dim: int) -> int:
    """Index of the lattice spanned by ``vectors`` in its saturation.

    ``vectors`` need not be independent.
    """
    if not vectors:
        return 1
    _, torsion = cokernel_structure(transpose(vectors), len(vectors))
    out = 1
    for d in torsion:
        out *= d
    return out
