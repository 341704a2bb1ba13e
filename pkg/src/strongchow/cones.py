"""Rational polyhedral cones, polytopes and normal fans, all exact."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .lattice import primitive, rank, rational_solve


class Infeasible(Exception):
    pass


class Unbounded(Exception):
    pass


def linprog_exact(
    c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence
) -> tuple[Fraction, list[Fraction]]:
    """Maximize ``c.x`` subject to ``A_eq x = b_eq``, ``x >= 0``.

    Two-phase tableau simplex over Fractions with Bland's rule, so it always
    terminates. Raises Infeasible or Unbounded.
    """
    n = len(c)
    rows = []
    for row, b in zip(A_eq, b_eq):
        row = [Fraction(x) for x in row]
        b = Fraction(b)
        if b < 0:
            row, b = [-x for x in row], -b
        rows.append(row + [b])
    m = len(rows)
    # phase 1: artificials n..n+m-1
    T = [r[:n] + [Fraction(int(i == k)) for k in range(m)] + [r[n]] for i, r in enumerate(rows)]
    basis = list(range(n, n + m))
    width = n + m

    def pivot(r, col):
        inv = 1 / T[r][col]
        T[r] = [x * inv for x in T[r]]
        for i in range(m):
            if i != r and T[i][col] != 0:
                f = T[i][col]
                T[i] = [a - f * b for a, b in zip(T[i], T[r])]
        basis[r] = col

    def run(obj, allowed):
        # obj: coefficient vector over columns, maximized
        while True:
            reduced = []
            for j in allowed:
                if j in basis:
                    continue
                rc = obj[j] - sum(obj[basis[i]] * T[i][j] for i in range(m))
                if rc > 0:
                    reduced.append(j)
            if not reduced:
                return
            col = min(reduced)
            best = None
            for i in range(m):
                if T[i][col] > 0:
                    ratio = T[i][-1] / T[i][col]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                raise Unbounded
            pivot(best[1], col)

    obj1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(obj1, range(width))
    if sum(T[i][-1] for i in range(m) if basis[i] >= n) != 0:
        raise Infeasible
    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is not None:
                pivot(i, col)
    obj2 = [Fraction(x) for x in c] + [Fraction(0)] * m
    keep = [i for i in range(m) if basis[i] < n]
    T[:] = [T[i] for i in keep]
    basis[:] = [basis[i] for i in keep]
    m = len(T)
    run(obj2, range(n))
    x = [Fraction(0)] * n
    for i in range(m):
        x[basis[i]] = T[i][-1]
    return sum(Fraction(ci) * xi for ci, xi in zip(c, x)), x


# --------------------------------------------------------------------------
# Cones
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalCone:
    dim: int
    generators: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(tuple(int(x) for x in g) for g in self.generators))
        for g in self.generators:
            if len(g) != self.dim:
                raise ValueError("generator dimension mismatch")


def _columns(c: RationalCone) -> list[list[int]]:
    return [[g[i] for g in c.generators] for i in range(c.dim)]


def cone_contains(c: RationalCone, v: Sequence[int], relative_interior: bool = False) -> bool:
    """Exact test of ``v in c`` (or of ``v`` in the relative interior)."""
    if len(v) != c.dim:
        raise ValueError("dimension mismatch")
    if not c.generators:
        return not any(v)
    if relative_interior:
        try:
            face = minimal_face_containing(c, v)
        except ValueError:
            return False
        return len(face) == len(c.generators)
    try:
        linprog_exact([0] * len(c.generators), _columns(c), v)
    except Infeasible:
        return False
    return True


def minimal_face_containing(c: RationalCone, v: Sequence[int]) -> list[int]:
    """Indices of generators lying on the minimal face of ``c`` through ``v``.

    A generator lies on that face iff it appears with positive coefficient in
    some nonnegative representation of ``v``.  One LP finds them all: maximize
    ``sum y`` with ``0 <= y <= 1``, ``y <= coeff`` and ``coeff`` representing
    a nonnegative multiple of ``v``.
    """
    if len(v) != c.dim:
        raise ValueError("dimension mismatch")
    if not cone_contains(c, v):
        raise ValueError(f"{list(v)} is not in the cone")
    m = len(c.generators)
    if m == 0:
        return []
    # variables: coeff (m), lam, y (m), s1 (m), s2 (m) with
    # W coeff = lam v, coeff - y - s1 = 0, y + s2 = 1
    nv = 4 * m + 1
    A, b = [], []
    for i in range(c.dim):
        row = [0] * nv
        for j in range(m):
            row[j] = c.generators[j][i]
        row[m] = -v[i]
        A.append(row)
        b.append(0)
    for j in range(m):
        row = [0] * nv
        row[j] = 1
        row[m + 1 + j] = -1
        row[2 * m + 1 + j] = -1
        A.append(row)
        b.append(0)
        row = [0] * nv
        row[m + 1 + j] = 1
        row[3 * m + 1 + j] = 1
        A.append(row)
        b.append(1)
    obj = [0] * nv
    for j in range(m):
        obj[m + 1 + j] = 1
    _, x = linprog_exact(obj, A, b)
    return [j for j in range(m) if x[m + 1 + j] == 1]


# --------------------------------------------------------------------------
# Polytopes
# --------------------------------------------------------------------------


@dataclass
class Polytope:
    """``{u in Q^dim : E u = e, H u >= h}``."""

    dim: int
    inequalities: list[tuple[tuple[Fraction, ...], Fraction]]
    equations: list[tuple[tuple[Fraction, ...], Fraction]] = field(default_factory=list)
    _vertices: Optional[list] = field(default=None, repr=False)

    def __post_init__(self):
        self.inequalities = [(tuple(Fraction(x) for x in a), Fraction(b)) for a, b in self.inequalities]
        self.equations = [(tuple(Fraction(x) for x in a), Fraction(b)) for a, b in self.equations]

    @property
    def vertices(self) -> list[tuple[Fraction, ...]]:
        if self._vertices is None:
            self._vertices = polytope_vertices(self)
        return self._vertices

    def tight(self, u: Sequence) -> frozenset[int]:
        return frozenset(i for i, (a, b) in enumerate(self.inequalities) if _dot(a, u) == b)

    def satisfies(self, u: Sequence) -> bool:
        return all(_dot(a, u) >= b for a, b in self.inequalities) and all(
            _dot(a, u) == b for a, b in self.equations
        )


def _dot(a, u):
    return sum(x * y for x, y in zip(a, u))


def polytope_vertices(p: Polytope) -> list[tuple[Fraction, ...]]:
    """Exact vertex list by exhaustive tight-set search."""
    eq_rows = [list(a) for a, _ in p.equations]
    eq_rhs = [b for _, b in p.equations]
    affine_dim = p.dim - (rank(eq_rows) if eq_rows else 0)
    if affine_dim < 0:
        return []
    if affine_dim > 0 and _unbounded(p):
        raise ValueError("polytope is unbounded")
    found = []
    seen = set()
    for subset in combinations(range(len(p.inequalities)), affine_dim):
        rows = eq_rows + [list(p.inequalities[i][0]) for i in subset]
        if rank(rows) != p.dim:
            continue
        u = rational_solve(rows, eq_rhs + [p.inequalities[i][1] for i in subset], p.dim)
        if u is None or not p.satisfies(u):
            continue
        key = tuple(u)
        if key not in seen:
            seen.add(key)
            found.append(key)
    found.sort()
    return found


def _unbounded(p: Polytope) -> bool:
    # bounded iff the recession cone {E d = 0, H d >= 0} is {0}; check each
    # coordinate direction +/- via LP on the cone intersected with a slab
    n = p.dim
    H = [list(a) for a, _ in p.inequalities]
    E = [list(a) for a, _ in p.equations]
    # variables d = d+ - d-, slacks for H d >= 0
    m = len(H)
    nv = 2 * n + m
    rows, rhs = [], []
    for a in E:
        rows.append(list(a) + [-x for x in a] + [0] * m)
        rhs.append(0)
    for i, a in enumerate(H):
        rows.append(list(a) + [-x for x in a] + [-int(k == i) for k in range(m)])
        rhs.append(0)
    rows.append([1] * (2 * n) + [0] * m)
    rhs.append(1)
    for j in range(n):
        for sign in (1, -1):
            obj = [0] * nv
            obj[j] = sign
            obj[n + j] = -sign
            try:
                val, _ = linprog_exact(obj, rows, rhs)
            except Infeasible:
                return False
            if val > 0:
                return True
    return False


# --------------------------------------------------------------------------
# Fans
# --------------------------------------------------------------------------


@dataclass
class Fan:
    """Rays plus cones given as sorted tuples of ray indices (face closed)."""

    rank: int
    rays: list[tuple[int, ...]]
    cones: list[tuple[int, ...]]
    maximal: list[tuple[int, ...]]

    def __post_init__(self):
        self.cones = sorted(set(tuple(sorted(c)) for c in self.cones), key=lambda c: (len(c), c))
        self.maximal = sorted(set(tuple(sorted(c)) for c in self.maximal), key=lambda c: (len(c), c))
        self._dims: dict = {}

    def cone_dim(self, cone: Sequence[int]) -> int:
        key = tuple(cone)
        if key not in self._dims:
            self._dims[key] = rank([self.rays[i] for i in cone]) if cone else 0
        return self._dims[key]

    def cones_of_dim(self, k: int) -> list[tuple[int, ...]]:
        return [c for c in self.cones if self.cone_dim(c) == k]

    def is_simplicial(self, cone: Sequence[int]) -> bool:
        return self.cone_dim(cone) == len(cone)

    def locate(self, direction: Sequence) -> Optional[tuple[int, ...]]:
        """Some maximal cone containing ``direction``."""
        for c in self.maximal:
            gens = [self.rays[i] for i in c]
            if _in_rational_cone(gens, direction, self.rank):
                return c
        return None

    def smallest_cone_containing(self, vectors: Sequence[Sequence]) -> Optional[tuple[int, ...]]:
        """Minimal cone of the fan containing all ``vectors`` (None if no cone does)."""
        best = None
        for c in self.cones:
            gens = [self.rays[i] for i in c]
            if all(_in_rational_cone(gens, v, self.rank) for v in vectors):
                if best is None or len(c) < len(best):
                    best = c
        return best


def _in_rational_cone(gens, v, dim) -> bool:
    scale = 1
    for x in v:
        scale = scale * Fraction(x).denominator
    w = [int(Fraction(x) * scale) for x in v]
    return cone_contains(RationalCone(dim, tuple(map(tuple, gens))), w)


def polytope_faces(p: Polytope) -> list[tuple[frozenset[int], frozenset[int]]]:
    """All nonempty faces as (vertex-index set, tight-inequality set)."""
    verts = p.vertices
    tights = [p.tight(v) for v in verts]
    faces: dict[frozenset, frozenset] = {}
    frontier = [t for t in tights]
    seen = set()
    while frontier:
        T = frontier.pop()
        if T in seen:
            continue
        seen.add(T)
        vs = frozenset(i for i, t in enumerate(tights) if T <= t)
        full = frozenset.intersection(*[tights[i] for i in vs])
        faces[vs] = full
        for t in tights:
            nt = full & t
            if nt not in seen:
                frontier.append(nt)
    return sorted(faces.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))


def _face_dim(p: Polytope, vs) -> int:
    verts = [p.vertices[i] for i in sorted(vs)]
    base = verts[0]
    return rank([[a - b for a, b in zip(v, base)] for v in verts[1:]]) if len(verts) > 1 else 0


def normal_fan(p: Polytope) -> tuple[Fan, dict[int, int], dict[frozenset, tuple[int, ...]]]:
    """Inner normal fan of a full-dimensional polytope.

    Returns the fan, a map from inequality index to ray index (for the
    inequalities that define facets), and a map from face vertex-sets to cones.
    """
    if p.equations:
        raise ValueError("normal_fan expects a polytope given in its own affine hull")
    if not p.vertices:
        raise ValueError("empty polytope")
    if _face_dim(p, range(len(p.vertices))) != p.dim:
        raise ValueError("polytope is not full dimensional")
    faces = polytope_faces(p)
    facets = [(vs, T) for vs, T in faces if _face_dim(p, vs) == p.dim - 1]
    rays: list[tuple[int, ...]] = []
    ineq_to_ray: dict[int, int] = {}
    facet_vs_to_ray: dict[frozenset, int] = {}
    for vs, T in facets:
        normal = _integral(p.inequalities[min(T)][0])
        ray = tuple(primitive(normal))
        facet_vs_to_ray[vs] = len(rays)
        rays.append(ray)
        for i in T:
            a = _integral(p.inequalities[i][0])
            if tuple(primitive(a)) == ray:
                ineq_to_ray[i] = facet_vs_to_ray[vs]
    face_to_cone = {}
    cones, maximal = [], []
    for vs, T in faces:
        cone = tuple(sorted(r for fvs, r in facet_vs_to_ray.items() if vs <= fvs))
        face_to_cone[vs] = cone
        cones.append(cone)
        if len(vs) == 1:
            maximal.append(cone)
    fan = Fan(p.dim, rays, cones, maximal)
    return fan, ineq_to_ray, face_to_cone


def _integral(v) -> list[int]:
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in v]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
