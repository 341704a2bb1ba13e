"""The good moduli space as a projective toric variety.

``X//T`` is the toric variety of the polytope ``{a >= 0 : W a = chi}``
written in coordinates of the character lattice ``M = ker W``.  Chow groups
``A_k`` of a complete (possibly singular) toric variety are presented by the
orbit closures ``V(sigma)``, ``dim sigma = d - k``, modulo the divisors of
characters on the ``V(tau)``, ``dim tau = d - k - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .cones import Fan, Polytope, normal_fan
from .git import Presentation, PresentationError, image_support, semi_invariant_multiple, slice_meets_X
from .lattice import (
    Lattice,
    determinant,
    integer_kernel,
    lattice_membership,
    rank,
    rational_solve,
    saturation_index,
    smith_normal_form,
)

Cone = tuple[int, ...]


@dataclass
class QuotientFan:
    presentation: Presentation
    kernel: list[list[int]]  # n x d; row j is the functional of x_j on M
    base_point: list[Fraction]  # a0 with W a0 = chi
    polytope: Polytope
    fan: Fan
    coordinate_rays: dict[int, int]
    face_cones: dict[frozenset, Cone]

    @property
    def dim(self) -> int:
        return self.fan.rank

    def exponents(self, u: Sequence[Fraction]) -> list[Fraction]:
        """Point of the GIT polytope in coordinates ``a`` of A^n."""
        return [a + sum(k * x for k, x in zip(row, u)) for a, row in zip(self.base_point, self.kernel)]

    def face_of_support(self, B: frozenset) -> frozenset:
        """Vertex set of the face of points whose support lies in ``B``."""
        out = []
        for i, v in enumerate(self.polytope.vertices):
            a = self.exponents(v)
            if all(a[j] == 0 for j in range(len(a)) if j not in B):
                out.append(i)
        vs = frozenset(out)
        if vs not in self.face_cones:
            raise PresentationError("support does not correspond to a face of the GIT polytope")
        return vs

    def cone_of_support(self, B: frozenset) -> Cone:
        return self.face_cones[self.face_of_support(B)]


def quotient_fan(p: Presentation, kernel: Optional[Sequence[Sequence[int]]] = None) -> QuotientFan:
    """Normal fan of the GIT polytope.

    ``kernel`` (n x d, columns a basis of ker W) fixes the identification of
    ``N``; Reichstein steps pass the previous stage's basis so that all fans
    of a tower live in one lattice.
    """
    if p.character is None:
        raise PresentationError("quotient fan needs a character")
    W = [list(row) for row in p.weights]
    if kernel is None:
        basis = integer_kernel(W, p.n)
        kernel = [[b[j] for b in basis] for j in range(p.n)]
    kernel = [list(map(int, row)) for row in kernel]
    d = len(kernel[0]) if kernel else 0
    for b in range(d):
        if any(x for x in [sum(W[i][j] * kernel[j][b] for j in range(p.n)) for i in range(p.r)]):
            raise ValueError("kernel basis is not in ker W")
    a0 = rational_solve(W, p.character, p.n)
    if a0 is None:
        raise PresentationError("character is not in the span of the weights")
    P = Polytope(d, [(tuple(kernel[j]), -a0[j]) for j in range(p.n)])
    try:
        verts = P.vertices
    except ValueError:
        raise PresentationError("GIT quotient is not projective (polytope unbounded)") from None
    if not verts:
        raise PresentationError("no semistable points: GIT polytope is empty")
    fan, ineq_to_ray, face_cones = normal_fan(P)
    return QuotientFan(p, kernel, a0, P, fan, ineq_to_ray, face_cones)


def is_projective_plane_fan(f: Fan) -> bool:
    """Complete 2-dim fan with 3 rays and unimodular cones (= P^2 up to GL_2(Z))."""
    if f.rank != 2 or len(f.rays) != 3 or len(f.maximal) != 3:
        return False
    for c in f.maximal:
        if len(c) != 2 or abs(determinant([f.rays[i] for i in c])) != 1:
            return False
    return all(sum(r[i] for r in f.rays) == 0 for i in range(2))


def non_simplicial_cones(f: Fan) -> list[Cone]:
    return [c for c in f.maximal if not f.is_simplicial(c)]


# --------------------------------------------------------------------------
# Cycles and Chow groups
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SpaceCycle:
    """``sum coeff * [V(cone)]``; every cone has dimension ``d - dimension``."""

    dimension: int
    coefficients: tuple[tuple[Cone, Fraction], ...] = ()

    @classmethod
    def make(cls, dimension: int, coeffs: Mapping[Cone, Fraction]) -> "SpaceCycle":
        return cls(dimension, tuple(sorted((tuple(c), Fraction(x)) for c, x in coeffs.items() if x)))

    def as_dict(self) -> dict[Cone, Fraction]:
        return dict(self.coefficients)

    def __add__(self, other: "SpaceCycle") -> "SpaceCycle":
        if other.dimension != self.dimension:
            raise ValueError("adding cycles of different dimension")
        d = self.as_dict()
        for c, x in other.coefficients:
            d[c] = d.get(c, 0) + x
        return SpaceCycle.make(self.dimension, d)

    def scale(self, x) -> "SpaceCycle":
        return SpaceCycle.make(self.dimension, {c: y * Fraction(x) for c, y in self.coefficients})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for _, x in self.coefficients)

    def serialize(self) -> dict[str, str]:
        return {",".join(map(str, c)) or "0": str(x) for c, x in self.coefficients}


def fundamental_cycle(f: Fan) -> SpaceCycle:
    return SpaceCycle.make(f.rank, {(): 1})


def saturated_span(vectors: Sequence[Sequence[int]], d: int) -> list[list[int]]:
    """Basis of ``span(vectors) cap Z^d``."""
    if not vectors or rank(vectors) == 0:
        return []
    perp = integer_kernel([list(v) for v in vectors], d)
    if not perp:
        return [[int(i == j) for j in range(d)] for i in range(d)]
    return integer_kernel(perp, d)


def relative_generator_index(f: Fan, tau: Cone, sigma: Cone) -> tuple[tuple[int, ...], int]:
    """A ray ``v`` of sigma outside tau and the index ``[N_sigma : N_tau + Z v]``.

    ``n_{sigma,tau} = v / index`` modulo ``N_tau``.
    """
    extra = [i for i in sigma if i not in tau]
    v = f.rays[extra[0]]
    base = saturated_span([f.rays[i] for i in tau], f.rank)
    return v, saturation_index(base + [list(v)], f.rank)


def _pairing(u, v) -> Fraction:
    return sum(Fraction(a) * b for a, b in zip(u, v))


def _cofaces(f: Fan, tau: Cone, dim: int) -> list[Cone]:
    return [s for s in f.cones_of_dim(dim) if set(tau) <= set(s)]


@dataclass
class SpaceChowPresentation:
    dimension: int
    basis: list[Cone]
    relations: list[list[int]]
    free_rank: int
    torsion: list[int]
    _snf: object = field(default=None, repr=False)

    @property
    def lattice(self) -> Lattice:
        return Lattice.from_vectors(len(self.basis), self.relations)

    def vector(self, c: SpaceCycle) -> list[Fraction]:
        if c.dimension != self.dimension:
            raise ValueError(f"cycle of dimension {c.dimension} in A_{self.dimension}")
        pos = {b: i for i, b in enumerate(self.basis)}
        v = [Fraction(0)] * len(self.basis)
        for cone, x in c.coefficients:
            v[pos[cone]] = x
        return v

    def is_zero(self, c: SpaceCycle, rational: bool = True) -> bool:
        v = self.vector(c)
        if not rational:
            if any(x.denominator != 1 for x in v):
                return False
            return lattice_membership(self.lattice, [int(x) for x in v]) is not None
        return lattice_membership(self.lattice, v, rational=True) is not None

    def equal(self, a: SpaceCycle, b: SpaceCycle, rational: bool = True) -> bool:
        return self.is_zero(a - b, rational)

    def coordinates(self, c: SpaceCycle) -> list[Fraction]:
        """Coordinates of the class on the free part, via the Smith form."""
        if self._snf is None:
            G = [[g[i] for g in self.relations] for i in range(len(self.basis))]
            self._snf = smith_normal_form(G, len(self.relations))
        snf = self._snf
        Pv = [sum(Fraction(a) * x for a, x in zip(row, self.vector(c))) for row in snf.P]
        out = []
        for i, val in enumerate(Pv):
            d = snf.D[i][i] if i < len(self.relations) else 0
            if d == 0:
                out.append(val)
        return out


def toric_chow_presentation(f: Fan, k: int) -> SpaceChowPresentation:
    d = f.rank
    if not 0 <= k <= d:
        raise ValueError(f"k={k} outside 0..{d}")
    basis = f.cones_of_dim(d - k)
    pos = {b: i for i, b in enumerate(basis)}
    rels: list[list[int]] = []
    if d - k - 1 >= 0:
        for tau in f.cones_of_dim(d - k - 1):
            tau_rays = [list(f.rays[i]) for i in tau]
            M_tau = integer_kernel(tau_rays, d) if tau_rays else [[int(i == j) for j in range(d)] for i in range(d)]
            cof = _cofaces(f, tau, d - k)
            data = [(s, *relative_generator_index(f, tau, s)) for s in cof]
            for u in M_tau:
                row = [0] * len(basis)
                for s, v, idx in data:
                    val = _pairing(u, v) / idx
                    if val.denominator != 1:
                        raise ArithmeticError("non-integral character divisor coefficient")
                    row[pos[s]] = int(val)
                if any(row):
                    rels.append(row)
    G = [[g[i] for g in rels] for i in range(len(basis))]
    snf = smith_normal_form(G, len(rels))
    diag = snf.diagonal
    nz = [x for x in diag if x]
    return SpaceChowPresentation(k, basis, rels, len(basis) - len(nz), [x for x in nz if x > 1], snf)


# --------------------------------------------------------------------------
# Divisors
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PLFunction:
    """Local characters ``m_sigma`` on maximal cones of a Cartier divisor.

    The divisor is ``sum_rho -<m_sigma, n_rho> D_rho`` near each sigma.
    """

    values: tuple[tuple[Cone, tuple[Fraction, ...]], ...]

    @classmethod
    def make(cls, values: Mapping[Cone, Sequence]) -> "PLFunction":
        return cls(tuple(sorted((tuple(c), tuple(Fraction(x) for x in m)) for c, m in values.items())))

    def as_dict(self) -> dict[Cone, tuple[Fraction, ...]]:
        return dict(self.values)

    def scale(self, x) -> "PLFunction":
        return PLFunction.make({c: [Fraction(x) * y for y in m] for c, m in self.values})


def hyperplane_function(qf: QuotientFan) -> PLFunction:
    """Support function of the GIT polytope, based at its first vertex."""
    verts = qf.polytope.vertices
    base = verts[0]
    values = {}
    for i, v in enumerate(verts):
        cone = qf.face_cones[frozenset({i})]
        values[cone] = [a - b for a, b in zip(v, base)]
    return PLFunction.make(values)


def zero_function(f: Fan) -> PLFunction:
    return PLFunction.make({c: [0] * f.rank for c in f.maximal})


def local_character(f: Fan, phi: PLFunction, cone: Cone) -> tuple[Fraction, ...]:
    """``m`` valid on ``cone``; raises if the maximal cones disagree (non-Cartier)."""
    vals = phi.as_dict()
    cands = [vals[m] for m in f.maximal if set(cone) <= set(m)]
    if not cands:
        raise ValueError(f"cone {cone} lies in no maximal cone")
    m0 = cands[0]
    for m in cands[1:]:
        for i in cone:
            if _pairing(m, f.rays[i]) != _pairing(m0, f.rays[i]):
                raise ValueError(f"PL function is not Cartier along cone {cone}")
    return m0


def is_cartier(f: Fan, phi: PLFunction) -> bool:
    try:
        for c in f.cones:
            local_character(f, phi, c)
    except ValueError:
        return False
    return True


def divisor_action(f: Fan, phi: PLFunction, c: SpaceCycle) -> SpaceCycle:
    """Intersect the Cartier divisor ``phi`` with the cycle ``c``."""
    if c.dimension < 1:
        raise ValueError("cannot cut a 0-cycle by a divisor")
    d = f.rank
    out: dict[Cone, Fraction] = {}
    for tau, coeff in c.coefficients:
        m_tau = local_character(f, phi, tau)
        for s in _cofaces(f, tau, d - c.dimension + 1):
            m_s = local_character(f, phi, s)
            v, idx = relative_generator_index(f, tau, s)
            val = _pairing([a - b for a, b in zip(m_tau, m_s)], v) / idx
            out[s] = out.get(s, 0) + coeff * val
    return SpaceCycle.make(c.dimension - 1, out)


def hyperplane_power(qf: QuotientFan, k: int) -> SpaceCycle:
    """``h^k cap [X//T]``."""
    h = hyperplane_function(qf)
    c = fundamental_cycle(qf.fan)
    for _ in range(k):
        c = divisor_action(qf.fan, h, c)
    return c


# --------------------------------------------------------------------------
# Images and pushforward
# --------------------------------------------------------------------------


def image_cycle(p: Presentation, qf: QuotientFan, Z) -> SpaceCycle:
    """``[pi(Z)]`` for a slice (frozenset) or a hypersurface ``("hypersurface", weight)``.

    The cycle has dimension ``dim X//T - codim Z``; it vanishes when the image
    has smaller dimension.
    """
    d = qf.dim
    if isinstance(Z, tuple) and Z and Z[0] == "hypersurface":
        mult = semi_invariant_multiple(p.character, Z[1])
        if not mult:
            raise PresentationError("hypersurface weight is not a positive multiple of chi")
        return hyperplane_power(qf, 1).scale(mult)
    S = frozenset(Z)
    if not slice_meets_X(p, S):
        raise PresentationError(f"slice {p.label(S)} misses the semistable locus")
    k = len(S)
    B = image_support(p, S)
    vs = qf.face_of_support(B)
    cone = qf.face_cones[vs]
    if qf.fan.cone_dim(cone) != k:
        return SpaceCycle.make(d - k, {})
    return SpaceCycle.make(d - k, {cone: 1})


def is_refinement(fine: Fan, coarse: Fan) -> bool:
    if fine.rank != coarse.rank:
        return False
    for c in fine.maximal:
        if coarse.smallest_cone_containing([fine.rays[i] for i in c]) is None:
            return False
    return True


def toric_pushforward(fine: Fan, coarse: Fan, c: SpaceCycle, check: bool = True) -> SpaceCycle:
    """Proper pushforward along the identity of N for a refinement."""
    if check and not is_refinement(fine, coarse):
        raise ValueError("source fan does not refine the target fan")
    out: dict[Cone, Fraction] = {}
    for cone, x in c.coefficients:
        gens = [fine.rays[i] for i in cone]
        tgt = coarse.smallest_cone_containing(gens) if gens else ()
        if tgt is None:
            raise ValueError(f"cone {cone} is not inside any target cone")
        if coarse.cone_dim(tgt) != fine.cone_dim(cone):
            continue
        idx = saturation_index(saturated_span(gens, fine.rank), fine.rank) if gens else 1
        out[tgt] = out.get(tgt, 0) + x * idx
    return SpaceCycle.make(c.dimension, out)
