"""Integral equivariant Chow ring ``Z[t_1..t_r] / I`` of ``[X/T]``.

``I`` is generated by the products of the linear forms of the coordinates in
each removed coordinate subspace.  Reduction is done degree by degree against
the integer lattice spanned by ``(relation) * (monomial)``; no Groebner basis
is involved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Optional, Sequence

from .git import Presentation, PresentationError, antichain_min, slice_meets_X, unstable_components
from .lattice import Lattice, cokernel_structure, coset_canonical, lattice_membership

Exponent = tuple[int, ...]


class RingMismatch(ValueError):
    pass


class DegreeBoundExceeded(ValueError):
    pass


# --------------------------------------------------------------------------
# Polynomials
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedPolynomial:
    """Integer polynomial as a map exponent-vector -> nonzero coefficient."""

    nvars: int
    terms: tuple[tuple[Exponent, int], ...] = ()

    @classmethod
    def from_dict(cls, nvars: int, d: Mapping[Exponent, int]) -> "GradedPolynomial":
        return cls(nvars, tuple(sorted((tuple(e), int(c)) for e, c in d.items() if c)))

    @classmethod
    def constant(cls, nvars: int, c: int = 1) -> "GradedPolynomial":
        return cls.from_dict(nvars, {(0,) * nvars: c})

    @classmethod
    def linear(cls, coeffs: Sequence[int]) -> "GradedPolynomial":
        n = len(coeffs)
        return cls.from_dict(n, {tuple(int(i == k) for i in range(n)): c for k, c in enumerate(coeffs)})

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def __add__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return GradedPolynomial.from_dict(self.nvars, d)

    def __neg__(self):
        return GradedPolynomial(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GradedPolynomial.from_dict(self.nvars, {e: c * other for e, c in self.terms})
        d: dict[Exponent, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, 0) + c1 * c2
        return GradedPolynomial.from_dict(self.nvars, d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = GradedPolynomial.constant(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> list[int]:
        return sorted({sum(e) for e, _ in self.terms})

    def component(self, k: int) -> "GradedPolynomial":
        return GradedPolynomial(self.nvars, tuple((e, c) for e, c in self.terms if sum(e) == k))

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms, key=lambda t: _grlex_key(t[0]), reverse=True):
            mono = monomial_string(e, names)
            if mono == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def monomial_string(e: Exponent, names: Sequence[str]) -> str:
    bits = []
    for x, k in zip(names, e):
        if k == 1:
            bits.append(x)
        elif k > 1:
            bits.append(f"{x}^{k}")
    return "*".join(bits) or "1"


def _grlex_key(e: Exponent):
    return (sum(e), e)


def monomials_of_degree(nvars: int, k: int) -> list[Exponent]:
    """Degree-k monomials, largest first in graded lex order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), k):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, key=_grlex_key, reverse=True)


def default_variable_names(r: int) -> tuple[str, ...]:
    return ("s", "t", "u")[:r] if r <= 3 else tuple(f"t{i + 1}" for i in range(r))


# --------------------------------------------------------------------------
# Excision
# --------------------------------------------------------------------------


def minimal_transversals(monomials: Iterable[Iterable[int]]) -> list[frozenset]:
    """Minimal primes of a squarefree monomial ideal given by supports."""
    mons = [frozenset(m) for m in monomials]
    if any(not m for m in mons):
        return []
    universe = sorted(set().union(*mons)) if mons else []
    found: list[frozenset] = []
    # increasing size guarantees minimality of anything accepted later
    from itertools import combinations

    for k in range(len(universe) + 1):
        for c in combinations(universe, k):
            s = frozenset(c)
            if all(s & m for m in mons) and not any(t <= s for t in found):
                found.append(s)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def excised_components(p: Presentation) -> list[frozenset]:
    if p.excised is not None:
        return list(antichain_min(p.excised))
    return unstable_components(p)


# --------------------------------------------------------------------------
# The ring
# --------------------------------------------------------------------------


class StackChowRing:
    def __init__(
        self,
        variables: Sequence[str],
        relations: Sequence[GradedPolynomial],
        degree_bound: int,
    ):
        self.variables = tuple(variables)
        self.nvars = len(self.variables)
        for g in relations:
            if len(g.degrees()) > 1:
                raise ValueError("relations must be homogeneous")
        self.relations = tuple(g for g in relations if not g.is_zero())
        self.degree_bound = degree_bound
        self._cache: dict[int, tuple[list[Exponent], Lattice, list]] = {}

    def __repr__(self):
        rels = ", ".join(g.format(self.variables) for g in self.relations)
        return f"Z[{','.join(self.variables)}]/({rels})"

    def _check_degree(self, k: int):
        if k < 0 or k > self.degree_bound:
            raise DegreeBoundExceeded(f"degree {k} outside 0..{self.degree_bound}")

    def piece(self, k: int) -> tuple[list[Exponent], Lattice, list]:
        """Monomial basis, relation lattice and relation products in degree k."""
        self._check_degree(k)
        if k not in self._cache:
            basis = monomials_of_degree(self.nvars, k)
            pos = {e: i for i, e in enumerate(basis)}
            gens, labels = [], []
            for gi, g in enumerate(self.relations):
                dg = g.degrees()[0]
                if dg > k:
                    continue
                for m in monomials_of_degree(self.nvars, k - dg):
                    prod = g * GradedPolynomial.from_dict(self.nvars, {m: 1})
                    v = [0] * len(basis)
                    for e, c in prod.terms:
                        v[pos[e]] = c
                    gens.append(v)
                    labels.append((gi, m))
            self._cache[k] = (basis, Lattice.from_vectors(len(basis), gens), labels)
        return self._cache[k]

    def vector(self, poly: GradedPolynomial, k: int) -> list[int]:
        basis, _, _ = self.piece(k)
        pos = {e: i for i, e in enumerate(basis)}
        v = [0] * len(basis)
        for e, c in poly.component(k).terms:
            v[pos[e]] = c
        return v

    def polynomial(self, vec: Sequence[int], k: int) -> GradedPolynomial:
        basis, _, _ = self.piece(k)
        return GradedPolynomial.from_dict(self.nvars, {e: c for e, c in zip(basis, vec) if c})

    def canonical(self, poly: GradedPolynomial) -> GradedPolynomial:
        out = GradedPolynomial(self.nvars)
        for k in poly.degrees():
            _, lat, _ = self.piece(k)
            out = out + self.polynomial(coset_canonical(lat, self.vector(poly, k)), k)
        return out

    def element(self, poly: GradedPolynomial) -> "StackClass":
        if poly.nvars != self.nvars:
            raise RingMismatch("polynomial has the wrong number of variables")
        return StackClass(self, self.canonical(poly))

    def one(self) -> "StackClass":
        return self.element(GradedPolynomial.constant(self.nvars))

    def gen(self, i: int) -> "StackClass":
        return self.element(GradedPolynomial.linear([int(j == i) for j in range(self.nvars)]))

    def gens(self) -> list["StackClass"]:
        return [self.gen(i) for i in range(self.nvars)]

    def linear_form(self, coeffs: Sequence[int]) -> "StackClass":
        return self.element(GradedPolynomial.linear(coeffs))

    def zero_certificate(self, poly: GradedPolynomial) -> Optional[list[dict]]:
        """Express ``poly`` as a sum of ``c * relation * monomial`` if it is zero."""
        cert = []
        for k in poly.degrees():
            _, lat, labels = self.piece(k)
            coeffs = lattice_membership(lat, self.vector(poly, k))
            if coeffs is None:
                return None
            for c, (gi, m) in zip(coeffs, labels):
                if c:
                    cert.append(
                        {
                            "coefficient": int(c),
                            "relation": self.relations[gi].format(self.variables),
                            "monomial": monomial_string(m, self.variables),
                        }
                    )
        return cert

    def contains_relation(self, poly: GradedPolynomial, rational: bool = False) -> bool:
        """Whether a homogeneous-by-degree polynomial lies in the ideal."""
        for k in poly.degrees():
            _, lat, _ = self.piece(k)
            if lattice_membership(lat, self.vector(poly, k), rational=rational) is None:
                return False
        return True


@dataclass(frozen=True)
class StackClass:
    ring: StackChowRing = field(compare=False)
    poly: GradedPolynomial

    def _same(self, other: "StackClass"):
        if self.ring is not other.ring:
            raise RingMismatch("classes live in different rings")

    def __add__(self, other):
        self._same(other)
        return self.ring.element(self.poly + other.poly)

    def __sub__(self, other):
        self._same(other)
        return self.ring.element(self.poly - other.poly)

    def __neg__(self):
        return self.ring.element(-self.poly)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.ring.element(self.poly * other)
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, StackClass) and classes_equal(self, other)

    def __hash__(self):
        return hash(self.poly)

    def degrees(self) -> list[int]:
        return self.poly.degrees()

    def __str__(self):
        return self.poly.format(self.ring.variables)

    def serialize(self) -> dict[str, int]:
        return {monomial_string(e, self.ring.variables): c for e, c in self.poly.terms}


def build_ring(p: Presentation, degree_bound: Optional[int] = None, variables=None) -> StackChowRing:
    comps = excised_components(p)
    rels = []
    for S in comps:
        g = GradedPolynomial.constant(p.r)
        for j in sorted(S):
            g = g * GradedPolynomial.linear(p.weight(j))
        rels.append(g)
    bound = degree_bound if degree_bound is not None else p.dim + 3
    return StackChowRing(variables or default_variable_names(p.r), rels, bound)


def slice_polynomial(p: Presentation, S: Iterable[int]) -> GradedPolynomial:
    g = GradedPolynomial.constant(p.r)
    for j in sorted(S):
        g = g * GradedPolynomial.linear(p.weight(j))
    return g


def class_of_slice(ring: StackChowRing, p: Presentation, S: Iterable[int]) -> StackClass:
    S = frozenset(S)
    if not slice_meets_X(p, S):
        raise PresentationError(f"slice {p.label(S)} is excised from X")
    return ring.element(slice_polynomial(p, S))


def class_of_hypersurface(ring: StackChowRing, weight: Sequence[int], multiple: int = 1) -> StackClass:
    return ring.element(GradedPolynomial.linear([multiple * w for w in weight]))


def multiply(a: StackClass, b: StackClass) -> StackClass:
    a._same(b)
    return a.ring.element(a.poly * b.poly)


def classes_equal(a: StackClass, b: StackClass, rational: bool = False) -> bool:
    a._same(b)
    if not rational:
        return a.poly == b.poly  # both canonical
    return a.ring.contains_relation(a.poly - b.poly, rational=True)


def is_zero(a: StackClass, rational: bool = False) -> bool:
    if not rational:
        return a.poly.is_zero()
    return a.ring.contains_relation(a.poly, rational=True)


@dataclass(frozen=True)
class GradedGroupStructure:
    degree: int
    free_rank: int
    torsion: tuple[int, ...]


def graded_piece_structure(ring: StackChowRing, k: int) -> GradedGroupStructure:
    basis, lat, _ = ring.piece(k)
    cols = [list(g) for g in lat.generators]
    M = [[g[i] for g in cols] for i in range(len(basis))]
    free, torsion = cokernel_structure(M, len(cols))
    return GradedGroupStructure(k, free, tuple(torsion))


def rational_coordinates(ring: StackChowRing, classes: Sequence[StackClass], k: int) -> list[list[Fraction]]:
    """Degree-k vectors of classes (canonical representatives)."""
    return [[Fraction(x) for x in ring.vector(c.poly, k)] for c in classes]
