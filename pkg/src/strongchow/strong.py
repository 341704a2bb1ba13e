"""Strong relative Chow groups and the conjectural strong pushforward.

A strong cycle here is a coordinate slice passing the saturation and
chart tests, the generic hypersurface cut by a semi-invariant of weight chi,
or the fundamental class.  Their classes span ``A^k_st`` inside ``A^k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Mapping, Optional, Sequence

from .cones import linprog_exact
from .git import (
    Presentation,
    PresentationError,
    is_generically_strong_slice,
    is_properly_stable,
    is_strong_slice,
    slice_meets_X,
    stabilizer,
)
from .lattice import Lattice, integer_kernel, lattice_membership, rank, rational_kernel, rational_solve
from .space_chow import (
    QuotientFan,
    SpaceCycle,
    image_cycle,
    toric_chow_presentation,
)
from .stack_chow import (
    GradedPolynomial,
    StackChowRing,
    StackClass,
    class_of_hypersurface,
    class_of_slice,
    monomial_string,
)


@dataclass(frozen=True)
class StrongCycle:
    kind: str  # "slice" or "hypersurface"
    label: str
    codim: int
    stack_class: StackClass = field(compare=False)
    e: Optional[int]  # generic stabilizer order, None if infinite
    support: Optional[frozenset] = None
    weight: Optional[tuple[int, ...]] = None
    certificate: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def datum(self):
        """Argument understood by ``image_cycle``."""
        if self.kind == "hypersurface":
            return ("hypersurface", self.weight)
        return self.support

    def serialize(self) -> dict:
        return {
            "kind": self.kind,
            "label": self.label,
            "codim": self.codim,
            "class": str(self.stack_class),
            "e": self.e,
        }


def slice_label(p: Presentation, S) -> str:
    return "V(" + ",".join(p.label(S)) + ")" if S else "[X]"


def semi_invariant_monomials(p: Presentation, weight: Sequence[int]) -> list[tuple[int, ...]]:
    """Exponent vectors ``a >= 0`` with ``W a = weight`` (polytope must be bounded)."""
    bounds = []
    for j in range(p.n):
        c = [int(i == j) for i in range(p.n)]
        try:
            val, _ = linprog_exact(c, [list(r) for r in p.weights], list(weight))
        except Exception:
            return []
        bounds.append(int(val))
    out: list[tuple[int, ...]] = []

    def rec(j, a, resid):
        if j == p.n:
            if not any(resid):
                out.append(tuple(a))
            return
        for x in range(bounds[j] + 1):
            rec(j + 1, a + [x], [r - x * w for r, w in zip(resid, p.weight(j))])

    rec(0, [], list(weight))
    return sorted(out, reverse=True)


def _generic_hypersurface(p: Presentation, ring: StackChowRing) -> Optional[StrongCycle]:
    chi = p.character
    mons = semi_invariant_monomials(p, chi)
    if len(mons) < 2:
        return None
    if any(all(m[j] for m in mons) for j in range(p.n)):
        return None  # a common variable divides every semi-invariant
    cert = {"weight": list(chi), "multiple": 1, "monomials": [monomial_string(m, p.names) for m in mons]}
    return StrongCycle(
        "hypersurface",
        "V(f_chi)",
        1,
        class_of_hypersurface(ring, chi),
        stabilizer(p, p.everything).order,
        weight=tuple(chi),
        certificate=cert,
    )


def strong_catalogue(p: Presentation, ring: StackChowRing, max_codim: Optional[int] = None) -> list[StrongCycle]:
    """Fundamental class, strong coordinate slices up to ``max_codim`` and the
    generic chi-hypersurface."""
    if max_codim is None:
        max_codim = p.dim
    out = [
        StrongCycle("slice", "[X]", 0, ring.one(), stabilizer(p, p.everything).order, support=frozenset())
    ]
    for k in range(1, max_codim + 1):
        for S in combinations(range(p.n), k):
            S = frozenset(S)
            if not slice_meets_X(p, S):
                continue
            ok, cert = is_strong_slice(p, S)
            if not ok:
                continue
            out.append(
                StrongCycle(
                    "slice",
                    slice_label(p, S),
                    k,
                    class_of_slice(ring, p, S),
                    stabilizer(p, p.everything - S).order,
                    support=S,
                    certificate=cert,
                )
            )
        if k == 1:
            h = _generic_hypersurface(p, ring)
            if h is not None:
                out.append(h)
    return out


def generically_strong_slices(p: Presentation, ring: StackChowRing, max_codim: Optional[int] = None) -> list[StrongCycle]:
    """Slices that fail the strong test but whose extra saturation components
    do not dominate the image."""
    if max_codim is None:
        max_codim = p.dim
    out = []
    for k in range(1, max_codim + 1):
        for S in combinations(range(p.n), k):
            S = frozenset(S)
            if not slice_meets_X(p, S) or is_strong_slice(p, S)[0]:
                continue
            if is_generically_strong_slice(p, S):
                out.append(
                    StrongCycle(
                        "slice",
                        slice_label(p, S),
                        k,
                        class_of_slice(ring, p, S),
                        stabilizer(p, p.everything - S).order,
                        support=S,
                    )
                )
    return out


# --------------------------------------------------------------------------
# Strong groups
# --------------------------------------------------------------------------


@dataclass
class StrongGroup:
    degree: int
    cycles: list[StrongCycle]
    generators: list[StackClass]  # reduced generating set
    lattice: Lattice  # span of generators plus the relation lattice
    relation_rank: int

    @property
    def rank(self) -> int:
        return self.lattice.rank - self.relation_rank

    def contains(self, c: StackClass, rational: bool = False) -> bool:
        v = c.ring.vector(c.poly, self.degree)
        return lattice_membership(self.lattice, v, rational=rational) is not None

    def serialize(self) -> dict:
        return {
            "degree": self.degree,
            "rank": self.rank,
            "generators": [str(g) for g in self.generators],
            "cycles": [z.label for z in self.cycles],
        }


def strong_group(ring: StackChowRing, catalogue: Sequence[StrongCycle], k: int) -> StrongGroup:
    basis, R, _ = ring.piece(k)
    cycles = [z for z in catalogue if z.codim == k]
    gens: list[StackClass] = []
    vecs = [list(g) for g in R.generators]
    lat = Lattice.from_vectors(len(basis), vecs)
    for z in cycles:
        v = ring.vector(z.stack_class.poly, k)
        if lattice_membership(lat, v) is None:
            gens.append(z.stack_class)
            vecs.append(v)
            lat = Lattice.from_vectors(len(basis), vecs)
    return StrongGroup(k, cycles, gens, lat, R.rank)


def strong_groups(ring: StackChowRing, catalogue: Sequence[StrongCycle], top: int) -> dict[int, StrongGroup]:
    return {k: strong_group(ring, catalogue, k) for k in range(top + 1)}


# --------------------------------------------------------------------------
# Presented subalgebras
# --------------------------------------------------------------------------


def weighted_monomials(degrees: Sequence[int], k: int) -> list[tuple[int, ...]]:
    """Exponent vectors of weighted degree ``k``, in a fixed order."""
    out = []

    def rec(i, left, e):
        if i == len(degrees):
            if left == 0:
                out.append(tuple(e))
            return
        for x in range(left // degrees[i], -1, -1):
            rec(i + 1, left - x * degrees[i], e + [x])

    rec(0, k, [])
    return out


def _evaluate(monomial: Sequence[int], gens: Sequence[GradedPolynomial], nvars: int) -> GradedPolynomial:
    out = GradedPolynomial.constant(nvars)
    for g, x in zip(gens, monomial):
        for _ in range(x):
            out = out * g
    return out


@dataclass
class PresentedPiece:
    degree: int
    monomials: list[tuple[int, ...]]
    kernel: Lattice
    image_rank: int


def presented_piece(ring: StackChowRing, gens: Sequence[GradedPolynomial], degrees: Sequence[int], k: int) -> PresentedPiece:
    """Kernel of ``Z[monomials of degree k] -> A^k``."""
    mons = weighted_monomials(degrees, k)
    if k > ring.degree_bound:
        raise ValueError(f"degree {k} beyond the ring's degree bound")
    basis, R, _ = ring.piece(k)
    cols = [ring.vector(_evaluate(m, gens, ring.nvars), k) for m in mons]
    rels = [list(g) for g in R.generators]
    M = [[c[i] for c in cols] + [g[i] for g in rels] for i in range(len(basis))]
    ker = integer_kernel(M, len(cols) + len(rels)) if basis else [[int(i == j) for j in range(len(cols))] for i in range(len(cols))]
    kern = Lattice.from_vectors(len(mons), [v[: len(mons)] for v in ker])
    return PresentedPiece(k, mons, kern, len(mons) - kern.rank)


def ideal_piece(relations: Sequence[Mapping[tuple, int]], degrees: Sequence[int], k: int) -> Lattice:
    """Degree-k part of the ideal generated by weighted-homogeneous ``relations``."""
    mons = weighted_monomials(degrees, k)
    pos = {m: i for i, m in enumerate(mons)}
    vecs = []
    for rel in relations:
        if not rel:
            continue
        e0 = next(iter(rel))
        d = sum(x * w for x, w in zip(e0, degrees))
        if d > k:
            continue
        for m in weighted_monomials(degrees, k - d):
            v = [0] * len(mons)
            for e, c in rel.items():
                v[pos[tuple(a + b for a, b in zip(e, m))]] += c
            vecs.append(v)
    return Lattice.from_vectors(len(mons), vecs)


def lattices_equal(a: Lattice, b: Lattice) -> bool:
    return all(g in b for g in a.generators) and all(g in a for g in b.generators)


def minimal_relations(ring, gens, degrees, top: int) -> list[dict]:
    """Relations of the subalgebra generated by ``gens``, degree by degree."""
    found: list[dict] = []
    for k in range(1, top + 1):
        piece = presented_piece(ring, gens, degrees, k)
        lower = ideal_piece(found, degrees, k)
        vecs = [list(g) for g in lower.generators]
        for v in piece.kernel.hermite_basis:
            cur = Lattice.from_vectors(len(piece.monomials), vecs)
            if tuple(v) not in cur:
                vecs.append(v)
                found.append({m: c for m, c in zip(piece.monomials, v) if c})
    return found


def format_relation(rel: Mapping[tuple, int], names: Sequence[str]) -> str:
    return GradedPolynomial.from_dict(len(names), dict(rel)).format(names)


def parse_polynomial(text: str, names: Sequence[str]) -> GradedPolynomial:
    """Parse an integer polynomial in ``names`` (``^`` or ``**`` for powers)."""
    import sympy

    syms = sympy.symbols(list(names))
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals=dict(zip(names, syms)))
    except (sympy.SympifyError, SyntaxError, TypeError) as e:
        raise ValueError(f"cannot parse {text!r}: {e}") from None
    unknown = sorted(str(x) for x in expr.free_symbols if x not in syms)
    if unknown:
        raise ValueError(f"unknown symbols {unknown} in {text!r}; expected {list(names)}")
    poly = sympy.Poly(sympy.expand(expr), *syms)
    terms = {}
    for e, c in poly.terms():
        if c != int(c):
            raise ValueError(f"non-integer coefficient {c} in {text!r}")
        terms[tuple(int(x) for x in e)] = int(c)
    return GradedPolynomial.from_dict(len(names), terms)


# --------------------------------------------------------------------------
# Ring closure
# --------------------------------------------------------------------------


@dataclass
class RingClosureReport:
    closed: bool
    escapees: list[dict]
    ranks: dict[int, int]
    generators: list[str]
    generator_degrees: list[int]
    relations: list[str]
    presentation_check: Optional[dict] = None
    assumptions: tuple[str, ...] = ()

    def serialize(self) -> dict:
        out = {
            "closed": self.closed,
            "escapees": self.escapees,
            "ranks": {str(k): v for k, v in sorted(self.ranks.items())},
            "generators": self.generators,
            "generator_degrees": self.generator_degrees,
            "relations": self.relations,
            "assumptions": list(self.assumptions),
        }
        if self.presentation_check is not None:
            out["presentation_check"] = self.presentation_check
        return out


def _algebra_generators(groups: Mapping[int, StrongGroup]) -> tuple[list[GradedPolynomial], list[int]]:
    """Strong generators not already produced by lower-degree ones."""
    gens: list[GradedPolynomial] = []
    degs: list[int] = []
    for k in sorted(groups):
        if k == 0:
            continue
        for c in groups[k].generators:
            if gens:
                piece = presented_piece(c.ring, gens, degs, k)
                vecs = [c.ring.vector(_evaluate(m, gens, c.ring.nvars), k) for m in piece.monomials]
                _, R, _ = c.ring.piece(k)
                lat = Lattice.from_vectors(len(vecs[0]) if vecs else 0, vecs + [list(x) for x in R.generators])
                if vecs and lattice_membership(lat, c.ring.vector(c.poly, k)) is not None:
                    continue
            gens.append(c.poly)
            degs.append(k)
    return gens, degs


def check_presentation(
    ring: StackChowRing,
    groups: Mapping[int, StrongGroup],
    generators: Mapping[str, GradedPolynomial],
    relations: Sequence[GradedPolynomial],
    top: int,
) -> dict:
    """Check that ``Z[generators]/(relations)`` is the strong ring through degree ``top``."""
    names = list(generators)
    gens = [generators[x] for x in names]
    degs = []
    for x, g in zip(names, gens):
        ds = g.degrees()
        if len(ds) != 1 or ds[0] == 0:
            raise ValueError(f"generator {x} is not homogeneous of positive degree")
        degs.append(ds[0])
    rels = []
    for r in relations:
        rd = {e: c for e, c in r.terms}
        wd = {sum(a * w for a, w in zip(e, degs)) for e in rd}
        if len(wd) > 1:
            raise ValueError("relation is not weighted-homogeneous")
        rels.append(rd)
    out = {"generators": {x: g.format(ring.variables) for x, g in zip(names, gens)}, "degrees": {}}
    ok = True
    for k in range(1, top + 1):
        piece = presented_piece(ring, gens, degs, k)
        ideal = ideal_piece(rels, degs, k)
        exact = lattices_equal(ideal, piece.kernel)
        st_rank = groups[k].rank if k in groups else 0
        spans = True
        if k in groups:
            span_vecs = [ring.vector(_evaluate(m, gens, ring.nvars), k) for m in piece.monomials]
            _, R, _ = ring.piece(k)
            lat = Lattice.from_vectors(len(ring.piece(k)[0]), span_vecs + [list(x) for x in R.generators])
            spans = lattices_equal(lat, groups[k].lattice)
        elif piece.image_rank:
            spans = False
        good = exact and spans and piece.image_rank == st_rank
        ok = ok and good
        out["degrees"][str(k)] = {
            "relations_exact": exact,
            "spans_strong_group": spans,
            "rank": piece.image_rank,
            "strong_rank": st_rank,
        }
    out["holds"] = ok
    return out


def ring_closure_check(
    p: Presentation,
    ring: StackChowRing,
    catalogue: Sequence[StrongCycle],
    presentation: Optional[Mapping] = None,
    assumptions: Sequence[str] = (),
    rational: bool = False,
) -> RingClosureReport:
    """Products of strong generators stay strong; classes of degree above
    ``dim X`` have no strong cycles so their products must vanish."""
    dim = p.dim
    groups = strong_groups(ring, catalogue, dim)
    escapees = []
    gens = [(k, g) for k, G in groups.items() if k > 0 for g in G.generators]
    for i, (a, ga) in enumerate(gens):
        for b, gb in gens[i:]:
            if a + b > ring.degree_bound:
                continue
            prod = ga * gb
            if a + b <= dim:
                if not groups[a + b].contains(prod, rational=rational):
                    escapees.append({"factors": [str(ga), str(gb)], "product": str(prod)})
            elif not (ring.contains_relation(prod.poly, rational=True) if rational else prod.poly.is_zero()):
                escapees.append({"factors": [str(ga), str(gb)], "product": str(prod), "degree": a + b})
    alg, degs = _algebra_generators(groups)
    names = [f"g{i + 1}" for i in range(len(alg))]
    if len(alg) == 1:
        names = ["h"]
    rels = minimal_relations(ring, alg, degs, min(ring.degree_bound, dim + max(degs, default=1)))
    pres = None
    if presentation is not None:
        gnames = list(presentation["generators"])
        gpolys = {x: parse_polynomial(presentation["generators"][x], ring.variables) for x in gnames}
        rpolys = [parse_polynomial(r, gnames) for r in presentation["relations"]]
        pres = check_presentation(ring, groups, gpolys, rpolys, min(ring.degree_bound, dim + 2))
        vanish = {}
        for r, rp in zip(presentation["relations"], rpolys):
            val = _evaluate_poly(rp, [gpolys[x] for x in gnames], ring.nvars)
            vanish[r] = ring.zero_certificate(val)
            if vanish[r] is None:
                pres["holds"] = False
        pres["relation_certificates"] = vanish
    return RingClosureReport(
        closed=not escapees,
        escapees=escapees,
        ranks={k: G.rank for k, G in groups.items()},
        generators=[f"{x} = {g.format(ring.variables)}" for x, g in zip(names, alg)],
        generator_degrees=degs,
        relations=[format_relation(r, names) for r in rels],
        presentation_check=pres,
        assumptions=tuple(assumptions),
    )


def _evaluate_poly(poly: GradedPolynomial, gens: Sequence[GradedPolynomial], nvars: int) -> GradedPolynomial:
    out = GradedPolynomial(nvars)
    for e, c in poly.terms:
        out = out + _evaluate(e, gens, nvars) * c
    return out


# --------------------------------------------------------------------------
# Pushforward
# --------------------------------------------------------------------------


class IneligibleCycle(ValueError):
    pass


def strong_pushforward(p: Presentation, qf: QuotientFan, z: StrongCycle) -> SpaceCycle:
    """``e_Z^{-1} [pi(Z)]``."""
    if z.e is None:
        raise IneligibleCycle(f"{z.label} has positive-dimensional generic stabilizer")
    return image_cycle(p, qf, z.datum).scale(Fraction(1, z.e))


def _formal_kernel(ring: StackChowRing, cycles: Sequence[StrongCycle], k: int) -> list[list[int]]:
    """Integer relations among the classes of ``cycles`` in ``A^k``."""
    if not cycles:
        return []
    basis, R, _ = ring.piece(k)
    cols = [ring.vector(z.stack_class.poly, k) for z in cycles]
    rels = [list(g) for g in R.generators]
    M = [[c[i] for c in cols] + [g[i] for g in rels] for i in range(len(basis))]
    ker = integer_kernel(M, len(cols) + len(rels))
    out = Lattice.from_vectors(len(cols), [v[: len(cols)] for v in ker])
    return out.hermite_basis


@dataclass
class WellDefinedReport:
    degree: int
    kernel: list[dict]
    violations: list[dict]

    @property
    def holds(self) -> bool:
        return not self.violations

    def serialize(self) -> dict:
        return {"degree": self.degree, "holds": self.holds, "kernel": self.kernel, "violations": self.violations}


def pushforward_well_defined_check(
    p: Presentation, ring: StackChowRing, qf: QuotientFan, catalogue: Sequence[StrongCycle], k: int
) -> WellDefinedReport:
    cycles = [z for z in catalogue if z.codim == k and z.e is not None]
    kern = _formal_kernel(ring, cycles, k)
    pres = toric_chow_presentation(qf.fan, qf.dim - k)
    images = [strong_pushforward(p, qf, z) for z in cycles]
    rows, bad = [], []
    for v in kern:
        combo = {z.label: c for z, c in zip(cycles, v) if c}
        img = SpaceCycle.make(qf.dim - k, {})
        for c, im in zip(v, images):
            if c:
                img = img + im.scale(c)
        entry = {"combination": combo, "image": img.serialize()}
        rows.append(entry)
        if not pres.is_zero(img, rational=True):
            bad.append(entry)
    return WellDefinedReport(k, rows, bad)


@dataclass
class InjectivityReport:
    degrees: dict[int, dict]
    candidate: dict[int, dict]
    simplicial: bool

    @property
    def injective_on_candidate(self) -> bool:
        return all(d["injective"] for d in self.candidate.values())

    @property
    def injective_on_strong(self) -> bool:
        return all(not d["kernel"] for d in self.degrees.values())

    @property
    def bijective(self) -> bool:
        return self.injective_on_strong and all(d["surjective"] for d in self.degrees.values())

    def serialize(self) -> dict:
        return {
            "simplicial": self.simplicial,
            "injective_on_strong": self.injective_on_strong,
            "injective_on_candidate": self.injective_on_candidate,
            "bijective": self.bijective,
            "degrees": {str(k): v for k, v in sorted(self.degrees.items())},
            "candidate": {str(k): v for k, v in sorted(self.candidate.items())},
        }


def _qrank(vectors) -> int:
    vs = [v for v in vectors if any(v)]
    return rank(vs) if vs else 0


def injectivity_analysis(
    p: Presentation, ring: StackChowRing, qf: QuotientFan, catalogue: Sequence[StrongCycle], top: Optional[int] = None
) -> InjectivityReport:
    d = qf.dim
    top = min(d, p.dim) if top is None else top
    degrees: dict[int, dict] = {}
    for k in range(top + 1):
        cycles = [z for z in catalogue if z.codim == k and z.e is not None]
        pres = toric_chow_presentation(qf.fan, d - k)
        basis, R, _ = ring.piece(k)
        images = [pres.coordinates(strong_pushforward(p, qf, z)) for z in cycles]
        classes = [[Fraction(x) for x in ring.vector(z.stack_class.poly, k)] for z in cycles]
        rel = [[Fraction(x) for x in g] for g in R.generators]
        st_rank = _qrank(classes + rel) - _qrank(rel)
        img_rank = _qrank(images)
        kernel = []
        if st_rank > img_rank and cycles:
            # combinations with zero image whose class is nonzero
            M = [[im[i] for im in images] for i in range(len(images[0]))] if images and images[0] else []
            ker = rational_kernel(M, len(cycles)) if M else [[Fraction(int(i == j)) for j in range(len(cycles))] for i in range(len(cycles))]
            seen = [list(g) for g in rel]
            for v in ker:
                scale = _lcm_den(v)
                poly = GradedPolynomial(ring.nvars)
                for c, z in zip(v, cycles):
                    poly = poly + z.stack_class.poly * int(c * scale)
                vec = [Fraction(x) for x in ring.vector(poly, k)]
                if _qrank(seen + [vec]) == _qrank(seen):
                    continue
                seen.append(vec)
                kernel.append(
                    {
                        "combination": {z.label: str(c * scale) for z, c in zip(cycles, v) if c},
                        "class": str(ring.element(poly)),
                    }
                )
        degrees[k] = {
            "strong_rank": st_rank,
            "image_rank": img_rank,
            "target_rank": pres.free_rank,
            "kernel": kernel,
            "surjective": img_rank == pres.free_rank,
        }
    candidate: dict[int, dict] = {}
    a1 = [z.stack_class for z in catalogue if z.codim == 1 and z.e is not None]
    for k in range(top + 1):
        pres = toric_chow_presentation(qf.fan, d - k)
        mons = weighted_monomials([1] * len(a1), k) if a1 else ([()] if k == 0 else [])
        classes, images = [], []
        for m in mons:
            poly = _evaluate(m, [c.poly for c in a1], ring.nvars)
            classes.append([Fraction(x) for x in ring.vector(poly, k)])
            images.append(pres.coordinates(pushforward_class(p, ring, qf, catalogue, ring.element(poly), k)))
        _, R, _ = ring.piece(k)
        rel = [[Fraction(x) for x in g] for g in R.generators]
        sub_rank = _qrank(classes + rel) - _qrank(rel)
        img_rank = _qrank(images)
        candidate[k] = {
            "rank": sub_rank,
            "image_rank": img_rank,
            "injective": sub_rank == img_rank,
            "images": [[str(x) for x in im] for im in images],
        }
    simplicial = all(qf.fan.is_simplicial(c) for c in qf.fan.maximal)
    return InjectivityReport(degrees, candidate, simplicial)


def _lcm_den(v) -> int:
    out = 1
    for x in v:
        out = lcm(out, Fraction(x).denominator)
    return out


def strong_decomposition(
    ring: StackChowRing, catalogue: Sequence[StrongCycle], c: StackClass, k: int
) -> Optional[list[tuple[StrongCycle, Fraction]]]:
    """Rational coefficients writing ``c`` as a combination of strong cycles."""
    cycles = [z for z in catalogue if z.codim == k and z.e is not None]
    basis, R, _ = ring.piece(k)
    cols = [ring.vector(z.stack_class.poly, k) for z in cycles]
    rels = [list(g) for g in R.generators]
    M = [[col[i] for col in cols] + [g[i] for g in rels] for i in range(len(basis))]
    sol = rational_solve(M, ring.vector(c.poly, k), len(cols) + len(rels))
    if sol is None:
        return None
    return [(z, x) for z, x in zip(cycles, sol) if x]


def pushforward_class(
    p: Presentation, ring: StackChowRing, qf: QuotientFan, catalogue: Sequence[StrongCycle], c: StackClass, k: int
) -> SpaceCycle:
    """Strong pushforward of a class in the rational strong span."""
    dec = strong_decomposition(ring, catalogue, c, k)
    if dec is None:
        raise IneligibleCycle(f"class {c} is not in the span of strong cycles")
    out = SpaceCycle.make(qf.dim - k, {})
    for z, x in dec:
        out = out + strong_pushforward(p, qf, z).scale(x)
    return out


def is_properly_stable_or_raise(p: Presentation):
    if not is_properly_stable(p):
        raise PresentationError("presentation is not properly stable")
