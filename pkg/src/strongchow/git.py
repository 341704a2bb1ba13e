"""Torus GIT on affine space: supports, stability, saturation, strongness.

Everything is computed at generic points of torus-orbit strata.  A *support*
is the set of coordinates that are nonzero at a point; a *slice* ``S`` stands
for the coordinate subvariety ``V(x_j : j in S)`` intersected with ``X``.
Both are frozensets of 0-based coordinate indices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .cones import RationalCone, cone_contains, minimal_face_containing
from .lattice import Lattice, cokernel_structure, lattice_membership, primitive, rank

Support = frozenset
Slice = frozenset


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    """Quotient stack ``[X/T]`` with ``T = G_m^r`` acting on ``A^n``.

    ``weights`` is the r x n weight matrix (column j is the weight of x_j).
    ``excised`` lists the slices whose union is removed from ``A^n``.
    """

    names: tuple[str, ...]
    weights: tuple[tuple[int, ...], ...]
    character: Optional[tuple[int, ...]] = None
    excised: Optional[tuple[frozenset, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "weights", tuple(tuple(int(x) for x in row) for row in self.weights))
        n = len(self.names)
        if len(set(self.names)) != n:
            raise PresentationError("coordinate names must be unique")
        for i, row in enumerate(self.weights):
            if len(row) != n:
                raise PresentationError(f"weight row {i} has length {len(row)}, expected {n}")
        if self.character is not None:
            chi = tuple(int(x) for x in self.character)
            if len(chi) != self.r:
                raise PresentationError(f"character has length {len(chi)}, expected {self.r}")
            object.__setattr__(self, "character", tuple(primitive(chi)))
        if self.excised is not None:
            ex = [frozenset(int(j) for j in s) for s in self.excised]
            for s in ex:
                if any(j < 0 or j >= n for j in s):
                    raise PresentationError(f"excised slice {sorted(s)} out of range")
            object.__setattr__(self, "excised", tuple(sorted(antichain_min(ex), key=_slice_key)))
        if self.character is None and self.excised is None:
            raise PresentationError("need a character or an excised list")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def r(self) -> int:
        return len(self.weights)

    def weight(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.weights)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise PresentationError(f"unknown coordinate {name!r}") from None

    def slice(self, *names: str) -> frozenset:
        return frozenset(self.index(x) for x in names)

    def label(self, s: Iterable[int]) -> list[str]:
        return [self.names[j] for j in sorted(s)]

    @property
    def everything(self) -> frozenset:
        return frozenset(range(self.n))

    @property
    def dim(self) -> int:
        """Dimension of the stack, ``n - r``."""
        return self.n - self.r


def _slice_key(s):
    return (len(s), sorted(s))


def antichain_min(sets: Iterable[frozenset]) -> list[frozenset]:
    sets = sorted(set(sets), key=_slice_key)
    out: list[frozenset] = []
    for s in sets:
        if not any(t <= s for t in out):
            out.append(s)
    return out


def antichain_max(sets: Iterable[frozenset]) -> list[frozenset]:
    sets = sorted(set(sets), key=lambda s: (-len(s), sorted(s)))
    out: list[frozenset] = []
    for s in sets:
        if not any(s <= t for t in out):
            out.append(s)
    return out


def all_supports(p: Presentation) -> list[frozenset]:
    return [frozenset(c) for k in range(p.n + 1) for c in combinations(range(p.n), k)]


def _require_character(p: Presentation) -> tuple[int, ...]:
    if p.character is None:
        raise PresentationError("operation needs a linearization character")
    return p.character


@lru_cache(maxsize=None)
def _is_semistable(p: Presentation, A: frozenset) -> bool:
    chi = _require_character(p)
    cone = RationalCone(p.r, tuple(p.weight(j) for j in sorted(A)))
    return cone_contains(cone, chi)


def is_semistable(p: Presentation, A: Iterable[int]) -> bool:
    return _is_semistable(p, frozenset(A))


def in_X(p: Presentation, A: Iterable[int]) -> bool:
    """Whether points with support ``A`` lie in ``X``."""
    A = frozenset(A)
    if p.excised is not None:
        return all(A & s for s in p.excised)
    return is_semistable(p, A)


def consistency_check(p: Presentation) -> tuple[bool, list[list[str]]]:
    """Excised union equals the chi-unstable locus; returns mismatching supports."""
    _require_character(p)
    if p.excised is None:
        raise PresentationError("consistency check needs an excised list")
    bad = []
    for A in all_supports(p):
        excised = not all(A & s for s in p.excised)
        if excised == is_semistable(p, A):
            bad.append(p.label(A))
    return not bad, bad


def semistable_supports(p: Presentation) -> set[frozenset]:
    return {A for A in all_supports(p) if is_semistable(p, A)}


@dataclass(frozen=True)
class StabilizerInfo:
    dimension: int
    order: Optional[int]  # None means infinite

    @property
    def finite(self) -> bool:
        return self.order is not None


@lru_cache(maxsize=None)
def _stabilizer(p: Presentation, A: frozenset) -> StabilizerInfo:
    cols = [p.weight(j) for j in sorted(A)]
    W_A = [[c[i] for c in cols] for i in range(p.r)]
    dim = p.r - (rank(cols) if cols else 0)
    if dim:
        return StabilizerInfo(dim, None)
    _, torsion = cokernel_structure(W_A, len(cols))
    order = 1
    for d in torsion:
        order *= d
    return StabilizerInfo(0, order)


def stabilizer(p: Presentation, A: Iterable[int]) -> StabilizerInfo:
    """Generic stabilizer along the stratum with support ``A``."""
    return _stabilizer(p, frozenset(A))


@lru_cache(maxsize=None)
def _closed_support(p: Presentation, A: frozenset) -> frozenset:
    chi = _require_character(p)
    idx = sorted(A)
    cone = RationalCone(p.r, tuple(p.weight(j) for j in idx))
    try:
        face = minimal_face_containing(cone, chi)
    except ValueError:
        raise PresentationError(f"support {p.label(A)} is unstable") from None
    return frozenset(idx[i] for i in face)


def closed_orbit_support(p: Presentation, A: Iterable[int]) -> frozenset:
    """Support of the closed orbit in the fibre through a generic point of ``A``."""
    return _closed_support(p, frozenset(A))


class StabilityClass(enum.Enum):
    UNSTABLE = "unstable"
    SEMISTABLE = "semistable_nonstable"
    STABLE = "stable"
    PROPERLY_STABLE = "properly_stable"

    @property
    def is_semistable(self) -> bool:
        return self is not StabilityClass.UNSTABLE

    @property
    def is_stable(self) -> bool:
        return self in (StabilityClass.STABLE, StabilityClass.PROPERLY_STABLE)


@lru_cache(maxsize=None)
def _classify(p: Presentation, A: frozenset) -> StabilityClass:
    if not is_semistable(p, A):
        return StabilityClass.UNSTABLE
    if closed_orbit_support(p, A) != A:
        return StabilityClass.SEMISTABLE
    # a larger stratum degenerating onto A means the fibre has more orbits
    for B in _semistable_strict_supersets(p, A):
        if closed_orbit_support(p, B) == A:
            return StabilityClass.SEMISTABLE
    if stabilizer(p, A).dimension == 0:
        return StabilityClass.PROPERLY_STABLE
    return StabilityClass.STABLE


def _semistable_strict_supersets(p: Presentation, A: frozenset):
    rest = sorted(p.everything - A)
    for k in range(1, len(rest) + 1):
        for extra in combinations(rest, k):
            yield A | frozenset(extra)


def classify_support(p: Presentation, A: Iterable[int]) -> StabilityClass:
    return _classify(p, frozenset(A))


def stable_supports(p: Presentation, properly: bool = True) -> set[frozenset]:
    want = {StabilityClass.PROPERLY_STABLE} if properly else {StabilityClass.STABLE, StabilityClass.PROPERLY_STABLE}
    return {A for A in all_supports(p) if classify_support(p, A) in want}


def is_properly_stable(p: Presentation) -> bool:
    return p.character is not None and bool(stable_supports(p))


def slices_of_closed_locus(p: Presentation, supports: Iterable[frozenset]) -> list[frozenset]:
    """Minimal slices covering a closed invariant locus given by its strata."""
    return sorted((p.everything - A for A in antichain_max(supports)), key=_slice_key)


def slice_meets_X(p: Presentation, S: Iterable[int]) -> bool:
    return in_X(p, p.everything - frozenset(S))


@lru_cache(maxsize=None)
def _saturation(p: Presentation, S: frozenset) -> tuple[frozenset, ...]:
    U = [A for A in semistable_supports(p) if not (closed_orbit_support(p, A) & S)]
    return tuple(slices_of_closed_locus(p, U))


def saturation_of_slice(p: Presentation, S: Iterable[int]) -> list[frozenset]:
    """Minimal slices whose union is ``pi^-1(pi(V(x_S) cap X))``."""
    return list(_saturation(p, frozenset(S)))


@lru_cache(maxsize=None)
def invariant_charts(p: Presentation) -> tuple[frozenset, ...]:
    """Supports ``P`` of the semi-invariant monomials defining a minimal
    affine cover ``X = union D(x^P)``.

    A monomial of weight ``d chi`` (d >= 1) with support exactly ``P`` exists
    iff chi lies in the relative interior of ``Cone(w_j : j in P)``, i.e.
    iff ``P`` is its own closed-orbit support.
    """
    _require_character(p)
    ss = semistable_supports(p)
    P = [A for A in ss if closed_orbit_support(p, A) == A]
    return tuple(antichain_min(P))


def is_strong_slice(p: Presentation, S: Iterable[int]) -> tuple[bool, dict]:
    """Saturation test plus the chart-wise invariant-generator test."""
    S = frozenset(S)
    if not S:
        raise PresentationError("strongness is tested on nonempty slices")
    if not slice_meets_X(p, S):
        raise PresentationError(f"slice {p.label(S)} does not meet X")
    sat = saturation_of_slice(p, S)
    if sat != [S]:
        extra = [p.label(T) for T in sat if T != S]
        return False, {"reason": "saturation", "extra_components": extra}
    charts = []
    for P in invariant_charts(p):
        if P & S:
            charts.append({"chart": p.label(P), "empty": True})
            continue
        lat = Lattice.from_vectors(p.r, [p.weight(k) for k in sorted(P)])
        gens = {}
        for j in sorted(S):
            c = lattice_membership(lat, p.weight(j))
            if c is None:
                return False, {"reason": "chart", "chart": p.label(P), "coordinate": p.names[j]}
            # x_j * prod x_k^(-c_k) is invariant on D(x^P)
            gens[p.names[j]] = {p.names[k]: -int(ck) for k, ck in zip(sorted(P), c) if ck}
        charts.append({"chart": p.label(P), "empty": False, "generators": gens})
    return True, {"charts": charts}


def is_strong_hypersurface(p: Presentation, weight: Sequence[int]) -> bool:
    """Whether a generic semi-invariant ``f`` of this weight cuts a strong divisor."""
    chi = _require_character(p)
    return semi_invariant_multiple(chi, weight) not in (None, 0)


def semi_invariant_multiple(chi: Sequence[int], weight: Sequence[int]) -> Optional[int]:
    """``d`` with ``weight == d * chi`` (chi primitive), else None."""
    if not any(chi):
        return 0 if not any(weight) else None
    k = next(i for i, x in enumerate(chi) if x)
    if weight[k] % chi[k]:
        return None
    d = weight[k] // chi[k]
    if any(w != d * c for w, c in zip(weight, chi)) or d <= 0:
        return None
    return d


def image_support(p: Presentation, S: Iterable[int]) -> frozenset:
    """Closed-orbit support of the generic point of ``V(x_S)``; it labels
    the torus orbit of the good moduli space that ``pi(V(x_S))`` closes up."""
    return closed_orbit_support(p, p.everything - frozenset(S))


def is_generically_strong_slice(p: Presentation, S: Iterable[int]) -> bool:
    S = frozenset(S)
    if not slice_meets_X(p, S):
        raise PresentationError(f"slice {p.label(S)} does not meet X")
    own = image_support(p, S)
    for T in saturation_of_slice(p, S):
        if T == S:
            continue
        # pi(V_T) contains pi(V_S) iff the orbit of ``own`` lies in the closure
        # of the orbit of T's closed-orbit support
        if own <= image_support(p, T):
            return False
    return True


def max_stabilizer_locus(p: Presentation) -> tuple[int, list[frozenset]]:
    ss = semistable_supports(p)
    if not ss:
        raise PresentationError("semistable locus is empty")
    top = max(stabilizer(p, A).dimension for A in ss)
    U = [A for A in ss if stabilizer(p, A).dimension == top]
    return top, slices_of_closed_locus(p, U)


def unstable_components(p: Presentation) -> list[frozenset]:
    """Minimal slices covering the chi-unstable locus."""
    unstable = [A for A in all_supports(p) if not is_semistable(p, A)]
    return slices_of_closed_locus(p, unstable)


def with_excised_from_character(p: Presentation) -> Presentation:
    return Presentation(p.names, p.weights, p.character, tuple(unstable_components(p)))
