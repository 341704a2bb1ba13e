"""Reichstein transforms of toric quotient stacks and the composite pushforward.

Blowing up the coordinate slice ``V(x_S)`` keeps one coordinate per old
index (``x_j = y_j * eps`` for ``j`` in ``S``) and appends ``eps``; the new
torus factor gives ``y_j`` weight 1 and ``eps`` weight -1.  The character of
the blow-up is ``(N chi, 1)``, the twist ``L^N(-E)``; ``N`` is the least
value whose unstable locus is the combinatorial one (pulled back excised
list, the irrelevant slice and the strict transforms of the saturation).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Optional, Sequence

from .git import (
    Presentation,
    antichain_min,
    consistency_check,
    is_properly_stable,
    max_stabilizer_locus,
    saturation_of_slice,
    slice_meets_X,
    stabilizer,
    stable_supports,
    unstable_components,
)
from .lattice import rational_kernel, rational_solve
from .space_chow import (
    QuotientFan,
    SpaceCycle,
    image_cycle,
    is_refinement,
    quotient_fan,
    toric_chow_presentation,
    toric_pushforward,
)
from .stack_chow import GradedPolynomial, StackChowRing, StackClass, build_ring, slice_polynomial
from .strong import StrongCycle, strong_pushforward

MAX_TWIST = 200


class ReichsteinError(ValueError):
    pass


class AlreadyDM(ReichsteinError):
    pass


def _key(s):
    return (len(s), sorted(s))


def strict_transform_slice(center: frozenset, T: frozenset) -> frozenset:
    """Same index set read in the blown-up coordinates.

    ``T == center`` gives the irrelevant slice, whose complement is empty
    inside the blow-up.
    """
    return frozenset(T)


def _pullback_slice(center: frozenset, T: frozenset, eps: int) -> list[frozenset]:
    """Minimal primes of the preimage of ``V(x_T)``."""
    if not T & center:
        return [frozenset(T)]
    return [frozenset(T), frozenset(T - center) | {eps}]


def _fresh_name(names: Sequence[str], base: str) -> str:
    k = 1
    while f"{base}{k}" in names:
        k += 1
    return f"{base}{k}"


def _blowup_data(p: Presentation, S: frozenset, extra_excised: Sequence[frozenset] = ()):
    if not S:
        raise ReichsteinError("cannot blow up the empty slice")
    if p.excised is not None and not slice_meets_X(p, S):
        raise ReichsteinError(f"center {p.label(S)} is excised")
    n = p.n
    names = [x if j not in S else x + "~" for j, x in enumerate(p.names)]
    names.append(_fresh_name(names, "E"))
    weights = [list(row) + [0] for row in p.weights]
    weights.append([1 if j in S else 0 for j in range(n)] + [-1])
    excised: list[frozenset] = []
    for T in p.excised or ():
        excised.extend(_pullback_slice(S, T, n))
    excised.append(frozenset(S))
    excised.extend(extra_excised)
    return names, weights, antichain_min(excised)


def _twisted(names, weights, excised, chi: Sequence[int], new_rows: int, twist: Optional[int] = None) -> Presentation:
    """Presentation with character ``(N chi, 1, ..., 1)`` matching ``excised``."""
    target = sorted(excised, key=_key)
    for N in [twist] if twist else range(1, MAX_TWIST + 1):
        full = tuple(N * c for c in chi) + (1,) * new_rows
        q = Presentation(names, weights, full, excised)
        if q.character != full:
            continue  # not primitive; a smaller N gives the same ray
        if sorted(unstable_components(q), key=_key) == target:
            return q
    raise ReichsteinError(f"no twist N <= {MAX_TWIST} reproduces the excised locus")


def blowup_slice(p: Presentation, S, extra_excised: Sequence[frozenset] = (), twist: Optional[int] = None) -> Presentation:
    """Blow-up of ``X`` along ``V(x_S)``, minus ``extra_excised``.

    With a character on ``p`` the output carries ``(N chi, 1)`` for the least
    ``N`` (or the given ``twist``) reproducing the excised list.
    """
    names, weights, excised = _blowup_data(p, frozenset(S), extra_excised)
    if p.character is None:
        return Presentation(names, weights, None, excised)
    return _twisted(names, weights, excised, p.character, 1, twist)


@dataclass
class ReichsteinStep:
    source: Presentation
    target: Presentation
    centers: list[frozenset]
    saturation: list[frozenset]
    stabilizer_before: int
    stabilizer_after: int
    exceptional: list[int]
    intermediate: list[Presentation] = field(default_factory=list)

    def serialize(self) -> dict:
        return {
            "centers": [self.source.label(c) for c in self.centers],
            "saturation": [self.source.label(t) for t in self.saturation],
            "stabilizer_before": self.stabilizer_before,
            "stabilizer_after": self.stabilizer_after,
            "coordinates": list(self.target.names),
            "weights": [list(r) for r in self.target.weights],
            "character": list(self.target.character),
            "excised": [self.target.label(t) for t in self.target.excised],
        }


def reichstein_step(p: Presentation) -> ReichsteinStep:
    if not is_properly_stable(p):
        raise ReichsteinError("presentation is not properly stable")
    top, centers = max_stabilizer_locus(p)
    if top == 0:
        raise AlreadyDM("all semistable stabilizers are finite")
    centers = sorted(centers, key=_key)
    sat: list[frozenset] = []
    for C in centers:
        for T in saturation_of_slice(p, C):
            if T not in sat:
                sat.append(T)
    sat.sort(key=_key)
    cur = p
    mids = []
    eps = []
    for i, C in enumerate(centers):
        extra = [strict_transform_slice(C, T) for T in sat if T not in centers] if i == len(centers) - 1 else []
        names, weights, excised = _blowup_data(cur, C, extra)
        cur = Presentation(names, weights, None, excised)
        eps.append(cur.n - 1)
        mids.append(cur)
    cur = _twisted(cur.names, cur.weights, cur.excised, p.character, len(centers))
    after = max_stabilizer_locus(cur)[0]
    if after >= top:
        raise ReichsteinError(f"maximal stabilizer dimension did not drop ({top} -> {after})")
    if not is_properly_stable(cur):
        raise ReichsteinError("blow-up is not properly stable")
    ok, bad = consistency_check(cur)
    if not ok:
        raise ReichsteinError(f"excised list and character disagree on {bad}")
    return ReichsteinStep(p, cur, centers, sat, top, after, eps, mids[:-1])


@dataclass
class ReichsteinSequence:
    initial: Presentation
    steps: list[ReichsteinStep]
    kernels: list[list[list[int]]]  # ker W basis at every stage, in one lattice
    _fans: dict = field(default_factory=dict, repr=False)
    _rings: dict = field(default_factory=dict, repr=False)

    @property
    def stages(self) -> list[Presentation]:
        return [self.initial] + [s.target for s in self.steps]

    @property
    def terminal(self) -> Presentation:
        return self.stages[-1]

    def fan(self, i: int) -> QuotientFan:
        if i not in self._fans:
            self._fans[i] = quotient_fan(self.stages[i], self.kernels[i])
        return self._fans[i]

    def ring(self, i: int, degree_bound: Optional[int] = None) -> StackChowRing:
        key = (i, degree_bound)
        if key not in self._rings:
            self._rings[key] = build_ring(self.stages[i], degree_bound)
        return self._rings[key]

    def serialize(self) -> dict:
        return {"steps": [s.serialize() for s in self.steps], "length": len(self.steps)}


def _extend_kernel(K: list[list[int]], centers: Sequence[frozenset]) -> list[list[int]]:
    K = [list(r) for r in K]
    for C in centers:
        K.append([sum(K[j][b] for j in C) for b in range(len(K[0]))])
    return K


def reichstein_sequence(p: Presentation, max_steps: int = 20) -> ReichsteinSequence:
    if not is_properly_stable(p):
        raise ReichsteinError("presentation is not properly stable")
    qf0 = quotient_fan(p)
    kernels = [qf0.kernel]
    steps: list[ReichsteinStep] = []
    cur = p
    for _ in range(max_steps):
        if max_stabilizer_locus(cur)[0] == 0:
            break
        st = reichstein_step(cur)
        steps.append(st)
        kernels.append(_extend_kernel(kernels[-1], st.centers))
        cur = st.target
    else:
        raise ReichsteinError("sequence did not terminate")
    seq = ReichsteinSequence(p, steps, kernels)
    seq._fans[0] = qf0
    return seq


def check_fan_tower(seq: ReichsteinSequence) -> bool:
    return all(is_refinement(seq.fan(i + 1).fan, seq.fan(i).fan) for i in range(len(seq.steps)))


def properly_stable_correspondence(step: ReichsteinStep) -> bool:
    """Properly stable supports away from the exceptional divisors match, with
    their stabilizer orders."""
    src, tgt = step.source, step.target
    E = frozenset(step.exceptional)
    old = stable_supports(src)
    new = {A for A in stable_supports(tgt) if E <= A}
    if {A | E for A in old} != new:
        return False
    return all(stabilizer(src, A).order == stabilizer(tgt, A | E).order for A in old)


# --------------------------------------------------------------------------
# Pullback and pushforward
# --------------------------------------------------------------------------


def _pad(poly: GradedPolynomial, nvars: int) -> GradedPolynomial:
    extra = (0,) * (nvars - poly.nvars)
    return GradedPolynomial.from_dict(nvars, {e + extra: c for e, c in poly.terms})


def pullback_classes(source: StackChowRing, target: StackChowRing, c: StackClass, check: bool = True) -> StackClass:
    """Variable inclusion ``t_i -> t_i`` into the ring of a later stage."""
    if c.ring is not source:
        raise ValueError("class does not belong to the source ring")
    if check:
        for g in source.relations:
            if g.degrees()[0] <= target.degree_bound and not target.contains_relation(_pad(g, target.nvars)):
                raise ReichsteinError(f"pullback not well defined: {g.format(source.variables)} survives")
    return target.element(_pad(c.poly, target.nvars))


def _slice_classes(p: Presentation, ring: StackChowRing, k: int) -> list[tuple[frozenset, list[int]]]:
    out = []
    for S in combinations(range(p.n), k):
        S = frozenset(S)
        if slice_meets_X(p, S):
            out.append((S, ring.vector(slice_polynomial(p, S), k)))
    return out


def _slice_image(p: Presentation, qf: QuotientFan, S: frozenset) -> SpaceCycle:
    e = stabilizer(p, p.everything - S).order
    if e is None:
        raise ReichsteinError(f"slice {p.label(S)} has infinite generic stabilizer; stack is not DM")
    return image_cycle(p, qf, S).scale(Fraction(1, e))


def slice_decomposition(p: Presentation, ring: StackChowRing, c: StackClass, k: int) -> Optional[list[tuple[frozenset, Fraction]]]:
    slices = _slice_classes(p, ring, k)
    _, R, _ = ring.piece(k)
    rels = [list(g) for g in R.generators]
    M = [[v[i] for _, v in slices] + [g[i] for g in rels] for i in range(len(ring.piece(k)[0]))]
    sol = rational_solve(M, ring.vector(c.poly, k), len(slices) + len(rels))
    if sol is None:
        return None
    return [(S, x) for (S, _), x in zip(slices, sol) if x]


def dm_pushforward(p: Presentation, ring: StackChowRing, qf: QuotientFan, c: StackClass, k: int,
                   decomposition: Optional[Sequence[tuple[frozenset, Fraction]]] = None) -> SpaceCycle:
    """``sum q_S e_S^{-1} [pi(V(x_S))]`` for ``c = sum q_S [V(x_S)]``."""
    if max_stabilizer_locus(p)[0] != 0:
        raise ReichsteinError("dm_pushforward needs a Deligne-Mumford presentation")
    dec = decomposition if decomposition is not None else slice_decomposition(p, ring, c, k)
    if dec is None:
        raise ReichsteinError(f"class {c} is outside the span of slice classes")
    if decomposition is not None:
        total = GradedPolynomial(ring.nvars)
        for S, x in dec:
            total = total + slice_polynomial(p, S) * int(x * _den(dec))
        if not ring.contains_relation(total - c.poly * _den(dec), rational=True):
            raise ValueError("decomposition does not represent the class")
    out = SpaceCycle.make(qf.dim - k, {})
    for S, x in dec:
        out = out + _slice_image(p, qf, S).scale(x)
    return out


def _den(dec) -> int:
    d = 1
    for _, x in dec:
        d = lcm(d, Fraction(x).denominator)
    return d


def slice_relation_images(p: Presentation, ring: StackChowRing, qf: QuotientFan, k: int) -> list[SpaceCycle]:
    """Images of a basis of rational relations among slice classes; all must vanish."""
    slices = _slice_classes(p, ring, k)
    _, R, _ = ring.piece(k)
    rels = [list(g) for g in R.generators]
    nb = len(ring.piece(k)[0])
    M = [[v[i] for _, v in slices] + [g[i] for g in rels] for i in range(nb)]
    ker = rational_kernel(M, len(slices) + len(rels)) if nb else []
    out = []
    for v in ker:
        img = SpaceCycle.make(qf.dim - k, {})
        for (S, _), x in zip(slices, v):
            if x:
                img = img + _slice_image(p, qf, S).scale(x)
        out.append(img)
    return out


def composite_pushforward(seq: ReichsteinSequence, c: StackClass, k: int) -> SpaceCycle:
    """``fbar_* pi_{n*} f^*`` from the initial stack to ``X_0``."""
    n = len(seq.steps)
    rings = [c.ring] + [seq.ring(i) for i in range(1, n + 1)]
    cur = c
    for i in range(n):
        cur = pullback_classes(rings[i], rings[i + 1], cur)
    img = dm_pushforward(seq.terminal, rings[n], seq.fan(n), cur, k)
    return toric_pushforward(seq.fan(n).fan, seq.fan(0).fan, img) if n else img


@dataclass
class AgreementReport:
    rows: list[dict]

    @property
    def holds(self) -> bool:
        return all(r["agree"] for r in self.rows)

    def serialize(self) -> dict:
        return {"holds": self.holds, "cycles": self.rows}


def reichstein_agreement_check(p: Presentation, seq: ReichsteinSequence, ring: StackChowRing,
                               catalogue: Sequence[StrongCycle]) -> AgreementReport:
    qf = seq.fan(0)
    rows = []
    for z in catalogue:
        if z.e is None:
            continue
        k = z.codim
        pres = toric_chow_presentation(qf.fan, qf.dim - k)
        direct = strong_pushforward(p, qf, z)
        row = {"cycle": z.label, "codim": k, "strong": direct.serialize()}
        try:
            comp = composite_pushforward(seq, z.stack_class, k)
            row["composite"] = comp.serialize()
            row["agree"] = pres.equal(direct, comp, rational=True)
        except ReichsteinError as e:
            row["error"] = str(e)
            row["agree"] = False
        rows.append(row)
    return AgreementReport(rows)


def pullback_linear_form_identity(step: ReichsteinStep, j: int) -> bool:
    """``l_j`` pulls back to ``l'_j + l'_eps`` when ``j`` lies in the first center."""
    src, tgt = step.source, step.target
    eps = step.exceptional[0]
    lhs = list(src.weight(j)) + [0] * (tgt.r - src.r)
    rhs = [a + b for a, b in zip(tgt.weight(j), tgt.weight(eps))]
    return lhs == rhs
