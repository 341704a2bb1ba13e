from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import STABLE_FIXTURES, catalogue, presentation, ring, sequence
from strongchow.git import (
    Presentation,
    in_X,
    is_properly_stable,
    max_stabilizer_locus,
    semistable_supports,
    stabilizer,
    stable_supports,
    unstable_components,
    with_excised_from_character,
)
from strongchow.reichstein import (
    AlreadyDM,
    ReichsteinError,
    _blowup_data,
    _slice_classes,
    _twisted,
    blowup_slice,
    check_fan_tower,
    composite_pushforward,
    dm_pushforward,
    properly_stable_correspondence,
    pullback_classes,
    pullback_linear_form_identity,
    reichstein_agreement_check,
    reichstein_sequence,
    reichstein_step,
    slice_relation_images,
    strict_transform_slice,
)
from strongchow.space_chow import (
    fundamental_cycle,
    hyperplane_power,
    image_cycle,
    quotient_fan,
    toric_chow_presentation,
)
from strongchow.stack_chow import build_ring, slice_polynomial
from strongchow.strong import parse_polynomial


def el(R, text):
    return R.element(parse_polynomial(text, R.variables))


def two_center_example():
    # {x1,x2} and {y1,y2} span different planes through chi, so the
    # maximal stabilizer locus has two disjoint components
    W = [[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 0, 1]]
    return with_excised_from_character(Presentation(("x1", "x2", "y1", "y2"), W, (1, 1, 1)))


def test_blowup_of_plane_at_origin():
    p = Presentation(("y1", "y2"), (), excised=[])
    q = blowup_slice(p, {0, 1})
    assert q.names == ("y1~", "y2~", "E1")
    assert q.weights == ((1, 1, -1),)
    assert q.excised == (frozenset({0, 1}),)


def test_egs_blowup_bookkeeping():
    p = presentation("egs")
    S = p.slice("x", "y", "z", "w")
    q = blowup_slice(Presentation(p.names, p.weights, None, p.excised), S)
    assert (q.n, q.r) == (6, 4)
    assert q.weights[-1] == (1, 1, 1, 1, 0, -1)
    assert all(row[-1] == 0 for row in q.weights[:-1])
    step = sequence("egs").steps[0]
    assert step.stabilizer_before == 2 and step.stabilizer_after < 2
    # with a character, the saturation's strict transforms must be removed too
    with pytest.raises(ReichsteinError):
        blowup_slice(p, S)
    extra = [T for T in step.saturation if T != S]
    assert blowup_slice(p, S, extra).character == step.target.character


def test_strict_transform_slice():
    S = frozenset({0, 1})
    assert strict_transform_slice(S, frozenset({3})) == frozenset({3})
    assert strict_transform_slice(S, S) == S


def test_egs_strict_transforms_excised():
    step = sequence("egs").steps[0]
    p = step.source
    assert sorted(p.label(T) for T in step.saturation) == [["x", "w"], ["y", "w"], ["z"]]
    for T in step.saturation:
        assert not in_X(step.target, step.target.everything - T)


def test_blowup_away_from_exceptional_divisor_is_the_original():
    # eps != 0 recovers the original space minus the center
    for name in STABLE_FIXTURES:
        p = presentation(name)
        base = Presentation(p.names, p.weights, None, p.excised)
        for S in max_stabilizer_locus(p)[1]:
            q = blowup_slice(base, S)
            E = q.n - 1
            new = {A - {E} for A in map(frozenset, _supports(q.n)) if E in A and in_X(q, A)}
            old = {A for A in map(frozenset, _supports(p.n)) if in_X(p, A) and A & S}
            assert new == old
            for A in old:
                assert stabilizer(p, A).order == stabilizer(q, A | {E}).order


def _supports(n):
    from itertools import combinations

    return [c for k in range(n + 1) for c in combinations(range(n), k)]


@pytest.mark.parametrize("name", STABLE_FIXTURES)
def test_sequence_terminates_dm_with_strict_decrease(name):
    p = presentation(name)
    seq = sequence(name)
    top = max_stabilizer_locus(p)[0]
    assert 1 <= len(seq.steps) <= top
    dims = [s.stabilizer_before for s in seq.steps] + [max_stabilizer_locus(seq.terminal)[0]]
    assert dims[0] == top and dims[-1] == 0
    assert all(a > b for a, b in zip(dims, dims[1:]))
    for q in seq.stages:
        assert is_properly_stable(q)
    for A in semistable_supports(seq.terminal):
        assert stabilizer(seq.terminal, A).finite


def test_sequence_lengths():
    assert [len(sequence(n).steps) for n in ("egs", "p2-flag", "quadric")] == [2, 1, 1]
    assert sequence("egs").steps[-1].target.character == (2, 2, 2, 2, 1)


@pytest.mark.parametrize("name", STABLE_FIXTURES)
def test_fan_tower_and_stable_correspondence(name):
    seq = sequence(name)
    assert check_fan_tower(seq)
    for stp in seq.steps:
        assert properly_stable_correspondence(stp)
        assert set(unstable_components(stp.target)) == set(stp.target.excised)


def test_already_dm_and_unstable_inputs():
    seq = sequence("p2-flag")
    with pytest.raises(AlreadyDM):
        reichstein_step(seq.terminal)
    assert reichstein_sequence(seq.terminal).steps == []
    with pytest.raises(ReichsteinError):
        reichstein_sequence(presentation("a2-unstable"))


@pytest.mark.parametrize("name", STABLE_FIXTURES)
def test_pullbacks_well_defined(name):
    seq = sequence(name)
    rings = [ring(name)] + [seq.ring(i) for i in range(1, len(seq.stages))]
    for a, b in zip(rings, rings[1:]):
        assert pullback_classes(a, b, a.one()) == b.one()
        for g in a.gens():
            pullback_classes(a, b, g)


@pytest.mark.parametrize("name", STABLE_FIXTURES)
def test_pullback_linear_form_identity(name):
    for stp in sequence(name).steps:
        for j in stp.centers[0]:
            assert pullback_linear_form_identity(stp, j)


@pytest.mark.parametrize("name", STABLE_FIXTURES)
def test_composite_of_fundamental_class(name):
    seq, R = sequence(name), ring(name)
    assert composite_pushforward(seq, R.one(), 0) == fundamental_cycle(seq.fan(0).fan)


@pytest.mark.parametrize(
    "name,cls,k,power",
    [("p2-flag", "s + t", 1, 1), ("egs", "s + t + u", 1, 1), ("egs", "(s + t)*(s + t + u)", 2, 2)],
)
def test_composite_pushforward_plane(name, cls, k, power):
    seq, R = sequence(name), ring(name)
    qf = seq.fan(0)
    img = composite_pushforward(seq, el(R, cls), k)
    assert toric_chow_presentation(qf.fan, qf.dim - k).equal(img, hyperplane_power(qf, power))


def test_composite_pushforward_quadric_point():
    seq, R = sequence("quadric"), ring("quadric")
    qf = seq.fan(0)
    img = composite_pushforward(seq, el(R, "s*t*(s + t)"), 3)
    assert toric_chow_presentation(qf.fan, 0).coordinates(img) in ([1], [-1])


@pytest.mark.parametrize("name", STABLE_FIXTURES)
def test_reichstein_agreement(name):
    rep = reichstein_agreement_check(presentation(name), sequence(name), ring(name), catalogue(name))
    assert rep.holds, [r for r in rep.rows if not r["agree"]]
    assert {r["cycle"] for r in rep.rows} >= {"[X]"}


def test_dm_pushforward_halves_mu2_slice():
    # weighted projective line P(1,2): V(x1) has generic stabilizer mu_2
    p = with_excised_from_character(Presentation(("x1", "x2"), [[1, 2]], (1,)))
    R, qf = build_ring(p), quotient_fan(p)
    S = p.slice("x1")
    assert stabilizer(p, p.everything - S).order == 2
    img = dm_pushforward(p, R, qf, R.element(slice_polynomial(p, S)), 1)
    assert img == image_cycle(p, qf, S).scale(Fraction(1, 2))
    point = dm_pushforward(p, R, qf, R.element(slice_polynomial(p, p.slice("x2"))), 1)
    # both points of P(1,2) have degree one on the coarse space
    full = toric_chow_presentation(qf.fan, 0)
    assert full.equal(img.scale(2), point)


@pytest.mark.parametrize("name", STABLE_FIXTURES)
def test_slice_relations_push_to_zero(name):
    seq = sequence(name)
    n = len(seq.steps)
    q, R, qf = seq.terminal, seq.ring(n), seq.fan(n)
    for k in range(q.dim + 1):
        pres = toric_chow_presentation(qf.fan, qf.dim - k)
        assert all(pres.is_zero(c) for c in slice_relation_images(q, R, qf, k))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 2), st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_dm_pushforward_decomposition_independent(k, coeffs):
    seq = sequence("egs")
    n = len(seq.steps)
    q, R, qf = seq.terminal, seq.ring(n), seq.fan(n)
    slices = _slice_classes(q, R, k)
    dec = [(S, Fraction(c)) for (S, _), c in zip(slices, coeffs) if c]
    if not dec:
        return
    poly = slice_polynomial(q, dec[0][0]) * 0
    for S, c in dec:
        poly = poly + slice_polynomial(q, S) * int(c)
    cls = R.element(poly)
    by_solver = dm_pushforward(q, R, qf, cls, k)
    by_hand = dm_pushforward(q, R, qf, cls, k, decomposition=dec)
    assert toric_chow_presentation(qf.fan, qf.dim - k).equal(by_solver, by_hand)


def test_dm_pushforward_rejects_wrong_decomposition():
    seq = sequence("p2-flag")
    q, R, qf = seq.terminal, seq.ring(1), seq.fan(1)
    (S, _), (T, _) = _slice_classes(q, R, 1)[:2]
    with pytest.raises(ValueError):
        dm_pushforward(q, R, qf, R.element(slice_polynomial(q, S)), 1, decomposition=[(T, Fraction(3))])


def test_two_centers_blow_up_in_either_order():
    p = two_center_example()
    stp = reichstein_step(p)
    assert len(stp.centers) == 2 and stp.stabilizer_after == 0
    extra = [T for T in stp.saturation if T not in stp.centers]
    cur = p
    for i, C in enumerate(reversed(stp.centers)):
        names, weights, excised = _blowup_data(cur, C, extra if i == 1 else [])
        cur = Presentation(names, weights, None, excised)
    other = _twisted(cur.names, cur.weights, cur.excised, p.character, 2)

    # swap the two exceptional coordinates and the two new torus rows
    n, r = p.n, p.r
    perm = list(range(n)) + [n + 1, n]

    def relabel(A):
        return frozenset(perm[j] for j in A)

    rows = [list(x) for x in other.weights[:r]] + [list(other.weights[r + 1]), list(other.weights[r])]
    swapped = [[row[perm[j]] for j in range(n + 2)] for row in rows]
    assert sorted(map(tuple, swapped)) == sorted(stp.target.weights)
    assert {relabel(A) for A in stable_supports(other)} == stable_supports(stp.target)
    assert {relabel(T) for T in unstable_components(other)} == set(unstable_components(stp.target))
    assert check_fan_tower(reichstein_sequence(p))
