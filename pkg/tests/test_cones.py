import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from conftest import STABLE_FIXTURES, fan, presentation, sequence
from oracles import basic_feasible_solutions
from strongchow.cones import (
    Infeasible,
    Polytope,
    RationalCone,
    Unbounded,
    cone_contains,
    linprog_exact,
    minimal_face_containing,
    normal_fan,
)


@st.composite
def lp_instances(draw):
    m = draw(st.integers(1, 3))
    n = draw(st.integers(m, 5))
    A = draw(st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=m, max_size=m))
    b = draw(st.lists(st.integers(-4, 6), min_size=m, max_size=m))
    c = draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    return c, A, b


@settings(max_examples=150, deadline=None)
@given(lp_instances())
def test_linprog_exact_matches_scipy(inst):
    c, A, b = inst
    ref = linprog([-x for x in c], A_eq=A, b_eq=b, bounds=[(0, None)] * len(c), method="highs")
    try:
        val, x = linprog_exact(c, A, b)
    except Infeasible:
        assert ref.status == 2
        return
    except Unbounded:
        assert ref.status == 3
        return
    assert ref.status == 0
    assert all(v >= 0 for v in x)
    assert [sum(a * v for a, v in zip(row, x)) for row in A] == [Fraction(v) for v in b]
    assert abs(float(val) + ref.fun) < 1e-6


def test_cone_membership():
    c = RationalCone(2, ((1, 0), (1, 2)))
    assert cone_contains(c, [2, 1])
    assert not cone_contains(c, [0, 1])
    assert cone_contains(c, [1, 0])
    assert not cone_contains(c, [1, 0], relative_interior=True)
    assert cone_contains(c, [2, 1], relative_interior=True)


def test_minimal_face():
    c = RationalCone(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)))
    assert minimal_face_containing(c, [1, 1, 0]) == [0, 1, 3]
    assert minimal_face_containing(c, [0, 0, 0]) == []
    with pytest.raises(ValueError):
        minimal_face_containing(c, [-1, 0, 0])


def test_square_normal_fan():
    sq = Polytope(2, [((1, 0), 0), ((-1, 0), -1), ((0, 1), 0), ((0, -1), -1)])
    assert len(sq.vertices) == 4
    f, ineq, faces = normal_fan(sq)
    assert sorted(f.rays) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert len(f.maximal) == 4 and all(f.is_simplicial(c) for c in f.maximal)
    assert len(f.cones_of_dim(1)) == 4 and len(f.cones_of_dim(0)) == 1


def test_unbounded_polytope_rejected():
    P = Polytope(1, [((1,), 0)])
    with pytest.raises(ValueError):
        P.vertices


@pytest.mark.parametrize("name,count", [("egs", 3), ("p2-flag", 3), ("quadric", 5)])
def test_git_polytope_vertices_match_basic_solutions(name, count):
    p, qf = presentation(name), fan(name)
    verts = {tuple(qf.exponents(v)) for v in qf.polytope.vertices}
    ref = basic_feasible_solutions([list(r) for r in p.weights], list(p.character))
    assert verts == ref
    assert len(verts) == count


def _sample_directions(dim, k, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < k:
        v = [rng.randint(-97, 97) for _ in range(dim)]
        if any(v):
            out.append(v)
    return out


def _check_complete(f, seed):
    # every direction is covered, and no two maximal cones overlap in their interiors
    for v in _sample_directions(f.rank, 40, seed):
        closed, interior = 0, 0
        for c in f.maximal:
            cone = RationalCone(f.rank, tuple(f.rays[i] for i in c))
            closed += cone_contains(cone, v)
            interior += f.cone_dim(c) == f.rank and cone_contains(cone, v, relative_interior=True)
        assert closed >= 1, v
        assert interior <= 1, v


@pytest.mark.parametrize("name", STABLE_FIXTURES)
def test_quotient_fans_are_complete(name):
    _check_complete(fan(name).fan, seed=len(name))


@pytest.mark.parametrize("name", STABLE_FIXTURES)
def test_reichstein_stage_fans_are_complete(name):
    seq = sequence(name)
    for i in range(1, len(seq.stages)):
        _check_complete(seq.fan(i).fan, seed=i)


def test_quadric_fan_shape():
    f = fan("quadric").fan
    assert len(f.rays) == 5
    bad = [c for c in f.maximal if not f.is_simplicial(c)]
    assert len(bad) == 1 and len(bad[0]) == 4
