from itertools import combinations

import pytest

from monoid_corpus import NAMES, ORACLE_NAMES, monoid
from semifrob import cartier
from semifrob.cartier import FaceUnionIdeal, compatibility_probe, enumerate_fixed_ideals, is_fixed, membership
from semifrob.errors import LevelTooSmall, NotInMonoid
from semifrob.frob_hom import FracPoint, e_min, is_hom

WHITNEY = monoid("whitney")
X, Y = (0,), (1,)


def ideal(S, *keys):
    return FaceUnionIdeal(S, [S.cone.face(k) for k in keys])


def all_face_union_ideals(S):
    """Every face-union ideal except the zero ideal."""
    faces = [f for f in S.cone.faces if f != S.cone.top]
    out = {}
    for r in range(len(faces) + 1):
        for sub in combinations(faces, r):
            I = FaceUnionIdeal(S, sub)
            out[I.faces] = I
    return list(out.values())


def brute_fixed(S, p, I, B):
    """I = sum of phi(F^e_* I), checked monomial by monomial on a box.

    Compatibility: no map pi_a (a = t - w/q) takes a member x^w of I to a
    monomial x^t on the union.  Generation: every generator of I is the
    image of some member.  Levels run from e_min until q exceeds B, so
    maps shifting by any point of the box are available.
    """
    m = e_min(S, p)
    top = m
    while p ** top <= B:
        top += 1
    pts = S.points(B)
    members = [w for w in pts if not I.on_union(w)]
    union = [t for t in pts if I.on_union(t)]

    def hom(target, w, e):
        q = p ** e
        return is_hom(S, p, e, FracPoint(tuple(q * x - y for x, y in zip(target, w)), e, p)).decision

    levels = range(m, top + 1)
    if any(hom(t, w, e) for e in levels for w in members for t in union):
        return False
    return all(any(hom(g, w, e) for e in levels for w in members) for g in cartier.generators_bounded(S, I))


# -- spec examples ---------------------------------------------------------------

def test_membership_examples():
    tau = cartier.test_ideal(WHITNEY, 3)
    assert membership(tau, (0, 1))
    assert not membership(tau, (2, 0))
    assert membership(FaceUnionIdeal(WHITNEY, ()), (0, 0))
    with pytest.raises(NotInMonoid):
        membership(tau, (1, 0))


def test_is_fixed_examples():
    assert is_fixed(WHITNEY, 3, ideal(WHITNEY, X))
    assert not is_fixed(WHITNEY, 3, ideal(WHITNEY, Y))
    assert is_fixed(WHITNEY, 2, ideal(WHITNEY, X))
    assert not is_fixed(WHITNEY, 2, FaceUnionIdeal(WHITNEY, ()))


def test_enumerate_examples():
    assert enumerate_fixed_ideals(WHITNEY, 3) == [ideal(WHITNEY, X), FaceUnionIdeal(WHITNEY, ())]
    quad = monoid("quadrant")
    for p in (2, 3, 5):
        assert enumerate_fixed_ideals(quad, p) == [FaceUnionIdeal(quad, ())]
    assert enumerate_fixed_ideals(WHITNEY, 2) == [ideal(WHITNEY, X)]


def test_test_ideal_examples():
    tau = cartier.test_ideal(WHITNEY, 3)
    assert tau == ideal(WHITNEY, X)
    assert cartier.generators_bounded(WHITNEY, tau) == [(0, 1), (1, 1)]
    assert cartier.test_ideal(monoid("quadrant"), 3).is_unit
    cube = monoid("cube")
    planes = [f.key for f in cube.cone.faces if f.dim == 2 and f in cube.proper_rufs]
    assert cartier.test_ideal(cube, 3) == ideal(cube, *planes)
    assert len(planes) == 2


def test_non_f_pure_examples():
    assert cartier.non_f_pure_ideal(WHITNEY, 3).is_unit
    assert cartier.non_f_pure_ideal(WHITNEY, 2) == ideal(WHITNEY, X)
    ex45 = monoid("ex45")
    assert cartier.non_f_pure_ideal(ex45, 2) == ideal(ex45, X)


def test_generators_bounded_examples():
    assert cartier.generators_bounded(WHITNEY, ideal(WHITNEY, X), 4) == [(0, 1), (1, 1)]
    assert cartier.generators_bounded(WHITNEY, FaceUnionIdeal(WHITNEY, ()), 1) == [(0, 0)]
    cube = monoid("cube")
    gens = cartier.generators_bounded(cube, cartier.test_ideal(cube, 3), 3)
    assert sorted(gens) == [(1, 1, 0), (1, 2, 0), (2, 1, 0)]


def test_compatibility_probe_examples():
    assert compatibility_probe(WHITNEY, 3, cartier.test_ideal(WHITNEY, 3), 1, 9)
    res = compatibility_probe(WHITNEY, 3, ideal(WHITNEY, Y), 1, 9)
    assert not res.ok
    a, u, t = res.witness
    assert WHITNEY.cone.face_contains(WHITNEY.cone.face(Y), t)
    assert not ideal(WHITNEY, Y).on_union(u.numerator)
    assert compatibility_probe(WHITNEY, 2, ideal(WHITNEY, X), 2, 9)
    with pytest.raises(LevelTooSmall):
        compatibility_probe(WHITNEY, 2, ideal(WHITNEY, X), 1, 9)


def test_ideal_order():
    tau = ideal(WHITNEY, X)
    unit = FaceUnionIdeal(WHITNEY, ())
    assert tau <= unit and not unit <= tau
    assert tau + unit == unit
    assert (tau & unit) == tau


# -- properties --------------------------------------------------------------------

@pytest.mark.parametrize("name", NAMES)
def test_is_fixed_matches_brute_force(name):
    S = monoid(name)
    B = 6 if S.cone.ambient_rank < 3 else 3
    for p in (2, 3, 5):
        for I in all_face_union_ideals(S):
            assert is_fixed(S, p, I) == brute_fixed(S, p, I, B), (p, I)


@pytest.mark.parametrize("name", ORACLE_NAMES)
def test_fixed_ideal_lattice(name):
    S = monoid(name)
    for p in (2, 3, 5):
        fixed = enumerate_fixed_ideals(S, p)
        assert fixed
        tau, sigma = cartier.test_ideal(S, p), cartier.non_f_pure_ideal(S, p)
        assert fixed[0] == tau and fixed[-1] == sigma
        for I in fixed:
            assert tau <= I <= sigma
        for I, J in combinations(fixed, 2):
            assert is_fixed(S, p, I & J) and is_fixed(S, p, I + J)
            assert not (J < I)  # sorted smallest first
        box = S.points(4 if S.cone.ambient_rank < 3 else 3)
        for I in fixed:
            for f in S.classify(p).p_faces:
                assert not any(membership(I, u) for u in box if S.cone.face_contains(f, u))
            for u in box[:15]:
                for k in (2, 3):
                    assert membership(I, u) == membership(I, tuple(k * x for x in u))


@pytest.mark.parametrize("name", ["whitney", "ex45", "sn_3", "sn_5", "quadrant_2_3", "a1_ray3", "cube",
                                  "octant_two_planes"])
def test_fixed_ideals_pass_probe(name):
    S = monoid(name)
    B = 9 if S.cone.ambient_rank < 3 else 5
    for p in (2, 3, 5):
        for I in enumerate_fixed_ideals(S, p):
            assert compatibility_probe(S, p, I, e_min(S, p), B).ok


@pytest.mark.parametrize("name", ["whitney", "cube", "square_cone_edge", "octant_axes_2_3"])
def test_default_generator_bound_is_complete(name):
    S = monoid(name)
    for I in all_face_union_ideals(S):
        base = cartier.generators_bounded(S, I)
        assert base == cartier.generators_bounded(S, I, cartier.default_height_bound(S, I) + 3)
