from itertools import permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semifrob.errors import InfiniteQuotient, NotASublattice, RankMismatch
from semifrob.exact_linalg import (
    QuotientInvariants,
    Sublattice,
    canonical_form,
    index,
    intersect,
    intersect_with_span,
    member,
    p_torsion_exponent,
    prime_to_p_saturation,
    quotient_invariants,
)

Z2 = Sublattice.full(2)
Z1 = Sublattice.full(1)


def lat(*vs, n=None):
    return canonical_form(vs, n)


def leibniz_det(m):
    n = len(m)
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= m[i][perm[i]]
        total += term
    return total


def coset_count(small: Sublattice, d: int) -> int:
    """Classes of Z^n / small among the points of [0, d)^n (d a multiple of the exponent)."""
    reps = []
    n = small.ambient_rank
    for x in product(range(d), repeat=n):
        if not any(member(small, tuple(a - b for a, b in zip(x, r))) for r in reps):
            reps.append(x)
    return len(reps)


# -- spec examples ---------------------------------------------------------------

def test_canonical_form_examples():
    assert lat((2, 0), (4, 0)) == Sublattice(2, ((2, 0),))
    assert canonical_form([], 2) == Sublattice.zero(2)
    full = lat((2, 0), (0, 1), (1, 1))
    assert full == Z2
    assert all(member(full, e) for e in [(1, 0), (0, 1)])


def test_quotient_invariants_examples():
    q = quotient_invariants(lat((1, 0)), lat((2, 0)))
    assert q == QuotientInvariants((2,), 0)
    assert quotient_invariants(lat((1, 0)), lat((1, 0))) == QuotientInvariants((), 0)
    assert quotient_invariants(lat((1, 0)), lat((4, 0))).invariant_factors == (4,)


def test_quotient_requires_containment():
    with pytest.raises(NotASublattice):
        quotient_invariants(lat((2, 0)), lat((1, 0)))


def test_p_torsion_examples():
    assert p_torsion_exponent(QuotientInvariants((4,), 0), 2) == 2
    assert p_torsion_exponent(QuotientInvariants((2,), 0), 3) == 0
    assert p_torsion_exponent(QuotientInvariants((6, 12), 0), 2) == 2
    with pytest.raises(InfiniteQuotient):
        p_torsion_exponent(QuotientInvariants((), 1), 2)


def test_prime_to_p_saturation_examples():
    assert prime_to_p_saturation(lat((1, 0)), lat((4, 0)), 2) == lat((4, 0))
    assert prime_to_p_saturation(lat((1, 0)), lat((1, 0)), 5) == lat((1, 0))
    assert prime_to_p_saturation(Z1, lat((6,)), 2) == lat((2,))


def test_prime_to_p_saturation_brute_force_rank1():
    # x in Z with m x in 6Z for some m coprime to 2: the residues mod 6 of order prime to 2
    expected = {x for x in range(6) if any((m * x) % 6 == 0 for m in (1, 3, 5))}
    got = prime_to_p_saturation(Z1, lat((6,)), 2)
    assert {x for x in range(6) if member(got, (x,))} == expected == {0, 2, 4}


def test_intersect_examples():
    assert intersect(lat((2, 0), (0, 1)), lat((1, 0), n=2)) == lat((2, 0))
    assert not member(lat((2, 0)), (3, 0))
    assert intersect_with_span(Z2, [(1, 0)]) == lat((1, 0))


def test_intersect_brute_force():
    a, b = lat((2, 0), (0, 1)), lat((1, 0), n=2)
    meet = intersect(a, b)
    for x in product(range(-6, 7), repeat=2):
        assert member(meet, x) == (member(a, x) and member(b, x))


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        intersect(Z2, Sublattice.full(3))
    with pytest.raises(RankMismatch):
        Z2.coordinates((1, 2, 3))


# -- properties ------------------------------------------------------------------

vec2 = st.tuples(st.integers(-5, 5), st.integers(-5, 5))
vec3 = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))


@given(st.lists(vec3, min_size=0, max_size=5), st.randoms(use_true_random=False))
def test_canonical_form_idempotent_and_order_insensitive(vs, rnd):
    L = canonical_form(vs, 3)
    assert canonical_form(L.basis, 3) == L
    shuffled = list(vs)
    rnd.shuffle(shuffled)
    assert canonical_form(shuffled, 3) == L
    for v in vs:
        assert member(L, v)


@settings(max_examples=60)
@given(vec2, vec2)
def test_index_matches_coset_count(u, v):
    det = leibniz_det([u, v])
    if det == 0 or abs(det) > 12:
        return
    small = lat(u, v)
    assert index(Z2, small) == abs(det)
    assert coset_count(small, abs(det)) == abs(det)


@settings(max_examples=60)
@given(vec3, vec3, vec3)
def test_index_matches_determinant_rank3(u, v, w):
    det = leibniz_det([u, v, w])
    if det == 0:
        return
    assert index(Sublattice.full(3), lat(u, v, w)) == abs(det)


@settings(max_examples=60)
@given(vec2, vec2, st.sampled_from([2, 3, 5]))
def test_prime_to_p_saturation_splits_quotient(u, v, p):
    if leibniz_det([u, v]) == 0:
        return
    small = lat(u, v)
    mid = prime_to_p_saturation(Z2, small, p)
    assert all(member(mid, b) for b in small.basis)
    for d in quotient_invariants(Z2, mid).invariant_factors:
        while d % p == 0:
            d //= p
        assert d == 1
    for d in quotient_invariants(mid, small).invariant_factors:
        assert d % p != 0


@settings(max_examples=40)
@given(vec2, vec2, vec2, vec2)
def test_intersect_agrees_with_membership(u, v, w, z):
    a, b = lat(u, v), lat(w, z)
    meet = intersect(a, b)
    for x in product(range(-4, 5), repeat=2):
        assert member(meet, x) == (member(a, x) and member(b, x))


@settings(max_examples=40)
@given(vec3, vec3, vec3, vec3)
def test_intersect_with_span_agrees_with_membership(u, v, w, s):
    L = lat(u, v, w, n=3)
    cut = intersect_with_span(L, [s] if any(s) else [])
    for x in product(range(-3, 4), repeat=3):
        on_line = any(s) and all(x[i] * s[j] == x[j] * s[i] for i in range(3) for j in range(3))
        expected = member(L, x) and (on_line or not any(x))
        assert member(cut, x) == expected
