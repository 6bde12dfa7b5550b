"""Cartier-fixed ideals of k[S].

Every fixed ideal is a face-union ideal

    I_{D_1 u ... u D_n} = < x^u : u in S outside D_1 u ... u D_n >,

and it is fixed exactly when each D_i is an intersection of proper RUFs and
every maximal pRUF lies inside the union.  Ideals are compared through their
canonical face sets, never through generators.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .cone_geom import Face
from .errors import NotInMonoid
from .frob_hom import FracPoint, apply_pi, hom_points
from .monoid import SeminormalMonoid


def _antichain(faces: Iterable[Face]) -> tuple[Face, ...]:
    uniq = {f.key: f for f in faces}.values()
    top = [f for f in uniq if not any(f < g for g in uniq)]
    return tuple(sorted(top, key=lambda f: f.key))


@dataclass(frozen=True)
class FaceUnionIdeal:
    """The monomial ideal of S-points off a union of faces.

    ``faces`` is kept as an antichain sorted by key.  No faces gives the
    unit ideal; the face C gives the zero ideal.
    """

    monoid: SeminormalMonoid = field(compare=False, repr=False)
    faces: tuple[Face, ...]

    def __post_init__(self):
        object.__setattr__(self, "faces", _antichain(self.monoid.cone.face(f) for f in self.faces))

    @property
    def keys(self) -> list[list[int]]:
        return [list(f.key) for f in self.faces]

    @property
    def is_unit(self) -> bool:
        return not self.faces

    @property
    def is_zero(self) -> bool:
        return any(f.key == self.monoid.cone.top.key for f in self.faces)

    def on_union(self, u) -> bool:
        return any(self.monoid.cone.face_contains(f, u) for f in self.faces)

    def __contains__(self, u) -> bool:
        return membership(self, u)

    def __le__(self, other: "FaceUnionIdeal") -> bool:
        """Ideal inclusion: every face of ``other`` sits inside a face of ``self``."""
        return all(any(g <= f for f in self.faces) for g in other.faces)

    def __lt__(self, other: "FaceUnionIdeal") -> bool:
        return self <= other and self != other

    def __and__(self, other: "FaceUnionIdeal") -> "FaceUnionIdeal":
        return FaceUnionIdeal(self.monoid, self.faces + other.faces)

    def __add__(self, other: "FaceUnionIdeal") -> "FaceUnionIdeal":
        cone = self.monoid.cone
        return FaceUnionIdeal(self.monoid, tuple(cone.meet([f, g]) for f in self.faces for g in other.faces))

    def down_closure(self) -> frozenset:
        """Keys of all faces of C inside the union."""
        return frozenset(g.key for g in self.monoid.cone.faces if any(g <= f for f in self.faces))

    def label(self) -> str:
        if self.is_unit:
            return "R"
        return "I_{" + " ∪ ".join(f.label() for f in self.faces) + "}"

    def __str__(self):
        return self.label()


def membership(I: FaceUnionIdeal, u) -> bool:
    u = tuple(u)
    if not I.monoid.contains(u):
        raise NotInMonoid(f"{u} is not in S")
    return not I.on_union(u)


def rufs_meet_closure(S: SeminormalMonoid) -> list[Face]:
    """Faces that are intersections of one or more proper RUFs."""
    closure = {f.key: f for f in S.proper_rufs}
    frontier = list(closure.values())
    while frontier:
        nxt = []
        for f in frontier:
            for g in S.proper_rufs:
                h = S.cone.meet([f, g])
                if h.key not in closure:
                    closure[h.key] = h
                    nxt.append(h)
        frontier = nxt
    return sorted(closure.values(), key=lambda f: (f.dim, f.key))


def is_fixed(S: SeminormalMonoid, p: int, I: FaceUnionIdeal) -> bool:
    allowed = {f.key for f in rufs_meet_closure(S)}
    if any(f.key not in allowed for f in I.faces):
        return False
    # a maximal pRUF inside a listed face is already part of the union
    return all(any(m <= f for f in I.faces) for m in S.classify(p).maximal_p_rufs)


def _inclusion_order(I: FaceUnionIdeal):
    # strictly smaller ideals have strictly larger down-closures
    return (-len(I.down_closure()), I.keys)


def enumerate_fixed_ideals(S: SeminormalMonoid, p: int) -> list[FaceUnionIdeal]:
    """All fixed ideals, smallest first (a linear extension of inclusion)."""
    closure = rufs_meet_closure(S)
    found = {}
    for r in range(len(closure) + 1):
        for subset in combinations(closure, r):
            I = FaceUnionIdeal(S, subset)
            if I.faces not in found and is_fixed(S, p, I):
                found[I.faces] = I
    return sorted(found.values(), key=_inclusion_order)


def test_ideal(S: SeminormalMonoid, p: int | None = None) -> FaceUnionIdeal:
    """tau(R): monomials on no proper RUF.  Independent of p."""
    return FaceUnionIdeal(S, S.proper_rufs)


def non_f_pure_ideal(S: SeminormalMonoid, p: int) -> FaceUnionIdeal:
    """sigma(R): monomials on no pRUF; the unit ideal when there are none."""
    return FaceUnionIdeal(S, S.classify(p).p_rufs)


def default_height_bound(S: SeminormalMonoid, I: FaceUnionIdeal) -> int:
    """A height bound past which no minimal generator of I can lie.

    A minimal generator needs at most one monoid generator off each listed
    face, since a sum of monoid elements is on a face only if every summand is.
    """
    gens = S.generators
    top = max((h for g in gens for h in S.cone.heights(g)), default=1)
    return max(1, len(I.faces)) * top


def generators_bounded(S: SeminormalMonoid, I: FaceUnionIdeal, H: int | None = None) -> list[tuple[int, ...]]:
    """Minimal monomial generators of I among S-points with heights at most H.

    With the default H (``default_height_bound``) the list is complete.
    """
    if H is None:
        H = default_height_bound(S, I)
    if H <= 0:
        raise ValueError("height bound must be positive")
    kept: list[tuple[int, ...]] = []
    for u in S.points(H):
        if I.on_union(u):
            continue
        if any(S.contains(tuple(a - b for a, b in zip(u, g))) for g in kept):
            continue
        kept.append(u)
    return kept


@dataclass(frozen=True)
class ProbeResult:
    ok: bool
    witness: tuple[FracPoint, FracPoint, tuple[int, ...]] | None = None

    def __bool__(self):
        return self.ok


def compatibility_probe(S: SeminormalMonoid, p: int, I: FaceUnionIdeal, e: int, B: int) -> ProbeResult:
    """Check pi_a(F^e_* I) inside I for all hom points a and all members in a box.

    ``a`` ranges over maps with |<q a, v_rho>| <= B, the members x^u of I over
    S-points with heights at most B.  The witness is (a, u/q, image).
    """
    homs = hom_points(S, p, e, B)
    q = p ** e
    buckets: dict = {}
    for w in S.points(B):
        if not I.on_union(w):
            buckets.setdefault(tuple(x % q for x in w), []).append(w)
    for a in homs:
        # pi_a(x^(w/q)) is nonzero only when w = -q a mod q
        for w in buckets.get(tuple((-x) % q for x in a.numerator), ()):
            u = FracPoint(w, e, p)
            t = apply_pi(a, u)
            if I.on_union(t):
                return ProbeResult(False, (a, u, t))
    return ProbeResult(True)


test_ideal.__test__ = False  # keep pytest from collecting it
