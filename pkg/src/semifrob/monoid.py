"""Seminormal affine monoids.

A seminormal monoid ``S`` is stored intensionally: a pointed cone ``C`` and,
for every face ``D``, the lattice ``M_D`` generated by ``S`` on ``D``.  Then

    S = union over faces D of (M_D  intersect  relint D).

Faces are relatively unsaturated (RUFs) when ``M_D`` is strictly smaller
than what the larger faces force on ``<D>``; ``C`` counts as a RUF by
convention.  Everything about ``S`` is decided from the RUFs and their
lattices.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .cone_geom import Face, FaceLatticeCone, build_cone, relative_interior_contains, smallest_face_containing
from .errors import InfiniteIndex, InvalidFaceLattice, MonotonicityViolation, NotInCone
from .exact_linalg import (
    QuotientInvariants,
    Sublattice,
    canonical_form,
    dot,
    intersect,
    intersect_with_span,
    is_sublattice,
    member,
    quotient_invariants,
)
from .polytope import LatticePolytope, Slab


@dataclass(frozen=True)
class FaceInfo:
    face: Face
    relatively_saturated: bool
    ruf: bool
    quotient: QuotientInvariants
    p_face: bool
    p_ruf: bool
    maximal_p_ruf: bool

    @property
    def index(self) -> int:
        return self.quotient.order


class FaceClassification(dict):
    """Face key -> FaceInfo for one prime, with a few shortcuts."""

    def __init__(self, p: int, infos: Iterable[FaceInfo]):
        super().__init__((i.face.key, i) for i in infos)
        self.p = p

    def _select(self, attr) -> list[Face]:
        return [i.face for i in self.values() if getattr(i, attr)]

    @property
    def rufs(self) -> list[Face]:
        return self._select("ruf")

    @property
    def p_faces(self) -> list[Face]:
        return self._select("p_face")

    @property
    def p_rufs(self) -> list[Face]:
        return self._select("p_ruf")

    @property
    def maximal_p_rufs(self) -> list[Face]:
        return self._select("maximal_p_ruf")


class SeminormalMonoid:
    """A seminormal monoid given by a cone and a lattice on every face.

    Points are integer vectors in the coordinates of ``M = ZS``.  When the
    monoid was built from generators that do not generate Z^n,
    ``embedding`` holds the basis of ZG used as coordinates.
    """

    def __init__(self, cone: FaceLatticeCone, lattices: Mapping[tuple, Sublattice],
                 generators: Sequence[Sequence[int]] | None = None,
                 embedding: Sequence[Sequence[int]] | None = None):
        self.cone = cone
        self.lattices = dict(lattices)
        self._generators = None if generators is None else tuple(tuple(g) for g in generators)
        self.embedding = None if embedding is None else tuple(tuple(b) for b in embedding)
        self._classifications: dict[int, FaceClassification] = {}
        self._validate()

    # -- construction ----------------------------------------------------

    @classmethod
    def from_face_data(cls, cone_generators: Sequence[Sequence[int]],
                       assignments: Mapping | Iterable = ()) -> "SeminormalMonoid":
        """Monoid from lattices on selected faces.

        ``assignments`` maps faces (``Face`` objects or generator-index keys)
        to generators of ``M_D``.  Unlisted faces get the largest lattice
        compatible with the listed ones, namely the intersection of
        ``M_D' intersect <D>`` over listed D' containing D (and C).
        """
        cone = build_cone(cone_generators)
        n = cone.ambient_rank
        items = assignments.items() if isinstance(assignments, Mapping) else assignments
        listed: dict[tuple, Sublattice] = {}
        for face_id, gens in items:
            face = cone.face(face_id)
            gens = [tuple(g) for g in gens]
            if not all(cone.in_span(face, g) for g in gens):
                raise InvalidFaceLattice(f"lattice generators leave the span of {face.label()}")
            lat = canonical_form(gens, n)
            if lat.rank != face.dim:
                raise InfiniteIndex(f"lattice on {face.label()} has rank {lat.rank}, face has dim {face.dim}")
            listed[face.key] = lat
        full = Sublattice.full(n)
        if listed.get(cone.top.key, full) != full:
            raise InvalidFaceLattice("the lattice of C must be the ambient lattice")
        listed[cone.top.key] = full

        lattices = {}
        for face in cone.faces:
            if face.key in listed:
                lattices[face.key] = listed[face.key]
                continue
            lat = None
            for key, big in listed.items():
                if set(face.key) < set(key):
                    lat = big if lat is None else intersect(lat, big)
            lattices[face.key] = intersect_with_span(lat, face.span_basis) if face.dim else Sublattice.zero(n)
        monoid = cls(cone, lattices)
        for key in listed:
            if key != cone.top.key and monoid.relatively_saturated(key):
                warnings.warn(f"listed face {cone.face(key).label()} is relatively saturated", stacklevel=2)
        return monoid

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence[int]]) -> "SeminormalMonoid":
        """Seminormalization of the monoid generated by ``generators``.

        Uses M_D = Z(G on D), valid because a sum of monoid elements lies on
        a face only if every summand does.  The result equals the input
        monoid exactly when that monoid is seminormal.
        """
        gens = [tuple(int(x) for x in g) for g in generators]
        if any(not any(g) for g in gens):
            raise ValueError("generators must be nonzero")
        n = len(gens[0])
        group = canonical_form(gens, n)
        embedding = None
        if group != Sublattice.full(n):
            embedding = group.basis
            gens = [group.coordinates(g) for g in gens]
            n = group.rank
        cone = build_cone(gens)
        lattices = {}
        for face in cone.faces:
            lattices[face.key] = canonical_form([gens[i] for i in face.key], n)
        return cls(cone, lattices, generators=gens, embedding=embedding)

    def _validate(self) -> None:
        n = self.cone.ambient_rank
        if self.lattices[self.cone.top.key] != Sublattice.full(n):
            raise InvalidFaceLattice("M_C must be the ambient lattice")
        for face in self.cone.faces:
            lat = self.lattices[face.key]
            if lat.rank != face.dim:
                raise InfiniteIndex(f"M_D on {face.label()} has rank {lat.rank} != dim {face.dim}")
            if not all(self.cone.in_span(face, b) for b in lat.basis):
                raise InvalidFaceLattice(f"M_D leaves the span of {face.label()}")
        for small in self.cone.faces:
            for big in self.cone.faces:
                if small < big and not is_sublattice(self.lattices[small.key], self.lattices[big.key]):
                    raise MonotonicityViolation(
                        f"M_D on {small.label()} is not contained in M_D on {big.label()}")

    # -- lattices and classification ---------------------------------------

    def lattice(self, face) -> Sublattice:
        return self.lattices[self.cone.face(face).key]

    def saturated_lattice(self, face) -> Sublattice:
        """M intersect <D>."""
        face = self.cone.face(face)
        return self._saturated[face.key]

    @cached_property
    def _saturated(self) -> dict:
        full = Sublattice.full(self.cone.ambient_rank)
        return {f.key: intersect_with_span(full, f.span_basis) if f.dim else Sublattice.zero(full.ambient_rank)
                for f in self.cone.faces}

    def forced_lattice(self, face) -> Sublattice:
        """Intersection of M_D' over faces D' strictly containing D, cut to <D>."""
        face = self.cone.face(face)
        lat = None
        for big in self.cone.faces:
            if face < big:
                other = self.lattices[big.key]
                lat = other if lat is None else intersect(lat, other)
        if lat is None:
            return self.lattices[face.key]
        return intersect_with_span(lat, face.span_basis) if face.dim else Sublattice.zero(lat.ambient_rank)

    def relatively_saturated(self, face) -> bool:
        face = self.cone.face(face)
        if face.key == self.cone.top.key:
            return False
        return self.lattices[face.key] == self.forced_lattice(face)

    @cached_property
    def rufs(self) -> tuple[Face, ...]:
        """All RUFs, C included."""
        return tuple(f for f in self.cone.faces
                     if f.key == self.cone.top.key or not self.relatively_saturated(f))

    @property
    def proper_rufs(self) -> tuple[Face, ...]:
        return tuple(f for f in self.rufs if f.key != self.cone.top.key)

    def quotient(self, face) -> QuotientInvariants:
        face = self.cone.face(face)
        return quotient_invariants(self._saturated[face.key], self.lattices[face.key])

    def classify(self, p: int) -> FaceClassification:
        if p in self._classifications:
            return self._classifications[p]
        ruf_keys = {f.key for f in self.rufs}
        rows = []
        for face in self.cone.faces:
            q = self.quotient(face)
            pf = q.order % p == 0
            rows.append([face, face.key not in ruf_keys, face.key in ruf_keys, q, pf, pf and face.key in ruf_keys])
        p_rufs = [r[0] for r in rows if r[5]]
        infos = []
        for face, rs, ruf, q, pf, pruf in rows:
            maximal = pruf and not any(face < other for other in p_rufs)
            infos.append(FaceInfo(face, rs, ruf, q, pf, pruf, maximal))
        out = FaceClassification(p, infos)
        self._classifications[p] = out
        return out

    def is_F_split(self, p: int) -> bool:
        return not self.classify(p).p_faces

    def lattice_formula_check(self, face) -> bool:
        """M_D equals the intersection of M_D' over RUFs D' containing D, cut to <D>."""
        face = self.cone.face(face)
        lat = None
        for r in self.rufs:
            if face <= r:
                lat = self.lattices[r.key] if lat is None else intersect(lat, self.lattices[r.key])
        rhs = intersect_with_span(lat, face.span_basis) if face.dim else Sublattice.zero(lat.ambient_rank)
        return rhs == self.lattices[face.key]

    # -- membership ---------------------------------------------------------

    def contains(self, u: Sequence[int]) -> bool:
        """u in S iff u in C and u in M_D for every RUF D containing u."""
        u = tuple(u)
        hs = self.cone.heights(u)
        if any(h < 0 for h in hs):
            return False
        for face in self.proper_rufs:
            if all(hs[i] == 0 for i in face.zero_set) and not member(self.lattices[face.key], u):
                return False
        return True

    def contains_by_definition(self, u: Sequence[int]) -> bool:
        """u in S iff u lies in M_D for the face D having u in its relative interior."""
        try:
            face = smallest_face_containing(self.cone, u)
        except NotInCone:
            return False
        return member(self.lattices[face.key], u)

    def contains_fractional(self, u) -> bool:
        """Whether a point of (1/q)M lies in (1/q)S; ``u`` is a FracPoint."""
        return self.contains(u.numerator)

    def to_internal(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Coordinates in M of an original ambient vector (None if not in M)."""
        if self.embedding is None:
            return tuple(v)
        return canonical_form(self.embedding).coordinates(v)

    # -- enumeration --------------------------------------------------------

    def height_box(self, lattice: Sublattice, lo, hi, strict_upper=False) -> LatticePolytope:
        slabs = [Slab(v, lo, hi, strict_upper) for v in self.cone.dual_rays]
        return LatticePolytope(lattice.basis, slabs)

    def points(self, max_height: int) -> list[tuple[int, ...]]:
        """Elements of S with every height <v_rho, u> at most ``max_height``,
        ordered by total height and then lexicographically."""
        box = self.height_box(Sublattice.full(self.cone.ambient_rank), 0, max_height)
        pts = [u for u in box.points() if self.contains(u)]
        return sorted(pts, key=lambda u: (sum(self.cone.heights(u)), u))

    @cached_property
    def generators(self) -> tuple[tuple[int, ...], ...]:
        """The minimal generating set (Hilbert basis) of S.

        On each face D, an element of M_D in relint D can be reduced by the
        shortest S-multiples of the rays of D until its coefficients lie in
        (0, 1].  Those ray multiples plus the points of M_D in relint D under
        the matching height bound therefore generate S; reducible elements
        are then discarded.
        """
        cand = set(self._generators or ())
        ray_steps = {}
        for face in self.cone.faces:
            if face.dim == 1:
                step = self.lattices[face.key].basis[0]
                if dot(step, face.rays[0]) < 0:
                    step = tuple(-x for x in step)
                ray_steps[face.rays[0]] = step
        for face in self.cone.faces:
            if face.dim == 0:
                continue
            steps = [ray_steps[r] for r in face.rays]
            hi = [sum(dot(s, v) for s in steps) for v in self.cone.dual_rays]
            slabs = [Slab(v, 0, h) for v, h in zip(self.cone.dual_rays, hi)]
            for u in LatticePolytope(self.lattices[face.key].basis, slabs).points():
                if relative_interior_contains(self.cone, face, u):
                    cand.add(u)
        cand.discard((0,) * self.cone.ambient_rank)
        ordered = sorted(cand, key=lambda u: (sum(self.cone.heights(u)), u))
        minimal = []
        for u in ordered:
            hu = self.cone.heights(u)
            below = (g for g in ordered if g != u
                     and all(x <= y for x, y in zip(self.cone.heights(g), hu)))
            if not any(self.contains(tuple(a - b for a, b in zip(u, g))) for g in below):
                minimal.append(u)
        return tuple(minimal)

    # -- comparison ---------------------------------------------------------

    def signature(self) -> tuple:
        """Generator-independent description used for equality."""
        return (frozenset(self.cone.rays),
                frozenset((f.rays, self.lattices[f.key]) for f in self.cone.faces))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeminormalMonoid):
            return NotImplemented
        return self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        rufs = ", ".join(f.label() for f in self.proper_rufs) or "none"
        return f"<SeminormalMonoid rank={self.cone.ambient_rank} proper RUFs: {rufs}>"

