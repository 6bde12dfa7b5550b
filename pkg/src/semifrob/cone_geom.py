"""Rational polyhedral cones: dual rays, face lattice, relative interiors.

A cone ``C`` is given by integer generators.  Its dual ``sigma`` is computed
with the double description method over exact integers; the primitive
generators of the extremal rays of ``sigma`` are the inward facet normals
``v_rho`` of ``C``.  Faces are identified by the sorted tuple of indices of
the generators lying on them, which is stable across runs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import NotFullDimensional, NotInCone, NotPointed, UnknownFace
from .exact_linalg import dot, independent_subset, primitive, rank, solve


@dataclass(frozen=True)
class Face:
    """A face D of a cone.

    ``key`` lists the cone generators on D, ``zero_set`` the dual rays
    vanishing on D (so D = C cut by those hyperplanes), ``span_basis`` a
    basis of the linear span <D>, and ``rays`` the primitive extremal rays.
    """

    key: tuple[int, ...]
    zero_set: tuple[int, ...]
    dim: int
    span_basis: tuple[tuple[int, ...], ...]
    rays: tuple[tuple[int, ...], ...]

    def __le__(self, other: "Face") -> bool:
        return set(self.key) <= set(other.key)

    def __lt__(self, other: "Face") -> bool:
        return set(self.key) < set(other.key)

    def label(self) -> str:
        if not self.rays:
            return "{0}"
        return "⟨" + ",".join("(" + ",".join(map(str, r)) + ")" for r in self.rays) + "⟩"


def dual_rays(generators: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Primitive extremal rays of {v : <g, v> >= 0 for all g}.

    Double description: start from the simplicial cone cut out by ``n``
    independent generators and add the remaining constraints one at a time,
    combining adjacent ray pairs across each new hyperplane.  Adjacency uses
    the algebraic test (common active constraints of rank n - 2).
    Requires the generators to span Q^n.
    """
    gens = [tuple(g) for g in generators]
    n = len(gens[0])
    basis_idx = independent_subset(gens)
    if len(basis_idx) < n:
        raise NotFullDimensional("generators do not span the ambient space")
    a0 = [gens[i] for i in basis_idx]
    rays = []
    for j in range(n):
        sol = solve(a0, [int(i == j) for i in range(n)])
        rays.append(primitive(sol))
    processed = list(basis_idx)
    for idx, g in enumerate(gens):
        if idx in basis_idx:
            continue
        vals = [dot(g, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        neg = [r for r, v in zip(rays, vals) if v < 0]
        zero = [r for r, v in zip(rays, vals) if v == 0]
        new = pos + zero
        if neg:
            active = {r: frozenset(i for i in processed if dot(gens[i], r) == 0) for r in pos + neg}
            for rp in pos:
                for rn in neg:
                    common = active[rp] & active[rn]
                    if len(common) < n - 2:
                        continue
                    if n > 2 and rank([gens[i] for i in common]) != n - 2:
                        continue
                    # with n == 2 every pair is adjacent (common active rank 0)
                    combo = tuple(dot(g, rp) * x - dot(g, rn) * y for x, y in zip(rn, rp))
                    new.append(primitive(combo))
        rays = list(dict.fromkeys(new))
        processed.append(idx)
    return sorted(set(rays))


@dataclass(frozen=True)
class FaceLatticeCone:
    """A pointed full-dimensional rational cone with its face lattice."""

    generators: tuple[tuple[int, ...], ...]
    dual_rays: tuple[tuple[int, ...], ...]
    faces: tuple[Face, ...]
    _by_key: dict = field(repr=False, compare=False)
    _by_zero: dict = field(repr=False, compare=False)

    @property
    def ambient_rank(self) -> int:
        return len(self.generators[0])

    @property
    def apex(self) -> Face:
        return self._by_key[()]

    @property
    def top(self) -> Face:
        return self._by_key[tuple(range(len(self.generators)))]

    @property
    def rays(self) -> tuple[tuple[int, ...], ...]:
        return self.top.rays

    def face(self, key) -> Face:
        if isinstance(key, Face):
            key = key.key
        try:
            return self._by_key[tuple(key)]
        except KeyError:
            raise UnknownFace(f"no face with key {tuple(key)}") from None

    def heights(self, u: Sequence) -> tuple:
        return tuple(dot(u, v) for v in self.dual_rays)

    def star_rays(self, face) -> tuple[tuple[int, ...], ...]:
        """Extremal rays of D* = sigma intersect D^perp.

        D* is the face of sigma dual to D, so its extremal rays are exactly
        the dual rays vanishing on D.
        """
        f = self.face(face)
        return tuple(self.dual_rays[i] for i in f.zero_set)

    def in_span(self, face, u: Sequence) -> bool:
        f = self.face(face)
        return all(dot(u, self.dual_rays[i]) == 0 for i in f.zero_set)

    def contains(self, u: Sequence) -> bool:
        return all(h >= 0 for h in self.heights(u))

    def face_contains(self, face, u: Sequence) -> bool:
        return self.contains(u) and self.in_span(face, u)

    def faces_containing(self, face) -> list[Face]:
        f = self.face(face)
        return [g for g in self.faces if f <= g]

    def face_of_points(self, points: Sequence[Sequence]) -> Face:
        """Smallest face containing all of ``points``."""
        total = [Fraction(0)] * self.ambient_rank
        for p in points:
            total = [a + b for a, b in zip(total, p)]
        return smallest_face_containing(self, total)

    def meet(self, faces) -> Face:
        keys = None
        for f in faces:
            s = set(self.face(f).key)
            keys = s if keys is None else keys & s
        return self.top if keys is None else self.face(tuple(sorted(keys)))


def build_cone(generators: Sequence[Sequence[int]]) -> FaceLatticeCone:
    """Dual description and full face lattice of the cone spanned by ``generators``."""
    gens = tuple(tuple(int(x) for x in g) for g in generators)
    if not gens:
        raise NotFullDimensional("no generators")
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise ValueError("generators of differing lengths")
    if any(not any(g) for g in gens):
        raise ValueError("generators must be nonzero")
    if rank(gens) < n:
        raise NotFullDimensional("generators do not span the ambient space")
    duals = dual_rays(gens)
    if not duals or rank(duals) < n:
        raise NotPointed("the cone contains a line")
    duals = tuple(duals)

    all_idx = frozenset(range(len(gens)))
    facets = [frozenset(i for i, g in enumerate(gens) if dot(g, v) == 0) for v in duals]
    found = {all_idx}
    frontier = list(dict.fromkeys(facets))
    found.update(frontier)
    while frontier:
        nxt = []
        for f in frontier:
            for g in facets:
                h = f & g
                if h not in found:
                    found.add(h)
                    nxt.append(h)
        frontier = nxt

    faces = []
    for keyset in found:
        key = tuple(sorted(keyset))
        on = [gens[i] for i in key]
        zero = tuple(j for j, v in enumerate(duals) if all(dot(g, v) == 0 for g in on))
        span = tuple(on[i] for i in independent_subset(on)) if on else ()
        faces.append((key, zero, len(span), span))
    by_key = {}
    one_dim = {}
    for key, zero, dim, span in faces:
        if dim == 1:
            one_dim[key] = primitive(span[0])
    result = []
    for key, zero, dim, span in sorted(faces, key=lambda t: (t[2], t[0])):
        rays = tuple(sorted(r for k, r in one_dim.items() if set(k) <= set(key)))
        face = Face(key, zero, dim, span, rays)
        result.append(face)
        by_key[key] = face
    by_zero = {f.zero_set: f for f in result}
    return FaceLatticeCone(gens, duals, tuple(result), by_key, by_zero)


def relative_interior_contains(cone: FaceLatticeCone, face, u: Sequence) -> bool:
    """u in relint(D): u in D and <u, v_rho> > 0 for every dual ray not in D*."""
    f = cone.face(face)
    hs = cone.heights(u)
    zero = set(f.zero_set)
    return all((h == 0) if i in zero else (h > 0) for i, h in enumerate(hs))


def smallest_face_containing(cone: FaceLatticeCone, u: Sequence) -> Face:
    hs = cone.heights(u)
    if any(h < 0 for h in hs):
        raise NotInCone(f"{tuple(u)} is not in the cone")
    zero = tuple(i for i, h in enumerate(hs) if h == 0)
    return cone._by_zero[zero]


def star_has_positive_pairing(cone: FaceLatticeCone, face, a: Sequence) -> bool:
    """Whether some v in D* pairs positively with ``a``.

    Any v in D* is a nonnegative combination of the extremal rays of D*, so
    checking those rays suffices.
    """
    return any(dot(a, v) > 0 for v in cone.star_rays(face))
