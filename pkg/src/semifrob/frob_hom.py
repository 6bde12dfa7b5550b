"""The maps pi_a and membership in Hom(F^e_* R, R).

For ``a`` in (1/q)M, q = p^e, the map pi_a sends x^u to x^(a+u) when a+u is
integral and to 0 otherwise.  ``is_hom`` decides whether pi_a restricts to
R = k[S] using the face conditions (normalization, lattice conditions on
RUFs, positivity on D*); ``is_hom_oracle`` tests the defining containment
(a + (1/q)S) intersect M in S directly on a bounded region.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .cone_geom import Face, star_has_positive_pairing
from .errors import LevelMismatch, LevelTooSmall, NotAHom
from .exact_linalg import Sublattice, member, p_torsion_exponent, prime_to_p_saturation
from .monoid import SeminormalMonoid
from .polytope import LatticePolytope, Slab


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FracPoint:
    """The point numerator / p^e of (1/p^e)M."""

    numerator: tuple[int, ...]
    e: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(int(x) for x in self.numerator))
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.e < 1:
            raise ValueError("level e must be at least 1")

    @property
    def q(self) -> int:
        return self.p ** self.e

    @property
    def value(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.q) for x in self.numerator)

    def __str__(self):
        return "(" + ",".join(str(x) for x in self.value) + ")"


class Mode(Enum):
    STRICT = "strict"
    CONDITIONS_ONLY = "conditions-only"


@dataclass(frozen=True)
class FailedCondition:
    """Which condition rejected pi_a.

    ``kind`` is one of Normalization (target: a dual ray), PSatFail,
    PUnsatFail or StarFail (target: a face).
    """

    kind: str
    ray: tuple[int, ...] | None = None
    face: Face | None = None

    def __str__(self):
        where = str(self.ray) if self.face is None else self.face.label()
        return f"{self.kind} {where}"


@dataclass(frozen=True)
class HomVerdict:
    decision: bool
    failing_condition: FailedCondition | None = None

    def __bool__(self):
        return self.decision

    def __str__(self):
        return "yes" if self.decision else f"no ({self.failing_condition})"


@dataclass(frozen=True)
class Refuted:
    """pi_a is not a map to R: a + witness is integral but outside S."""

    witness: FracPoint


@dataclass(frozen=True)
class ConfirmedOnBox:
    """No witness with all heights of q*u at most ``box`` exists."""

    box: int


def e_min(S: SeminormalMonoid, p: int) -> int:
    """Least e with p^e strictly above the p-power torsion of every M cap <D> / M_D."""
    cache = S.__dict__.setdefault("_e_min_cache", {})
    if p not in cache:
        cache[p] = 1 + max(p_torsion_exponent(S.quotient(f), p) for f in S.cone.faces)
    return cache[p]


def _tilde(S: SeminormalMonoid, face: Face, p: int) -> Sublattice:
    cache = S.__dict__.setdefault("_tilde_cache", {})
    key = (face.key, p)
    if key not in cache:
        cache[key] = prime_to_p_saturation(S.saturated_lattice(face), S.lattice(face), p)
    return cache[key]


def governing_rufs(S: SeminormalMonoid, p: int) -> list[Face]:
    """RUFs not properly contained in any p-face, largest first."""
    cls = S.classify(p)
    p_faces = cls.p_faces
    out = [f for f in S.rufs if not any(f < g for g in p_faces)]
    return sorted(out, key=lambda f: (-f.dim, f.key))


def check_conditions(S: SeminormalMonoid, p: int, a: FracPoint) -> HomVerdict:
    """Evaluate the face conditions on pi_a regardless of the level."""
    if a.p != p:
        raise LevelMismatch(f"point is at prime {a.p}, not {p}")
    q = a.q
    A = a.numerator
    for ray, h in zip(S.cone.dual_rays, S.cone.heights(A)):
        if h <= -q:
            return HomVerdict(False, FailedCondition("Normalization", ray=ray))
    cls = S.classify(p)
    for face in governing_rufs(S, p):
        if S.cone.in_span(face, A):
            if not cls[face.key].p_face:
                if not member(S.lattice(face), A):
                    return HomVerdict(False, FailedCondition("PSatFail", face=face))
            elif member(_tilde(S, face, p), A):
                return HomVerdict(False, FailedCondition("PUnsatFail", face=face))
        elif not star_has_positive_pairing(S.cone, face, A):
            return HomVerdict(False, FailedCondition("StarFail", face=face))
    return HomVerdict(True)


def is_hom(S: SeminormalMonoid, p: int, e: int, a: FracPoint, mode: Mode = Mode.STRICT) -> HomVerdict:
    """Whether pi_a lies in Hom(F^e_* R, R).

    In strict mode the level must reach ``e_min``; below it the face
    conditions are not known to characterize the maps, and the call raises
    ``LevelTooSmall``.  ``Mode.CONDITIONS_ONLY`` evaluates them anyway.
    """
    if a.e != e or a.p != p:
        raise LevelMismatch(f"point is at level {a.e} (prime {a.p}), expected {e} (prime {p})")
    if mode is Mode.STRICT:
        bound = e_min(S, p)
        if e < bound:
            raise LevelTooSmall(e, bound)
    return check_conditions(S, p, a)


def _witness_order(S: SeminormalMonoid, w) -> tuple:
    # nonzero points first, then by total height, then lexicographically
    return (not any(w), sum(S.cone.heights(w)), w)


def _residue_buckets(S: SeminormalMonoid, q: int, box: int) -> dict:
    """S-points with heights at most ``box`` keyed by residue mod q, in witness order."""
    cache = S.__dict__.setdefault("_bucket_cache", {})
    if (q, box) not in cache:
        buckets: dict = {}
        region = S.height_box(Sublattice.full(S.cone.ambient_rank), 0, box)
        pts = [w for w in region.points() if S.contains_by_definition(w)]
        for w in sorted(pts, key=lambda w: _witness_order(S, w)):
            buckets.setdefault(tuple(x % q for x in w), []).append(w)
        cache[(q, box)] = buckets
    return cache[(q, box)]


def _candidates_by_residue(S, q, A, box):
    return _residue_buckets(S, q, box).get(tuple((-x) % q for x in A), ())


def _candidates_by_target(S, q, A, box):
    # t = (A + w)/q runs over M with 0 <= <q t - A, v> <= box
    slabs = [Slab(v, Fraction(h, q), Fraction(box + h, q)) for v, h in zip(S.cone.dual_rays, S.cone.heights(A))]
    region = LatticePolytope(Sublattice.full(S.cone.ambient_rank).basis, slabs)
    ws = [tuple(q * x - y for x, y in zip(t, A)) for t in region.points()]
    return sorted((w for w in ws if S.contains_by_definition(w)), key=lambda w: _witness_order(S, w))


BUCKET_LIMIT = 100_000


def is_hom_oracle(S: SeminormalMonoid, p: int, e: int, a: FracPoint, box: int,
                  strategy: str | None = None) -> Refuted | ConfirmedOnBox:
    """Search for u in (1/q)S with a + u in M \\ S.

    Candidates are u = w/q for w in S with every height <w, v_rho> at most
    ``box`` and a + u integral.  They are scanned in a fixed order (nonzero w
    before w = 0, then by total height of w, then lexicographically) and the
    first witness is returned.  Membership in S is decided from the
    relative-interior description, not from the face conditions.  A
    refutation is certain; a confirmation only covers the box.

    Small boxes reuse one residue-class table of S-points per (q, box);
    large ones enumerate t = a + u over M directly (``strategy`` forces
    "residue" or "target").
    """
    if a.e != e or a.p != p:
        raise LevelMismatch("point level does not match")
    if box <= 0:
        raise ValueError("box must be positive")
    q = a.q
    A = a.numerator
    if strategy is None:
        strategy = "residue" if (box + 1) ** S.cone.ambient_rank <= BUCKET_LIMIT else "target"
    find = _candidates_by_residue if strategy == "residue" else _candidates_by_target
    for w in find(S, q, A, box):
        t = tuple((x + y) // q for x, y in zip(A, w))
        if not S.contains_by_definition(t):
            # machine check of the witness
            assert S.contains_by_definition(w)
            assert all((x + y) % q == 0 for x, y in zip(A, w))
            return Refuted(FracPoint(w, e, p))
    return ConfirmedOnBox(box)


def apply_pi(a: FracPoint, u: FracPoint) -> tuple[int, ...] | None:
    """pi_a(x^u): the exponent a+u when integral, else None (the zero map)."""
    if (a.p, a.e) != (u.p, u.e):
        raise LevelMismatch("pi_a and x^u live at different levels")
    s = [x + y for x, y in zip(a.numerator, u.numerator)]
    if any(x % a.q for x in s):
        return None
    return tuple(x // a.q for x in s)


def compose(a: FracPoint, b: FracPoint) -> FracPoint:
    """Index of pi_a . pi_b = pi_a o F^{e1}_* pi_b, namely a + b / p^{e1}."""
    if a.p != b.p:
        raise LevelMismatch("different primes")
    num = tuple(x * b.q + y for x, y in zip(a.numerator, b.numerator))
    return FracPoint(num, a.e + b.e, a.p)


def hom_points(S: SeminormalMonoid, p: int, e: int, box: int) -> list[FracPoint]:
    """All a with |<q a, v_rho>| <= box for every dual ray and pi_a a hom (strict)."""
    bound = e_min(S, p)
    if e < bound:
        raise LevelTooSmall(e, bound)
    out = []
    for A in candidate_numerators(S, box):
        a = FracPoint(A, e, p)
        if check_conditions(S, p, a):
            out.append(a)
    return out


def candidate_numerators(S: SeminormalMonoid, box: int) -> list[tuple[int, ...]]:
    """Integer vectors with every height in [-box, box], lexicographically sorted."""
    return sorted(S.height_box(Sublattice.full(S.cone.ambient_rank), -box, box).points())


def image_misses_p_faces_check(S: SeminormalMonoid, p: int, e: int, a: FracPoint, box: int) -> bool:
    """No monomial x^u with q u in the box is sent by pi_a onto a p-face."""
    verdict = is_hom(S, p, e, a)
    if not verdict:
        raise NotAHom(f"pi_a is not a map to R: {verdict}")
    p_faces = S.classify(p).p_faces
    if not p_faces:
        return True
    q = a.q
    for w in S.points(box):
        t = apply_pi(a, FracPoint(w, e, p))
        if t is None:
            continue
        if any(S.cone.face_contains(f, t) for f in p_faces):
            return False
    return True


def enumerate_homs(S: SeminormalMonoid, p: int, e: int, numerators: Iterable[Sequence[int]]) -> list[FracPoint]:
    """The points among ``numerators`` (at level e) indexing maps to R."""
    return [a for a in (FracPoint(A, e, p) for A in numerators) if is_hom(S, p, e, a)]
