"""F-splitting invariants of an F-split k[S].

With D_S the intersection of all RUFs (the F-pure face) and

    P = {x : 0 <= <x, v_rho> < 1 for all rho},

the splitting numbers count (1/q)M_{D_S} inside P, the splitting ratio is
the volume of P cut to <D_S> measured against M_{D_S}, and the splitting
prime is generated by the monomials off D_S.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .cartier import FaceUnionIdeal
from .cone_geom import Face
from .errors import NotFSplit
from .exact_linalg import Sublattice, dot
from .monoid import SeminormalMonoid
from .polytope import polytope_volume


def _require_split(S: SeminormalMonoid, p: int) -> None:
    if not S.is_F_split(p):
        faces = ", ".join(f.label() for f in S.classify(p).p_faces)
        raise NotFSplit(f"k[S] is not F-split at p={p}: p-faces {faces}")


def fpure_face(S: SeminormalMonoid) -> Face:
    """Intersection of all RUFs, C included."""
    return S.cone.meet(S.rufs)


def splitting_number(S: SeminormalMonoid, p: int, e: int) -> int:
    """a_e: points X of M_{D_S} with 0 <= <X, v_rho> < p^e for every rho."""
    _require_split(S, p)
    if e < 0:
        raise ValueError("e must be non-negative")
    D = fpure_face(S)
    return S.height_box(S.lattice(D), 0, p ** e, strict_upper=True).count()


def _lattice_volume(S: SeminormalMonoid, lattice: Sublattice) -> Fraction:
    """Volume of {x in span L : 0 <= <x, v_rho> <= 1} with a cell of L as unit."""
    forms = [tuple(Fraction(dot(b, v)) for b in lattice.basis) for v in S.cone.dual_rays]
    return polytope_volume(forms, [(0, 1)] * len(forms))


def splitting_ratio(S: SeminormalMonoid, p: int) -> Fraction:
    """r_F = Vol_{M cap <D_S>}(P_S) / [M cap <D_S> : M_{D_S}]."""
    _require_split(S, p)
    D = fpure_face(S)
    return _lattice_volume(S, S.saturated_lattice(D)) / S.quotient(D).order


def splitting_dimension(S: SeminormalMonoid, p: int) -> int:
    _require_split(S, p)
    return fpure_face(S).dim


def splitting_prime(S: SeminormalMonoid, p: int) -> FaceUnionIdeal:
    _require_split(S, p)
    return FaceUnionIdeal(S, (fpure_face(S),))


def splitting_prime_generators(S: SeminormalMonoid, p: int) -> list[tuple[int, ...]]:
    """Generators of S off D_S; they generate the splitting prime."""
    D = splitting_prime(S, p).faces[0]
    return sorted(g for g in S.generators if not S.cone.face_contains(D, g))


def normalization_signature(S: SeminormalMonoid) -> Fraction:
    """F-signature of k[S-bar]: the volume of P with respect to M."""
    return _lattice_volume(S, Sublattice.full(S.cone.ambient_rank))


def ratio_bound_check(S: SeminormalMonoid, p: int) -> bool:
    return splitting_ratio(S, p) <= normalization_signature(S)


def convergence_probe(S: SeminormalMonoid, p: int, e_max: int) -> list[tuple[int, int, Fraction]]:
    """Rows (e, a_e, a_e / p^(e delta)) for e = 1..e_max."""
    delta = splitting_dimension(S, p)
    return [(e, a, Fraction(a, p ** (e * delta)))
            for e in range(1, e_max + 1)
            for a in [splitting_number(S, p, e)]]


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class SplittingReport:
    f_split: bool
    D_S: Face
    delta: int
    splitting_prime_generators: list
    a_e_table: dict
    ratio: Fraction
    normalization_signature: Fraction
    p: int = field(default=0)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "f_split": self.f_split,
            "D_S": list(self.D_S.key),
            "delta": self.delta,
            "splitting_prime_generators": [list(g) for g in self.splitting_prime_generators],
            "a_e_table": {str(e): a for e, a in self.a_e_table.items()},
            "ratio": fraction_str(self.ratio),
            "normalization_signature": fraction_str(self.normalization_signature),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def splitting_report(S: SeminormalMonoid, p: int, e_max: int = 3) -> SplittingReport:
    _require_split(S, p)
    return SplittingReport(
        f_split=True,
        D_S=fpure_face(S),
        delta=splitting_dimension(S, p),
        splitting_prime_generators=splitting_prime_generators(S, p),
        a_e_table={e: splitting_number(S, p, e) for e in range(1, e_max + 1)},
        ratio=splitting_ratio(S, p),
        normalization_signature=normalization_signature(S),
        p=p,
    )
