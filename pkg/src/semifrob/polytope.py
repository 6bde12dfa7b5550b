"""Lattice points and volumes of bounded rational polytopes.

Polytopes are given by two-sided linear constraints ``lo <= <x, normal> <= hi``
(the upper bound optionally strict) restricted to a lattice ``L`` with basis
``b_1..b_k``; all work happens in the coefficient space Z^k of that basis.
Enumeration bounds each coordinate by Fourier-Motzkin projections of the
system, so only the final coordinate is tested against the exact
(possibly strict) constraints.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, factorial, floor
from typing import Iterator, Sequence

from .exact_linalg import dot, rank, solve


@dataclass(frozen=True)
class Slab:
    """lo <= <x, normal> <= hi, or < hi when ``strict_upper``."""

    normal: tuple
    lo: Fraction
    hi: Fraction
    strict_upper: bool = False


# A half-space sum(coeffs[i] * c_i) + const >= 0.
_Ineq = tuple


def _halfspaces(forms, slabs):
    out = []
    for f, s in zip(forms, slabs):
        out.append((tuple(f), -Fraction(s.lo)))
        out.append((tuple(-x for x in f), Fraction(s.hi)))
    return out


def _normalize(ineq: _Ineq) -> _Ineq:
    coeffs, const = ineq
    scale = next((abs(x) for x in reversed(coeffs) if x), None)
    if scale is None:
        return coeffs, const
    return tuple(x / scale for x in coeffs), const / scale


def _eliminate_last(system: list[_Ineq]) -> list[_Ineq]:
    pos, neg, keep = [], [], []
    for coeffs, const in system:
        a = coeffs[-1]
        if a > 0:
            pos.append((coeffs, const))
        elif a < 0:
            neg.append((coeffs, const))
        else:
            keep.append((coeffs[:-1], const))
    for pc, pk in pos:
        for nc, nk in neg:
            a, b = pc[-1], -nc[-1]
            coeffs = tuple(b * x + a * y for x, y in zip(pc[:-1], nc[:-1]))
            keep.append((coeffs, b * pk + a * nk))
    seen = {}
    for ineq in keep:
        c, k = _normalize(ineq)
        if not any(c):
            if k < 0:
                return [((0,) * len(c), Fraction(-1))]  # infeasible marker
            continue
        # of two parallel constraints keep the tighter one
        if c not in seen or k < seen[c]:
            seen[c] = k
    return list(seen.items())


class LatticePolytope:
    """Points c in Z^k with ``basis``-combination x = sum c_i b_i inside ``slabs``."""

    def __init__(self, basis: Sequence[Sequence[int]], slabs: Sequence[Slab]):
        self.basis = [tuple(b) for b in basis]
        self.slabs = list(slabs)
        self.k = len(self.basis)
        self.forms = [tuple(Fraction(dot(b, s.normal)) for b in self.basis) for s in self.slabs]
        systems = [None] * (self.k + 1)
        current = _halfspaces(self.forms, self.slabs)
        for level in range(self.k, 0, -1):
            systems[level] = current
            current = _eliminate_last(current)
        self._systems = systems
        self.empty = any(not any(c) and k < 0 for c, k in current)
        if self.empty:
            return
        for level in range(1, self.k + 1):
            sys_ = systems[level]
            if not any(c[level - 1] > 0 for c, _ in sys_) or not any(c[level - 1] < 0 for c, _ in sys_):
                raise ValueError("polytope is unbounded in the lattice coordinates")

    def _range(self, level: int, prefix: list[int], exact: bool):
        j = level - 1
        lo, hi = None, None
        lo_strict = hi_strict = False
        if exact:
            ineqs = []
            for f, s in zip(self.forms, self.slabs):
                rest = sum(a * c for a, c in zip(f[:j], prefix))
                ineqs.append((f[j], rest - Fraction(s.lo), False))
                ineqs.append((-f[j], Fraction(s.hi) - rest, s.strict_upper))
        else:
            ineqs = [(c[j], k + sum(a * x for a, x in zip(c[:j], prefix)), False)
                     for c, k in self._systems[level]]
        for a, rest, strict in ineqs:
            if a == 0:
                if rest < 0 or (strict and rest == 0):
                    return 1, 0
                continue
            bound = -rest / a
            if a > 0:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_strict = bound, strict
            else:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_strict = bound, strict
        lo_i = floor(lo) + 1 if (lo_strict and lo == floor(lo)) else ceil(lo)
        hi_i = ceil(hi) - 1 if (hi_strict and hi == ceil(hi)) else floor(hi)
        return lo_i, hi_i

    def _walk(self, prefix: list[int]):
        level = len(prefix) + 1
        lo, hi = self._range(level, prefix, exact=(level == self.k))
        return lo, hi

    def coefficient_points(self) -> Iterator[tuple[int, ...]]:
        if self.empty:
            return
        if self.k == 0:
            if self._contains_zero():
                yield ()
            return
        stack = [[]]
        while stack:
            prefix = stack.pop()
            lo, hi = self._walk(prefix)
            if len(prefix) + 1 == self.k:
                for c in range(lo, hi + 1):
                    yield tuple(prefix) + (c,)
            else:
                for c in range(hi, lo - 1, -1):
                    stack.append(prefix + [c])

    def points(self) -> Iterator[tuple[int, ...]]:
        """Lattice points as ambient integer vectors, in a fixed order."""
        n = len(self.slabs[0].normal) if self.slabs else 0
        for c in self.coefficient_points():
            if not c:
                yield (0,) * n
                continue
            yield tuple(sum(ci * b[j] for ci, b in zip(c, self.basis)) for j in range(n))

    def count(self) -> int:
        """Number of lattice points; the last coordinate is counted, not walked."""
        if self.empty:
            return 0
        if self.k == 0:
            return int(self._contains_zero())
        total = 0
        stack = [[]]
        while stack:
            prefix = stack.pop()
            lo, hi = self._walk(prefix)
            if len(prefix) + 1 == self.k:
                total += max(0, hi - lo + 1)
            else:
                stack.extend(prefix + [c] for c in range(lo, hi + 1))
        return total

    def _contains_zero(self) -> bool:
        return all(s.lo <= 0 and (0 < s.hi if s.strict_upper else 0 <= s.hi) for s in self.slabs)


# -- volume ---------------------------------------------------------------------

def _affine_dim(points: Sequence[Sequence[Fraction]]) -> int:
    if not points:
        return -1
    base = points[0]
    return rank([[a - b for a, b in zip(p, base)] for p in points[1:]]) if len(points) > 1 else 0


def vertices(forms: Sequence[Sequence[Fraction]], bounds: Sequence[tuple]) -> list[tuple[Fraction, ...]]:
    """Vertices of {c in Q^k : lo_i <= forms_i . c <= hi_i}, sorted."""
    k = len(forms[0]) if forms else 0
    planes = [(f, Fraction(v)) for f, (lo, hi) in zip(forms, bounds) for v in (lo, hi)]
    found = set()
    for subset in combinations(planes, k):
        sol = solve([f for f, _ in subset], [v for _, v in subset])
        if sol is None:
            continue
        if all(lo <= dot(f, sol) <= hi for f, (lo, hi) in zip(forms, bounds)):
            found.add(sol)
    return sorted(found)


def _pulling_simplices(face: frozenset, dim: int, verts, planes):
    if dim == 0:
        return [[min(face)]]
    apex = min(face)
    facets = set()
    for f, v in planes:
        sub = frozenset(i for i in face if dot(f, verts[i]) == v)
        if sub and sub != face and _affine_dim([verts[i] for i in sorted(sub)]) == dim - 1:
            facets.add(sub)
    out = []
    for g in sorted(facets, key=sorted):
        if apex in g:
            continue
        for s in _pulling_simplices(g, dim - 1, verts, planes):
            out.append([apex] + s)
    return out


def polytope_volume(forms: Sequence[Sequence[Fraction]], bounds: Sequence[tuple]) -> Fraction:
    """Exact Euclidean volume of {c in R^k : lo_i <= forms_i . c <= hi_i}.

    Vertex enumeration over k-subsets of the bounding hyperplanes, then a
    pulling triangulation from the lexicographically least vertex.
    """
    k = len(forms[0]) if forms else 0
    if k == 0:
        return Fraction(1)
    verts = vertices(forms, bounds)
    if _affine_dim(verts) < k:
        return Fraction(0)
    planes = [(tuple(f), Fraction(v)) for f, (lo, hi) in zip(forms, bounds) for v in (lo, hi)]
    simplices = _pulling_simplices(frozenset(range(len(verts))), k, verts, planes)
    total = Fraction(0)
    for s in simplices:
        base = verts[s[0]]
        total += abs(_det([[a - b for a, b in zip(verts[i], base)] for i in s[1:]]))
    return total / factorial(k)


def _det(m) -> Fraction:
    m = [list(r) for r in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det
