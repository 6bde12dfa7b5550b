"""Exact integer and rational linear algebra.

Everything here works on plain Python ``int`` and ``fractions.Fraction``;
matrices are lists of rows.  Sizes are desk scale (rank <= 8), so the
algorithms are the dense textbook ones.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import InfiniteQuotient, NotASublattice, RankMismatch

IntVector = tuple  # tuple[int, ...]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


# -- rational elimination ---------------------------------------------------

def _rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form over Q.  Returns (rows, pivot_columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(_rref(rows)[1])


def nullspace(rows: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Primitive integer basis of {x in Q^n : r . x = 0 for every row r}."""
    if not rows:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    red, pivots = _rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(primitive(x))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """Unique solution of a square nonsingular system, or None if singular."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = _rref(aug, ncols=n)
    if pivots != list(range(n)):
        return None
    return tuple(red[i][n] for i in range(n))


def independent_subset(vectors: Sequence[Sequence]) -> list[int]:
    """Indices of a greedily chosen maximal linearly independent subset."""
    chosen: list[int] = []
    current: list = []
    r = 0
    for i, v in enumerate(vectors):
        trial = current + [v]
        rk = rank(trial)
        if rk > r:
            chosen.append(i)
            current = trial
            r = rk
    return chosen


# -- integer elimination ----------------------------------------------------

def _echelonize(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Unimodular row reduction on the first ``ncols`` columns.

    The result is in Hermite form on those columns: pivots positive and
    strictly increasing, entries above each pivot reduced into [0, pivot).
    Rows whose first ``ncols`` entries vanish are moved to the end.
    """
    m = [list(r) for r in rows]
    top = 0
    for c in range(ncols):
        if top == len(m):
            break
        while True:
            nz = [i for i in range(top, len(m)) if m[i][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(m[i][c]))
            m[top], m[best] = m[best], m[top]
            clean = True
            for i in range(top + 1, len(m)):
                if m[i][c]:
                    f = m[i][c] // m[top][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[top])]
                    if m[i][c]:
                        clean = False
            if clean:
                break
        if top < len(m) and m[top][c] != 0:
            if m[top][c] < 0:
                m[top] = [-a for a in m[top]]
            piv = m[top][c]
            for i in range(top):
                f = m[i][c] // piv
                if f:
                    m[i] = [a - f * b for a, b in zip(m[i], m[top])]
            top += 1
    return m


def integer_left_kernel(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of {c in Z^k : sum_i c_i rows[i] = 0}."""
    k = len(rows)
    if k == 0:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [int(i == j) for j in range(k)] for i, r in enumerate(rows)]
    red = _echelonize(aug, ncols)
    return [tuple(r[ncols:]) for r in red if not any(r[:ncols])]


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form, in divisibility order."""
    m = [list(r) for r in matrix if any(r)]
    if not m:
        return []
    rows, cols = len(m), len(m[0])
    diag = []
    t = 0
    while t < min(rows, cols):
        entries = [(abs(m[i][j]), i, j) for i in range(t, rows)
                   for j in range(t, cols) if m[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        m[t], m[i0] = m[i0], m[t]
        for r in m:
            r[t], r[j0] = r[j0], r[t]
        while True:
            piv = m[t][t]
            done = True
            for i in range(t + 1, rows):
                if m[i][t]:
                    f = m[i][t] // piv
                    m[i] = [a - f * b for a, b in zip(m[i], m[t])]
                    if m[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if m[t][j]:
                    f = m[t][j] // piv
                    for r in m:
                        r[j] -= f * r[t]
                    if m[t][j]:
                        done = False
            if not done:
                # move the smallest remaining entry of row/column t to the pivot
                cand = [(abs(m[i][t]), i, t) for i in range(t, rows) if m[i][t]]
                cand += [(abs(m[t][j]), t, j) for j in range(t, cols) if m[t][j]]
                _, i0, j0 = min(cand)
                m[t], m[i0] = m[i0], m[t]
                for r in m:
                    r[t], r[j0] = r[j0], r[t]
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if m[i][j] % piv), None)
            if bad is None:
                break
            m[t] = [a + b for a, b in zip(m[t], m[bad[0]])]
        diag.append(abs(m[t][t]))
        t += 1
    return diag


# -- sublattices --------------------------------------------------------------

@dataclass(frozen=True)
class Sublattice:
    """A sublattice of Z^n stored by its row Hermite basis.

    Two sublattices are equal exactly when their canonical bases are equal.
    """

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @classmethod
    def full(cls, n: int) -> "Sublattice":
        return cls(n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "Sublattice":
        return cls(n, ())

    def __contains__(self, v) -> bool:
        return member(self, v)

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Integer coefficients of ``v`` in the canonical basis, or None."""
        if len(v) != self.ambient_rank:
            raise RankMismatch(f"vector of length {len(v)} in Z^{self.ambient_rank}")
        resid = list(v)
        coeffs = []
        for row in self.basis:
            pc = next(j for j, x in enumerate(row) if x)
            if any(resid[j] for j in range(pc)):
                return None
            if resid[pc] % row[pc]:
                return None
            c = resid[pc] // row[pc]
            coeffs.append(c)
            if c:
                resid = [a - c * b for a, b in zip(resid, row)]
        if any(resid):
            return None
        return tuple(coeffs)

    def scaled(self, k: int) -> "Sublattice":
        return canonical_form([tuple(k * x for x in b) for b in self.basis], self.ambient_rank)


@dataclass(frozen=True)
class QuotientInvariants:
    """Invariant factors d_1 | d_2 | ... (all > 1) plus the free rank."""

    invariant_factors: tuple[int, ...]
    free_rank: int

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out


def canonical_form(vectors: Iterable[Sequence[int]], ambient_rank: int | None = None) -> Sublattice:
    """The lattice generated by ``vectors``, in canonical form."""
    vecs = [tuple(int(x) for x in v) for v in vectors]
    if ambient_rank is None:
        if not vecs:
            raise ValueError("ambient_rank is required for an empty generating set")
        ambient_rank = len(vecs[0])
    if any(len(v) != ambient_rank for v in vecs):
        raise RankMismatch("generators of differing lengths")
    red = _echelonize(vecs, ambient_rank)
    return Sublattice(ambient_rank, tuple(tuple(r) for r in red if any(r)))


def _check_ranks(*lattices: Sublattice) -> None:
    if len({L.ambient_rank for L in lattices}) > 1:
        raise RankMismatch("sublattices of different ambient ranks")


def member(L: Sublattice, v: Sequence[int]) -> bool:
    return L.coordinates(v) is not None


def is_sublattice(small: Sublattice, big: Sublattice) -> bool:
    _check_ranks(small, big)
    return all(member(big, b) for b in small.basis)


def quotient_invariants(big: Sublattice, small: Sublattice) -> QuotientInvariants:
    """Invariant factor decomposition of big/small."""
    _check_ranks(big, small)
    coords = [big.coordinates(b) for b in small.basis]
    if any(c is None for c in coords):
        raise NotASublattice("small lattice is not contained in big lattice")
    diag = smith_diagonal(coords)
    return QuotientInvariants(tuple(d for d in diag if d != 1), big.rank - len(diag))


def index(big: Sublattice, small: Sublattice) -> int:
    q = quotient_invariants(big, small)
    if q.free_rank:
        raise InfiniteQuotient("quotient has positive free rank")
    return q.order


def p_torsion_exponent(q: QuotientInvariants, p: int) -> int:
    """Largest t such that p^t divides some invariant factor."""
    if q.free_rank:
        raise InfiniteQuotient("quotient has positive free rank")
    best = 0
    for d in q.invariant_factors:
        t = 0
        while d % p == 0:
            d //= p
            t += 1
        best = max(best, t)
    return best


def intersect(a: Sublattice, b: Sublattice) -> Sublattice:
    _check_ranks(a, b)
    n = a.ambient_rank
    if not a.basis or not b.basis:
        return Sublattice.zero(n)
    stacked = list(a.basis) + [tuple(-x for x in r) for r in b.basis]
    kernel = integer_left_kernel(stacked)
    gens = []
    for c in kernel:
        gens.append(tuple(sum(ci * r[j] for ci, r in zip(c[:a.rank], a.basis)) for j in range(n)))
    return canonical_form(gens, n)


def intersect_with_span(L: Sublattice, span_basis: Sequence[Sequence]) -> Sublattice:
    """L intersected with the rational span of ``span_basis``."""
    n = L.ambient_rank
    if any(len(v) != n for v in span_basis):
        raise RankMismatch("span vectors have the wrong length")
    if not L.basis:
        return L
    normals = nullspace(span_basis, n) if span_basis else [
        tuple(int(i == j) for j in range(n)) for i in range(n)]
    if not normals:
        return L
    pairing = [tuple(dot(b, w) for w in normals) for b in L.basis]
    kernel = integer_left_kernel(pairing)
    gens = [tuple(sum(ci * b[j] for ci, b in zip(c, L.basis)) for j in range(n)) for c in kernel]
    return canonical_form(gens, n)


def prime_to_p_saturation(big: Sublattice, small: Sublattice, p: int) -> Sublattice:
    """{x in big : m x in small for some m coprime to p}.

    If the exponent of big/small is p^t * m' with gcd(m', p) = 1, this is
    {x in big : m' x in small} = (m' big  intersect  small) / m'.
    """
    q = quotient_invariants(big, small)
    if q.free_rank:
        raise InfiniteQuotient("quotient has positive free rank")
    m = q.invariant_factors[-1] if q.invariant_factors else 1
    while m % p == 0:
        m //= p
    if m == 1:
        return small
    meet = intersect(big.scaled(m), small)
    return canonical_form([tuple(x // m for x in b) for b in meet.basis], big.ambient_rank)
