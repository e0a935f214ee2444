"""Exact polyhedral cones over the integers.

The workhorse is a double-description routine: given rows ``A`` it returns the
lineality space and the extreme rays of ``{x : A x <= 0}``.  Everything is
integer or ``Fraction``; no floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[int, ...]


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def primitive(v: Iterable) -> Vec:
    """Scale a rational vector to the primitive integer vector with the same direction."""
    v = [Fraction(a) for a in v]
    den = 1
    for a in v:
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return tuple(a // g for a in ints) if g else tuple(ints)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    M = [[Fraction(a) for a in r] for r in rows]
    pivots: list[int] = []
    if not M:
        return M, pivots
    ncol = len(M[0])
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [a * inv for a in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence], d: int) -> list[Vec]:
    """Primitive integer basis of ``{x : rows x = 0}``."""
    if not rows:
        return [tuple(int(i == j) for j in range(d)) for i in range(d)]
    R, piv = rref(rows)
    free = [c for c in range(d) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * d
        v[f] = Fraction(1)
        for r, c in zip(R, piv):
            v[c] = -r[f]
        basis.append(primitive(v))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Some solution of ``rows x = rhs`` or None."""
    d = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, piv = rref(aug)
    if d in piv:
        return None
    x = [Fraction(0)] * d
    for r, c in zip(R, piv):
        x[c] = r[d]
    return x


def inverse(M: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(M)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in R]


def hnf(rows: Sequence[Sequence[int]]) -> list[Vec]:
    """Non-zero rows of the row-style Hermite normal form of an integer matrix."""
    M = [list(r) for r in rows if any(r)]
    if not M:
        return []
    ncol = len(M[0])
    out: list[list[int]] = []
    r = 0
    for c in range(ncol):
        # Euclid on column c among rows r..
        while True:
            nz = [i for i in range(r, len(M)) if M[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(M[i][c]))
            M[r], M[p] = M[p], M[r]
            if M[r][c] < 0:
                M[r] = [-a for a in M[r]]
            done = True
            for i in range(r + 1, len(M)):
                if M[i][c]:
                    q = M[i][c] // M[r][c]
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
                    if M[i][c]:
                        done = False
            if done:
                break
        if r < len(M) and M[r][c] != 0:
            for i in range(r):
                q = M[i][c] // M[r][c]
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
            r += 1
    out = [tuple(row) for row in M[:r]]
    return out


def double_description(A: Sequence[Sequence[int]], d: int) -> tuple[list[Vec], list[Vec]]:
    """``(lineality_basis, extreme_rays)`` of ``{x in Q^d : A x <= 0}``.

    Rays are primitive and span a pointed cone inside the orthogonal
    complement of the lineality space.
    """
    A = [tuple(int(a) for a in r) for r in A if any(r)]
    lin = nullspace(A, d)
    rows = list(A) + [l for l in lin] + [tuple(-a for a in l) for l in lin]
    if d == 0 or len(lin) == d:
        return lin, []
    # initial simplicial cone from d independent rows
    basis: list[int] = []
    for i, r in enumerate(rows):
        if rank([rows[j] for j in basis] + [r]) > len(basis):
            basis.append(i)
            if len(basis) == d:
                break
    inv = inverse([rows[i] for i in basis])
    rays: list[Vec] = []
    masks: list[int] = []
    for j in range(d):
        rays.append(primitive(-inv[i][j] for i in range(d)))
    for r in rays:
        masks.append(sum(1 << bi for bi, i in enumerate(basis) if dot(rows[i], r) == 0))
    # bit positions: basis rows first, then the rest in order
    order = [i for i in range(len(rows)) if i not in basis]
    for pos_bit, i in enumerate(order, start=d):
        a = rows[i]
        vals = [dot(a, r) for r in rays]
        P = [j for j, v in enumerate(vals) if v > 0]
        bit = 1 << pos_bit
        if not P:
            masks = [m | bit if v == 0 else m for m, v in zip(masks, vals)]
            continue
        N = [j for j, v in enumerate(vals) if v < 0]
        new_rays, new_masks = [], []
        for p in P:
            for q in N:
                common = masks[p] & masks[q]
                if bin(common).count("1") < d - 2:
                    continue
                if any(r not in (p, q) and masks[r] & common == common for r in range(len(rays))):
                    continue
                v = tuple(vals[p] * b - vals[q] * c for b, c in zip(rays[q], rays[p]))
                new_rays.append(primitive(v))
                new_masks.append(common | bit)
        keep = [j for j, v in enumerate(vals) if v <= 0]
        rays = [rays[j] for j in keep] + new_rays
        masks = [masks[j] | (bit if vals[j] == 0 else 0) for j in keep] + new_masks
    seen, out = set(), []
    for r in rays:
        if r not in seen:
            seen.add(r)
            out.append(r)
    return lin, sorted(out)


@dataclass(frozen=True)
class Cone:
    """Polyhedral cone ``cone(rays) + span(lineality)`` in canonical form."""

    d: int
    rays: frozenset
    lineality: tuple  # RREF basis, canonical

    @staticmethod
    def _canon_lin(lin: Sequence[Vec], d: int) -> tuple:
        if not lin:
            return ()
        R, _ = rref(lin)
        return tuple(primitive(r) for r in R)

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], d: int) -> "Cone":
        gens = [tuple(g) for g in gens if any(g)]
        ineq, eqs = cone_hrep(gens, d)
        return cls.from_hrep(ineq, eqs, d)

    @classmethod
    def from_hrep(cls, ineq: Sequence[Vec], eqs: Sequence[Vec], d: int) -> "Cone":
        rows = list(ineq) + list(eqs) + [tuple(-a for a in e) for e in eqs]
        lin, rays = double_description(rows, d)
        return cls(d, frozenset(rays), cls._canon_lin(lin, d))

    def generators(self) -> list[Vec]:
        return sorted(self.rays) + [l for l in self.lineality] + [tuple(-a for a in l) for l in self.lineality]

    @property
    def dim(self) -> int:
        return rank(self.generators()) if self.generators() else 0

    def hrep(self) -> tuple[list[Vec], list[Vec]]:
        return cone_hrep(self.generators(), self.d)

    def contains(self, v: Sequence[int]) -> bool:
        ineq, eqs = self.hrep()
        return all(dot(a, v) <= 0 for a in ineq) and all(dot(e, v) == 0 for e in eqs)

    def intersect(self, other: "Cone") -> "Cone":
        i1, e1 = self.hrep()
        i2, e2 = other.hrep()
        return Cone.from_hrep(i1 + i2, e1 + e2, self.d)

    def faces_of_codim1(self) -> list["Cone"]:
        ineq, eqs = self.hrep()
        gens = self.generators()
        out = []
        for a in ineq:
            out.append(Cone.from_generators([g for g in gens if dot(a, g) == 0], self.d))
        return out

    def is_face_of(self, other: "Cone") -> bool:
        """True when ``self`` is a face of ``other``."""
        if not all(other.contains(g) for g in self.generators()):
            return False
        ineq, eqs = other.hrep()
        tight = [a for a in ineq if all(dot(a, g) == 0 for g in self.generators())]
        face = Cone.from_hrep(ineq, list(eqs) + tight, self.d)
        return face == self

    def to_json(self) -> list[list[int]]:
        return [list(g) for g in self.generators()]


def cone_hrep(gens: Sequence[Sequence[int]], d: int) -> tuple[list[Vec], list[Vec]]:
    """``(inequalities a with a.x <= 0, equations e with e.x = 0)`` describing ``cone(gens)``."""
    lin, rays = double_description(gens, d)
    return rays, lin


def is_two_face(gens: Sequence[Sequence[int]], u: Sequence[int], w: Sequence[int]) -> bool:
    """Is ``cone(u, w)`` a two-dimensional face of ``cone(gens)``?"""
    d = len(u)
    if rank([u, w]) != 2:
        return False
    ineq, eqs = cone_hrep(gens, d)
    tight = [a for a in ineq if dot(a, u) == 0 and dot(a, w) == 0]
    on_face = [g for g in gens if all(dot(a, g) == 0 for a in tight)]
    if rank([u, w] + on_face) != 2:
        return False
    # every generator on the face must lie in cone(u, w)
    for g in on_face:
        x = solve([[u[i], w[i]] for i in range(d)], list(g))
        if x is None or x[0] < 0 or x[1] < 0:
            return False
    return True


class Fan:
    """A polyhedral fan given by its maximal cones."""

    def __init__(self, cones: Iterable[Cone], d: int):
        uniq: dict[Cone, None] = {}
        for c in cones:
            uniq.setdefault(c, None)
        self.d = d
        self.cones: list[Cone] = sorted(uniq, key=lambda c: (sorted(c.rays), c.lineality))

    def __eq__(self, other):
        return isinstance(other, Fan) and self.d == other.d and set(self.cones) == set(other.cones)

    def __repr__(self):
        return f"Fan({len(self.cones)} cones in dim {self.d})"

    def rays(self) -> list[Vec]:
        return sorted({r for c in self.cones for r in c.rays})

    def full_dimensional(self) -> "Fan":
        return Fan([c for c in self.cones if c.dim == self.d], self.d)

    def contains_cone(self, cone: Cone) -> bool:
        """Is ``cone`` one of the cones of the fan (a maximal cone or a face of one)?"""
        return any(cone == c or cone.is_face_of(c) for c in self.cones)

    def is_complete(self) -> bool:
        """Full-dimensional maximal cones whose facets are each shared by exactly two cones."""
        if not self.cones or any(c.dim != self.d for c in self.cones):
            return False
        count: dict[Cone, int] = {}
        for c in self.cones:
            for f in c.faces_of_codim1():
                count[f] = count.get(f, 0) + 1
        if self.d == 1:
            return len(self.cones) == 2 or (len(self.cones) == 1 and self.cones[0].lineality)
        return all(v == 2 for v in count.values())

    def common_refinement(self, other: "Fan") -> "Fan":
        out = []
        for a in self.cones:
            for b in other.cones:
                c = a.intersect(b)
                if c.dim == self.d:
                    out.append(c)
        return Fan(out, self.d)

    def to_json(self) -> dict:
        return {"cones": [c.to_json() for c in self.cones]}


def refine_all(fans: Sequence[Fan]) -> Fan:
    out = fans[0]
    for f in fans[1:]:
        out = out.common_refinement(f)
    return out
