"""Weighted lattice polytopes, Newton polytopes and their mutation.

A polytope is a finite map from lattice points (y-exponent vectors) to
non-zero integer weights.  Convex-hull questions are answered exactly through
the cone of valid inequalities ``{(w, c) : w.p <= c for all p}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, Mapping, Sequence

from .cones import Cone, Fan, dot, double_description, hnf, primitive, rank
from .errors import (InputError, NegativeA, NotALaurentPolynomial, RouteMismatch)
from .exchange import column, pos
from .laurent import LaurentPoly, grade

Point = tuple[int, ...]


@dataclass(frozen=True)
class Face:
    points: frozenset
    dim: int
    normal: Point | None = None  # primitive outer normal, facets only

    def contains_direction(self, v: Sequence[int]) -> bool:
        """Does the affine span of the face contain direction ``v``?"""
        pts = sorted(self.points)
        diffs = [tuple(a - b for a, b in zip(p, pts[0])) for p in pts[1:]]
        return rank(diffs + [tuple(v)]) == rank(diffs) if diffs else not any(v)


class LatticePolytope:
    def __init__(self, n: int, weights: Mapping[Sequence[int], int]):
        w = {tuple(int(a) for a in p): int(c) for p, c in weights.items() if c}
        if not w:
            raise InputError("empty polytope")
        if any(len(p) != n for p in w):
            raise InputError("point of wrong dimension")
        self.rank = n
        self.weights: dict[Point, int] = w

    # basic -----------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.rank == other.rank and self.weights == other.weights

    def __hash__(self):
        return hash((self.rank, frozenset(self.weights.items())))

    def __repr__(self):
        return f"LatticePolytope({self.rank}, {dict(sorted(self.weights.items()))})"

    def points(self) -> list[Point]:
        return sorted(self.weights)

    def to_json(self) -> dict:
        return {"n": self.rank, "points": [{"p": list(p), "w": str(c)} for p, c in sorted(self.weights.items())]}

    @classmethod
    def from_json(cls, data: Mapping) -> "LatticePolytope":
        return cls(int(data["n"]), {tuple(e["p"]): int(e["w"]) for e in data["points"]})

    def translate(self, v: Sequence[int]) -> "LatticePolytope":
        return LatticePolytope(self.rank, {tuple(a + b for a, b in zip(p, v)): c for p, c in self.weights.items()})

    # hull --------------------------------------------------------------------
    @cached_property
    def _valid_cone(self):
        rows = [tuple(p) + (-1,) for p in self.weights]
        return double_description(rows, self.rank + 1)

    @cached_property
    def dim(self) -> int:
        pts = self.points()
        return rank([tuple(a - b for a, b in zip(p, pts[0])) for p in pts[1:]]) if len(pts) > 1 else 0

    @cached_property
    def facets(self) -> list[Face]:
        _, rays = self._valid_cone
        out = {}
        for r in rays:
            w, c = r[:-1], r[-1]
            pts = frozenset(p for p in self.weights if dot(w, p) == c)
            if pts and pts not in out:
                out[pts] = Face(pts, self.dim - 1, primitive(w))
        return sorted(out.values(), key=lambda f: sorted(f.points))

    @cached_property
    def face_lattice(self) -> dict[int, list[Face]]:
        """Every non-empty face, grouped by dimension (the polytope itself included)."""
        full = frozenset(self.weights)
        found: dict[frozenset, Face] = {full: Face(full, self.dim)}
        layer = [f.points for f in self.facets]
        for f in self.facets:
            found[f.points] = f
        while layer:
            nxt = []
            for i, a in enumerate(layer):
                for b in layer[i + 1:]:
                    s = a & b
                    if s and s not in found:
                        found[s] = Face(s, _affine_dim(s))
                        nxt.append(s)
            # intersections with facets close the lattice
            for s in list(nxt):
                for f in self.facets:
                    t = s & f.points
                    if t and t not in found:
                        found[t] = Face(t, _affine_dim(t))
                        nxt.append(t)
            layer = nxt
        out: dict[int, list[Face]] = {}
        for f in found.values():
            out.setdefault(f.dim, []).append(f)
        for d in out:
            out[d].sort(key=lambda f: sorted(f.points))
        return dict(sorted(out.items()))

    def faces(self, dim: int | None = None):
        fl = self.face_lattice
        return fl.get(dim, []) if dim is not None else fl

    @cached_property
    def vertices(self) -> list[Point]:
        return sorted(next(iter(f.points)) for f in self.faces(0)) if self.dim > 0 else self.points()

    @cached_property
    def edges(self) -> list[tuple[Point, Point]]:
        out = []
        for f in self.faces(1):
            ends = sorted(p for p in f.points if p in set(self.vertices))
            out.append((ends[0], ends[-1]))
        return sorted(out)

    def face_of(self, pts: Iterable[Point]) -> Face:
        """Smallest face containing ``pts``."""
        pts = set(pts)
        best = Face(frozenset(self.weights), self.dim)
        for d, fs in self.face_lattice.items():
            for f in fs:
                if pts <= f.points and f.dim < best.dim:
                    best = f
        return best

    def normal_cone(self, face: Face) -> Cone:
        """Cone of functionals maximized on ``face``."""
        ref = min(face.points)
        rows = [tuple(a - b for a, b in zip(p, ref)) for p in self.vertices]
        eqs = [tuple(a - b for a, b in zip(p, ref)) for p in face.points]
        return Cone.from_hrep(rows, eqs, self.rank)

    def normal_fan(self) -> Fan:
        return Fan([self.normal_cone(Face(frozenset([v]), 0)) for v in self.vertices], self.rank)

    def is_top_face(self, face: Face, k: int) -> bool:
        """Some supporting functional of ``face`` has positive ``k``-th entry."""
        return any(g[k - 1] > 0 for g in self.normal_cone(face).generators())

    def is_bottom_face(self, face: Face, k: int) -> bool:
        return any(g[k - 1] < 0 for g in self.normal_cone(face).generators())

    def max_edge_length(self, k: int) -> int:
        """Longest lattice length of an edge parallel to ``e_k`` (0 if none)."""
        best = 0
        for p, q in self.edges:
            d = [b - a for a, b in zip(p, q)]
            if all(v == 0 for i, v in enumerate(d) if i != k - 1):
                best = max(best, abs(d[k - 1]))
        return best

    def section(self, k: int, p: Sequence[int]) -> list[Point]:
        """Support points on the line through ``p`` parallel to ``e_k``, ordered by the ``k``-th entry."""
        key = tuple(v for i, v in enumerate(p) if i != k - 1)
        return sorted((q for q in self.weights if tuple(v for i, v in enumerate(q) if i != k - 1) == key),
                      key=lambda q: q[k - 1])

    def sections(self, k: int) -> list[tuple[Point, int]]:
        """``(lowest point, length)`` for each non-empty ``k``-section."""
        lo: dict[tuple, tuple[int, int]] = {}
        for q in self.weights:
            key = q[:k - 1] + q[k:]
            a, b = lo.get(key, (q[k - 1], q[k - 1]))
            lo[key] = (min(a, q[k - 1]), max(b, q[k - 1]))
        return sorted((key[:k - 1] + (a,) + key[k - 1:], b - a) for key, (a, b) in lo.items())

    def degree_along(self, p: Sequence[int], h: Sequence[int], k: int, B) -> int:
        """``deg_{x_k}(Yhat^p X^h) = h_k + sum_i p_i b_ki``."""
        return h[k - 1] + sum(p[i] * B[k - 1][i] for i in range(self.rank))

    def ldim(self, pts: Iterable[Point]) -> int:
        pts = sorted(pts)
        return len(hnf([tuple(a - b for a, b in zip(q, pts[0])) for q in pts[1:]]))


def _affine_dim(pts) -> int:
    pts = sorted(pts)
    return rank([tuple(a - b for a, b in zip(p, pts[0])) for p in pts[1:]]) if len(pts) > 1 else 0


def minkowski(a: LatticePolytope, b: LatticePolytope) -> LatticePolytope:
    """Weighted Minkowski sum: convolution of weights."""
    if a.rank != b.rank:
        raise InputError("dimension mismatch")
    out: dict[Point, int] = {}
    for p, c in a.weights.items():
        for q, d in b.weights.items():
            s = tuple(x + y for x, y in zip(p, q))
            out[s] = out.get(s, 0) + c * d
    return LatticePolytope(a.rank, out)


def minkowski_all(polys: Iterable[LatticePolytope]) -> LatticePolytope:
    polys = list(polys)
    out = polys[0]
    for p in polys[1:]:
        out = minkowski(out, p)
    return out


def newton(f: LaurentPoly, B) -> tuple[LatticePolytope, tuple[int, ...]]:
    """Newton polytope (weights = coefficients of the F-part) and degree of a homogeneous ``f``."""
    h = grade(f, B)
    F = f.specialize_x()
    return LatticePolytope(f.rank, {y: c for _, y, c in F.items()}), h


def mutate_degree(h: Sequence[int], k: int, B) -> tuple[int, ...]:
    """``h - 2 h_k e_k + h_k [b_k]_+ + [-h_k]_+ b_k`` with ``b_k`` the ``k``-th column of ``B``."""
    hk = h[k - 1]
    bk = column(B, k)
    out = [h[i] + hk * pos(bk[i]) + pos(-hk) * bk[i] for i in range(len(h))]
    out[k - 1] -= 2 * hk
    return tuple(out)


def _phi(p: Sequence[int], k: int, B) -> Point:
    q = list(p)
    q[k - 1] = -p[k - 1] + sum(pos(B[k - 1][j]) * p[j] for j in range(len(p)) if j != k - 1)
    return tuple(q)


def mutate_sections(N: LatticePolytope, h: Sequence[int], k: int, B) -> dict[Point, int]:
    """Step (a): rebuild each ``k``-section from its binomial decomposition."""
    out: dict[Point, int] = {}
    for lo, L in N.sections(k):
        d = N.degree_along(lo, h, k, B)
        m_old, m_new = pos(-d), pos(d)
        w = [N.weights.get(lo[:k - 1] + (lo[k - 1] + l,) + lo[k:], 0) for l in range(L + 1)]
        a = []
        for l in range(L + 1):
            a.append(w[l] - sum(a[i] * comb(m_old, l - i) for i in range(l)))
        if any(v < 0 for v in a):
            raise NegativeA("negative coefficient in section decomposition",
                            {"section_start": list(lo), "k": k, "a": a})
        if any(a[i] for i in range(max(L - m_old + 1, 0), L + 1)):
            raise NotALaurentPolynomial("section is not divisible by the exchange binomial",
                                        {"section_start": list(lo), "k": k, "a": a, "deg": d})
        for l in range(L + d + 1):
            c = sum(a[i] * comb(m_new, l - i) for i in range(min(l, L) + 1) if l - i <= m_new)
            if c:
                p = lo[:k - 1] + (lo[k - 1] + l,) + lo[k:]
                out[p] = out.get(p, 0) + c
    return out


def mutate_product_geometric(N: LatticePolytope, degrees: Sequence[Sequence[int]], k: int, B):
    """Geometric mutation of the polytope of a product of polytope functions with the given degrees.

    Returns ``(N', degrees')``.  The translation in step (b) is the sum of the
    factors' ``[h_k]_+``, which differs from that of the total degree when the
    factors' ``k``-th entries have mixed signs.
    """
    total = tuple(sum(col) for col in zip(*degrees))
    shift = sum(pos(h[k - 1]) for h in degrees)
    stepa = mutate_sections(N, total, k, B)
    out: dict[Point, int] = {}
    for p, c in stepa.items():
        q = list(p)
        q[k - 1] -= shift
        r = _phi(q, k, B)
        if min(r) < 0:
            raise NotALaurentPolynomial("mutated point has a negative coordinate", {"point": list(r)})
        out[r] = out.get(r, 0) + c
    return LatticePolytope(N.rank, out), [mutate_degree(h, k, B) for h in degrees]


def mutate_polytope_geometric(N: LatticePolytope, h: Sequence[int], k: int, B):
    """Steps (a)-(c) for the polytope of a single polytope function of degree ``h``; returns ``(N', h')``."""
    N2, (h2,) = mutate_product_geometric(N, [h], k, B)
    return N2, h2


def transport(f: LaurentPoly, B, k: int, h: Sequence[int] | None = None) -> LaurentPoly:
    """Rewrite a homogeneous ``f`` (principal coefficients at the seed with matrix ``B``) at ``mu_k``.

    Substitutes ``x_k = M_k / x_k'``, divides by ``y_k^[h_k]_+`` and replaces
    ``y_k -> y_k'^-1``, ``y_j -> y_j' y_k'^[b_kj]_+``.  The result has principal
    coefficients at the mutated seed.
    """
    n = f.rank
    if h is None:
        h = grade(f, B)
    bk = column(B, k)
    M = (LaurentPoly.monomial(n, [pos(b) for b in bk], [int(i == k - 1) for i in range(n)])
         + LaurentPoly.monomial(n, [pos(-b) for b in bk]))
    parts = f.x_degree_decompose(k)
    D = max([0] + [-s for s in parts])
    acc = LaurentPoly(n)
    for s, Q in parts.items():
        xk = [0] * n
        xk[k - 1] = -s
        acc = acc + Q * LaurentPoly.monomial(n, xk) * M ** (s + D)
    acc = acc.exact_div(M ** D)
    shift = pos(h[k - 1])

    def sub(x, y):
        y2 = list(y)
        y2[k - 1] = -y[k - 1] + shift + sum(pos(B[k - 1][j]) * y[j] for j in range(n) if j != k - 1)
        return x, y2

    out = acc.map_exponents(sub)
    bad = [y for _, y, _ in out.items() if min(y) < 0]
    if bad:
        raise NotALaurentPolynomial("transport leaves negative y-exponents", {"example": list(bad[0])})
    return out


def mutate_polytope_algebraic(f: LaurentPoly, B, k: int):
    """Newton polytope route: ``(newton(transport f), h')`` under the mutated matrix."""
    from .exchange import mutate_matrix
    g = transport(f, B, k)
    return newton(g, mutate_matrix(B, k))


def check_polytope_routes(f: LaurentPoly, B, k: int) -> LatticePolytope:
    N, h = newton(f, B)
    geo, h_geo = mutate_polytope_geometric(N, h, k, B)
    alg, h_alg = mutate_polytope_algebraic(f, B, k)
    if geo != alg or tuple(h_geo) != tuple(h_alg):
        raise RouteMismatch("geometric and algebraic polytope mutation differ",
                            {"k": k, "geometric": geo.to_json(), "algebraic": alg.to_json(),
                             "h_geometric": list(h_geo), "h_algebraic": list(h_alg)})
    return geo
