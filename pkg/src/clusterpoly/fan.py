"""Normal vectors under mutation, the normal-set algorithm, the tracked cube and the fan of g-cones."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from .cones import Cone, Fan, dot, is_two_face, nullspace, primitive, rank, refine_all
from .duality import gc_along
from .errors import (CorrelationAmbiguous, DepthBoundNotice, FacetNotFound, FaceTestFailure,
                     InputError, InvariantViolation, RouteMismatch)
from .exchange import (Matrix, as_matrix, check_square, identity,
                       mutate_matrix, neg_transpose, pos, require_sign_skew_symmetric, sign,
                       transpose)
from .laurent import LaurentPoly
from .polytope import LatticePolytope, minkowski_all, mutate_product_geometric, newton, transport
from .seed import exchange_binomial, initial_seed

Vec = tuple[int, ...]


def normal_mutation(v: Sequence[int], k: int, M) -> Vec:
    """``v'_k = -v_k``, ``v'_j = v_j + sign(v_k)[-m_kj v_k]_+``."""
    vk = v[k - 1]
    if vk == 0:
        return tuple(v)
    s = sign(vk)
    out = [v[j] + s * pos(-M[k - 1][j] * vk) for j in range(len(v))]
    out[k - 1] = -vk
    return tuple(out)


def edge_mutation(a: Sequence[int], k: int, B, top: bool) -> Vec:
    """Edge vector under mutation: bottom edges use ``[b_ks]_+``, top edges ``[-b_ks]_+``."""
    out = list(a)
    out[k - 1] = -a[k - 1] + sum(pos((-1 if top else 1) * B[k - 1][s]) * a[s]
                                 for s in range(len(a)) if s != k - 1)
    return tuple(out)


# normal sets -------------------------------------------------------------------

@dataclass(frozen=True)
class NormalSet:
    """Column-indexed integer matrix whose columns generate a full-dimensional cone."""

    columns: tuple[Vec, ...]

    @property
    def rank(self) -> int:
        return len(self.columns[0])

    def matrix(self) -> Matrix:
        return transpose(self.columns)

    def cone(self) -> Cone:
        return Cone.from_generators(self.columns, self.rank)

    def check(self) -> None:
        cols = self.columns
        for a, b in itertools.combinations(cols, 2):
            if a == b or a == tuple(-x for x in b):
                raise InvariantViolation("repeated or opposite columns", {"columns": [list(c) for c in cols]})
        if rank(cols) != self.rank:
            raise InvariantViolation("columns do not span", {"columns": [list(c) for c in cols]})

    def to_json(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self.matrix()]


def _split(G: NormalSet, k: int, M) -> list[NormalSet]:
    """Cut ``cone(G)`` by ``z_k = 0`` and mutate each full-dimensional piece (``+`` piece first)."""
    cols = G.columns
    plus = [l for l, c in enumerate(cols) if c[k - 1] >= 0]
    minus = [l for l, c in enumerate(cols) if c[k - 1] <= 0]
    pairs = []
    for l1 in plus:
        for l2 in minus:
            u, w = cols[l1], cols[l2]
            if u[k - 1] > 0 and w[k - 1] < 0 and is_two_face(cols, u, w):
                pairs.append((l1, l2, primitive(tuple(-w[k - 1] * a + u[k - 1] * b for a, b in zip(u, w)))))
    out = []
    for eps, own in ((1, plus), (-1, minus)):
        if not any(eps * cols[l][k - 1] > 0 for l in own):
            continue
        keyed = [((l,), normal_mutation(cols[l], k, M)) for l in own]
        for l1, l2, v in pairs:
            keyed.append(((l2, l1) if eps == 1 else (l1, l2), v))
        keyed.sort(key=lambda kv: kv[0])
        ns = NormalSet(tuple(v for _, v in keyed))
        ns.check()
        out.append(ns)
    return out


def g_sets(B, lam: Sequence[int], path: Sequence[int]) -> list[list[NormalSet]]:
    """Normal sets at ``t_r, t_{r-1}, ..., t_0`` for the path ``t_0 -i_1- ... -i_r- t_r``.

    The step leaving ``t_j`` uses direction ``i_j`` and matrix ``-B_{t_j}^T``.
    """
    B = as_matrix(B)
    n = check_square(B)
    if len(lam) != n or any(v == 0 for v in lam):
        raise InputError("lambda must have n non-zero entries")
    mats = [B]
    for k in path:
        mats.append(mutate_matrix(mats[-1], k))
        require_sign_skew_symmetric(mats[-1])
    current = [NormalSet(tuple(tuple(lam[i] if i == j else 0 for i in range(n)) for j in range(n)))]
    out = [current]
    for j in range(len(path), 0, -1):
        M = neg_transpose(mats[j])
        nxt: list[NormalSet] = []
        for G in current:
            for piece in _split(G, path[j - 1], M):
                if piece not in nxt:
                    nxt.append(piece)
        current = nxt
        out.append(current)
    return out


def ng_t_fan(B, path: Sequence[int]) -> Fan:
    """Cones of every final normal set, over all sign vectors ``lambda``."""
    n = len(B)
    cones = []
    for lam in itertools.product((1, -1), repeat=n):
        for G in g_sets(B, lam, path)[-1]:
            cones.append(G.cone())
    return Fan(cones, n)


def ng_fan(B, route: int = 1, depth: int | None = None, max_seeds: int = 2000) -> Fan:
    """The fan of g-vectors' normal structure.

    Route 1: normal fan of the Minkowski sum of the Newton polytopes of all
    cluster variables of ``A(-B^T)``.  Route 2: common refinement of the
    per-vertex fans built by :func:`g_sets`.  With ``depth`` set, only seeds
    within that distance are used and a :class:`DepthBoundNotice` is issued.
    """
    from .compat import seed_paths
    B = as_matrix(B)
    check_square(B)
    if route == 1:
        paths = seed_paths(neg_transpose(B), depth=depth, max_seeds=max_seeds)
        from .seed import Pattern
        P = Pattern(neg_transpose(B))
        polys = {}
        for p in paths:
            s = P.seed(p)
            for v in s.vars:
                polys.setdefault(v, _vertex_polytope(newton(v, P.B0)[0]))
        total = polys_sum(list(polys.values()))
        fan = total.normal_fan()
    elif route == 2:
        paths = seed_paths(B, depth=depth, max_seeds=max_seeds)
        fan = refine_all([ng_t_fan(B, p) for p in paths])
    else:
        raise InputError("route must be 1 or 2")
    if depth is not None:
        warnings.warn(DepthBoundNotice(f"fan built from seeds within depth {depth}"))
    return fan


def _vertex_polytope(N: LatticePolytope) -> LatticePolytope:
    return LatticePolytope(N.rank, {v: 1 for v in N.vertices})


def polys_sum(polys: list[LatticePolytope]) -> LatticePolytope:
    """Minkowski sum keeping only vertices after every step (enough for the normal fan)."""
    out = polys[0]
    for p in polys[1:]:
        out = _vertex_polytope(minkowski_all([out, p]))
    return out


def g_cone_fan(B, depth: int | None = None, max_seeds: int = 2000) -> Fan:
    """Fan of the cones spanned by the columns of the G-matrices."""
    from .compat import seed_paths
    n = len(B)
    return Fan([Cone.from_generators(transpose(gc_along(B, p)[0]), n)
                for p in seed_paths(B, depth=depth, max_seeds=max_seeds)], n)


def gfan_containment_check(B, fan: Fan, depth: int | None = None) -> dict:
    """Every g-cone and both orthants must be cones of ``fan``."""
    n = len(B)
    missing = [c for c in g_cone_fan(B, depth).cones if not fan.contains_cone(c)]
    orth = [Cone.from_generators(identity(n), n),
            Cone.from_generators([tuple(-v for v in r) for r in identity(n)], n)]
    missing += [c for c in orth if not fan.contains_cone(c)]
    if missing:
        from .errors import ContainmentViolation
        raise ContainmentViolation("cone missing from fan", {"cone": missing[0].to_json()})
    return {"identity": "gfan-containment", "status": "ok", "cones": len(fan.cones)}


# tracked cube -------------------------------------------------------------------

@dataclass
class TrackedCube:
    """Polytope of ``prod_i x_i x_i'`` followed along a mutation path, with two tracked edge corners."""

    B: Matrix                      # exchange matrix at the current vertex
    factors: list[LaurentPoly]     # the 2n cluster variables, principal coefficients here
    degrees: list[Vec]
    polytope: LatticePolytope
    edges: dict[int, list[tuple[Vec, Vec]]]  # eps -> [(p_j, q_j)]
    path: list[int] = field(default_factory=list)

    @classmethod
    def start(cls, B) -> "TrackedCube":
        B = as_matrix(B)
        n = check_square(B)
        s = initial_seed(B)
        factors, degrees = [], []
        for i in range(1, n + 1):
            xi = s.vars[i - 1]
            xi2 = exchange_binomial(s, i).exact_div(xi)
            factors += [xi, xi2]
        polys = []
        for f in factors:
            N, h = newton(f, B)
            polys.append(N)
            degrees.append(h)
        cube = minkowski_all(polys)
        zero, one = (0,) * n, (1,) * n
        unit = [tuple(int(i == j) for i in range(n)) for j in range(n)]
        edges = {-1: [(zero, u) for u in unit],
                 1: [(tuple(1 - a for a in u), one) for u in unit]}
        return cls(B, factors, degrees, cube, edges)

    @property
    def rank(self) -> int:
        return len(self.B)

    def corner(self, eps: int) -> Vec:
        return self.edges[eps][0][0] if eps == -1 else self.edges[eps][0][1]

    def total_degree(self) -> Vec:
        return tuple(sum(c) for c in zip(*self.degrees))

    def edge_matrix(self, eps: int) -> Matrix:
        """Columns: primitive vectors along ``q_j - p_j``."""
        return transpose([primitive(b - a for a, b in zip(p, q)) for p, q in self.edges[eps]])

    def facet_normal(self, eps: int, i: int) -> Vec:
        """Primitive outer normal of the facet spanned by the tracked edges other than ``i`` (1-based)."""
        n = self.rank
        vecs = [tuple(b - a for a, b in zip(p, q)) for j, (p, q) in enumerate(self.edges[eps]) if j != i - 1]
        corner = self.corner(eps)
        if n == 1:
            w = (1,)
        else:
            ns = nullspace(vecs, n)
            if len(ns) != 1:
                raise FacetNotFound("tracked edges are dependent", {"edges": [list(v) for v in vecs]})
            w = ns[0]
        vals = [dot(w, tuple(a - b for a, b in zip(p, corner))) for p in self.polytope.weights]
        if all(v >= 0 for v in vals):
            w = tuple(-a for a in w)
            vals = [-v for v in vals]
        if any(v > 0 for v in vals):
            raise FacetNotFound("hyperplane through tracked edges is not supporting",
                                {"eps": eps, "i": i, "normal": list(w)})
        on = [p for p, v in zip(self.polytope.weights, vals) if v == 0]
        if n > 1 and self.polytope.ldim(on) != n - 1:
            raise FacetNotFound("tracked edges do not span a facet", {"eps": eps, "i": i})
        return primitive(w)

    def normal_matrix(self, eps: int) -> Matrix:
        return transpose([self.facet_normal(eps, i) for i in range(1, self.rank + 1)])


def _image(tc: TrackedCube, x: Vec, k: int, top: bool, shift: int) -> Vec:
    h = tc.total_degree()
    p = list(x)
    if top:
        p[k - 1] += tc.polytope.degree_along(x, h, k, tc.B)
    p[k - 1] -= shift
    B = tc.B
    q = list(p)
    q[k - 1] = -p[k - 1] + sum(pos(B[k - 1][j]) * p[j] for j in range(len(p)) if j != k - 1)
    return tuple(q)


def _edge_side(tc: TrackedCube, eps: int, j: int, k: int) -> bool:
    """True when the ``j``-th tracked edge (0-based) is a top edge with respect to ``k``."""
    N = tc.polytope
    p, q = tc.edges[eps][j]
    votes = set()
    for x in (p, q):
        sec = N.section(k, x)
        if len(sec) > 1 and sec[0] != sec[-1]:
            votes.add(x == sec[-1])
    if tc.rank > 1:
        ks = {sign(tc.facet_normal(eps, i + 1)[k - 1]) for i in range(tc.rank) if i != j} - {0}
        if len(ks) > 1:
            raise CorrelationAmbiguous("tracked facets on both sides", {"eps": eps, "edge": j + 1, "k": k})
        if ks:
            votes.add(ks.pop() > 0)
    if len(votes) != 1:
        raise CorrelationAmbiguous("cannot decide top/bottom for tracked edge",
                                   {"eps": eps, "edge": j + 1, "k": k, "votes": sorted(votes)})
    return votes.pop()


def mutate_tracked(tc: TrackedCube, k: int) -> TrackedCube:
    """Mutate in direction ``k``: polytope by both routes, edges by point correlation."""
    n = tc.rank
    if not 1 <= k <= n:
        raise InputError(f"direction {k} outside 1..{n}")
    B2 = mutate_matrix(tc.B, k)
    require_sign_skew_symmetric(B2)
    factors = [transport(f, tc.B, k, h) for f, h in zip(tc.factors, tc.degrees)]
    polys, degrees = [], []
    for f in factors:
        N, h = newton(f, B2)
        polys.append(N)
        degrees.append(h)
    alg = minkowski_all(polys)
    geo, geo_deg = mutate_product_geometric(tc.polytope, tc.degrees, k, tc.B)
    if alg != geo or [tuple(d) for d in geo_deg] != degrees:
        raise RouteMismatch("tracked polytope routes differ", {"path": tc.path + [k]})
    shift = sum(pos(h[k - 1]) for h in tc.degrees)
    new_edges: dict[int, list[tuple[Vec, Vec]]] = {}
    for eps in (-1, 1):
        out = []
        for j, (p, q) in enumerate(tc.edges[eps]):
            a = tuple(b - c for b, c in zip(q, p))
            if all(v == 0 for i, v in enumerate(a) if i != k - 1):
                lo, hi = (p, q) if a[k - 1] > 0 else (q, p)
                img = {lo: _image(tc, lo, k, False, shift), hi: _image(tc, hi, k, True, shift)}
            else:
                top = _edge_side(tc, eps, j, k)
                img = {x: _image(tc, x, k, top, shift) for x in (p, q)}
            p2, q2 = img[p], img[q]
            if p2 == q2:
                raise CorrelationAmbiguous("tracked edge collapses", {"eps": eps, "edge": j + 1, "k": k})
            out.append((p2, q2))
        new_edges[eps] = out
    nxt = TrackedCube(B2, factors, degrees, alg, new_edges, tc.path + [k])
    for eps in (-1, 1):
        corners = {e[0] if eps == -1 else e[1] for e in new_edges[eps]}
        if len(corners) != 1:
            raise CorrelationAmbiguous("tracked corner splits", {"eps": eps, "corners": sorted(corners)})
        for p, q in new_edges[eps]:
            if (min(p, q), max(p, q)) not in set(alg.edges):
                raise FacetNotFound("correlated segment is not an edge",
                                    {"eps": eps, "segment": [list(p), list(q)], "path": nxt.path})
    return nxt


def track(B, path: Sequence[int]) -> TrackedCube:
    tc = TrackedCube.start(B)
    for k in path:
        tc = mutate_tracked(tc, k)
    return tc


def verify_edges_are_cvectors(B, path: Sequence[int], raise_on_failure: bool = True) -> dict:
    """Tracked edges equal ``C_{t0}^{eps B_t;t}`` and tracked normals equal ``eps G_{t0}^{-eps B_t^T;t}``."""
    B = as_matrix(B)
    tc = track(B, path)
    Bt = tc.B
    back = list(reversed(path))
    result = {"identity": "edges-are-cvectors", "B": [list(r) for r in B], "path": list(path), "status": "ok"}
    for eps in (-1, 1):
        C = gc_along(tuple(tuple(eps * v for v in r) for r in Bt), back)[1]
        G = gc_along(tuple(tuple(-eps * v for v in r) for r in transpose(Bt)), back)[0]
        E, Nm = tc.edge_matrix(eps), tc.normal_matrix(eps)
        Ge = tuple(tuple(eps * v for v in r) for r in G)
        if E != C or Nm != Ge:
            result["status"] = "violation"
            result["witness"] = {"eps": eps, "edges": [list(r) for r in E], "C": [list(r) for r in C],
                                 "normals": [list(r) for r in Nm], "epsG": [list(r) for r in Ge]}
            if raise_on_failure:
                from .errors import IdentityViolation
                raise IdentityViolation("tracked edges or normals disagree", result)
            return result
    return result


def check_face_support_criterion(B, path: Sequence[int], eps: int) -> int:
    """For each step ``s`` and each tracked facet, compare the polytope-side and g-vector-side tests.

    The facet omitting edge ``j`` contains a segment parallel to ``e_{i_s}``
    exactly when ``i_s`` is outside the support of the ``j``-th g-vector of
    ``G_{t0}^{-eps B^T_{t_{s-1}}; t_{s-1}}``.  Returns the number of checks.
    """
    B = as_matrix(B)
    tc = TrackedCube.start(B)
    checks = 0
    for s, k in enumerate(path):
        back = list(reversed(path[:s]))
        G = gc_along(tuple(tuple(-eps * v for v in r) for r in transpose(tc.B)), back)[0]
        for j in range(1, tc.rank + 1):
            normal = tc.facet_normal(eps, j)
            face = tc.polytope.face_of(p for p in tc.polytope.weights
                                       if dot(normal, p) == dot(normal, tc.corner(eps)))
            unit = tuple(int(i == k - 1) for i in range(tc.rank))
            geometric = face.contains_direction(unit)
            algebraic = G[k - 1][j - 1] == 0
            if geometric != algebraic:
                raise FaceTestFailure("face support criterion fails",
                                      {"path": list(path), "step": s + 1, "facet": j, "eps": eps})
            checks += 1
        tc = mutate_tracked(tc, k)
    return checks


def face_signatures(tc: TrackedCube) -> list[tuple[int, tuple[int, ...]]]:
    """Sorted ``(dim, zero coordinates)`` for every face of the tracked polytope.

    A coordinate ``j`` is listed when every point of the face has ``j``-th entry 0.
    """
    out = []
    for d, faces in tc.polytope.faces().items():
        for f in faces:
            zeros = tuple(j for j in range(1, tc.rank + 1) if all(p[j - 1] == 0 for p in f.points))
            out.append((d, zeros))
    return sorted(out)


def check_dual_face_complexes(B, path: Sequence[int]) -> bool:
    """Spot check: the tracked polytopes for ``B`` and ``-B^T`` have matching face signatures."""
    a = track(B, path)
    b = track(neg_transpose(as_matrix(B)), path)
    if face_signatures(a) != face_signatures(b):
        raise FaceTestFailure("face complexes differ", {"path": list(path)})
    return True
