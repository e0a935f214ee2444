"""Exchange-graph enumeration, compatibility degree and the cluster complex."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .cones import Cone, Fan, solve
from .duality import gc_along
from .errors import (ConnectivityViolation, DepthExceeded, OutOfScope, VariableNotInCatalog,
                     WellDefinednessViolation)
from .exchange import Matrix, as_matrix, check_square, path_between, transpose
from .laurent import LaurentPoly
from .polytope import LatticePolytope, minkowski, newton
from .seed import Pattern


def seed_paths(B, depth: int | None = None, max_seeds: int = 2000,
               order: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """One path per seed, found by BFS on G-matrices (seeds identified by their set of g-vectors).

    Matrix-only; serves as the oracle for :func:`enumerate_seeds`.
    """
    B = as_matrix(B)
    n = check_square(B)
    order = list(order or range(1, n + 1))
    key0 = frozenset(transpose(gc_along(B, ())[0]))
    seen = {key0}
    out = [()]
    queue = deque([((), 0)])
    while queue:
        path, dist = queue.popleft()
        if depth is not None and dist >= depth:
            continue
        for k in order:
            if path and path[-1] == k:
                continue
            p2 = path + (k,)
            key = frozenset(transpose(gc_along(B, p2)[0]))
            if key in seen:
                continue
            seen.add(key)
            out.append(p2)
            if depth is None and len(out) > max_seeds:
                raise DepthExceeded(f"more than {max_seeds} seeds", {"B": [list(r) for r in B]}, out)
            queue.append((p2, dist + 1))
    return out


def g_vector_count(B, depth: int | None = None, order=None) -> int:
    return len({g for p in seed_paths(B, depth, order=order) for g in transpose(gc_along(B, p)[0])})


@dataclass
class SeedCatalog:
    B: Matrix
    variables: list[LaurentPoly] = field(default_factory=list)
    seeds: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)  # (path, var ids)
    complete: bool = True

    def __post_init__(self):
        self._patterns: dict[tuple[int, ...], Pattern] = {}
        self._index = {v: i for i, v in enumerate(self.variables)}

    @property
    def rank(self) -> int:
        return len(self.B)

    def var_id(self, f: LaurentPoly) -> int:
        if f not in self._index:
            raise VariableNotInCatalog("variable not in catalog", {"poly": str(f)})
        return self._index[f]

    def seeds_containing(self, vid: int) -> list[int]:
        return [s for s, (_, ids) in enumerate(self.seeds) if vid in ids]

    def home(self, vid: int) -> tuple[tuple[int, ...], int]:
        """A path to a seed holding variable ``vid`` and its label there (1-based)."""
        for path, ids in self.seeds:
            if vid in ids:
                return path, ids.index(vid) + 1
        raise VariableNotInCatalog("variable id out of range", {"id": vid})

    def pattern_at(self, sidx: int) -> Pattern:
        path = self.seeds[sidx][0]
        if path not in self._patterns:
            from .exchange import mutate_along
            self._patterns[path] = Pattern(mutate_along(self.B, path))
        return self._patterns[path]

    def expansion_at(self, vid: int, sidx: int) -> LaurentPoly:
        """Variable ``vid`` written in the cluster of seed ``sidx`` (principal coefficients there)."""
        hpath, label = self.home(vid)
        spath = self.seeds[sidx][0]
        return self.pattern_at(sidx).seed(path_between(spath, hpath)).vars[label - 1]

    def g_vector_of(self, vid: int) -> tuple[int, ...]:
        return g_vector_from(self.variables[vid], self.B)

    def to_json(self) -> dict:
        return {"B": {"n": self.rank, "rows": [[str(v) for v in r] for r in self.B]},
                "complete": self.complete,
                "variables": [v.to_json() for v in self.variables],
                "seeds": [{"path": list(p), "vars": list(ids)} for p, ids in self.seeds]}

    @classmethod
    def from_json(cls, data) -> "SeedCatalog":
        B = as_matrix([[int(v) for v in r] for r in data["B"]["rows"]])
        return cls(B, [LaurentPoly.from_json(v) for v in data["variables"]],
                   [(tuple(s["path"]), tuple(s["vars"])) for s in data["seeds"]], data["complete"])


def g_vector_from(f: LaurentPoly, B) -> tuple[int, ...]:
    from .laurent import grade
    return grade(f, B)


def enumerate_seeds(B, depth: int | None = None, max_seeds: int = 2000,
                    order: Sequence[int] | None = None) -> SeedCatalog:
    """BFS over seeds by Laurent expansion; seeds are identified by their set of cluster variables."""
    B = as_matrix(B)
    n = check_square(B)
    order = list(order or range(1, n + 1))
    P = Pattern(B)
    cat = SeedCatalog(B)
    index: dict[LaurentPoly, int] = {}

    def ids_of(s):
        out = []
        for v in s.vars:
            if v not in index:
                index[v] = len(cat.variables)
                cat.variables.append(v)
            out.append(index[v])
        return tuple(out)

    seen = {frozenset(P.seed(()).vars)}
    cat.seeds.append(((), ids_of(P.seed(()))))
    queue = deque([((), 0)])
    while queue:
        path, dist = queue.popleft()
        if depth is not None and dist >= depth:
            cat.complete = False if _has_new_neighbour(P, path, seen, order) else cat.complete
            continue
        for k in order:
            if path and path[-1] == k:
                continue
            p2 = path + (k,)
            s = P.seed(p2)
            key = frozenset(s.vars)
            if key in seen:
                continue
            seen.add(key)
            cat.seeds.append((p2, ids_of(s)))
            if depth is None and len(cat.seeds) > max_seeds:
                cat.complete = False
                cat.__post_init__()
                raise DepthExceeded(f"more than {max_seeds} seeds", {"B": [list(r) for r in B]}, cat)
            queue.append((p2, dist + 1))
    cat.__post_init__()
    return cat


def _has_new_neighbour(P: Pattern, path, seen, order) -> bool:
    return any(frozenset(P.seed(path + (k,)).vars) not in seen for k in order if not path or path[-1] != k)


def compatibility_degree(cat: SeedCatalog, f_ids: Sequence[int] | int, x_id: int) -> int:
    """``(f | x)``: the ``x``-entry of the d-vector of ``f`` in any cluster containing ``x``.

    ``f_ids`` is a variable id or a multiset of ids (a cluster monomial).
    Raises ``WellDefinednessViolation`` if two clusters disagree.
    """
    if isinstance(f_ids, int):
        f_ids = [f_ids]
    for v in list(f_ids) + [x_id]:
        if not 0 <= v < len(cat.variables):
            raise VariableNotInCatalog("variable id out of range", {"id": v})
    values = {}
    for sidx in cat.seeds_containing(x_id):
        label = cat.seeds[sidx][1].index(x_id)
        total = 0
        for v in f_ids:
            f = cat.expansion_at(v, sidx)
            total += -f.min_x_exponents()[label]
        values[sidx] = total
    if len(set(values.values())) != 1:
        raise WellDefinednessViolation("compatibility degree depends on the cluster",
                                       {"f": list(f_ids), "x": x_id, "values": {str(k): v for k, v in values.items()}})
    return next(iter(values.values()))


def degree_table(cat: SeedCatalog) -> list[list[int]]:
    m = len(cat.variables)
    return [[compatibility_degree(cat, i, j) for j in range(m)] for i in range(m)]


def check_degree_zero_criterion(cat: SeedCatalog) -> int:
    """``(f|x) = 0`` exactly when ``f != x`` and some cluster contains both; returns pairs checked."""
    table = degree_table(cat)
    clusters = [set(ids) for _, ids in cat.seeds]
    m = len(cat.variables)
    for i in range(m):
        if table[i][i] != -1:
            raise WellDefinednessViolation("(x|x) must be -1", {"x": i, "value": table[i][i]})
        for j in range(m):
            if i == j:
                continue
            together = any(i in c and j in c for c in clusters)
            if (table[i][j] == 0) != together:
                raise WellDefinednessViolation("degree-zero criterion fails",
                                               {"f": i, "x": j, "degree": table[i][j], "common_cluster": together})
    return m * m


def decompose(cat: SeedCatalog, g: Sequence[int]) -> list[int]:
    """Variable ids (with multiplicity) of the cluster monomial with g-vector ``g``."""
    g = tuple(g)
    for path, ids in cat.seeds:
        G = [cat.g_vector_of(i) for i in ids]
        x = solve(transpose(G), g)
        if x is not None and all(v >= 0 and v.denominator == 1 for v in x):
            out = []
            for vid, a in zip(ids, x):
                out += [vid] * int(a)
            return sorted(out)
    raise OutOfScope("vector is not the g-vector of a catalog cluster monomial", {"g": list(g)})


def monomial_polytope(cat: SeedCatalog, ids: Sequence[int]) -> LatticePolytope:
    N = LatticePolytope(cat.rank, {(0,) * cat.rank: 1})
    for v in ids:
        N = minkowski(N, newton(cat.variables[v], cat.B)[0])
    return N


def are_compatible(cat: SeedCatalog, g: Sequence[int], h: Sequence[int]) -> dict:
    """Compatibility of two cluster monomials, by degrees, cross-checked against clusters and polytopes."""
    a, b = decompose(cat, g), decompose(cat, h)
    by_degree = all(u == v or compatibility_degree(cat, u, v) == 0 for u in set(a) for v in set(b))
    together = set(a) | set(b)
    by_cluster = any(together <= set(ids) for _, ids in cat.seeds)
    if by_degree != by_cluster:
        raise WellDefinednessViolation("degree and cluster tests disagree", {"g": list(g), "h": list(h)})
    out = {"g": list(g), "h": list(h), "compatible": by_degree}
    s = tuple(x + y for x, y in zip(g, h))
    try:
        c = decompose(cat, s)
    except OutOfScope:
        return out
    same = minkowski(monomial_polytope(cat, a), monomial_polytope(cat, b)) == monomial_polytope(cat, c)
    out["polytope_additive"] = same
    if by_degree and not same:
        raise WellDefinednessViolation("compatible monomials with non-additive polytopes", out)
    return out


def cluster_complex(cat: SeedCatalog) -> Fan:
    """Fan of g-cones; checks that two cones meet in a common face."""
    n = cat.rank
    cones = [Cone.from_generators([cat.g_vector_of(i) for i in ids], n) for _, ids in cat.seeds]
    for a, b in itertools.combinations(cones, 2):
        c = a.intersect(b)
        if not (c.is_face_of(a) and c.is_face_of(b)):
            raise WellDefinednessViolation("g-cones do not meet in a common face",
                                           {"a": a.to_json(), "b": b.to_json()})
    for c in cones:
        if c.dim != n:
            raise WellDefinednessViolation("g-cone is not full-dimensional", {"cone": c.to_json()})
    return Fan(cones, n)


def freeze_connectivity_check(cat: SeedCatalog, size: int = 1) -> int:
    """For every set of ``size`` compatible variables, the seeds containing them are connected
    by mutations that keep them.  Returns the number of classes checked."""
    clusters = [frozenset(ids) for _, ids in cat.seeds]
    frozen_sets = {frozenset(S) for c in clusters for S in itertools.combinations(sorted(c), size)}
    for S in sorted(frozen_sets, key=sorted):
        members = [i for i, c in enumerate(clusters) if S <= c]
        reach = {members[0]}
        todo = [members[0]]
        while todo:
            a = todo.pop()
            for b in members:
                if b not in reach and len(clusters[a] & clusters[b]) == cat.rank - 1:
                    reach.add(b)
                    todo.append(b)
        if len(reach) != len(members):
            raise ConnectivityViolation("seeds sharing frozen variables are disconnected",
                                        {"frozen": sorted(S), "seeds": members})
    return len(frozen_sets)
