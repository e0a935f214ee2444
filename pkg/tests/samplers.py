"""Random exchange matrices and paths shared by the test modules."""
from __future__ import annotations

import random

from clusterpoly.exchange import mutate_along, mutate_matrix, pos
from clusterpoly.duality import gc_along


def random_acyclic(rng: random.Random, n: int, bound: int = 3) -> list[list[int]]:
    """Sign-skew-symmetric with arrows following a random total order (hence TSSS)."""
    B = [[0] * n for _ in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    for a in range(n):
        for b in range(a + 1, n):
            i, j = order[a], order[b]
            if rng.random() < 0.7:
                B[i][j] = rng.randint(1, bound)
                B[j][i] = -rng.randint(1, bound)
    return B


def random_skew_symmetrizable(rng: random.Random, n: int, bound: int = 3) -> list[list[int]]:
    """``d_i b_ij = -d_j b_ji`` with ``b_ij = a_ij d_j``; entries stay within ``bound``."""
    d = [rng.choice((1, 1, 2, 3)) for _ in range(n)]
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            top = bound // max(d[i], d[j])
            a = rng.randint(-top, top)
            B[i][j], B[j][i] = a * d[j], -a * d[i]
    return B


def random_tsss(rng: random.Random, n: int, bound: int = 3) -> list[list[int]]:
    if rng.random() < 0.5:
        return random_acyclic(rng, n, bound)
    return random_skew_symmetrizable(rng, n, bound)


def random_path(rng: random.Random, n: int, max_len: int, min_len: int = 0) -> tuple[int, ...]:
    length = rng.randint(min_len, max_len)
    path: list[int] = []
    while len(path) < length:
        k = rng.randint(1, n)
        if n == 1 or not path or path[-1] != k:
            path.append(k)
    return tuple(path)


def _box(degrees) -> int:
    out = 1
    for e in degrees:
        out *= e + 1
    return out


def f_degree_box(B, path) -> int:
    """Largest ``prod_j (deg_{y_j} + 1)`` over the exchange numerators met along ``path``.

    Max-plus image of ``F_k' F_k = Y^[c_k]+ prod F^[b_ik]+ + Y^[-c_k]+ prod F^[-b_ik]+``;
    coefficients are positive so the per-variable degrees are exact.
    """
    n = len(B)
    degs = [[0] * n for _ in range(n)]
    Bt = tuple(tuple(r) for r in B)
    worst = 1
    for step, k in enumerate(path):
        C = gc_along(B, path[:step])[1]
        ck = [C[j][k - 1] for j in range(n)]
        plus = [pos(c) for c in ck]
        minus = [pos(-c) for c in ck]
        for i in range(n):
            b = Bt[i][k - 1]
            for j in range(n):
                plus[j] += pos(b) * degs[i][j]
                minus[j] += pos(-b) * degs[i][j]
        numerator = [max(p, m) for p, m in zip(plus, minus)]
        degs[k - 1] = [e - d for e, d in zip(numerator, degs[k - 1])]
        worst = max(worst, _box(numerator))
        Bt = mutate_matrix(Bt, k)
    return worst


def conditioned_pairs(seed: int, count: int, budget: int, max_len: int = 8):
    """``count`` pairs from the stated population, kept only when the expansion fits ``budget``."""
    rng = random.Random(seed)
    out, drawn = [], 0
    while len(out) < count:
        drawn += 1
        n = rng.randint(2, 4)
        B = random_tsss(rng, n)
        path = random_path(rng, n, max_len)
        if f_degree_box(B, path) <= budget:
            out.append((B, path))
    return out, drawn


def fit_path(B, path, budget: int = 5000, neighbours: bool = False) -> tuple[int, ...]:
    """Longest prefix of ``path`` whose expansions (and optionally one-step neighbours) fit ``budget``."""
    n = len(B)
    best: tuple[int, ...] = ()
    for L in range(1, len(path) + 1):
        p = tuple(path[:L])
        tails = [p + (k,) for k in range(1, n + 1)] if neighbours else [p]
        if any(f_degree_box(B, q) > budget for q in tails):
            break
        best = p
    return best


def cube_box(B, path) -> int:
    """Product over the cube's factors of their y-degree boxes at the end of ``path``.

    The factors ``x_i`` and ``mu_i(x_i)`` of the start vertex, rewritten at the end,
    are cluster variables of the pattern rooted there, reached along the reversed path.
    """
    Bt = mutate_along(B, path)
    back = tuple(reversed(path))
    out = 1
    for i in range(1, len(B) + 1):
        out *= max(f_degree_box(Bt, back[:L]) for L in range(len(back) + 1))
        out *= f_degree_box(Bt, back + (i,))
    return out


def fit_cube_path(B, path, budget: int = 10 ** 11) -> tuple[int, ...]:
    """Longest prefix of ``path`` whose tracked cube fits ``budget`` (see :func:`cube_box`)."""
    best: tuple[int, ...] = ()
    for L in range(1, len(path) + 1):
        if cube_box(B, path[:L]) > budget:
            break
        best = tuple(path[:L])
    return best
