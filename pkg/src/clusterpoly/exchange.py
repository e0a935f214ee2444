"""Exchange matrices and their mutation.

Matrices are tuples of integer rows.  Mutation directions are 1-based
throughout the package.
"""
from __future__ import annotations

from graphlib import CycleError, TopologicalSorter
from math import gcd
from typing import Iterable, Sequence

from .errors import InputError, NotSignSkewSymmetric

Matrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    m = tuple(tuple(int(v) for v in r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise InputError("ragged matrix")
    return m


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(M: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*M)) if M else ()


def neg_transpose(M: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(-v for v in r) for r in transpose(M))


def negate(M: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(-v for v in r) for r in M)


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    cols = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in A)


def column(M: Sequence[Sequence[int]], j: int) -> tuple[int, ...]:
    """Column ``j`` (1-based)."""
    return tuple(r[j - 1] for r in M)


def pos(v: int) -> int:
    return v if v > 0 else 0


def sign(v: int) -> int:
    return (v > 0) - (v < 0)


def mutate_matrix(M: Sequence[Sequence[int]], k: int) -> Matrix:
    """Mutate an ``m x n`` matrix in direction ``k``; rows past ``n`` ride along (extended matrices)."""
    n = len(M[0])
    if not 1 <= k <= n:
        raise InputError(f"direction {k} outside 1..{n}")
    c = k - 1
    out = []
    for i, row in enumerate(M):
        bik = row[c]
        new = []
        for j, bij in enumerate(row):
            if i == c or j == c:
                new.append(-bij)
            else:
                bkj = M[c][j]
                p = bik * bkj
                new.append(bij + (sign(bik) * p if p > 0 else 0))
        out.append(tuple(new))
    return tuple(out)


def mutate_along(M: Sequence[Sequence[int]], path: Iterable[int]) -> Matrix:
    M = as_matrix(M)
    for k in path:
        M = mutate_matrix(M, k)
    return M


def is_sign_skew_symmetric(B: Sequence[Sequence[int]]) -> bool:
    n = len(B)
    for i in range(n):
        if B[i][i]:
            return False
        for j in range(i + 1, n):
            a, b = B[i][j], B[j][i]
            if (a or b) and a * b >= 0:
                return False
    return True


def _offending_pair(B: Sequence[Sequence[int]]):
    n = len(B)
    for i in range(n):
        if B[i][i]:
            return (i + 1, i + 1)
        for j in range(i + 1, n):
            a, b = B[i][j], B[j][i]
            if (a or b) and a * b >= 0:
                return (i + 1, j + 1)
    return None


def require_sign_skew_symmetric(B: Sequence[Sequence[int]]) -> None:
    pair = _offending_pair(B)
    if pair is not None:
        i, j = pair
        raise NotSignSkewSymmetric(
            f"entries ({i},{j}) and ({j},{i}) break sign-skew-symmetry",
            {"B": [list(r) for r in B], "pair": [i, j]})


def check_square(B: Sequence[Sequence[int]]) -> int:
    n = len(B)
    if n == 0 or any(len(r) != n for r in B):
        raise InputError("exchange matrix must be square and non-empty")
    return n


def is_acyclic(B: Sequence[Sequence[int]]) -> bool:
    """True when the digraph with an arc ``i -> j`` for each ``b_ij > 0`` has no oriented cycle."""
    n = len(B)
    ts = TopologicalSorter({j: {i for i in range(n) if B[i][j] > 0} for j in range(n)})
    try:
        ts.prepare()
    except CycleError:
        return False
    return True


def skew_symmetrizer(B: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Positive integers ``d`` with ``d_i b_ij = -d_j b_ji``, or None."""
    from fractions import Fraction

    n = len(B)
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or (B[i][j] == 0 and B[j][i] == 0):
                    continue
                if B[i][j] == 0 or B[j][i] == 0:
                    return None
                want = -d[i] * B[i][j] / B[j][i]
                if want <= 0:
                    return None
                if d[j] is None:
                    d[j] = want
                    stack.append(j)
                elif d[j] != want:
                    return None
    den = 1
    for v in d:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in d]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints)


def check_tsss_along(B: Sequence[Sequence[int]], path: Iterable[int]) -> int | None:
    """Index (0 = the input) of the first non-sign-skew-symmetric matrix met along ``path``, else None."""
    M = as_matrix(B)
    if not is_sign_skew_symmetric(M):
        return 0
    for step, k in enumerate(path, 1):
        M = mutate_matrix(M, k)
        if not is_sign_skew_symmetric(M):
            return step
    return None


def require_tsss_along(B: Sequence[Sequence[int]], path: Sequence[int]) -> None:
    bad = check_tsss_along(B, path)
    if bad is not None:
        M = mutate_along(B, list(path)[:bad])
        raise NotSignSkewSymmetric(
            f"matrix after {bad} mutation(s) is not sign-skew-symmetric",
            {"B": [list(r) for r in B], "path": list(path), "step": bad,
             "matrix": [list(r) for r in M]})


def reduce_path(path: Iterable[int]) -> tuple[int, ...]:
    """Cancel adjacent repeated directions (mutation is an involution)."""
    out: list[int] = []
    for k in path:
        if out and out[-1] == k:
            out.pop()
        else:
            out.append(k)
    return tuple(out)


def path_between(path_to_a: Sequence[int], path_to_b: Sequence[int]) -> tuple[int, ...]:
    """Path from the endpoint of ``path_to_a`` to that of ``path_to_b`` (both from the same root)."""
    return reduce_path(tuple(reversed(tuple(path_to_a))) + tuple(path_to_b))


def principal_extension(B: Sequence[Sequence[int]]) -> Matrix:
    n = len(B)
    return as_matrix(B) + identity(n)
