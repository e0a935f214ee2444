"""Seeds with principal coefficients and the quantities read off them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError, InvariantViolation, RecurrenceMismatch
from .exchange import (Matrix, as_matrix, check_square, column, identity, mutate_matrix,
                       pos, reduce_path, require_sign_skew_symmetric, sign, transpose)
from .laurent import LaurentPoly, grade


@dataclass(frozen=True)
class SeedState:
    B: Matrix
    C: Matrix
    vars: tuple[LaurentPoly, ...]

    @property
    def rank(self) -> int:
        return len(self.B)


def initial_seed(B: Sequence[Sequence[int]]) -> SeedState:
    B = as_matrix(B)
    n = check_square(B)
    require_sign_skew_symmetric(B)
    return SeedState(B, identity(n), tuple(LaurentPoly.cluster_var(n, i) for i in range(1, n + 1)))


def exchange_binomial(s: SeedState, k: int) -> LaurentPoly:
    """``Y^[c_k]+ prod x^[b_ik]+ + Y^[-c_k]+ prod x^[-b_ik]+`` written in the initial cluster."""
    n = s.rank
    ck = column(s.C, k)
    bk = column(s.B, k)
    plus = LaurentPoly.monomial(n, None, [pos(c) for c in ck])
    minus = LaurentPoly.monomial(n, None, [pos(-c) for c in ck])
    for i, b in enumerate(bk):
        if b > 0:
            plus = plus * s.vars[i] ** b
        elif b < 0:
            minus = minus * s.vars[i] ** (-b)
    return plus + minus


def mutate_seed(s: SeedState, k: int) -> SeedState:
    n = s.rank
    if not 1 <= k <= n:
        raise InputError(f"direction {k} outside 1..{n}")
    ext = mutate_matrix(s.B + s.C, k)
    B2, C2 = ext[:n], ext[n:]
    require_sign_skew_symmetric(B2)
    new = exchange_binomial(s, k).exact_div(s.vars[k - 1])
    vars2 = s.vars[:k - 1] + (new,) + s.vars[k:]
    return SeedState(B2, C2, vars2)


class Pattern:
    """Seeds of the principal-coefficient pattern rooted at ``B0``, memoized by reduced path."""

    def __init__(self, B0: Sequence[Sequence[int]]):
        self.B0 = as_matrix(B0)
        self.rank = check_square(self.B0)
        self._cache: dict[tuple[int, ...], SeedState] = {(): initial_seed(self.B0)}

    def seed(self, path: Sequence[int] = ()) -> SeedState:
        path = reduce_path(path)
        if path in self._cache:
            return self._cache[path]
        s = self.seed(path[:-1])
        out = mutate_seed(s, path[-1])
        self._cache[path] = out
        return out

    def g_vector(self, path: Sequence[int], i: int) -> tuple[int, ...]:
        return g_vector(self.seed(path), i, self.B0)

    def g_matrix(self, path: Sequence[int]) -> Matrix:
        s = self.seed(path)
        return transpose([g_vector(s, i, self.B0) for i in range(1, self.rank + 1)])

    def c_matrix(self, path: Sequence[int]) -> Matrix:
        return self.seed(path).C


def g_vector(s: SeedState, i: int, B0: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Degree of the ``i``-th cluster variable under the principal grading."""
    return grade(s.vars[i - 1], B0)


def f_polynomial(s: SeedState, i: int) -> LaurentPoly:
    return s.vars[i - 1].specialize_x()


def d_vector(s: SeedState, i: int) -> tuple[int, ...]:
    """Denominator vector: negated componentwise minimum of the x-exponents."""
    return tuple(-e for e in s.vars[i - 1].min_x_exponents())


def separation_form(F: LaurentPoly, g: Sequence[int], B0: Sequence[Sequence[int]]) -> LaurentPoly:
    """``F(yhat) X^g`` with ``yhat_j = y_j prod_i x_i^{b_ij}``."""
    n = F.rank

    def move(x, y):
        return tuple(g[i] + sum(B0[i][j] * y[j] for j in range(n)) for i in range(n)), y

    return F.specialize_x().map_exponents(move)


def check_separation(s: SeedState, B0: Sequence[Sequence[int]]) -> None:
    for i in range(1, s.rank + 1):
        g = g_vector(s, i, B0)
        if separation_form(f_polynomial(s, i), g, B0) != s.vars[i - 1]:
            raise InvariantViolation("separation formula fails", {"index": i, "g": list(g)})


def bc_along(B0: Sequence[Sequence[int]], path: Sequence[int]) -> list[tuple[Matrix, Matrix]]:
    """``(B_t, C_t)`` at every vertex of ``path`` (including the start), by extended-matrix mutation."""
    B0 = as_matrix(B0)
    n = len(B0)
    ext = B0 + identity(n)
    out = [(ext[:n], ext[n:])]
    for k in path:
        ext = mutate_matrix(ext, k)
        out.append((ext[:n], ext[n:]))
    return out


def g_matrix_recurrence(B0: Sequence[Sequence[int]], path: Sequence[int], eps: int = 1) -> Matrix:
    """G-matrix at the end of ``path`` from the g-vector recurrence with sign choice ``eps``.

    ``g'_k = -g_k + sum_j [eps b_jk]_+ g_j - sum_j [eps c_jk]_+ b_j(t0)``.
    """
    if eps not in (1, -1):
        raise InputError("eps must be +1 or -1")
    B0 = as_matrix(B0)
    n = len(B0)
    b0cols = [column(B0, j) for j in range(1, n + 1)]
    gs = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    for (B, C), k in zip(bc_along(B0, path), path):
        c = k - 1
        new = [-v for v in gs[c]]
        for j in range(n):
            wb = pos(eps * B[j][c])
            if wb:
                new = [a + wb * b for a, b in zip(new, gs[j])]
            wc = pos(eps * C[j][c])
            if wc:
                new = [a - wc * b for a, b in zip(new, b0cols[j])]
        gs[c] = tuple(new)
    return transpose(gs)


def check_g_recurrence(pattern: Pattern, path: Sequence[int]) -> Matrix:
    """Compare the grading route with the recurrence for both signs; returns the agreed G-matrix."""
    G = pattern.g_matrix(path)
    for eps in (1, -1):
        R = g_matrix_recurrence(pattern.B0, path, eps)
        if R != G:
            raise RecurrenceMismatch("g-vector recurrence disagrees with grading",
                                     {"path": list(path), "eps": eps,
                                      "grading": [list(r) for r in G], "recurrence": [list(r) for r in R]})
    return G


def column_sign(v: Sequence[int]) -> int:
    """Common sign of a sign-coherent vector (0 for the zero vector); raises if mixed."""
    s = {sign(a) for a in v} - {0}
    if len(s) > 1:
        raise InvariantViolation("vector is not sign-coherent", {"vector": list(v)})
    return s.pop() if s else 0
