"""G- and C-matrices along a mutation path, rebasing, and the duality identities.

All routines are matrix-only except the optional cross-check against the
Laurent expansions held by :class:`clusterpoly.seed.Pattern`.
"""
from __future__ import annotations

from typing import Sequence

from .errors import IdentityViolation, InputError, RouteMismatch, SignUndefined
from .exchange import (Matrix, as_matrix, check_square, identity, matmul, mutate_along,
                       mutate_matrix, neg_transpose, negate, path_between, pos,
                       require_sign_skew_symmetric, sign, transpose)


def _col_sign(C: Matrix, k: int, where: dict) -> int:
    signs = {sign(r[k - 1]) for r in C} - {0}
    if len(signs) != 1:
        raise SignUndefined(f"c-vector {k} has no single sign",
                            dict(where, c_vector=[r[k - 1] for r in C]))
    return signs.pop()


def e_matrix(B: Matrix, C: Matrix, k: int) -> Matrix:
    """Right factor taking ``G_t`` to ``G_{mu_k t}``; differs from the identity in column ``k``."""
    n = len(B)
    s = _col_sign(C, k, {"k": k})
    rows = [list(r) for r in identity(n)]
    for i in range(n):
        rows[i][k - 1] = -1 if i == k - 1 else pos(-s * B[i][k - 1])
    return as_matrix(rows)


def f_matrix(B: Matrix, C: Matrix, k: int) -> Matrix:
    """Right factor taking ``C_t`` to ``C_{mu_k t}``; differs from the identity in row ``k``."""
    n = len(B)
    s = _col_sign(C, k, {"k": k})
    rows = [list(r) for r in identity(n)]
    rows[k - 1] = [-1 if j == k - 1 else pos(s * B[k - 1][j]) for j in range(n)]
    return as_matrix(rows)


def gc_along(B: Sequence[Sequence[int]], path: Sequence[int]) -> tuple[Matrix, Matrix]:
    """``(G_t, C_t)`` at the end of ``path`` in the pattern with principal coefficients at the start."""
    B = as_matrix(B)
    n = check_square(B)
    require_sign_skew_symmetric(B)
    G = C = identity(n)
    Bt = B
    for step, k in enumerate(path):
        if not 1 <= k <= n:
            raise InputError(f"direction {k} outside 1..{n}")
        try:
            E, F = e_matrix(Bt, C, k), f_matrix(Bt, C, k)
        except SignUndefined as exc:
            exc.witness.update({"B": [list(r) for r in B], "path": list(path), "step": step})
            raise
        G, C = matmul(G, E), matmul(C, F)
        Bt = mutate_matrix(Bt, k)
        require_sign_skew_symmetric(Bt)
    return G, C


def gc_checked(B: Sequence[Sequence[int]], path: Sequence[int], pattern=None) -> tuple[Matrix, Matrix]:
    """``gc_along`` cross-checked against extended-matrix mutation and, if given, Laurent grading."""
    G, C = gc_along(B, path)
    n = len(B)
    C_def = mutate_along(as_matrix(B) + identity(n), path)[n:]
    if C_def != C:
        raise RouteMismatch("F-product C-matrix differs from extended mutation",
                            {"path": list(path), "product": _lst(C), "extended": _lst(C_def)})
    if pattern is not None:
        G_def = pattern.g_matrix(path)
        if G_def != G:
            raise RouteMismatch("E-product G-matrix differs from grading",
                                {"path": list(path), "product": _lst(G), "grading": _lst(G_def)})
    return G, C


def rebase(B: Sequence[Sequence[int]], path_to_t: Sequence[int]) -> Matrix:
    """Exchange matrix at the end of ``path_to_t``: the initial matrix of the pattern rebased there."""
    return mutate_along(B, path_to_t)


def g_between(B, path_a, path_b, transform=None) -> Matrix:
    """``G^{X;a}_b`` where ``X`` is ``transform(B_a)`` (default ``B_a``)."""
    Ba = rebase(B, path_a)
    return gc_along(transform(Ba) if transform else Ba, path_between(path_a, path_b))[0]


def c_between(B, path_a, path_b, transform=None) -> Matrix:
    Ba = rebase(B, path_a)
    return gc_along(transform(Ba) if transform else Ba, path_between(path_a, path_b))[1]


def _lst(M) -> list:
    return [list(r) for r in M]


def _report(identity_name, B, path_t, path_tp, ok, witness=None, raise_on_failure=True) -> dict:
    rep = {"identity": identity_name, "B": _lst(B), "path": list(path_tp),
           "base_path": list(path_t), "status": "ok" if ok else "violation"}
    if not ok:
        rep["witness"] = witness or {}
        if raise_on_failure:
            raise IdentityViolation(f"{identity_name} fails", rep)
    return rep


def verify_transpose_duality(B, path, base_path=(), raise_on_failure=True) -> dict:
    """``(G^{B_t';t'}_t)^T = C^{B_t^T;t}_{t'}`` with ``t`` = end of ``base_path``, ``t'`` = end of ``path``."""
    B = as_matrix(B)
    lhs = transpose(g_between(B, path, base_path))
    rhs = c_between(B, base_path, path, transform=transpose)
    return _report("transpose", B, base_path, path, lhs == rhs,
                   {"lhs": _lst(lhs), "rhs": _lst(rhs)}, raise_on_failure)


def verify_inverse_duality(B, path, base_path=(), raise_on_failure=True) -> dict:
    """``G^{B_t;t}_{t'} G^{-B_t';t'}_t = I``."""
    B = as_matrix(B)
    prod = matmul(g_between(B, base_path, path), g_between(B, path, base_path, transform=negate))
    return _report("inverse", B, base_path, path, prod == identity(len(B)),
                   {"product": _lst(prod)}, raise_on_failure)


def verify_gc_inverse(B, path, base_path=(), raise_on_failure=True) -> dict:
    """``G^{B_t;t}_{t'} (C^{-B_t^T;t}_{t'})^T = I`` and ``C^{B_t;t}_{t'} C^{-B_t';t'}_t = I``."""
    B = as_matrix(B)
    I = identity(len(B))
    first = matmul(g_between(B, base_path, path),
                   transpose(c_between(B, base_path, path, transform=neg_transpose)))
    second = matmul(c_between(B, base_path, path), c_between(B, path, base_path, transform=negate))
    return _report("gc-inverse", B, base_path, path, first == I and second == I,
                   {"G_Ct": _lst(first), "C_C": _lst(second)}, raise_on_failure)


def verify_gbc(B, path, base_path=(), raise_on_failure=True) -> dict:
    """``G^{B_t;t}_{t'} B_{t'} = B_t C^{B_t;t}_{t'}``."""
    B = as_matrix(B)
    Bt, Btp = rebase(B, base_path), rebase(B, path)
    lhs = matmul(g_between(B, base_path, path), Btp)
    rhs = matmul(Bt, c_between(B, base_path, path))
    return _report("gbc", B, base_path, path, lhs == rhs,
                   {"GB": _lst(lhs), "BC": _lst(rhs)}, raise_on_failure)


def verify_dualities(B, path, base_path=(), raise_on_failure=True) -> list[dict]:
    return [f(B, path, base_path, raise_on_failure) for f in
            (verify_transpose_duality, verify_inverse_duality, verify_gc_inverse, verify_gbc)]


def sign_synchronic(M: Matrix, N: Matrix) -> bool:
    """Entrywise: both zero, or both non-zero of the same sign."""
    return all(sign(a) == sign(b) for ra, rb in zip(M, N) for a, b in zip(ra, rb))


def columns_sign_coherent(M: Matrix) -> bool:
    return all(len({sign(v) for v in col} - {0}) <= 1 for col in transpose(M))


def rows_sign_coherent(M: Matrix) -> bool:
    return all(len({sign(v) for v in row} - {0}) <= 1 for row in M)


def verify_sign_synchronicity(B, path, raise_on_failure=True) -> dict:
    """``G_t^{B;t0}`` vs ``G_t^{-B^T;t0}`` and the same for C."""
    B = as_matrix(B)
    G1, C1 = gc_along(B, path)
    G2, C2 = gc_along(neg_transpose(B), path)
    ok = sign_synchronic(G1, G2) and sign_synchronic(C1, C2)
    return _report("sign-synchronicity", B, (), path, ok,
                   {"G_B": _lst(G1), "G_dual": _lst(G2), "C_B": _lst(C1), "C_dual": _lst(C2)},
                   raise_on_failure)


def verify_sign_coherence(B, path, raise_on_failure=True) -> dict:
    """Column sign-coherence of C and row sign-coherence of G at every vertex of ``path``."""
    B = as_matrix(B)
    for L in range(len(path) + 1):
        try:
            G, C = gc_along(B, path[:L])
        except SignUndefined as exc:
            return _report("sign-coherence", B, (), path, False, exc.witness, raise_on_failure)
        if not (columns_sign_coherent(C) and rows_sign_coherent(G)):
            return _report("sign-coherence", B, (), path, False,
                           {"prefix": L, "G": _lst(G), "C": _lst(C)}, raise_on_failure)
    return _report("sign-coherence", B, (), path, True)
