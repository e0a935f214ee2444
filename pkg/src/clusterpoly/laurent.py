"""Laurent polynomials in ``Z[y_1..y_n][x_1^±..x_n^±]``.

Exponent vectors ``(x_1..x_n, y_1..y_n)`` are packed into one Python int with
balanced base-2**24 digits.  Packing is linear, so multiplying monomials is
adding keys, and integer order on keys is lexicographic order on vectors
(first coordinate most significant).  Long division relies on that.
"""
from __future__ import annotations

import heapq
import os
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import NotDivisible, NotHomogeneous, TermLimitExceeded

_BITS = 24
_BASE = 1 << _BITS
_HALF = 1 << (_BITS - 1)


def max_terms() -> int:
    return int(os.environ.get("CLUSTER_MAX_TERMS", 10**7))


def _guard(terms: dict, what: str) -> dict:
    limit = max_terms()
    if len(terms) > limit:
        raise TermLimitExceeded(f"{what} has {len(terms)} terms, above CLUSTER_MAX_TERMS",
                                {"limit": limit, "terms": len(terms)})
    return terms


def _pack(vec: Iterable[int]) -> int:
    key = 0
    for e in vec:
        if not -_HALF < e < _HALF:
            raise OverflowError(f"exponent {e} out of range")
        key = key * _BASE + e
    return key


def _unpack(key: int, m: int) -> tuple[int, ...]:
    out = [0] * m
    for i in range(m - 1, -1, -1):
        d = key % _BASE
        if d >= _HALF:
            d -= _BASE
        out[i] = d
        key = (key - d) >> _BITS
    return tuple(out)


def _unit(m: int, i: int) -> int:
    return _BASE ** (m - 1 - i)


class LaurentPoly:
    """Immutable-by-convention sparse polynomial; zero coefficients never stored."""

    __slots__ = ("rank", "_t")

    def __init__(self, n: int, packed: Mapping[int, int] | None = None):
        self.rank = n
        self._t: dict[int, int] = {k: c for k, c in (packed or {}).items() if c}

    # construction -------------------------------------------------------
    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[Sequence[int], Sequence[int], int]]) -> "LaurentPoly":
        acc: dict[int, int] = {}
        for x, y, c in terms:
            if len(x) != n or len(y) != n:
                raise ValueError("exponent vector has wrong length")
            if any(e < 0 for e in y):
                raise ValueError("y-exponents must be non-negative")
            key = _pack(tuple(x) + tuple(y))
            acc[key] = acc.get(key, 0) + int(c)
        return cls(n, acc)

    @classmethod
    def monomial(cls, n: int, x: Sequence[int] | None = None, y: Sequence[int] | None = None, c: int = 1):
        x = tuple(x) if x is not None else (0,) * n
        y = tuple(y) if y is not None else (0,) * n
        return cls.from_terms(n, [(x, y, c)])

    @classmethod
    def const(cls, n: int, c: int = 1) -> "LaurentPoly":
        return cls(n, {0: c})

    @classmethod
    def cluster_var(cls, n: int, i: int) -> "LaurentPoly":
        """The initial cluster variable ``x_i`` (1-based)."""
        return cls(n, {_unit(2 * n, i - 1): 1})

    @classmethod
    def coeff_var(cls, n: int, i: int) -> "LaurentPoly":
        return cls(n, {_unit(2 * n, n + i - 1): 1})

    # inspection ---------------------------------------------------------
    def __len__(self) -> int:
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def items(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], int]]:
        """Terms ``(xexp, yexp, coeff)`` in canonical order (descending in ``(y, x)``)."""
        n = self.rank
        rows = [(_unpack(k, 2 * n), c) for k, c in self._t.items()]
        rows.sort(key=lambda r: (r[0][n:], r[0][:n]), reverse=True)
        for v, c in rows:
            yield v[:n], v[n:], c

    def coefficient(self, x: Sequence[int], y: Sequence[int] | None = None) -> int:
        y = tuple(y) if y is not None else (0,) * self.rank
        return self._t.get(_pack(tuple(x) + y), 0)

    def x_exponents(self) -> list[tuple[int, ...]]:
        return [x for x, _, _ in self.items()]

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    # arithmetic ---------------------------------------------------------
    def _check(self, other: "LaurentPoly") -> None:
        if not isinstance(other, LaurentPoly) or other.rank != self.rank:
            raise TypeError("operands live in different rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.rank, other)
        self._check(other)
        out = dict(self._t)
        for k, c in other._t.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return LaurentPoly(self.rank, _guard(out, "sum"))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.rank, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.rank, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly(self.rank, {k: c * other for k, c in self._t.items()})
        self._check(other)
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (kb, cb), = b.items()
            return LaurentPoly(self.rank, {k + kb: c * cb for k, c in a.items()})
        out: dict[int, int] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return LaurentPoly(self.rank, _guard({k: c for k, c in out.items() if c}, "product"))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if not self.is_monomial():
                raise NotDivisible("negative power of a non-monomial")
            (k, c), = self._t.items()
            if c not in (1, -1):
                raise NotDivisible("negative power of a non-unit monomial")
            return LaurentPoly(self.rank, {-k * (-e): c ** (-e)})._require_y_nonnegative()
        result = LaurentPoly.const(self.rank)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.rank == other.rank and self._t == other._t

    def __hash__(self):
        return hash((self.rank, frozenset(self._t.items())))

    def _require_y_nonnegative(self) -> "LaurentPoly":
        n = self.rank
        for k in self._t:
            if min(_unpack(k, 2 * n)[n:]) < 0:
                raise NotDivisible("result has a negative y-exponent")
        return self

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Quotient ``self / other`` in the Laurent ring; ``NotDivisible`` if it does not exist."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly(self.rank)
        g = other._t
        if len(g) == 1:
            (kg, cg), = g.items()
            if any(c % cg for c in self._t.values()):
                raise NotDivisible("coefficients not divisible", {"divisor": str(other)})
            quo = _guard({k - kg: c // cg for k, c in self._t.items()}, "quotient")
            return LaurentPoly(self.rank, quo)._require_y_nonnegative()
        lead = max(g)
        clead = g[lead]
        floor = min(self._t) - min(g)
        rem = dict(self._t)
        heap = [-k for k in rem]
        heapq.heapify(heap)
        quo: dict[int, int] = {}
        limit = max_terms()
        while heap:
            k = -heapq.heappop(heap)
            c = rem.get(k)
            if not c:
                continue
            qk = k - lead
            if qk < floor or c % clead:
                raise NotDivisible("division leaves a remainder",
                                   {"dividend_terms": len(self), "divisor": _short(other)})
            qc = c // clead
            quo[qk] = qc
            if len(quo) > limit:
                raise TermLimitExceeded("quotient exceeds term limit", {"limit": limit})
            for gk, gc in g.items():
                key = qk + gk
                old = rem.get(key, 0)
                new = old - qc * gc
                if new:
                    rem[key] = new
                    if not old:
                        heapq.heappush(heap, -key)
                elif old:
                    del rem[key]
        return LaurentPoly(self.rank, quo)._require_y_nonnegative()

    # structure ----------------------------------------------------------
    def map_exponents(self, fn) -> "LaurentPoly":
        """Apply ``fn(x, y) -> (x', y')`` to every exponent pair; coefficients add on collision."""
        n = self.rank
        out: dict[int, int] = {}
        for k, c in self._t.items():
            v = _unpack(k, 2 * n)
            x2, y2 = fn(v[:n], v[n:])
            key = _pack(tuple(x2) + tuple(y2))
            out[key] = out.get(key, 0) + c
        return LaurentPoly(self.rank, out)

    def specialize_x(self) -> "LaurentPoly":
        """Set every ``x_i`` to 1."""
        zero = (0,) * self.rank
        return self.map_exponents(lambda x, y: (zero, y))

    def x_degree_decompose(self, k: int) -> dict[int, "LaurentPoly"]:
        """Split by the exponent of ``x_k``; each part has ``x_k`` removed."""
        parts: dict[int, dict[int, int]] = {}
        n = self.rank
        for key, c in self._t.items():
            v = _unpack(key, 2 * n)
            s = v[k - 1]
            parts.setdefault(s, {})[key - s * _unit(2 * n, k - 1)] = c
        return {s: LaurentPoly(n, t) for s, t in sorted(parts.items())}

    def min_x_exponents(self) -> tuple[int, ...]:
        n = self.rank
        lows = [None] * n
        for key in self._t:
            v = _unpack(key, 2 * n)
            for i in range(n):
                if lows[i] is None or v[i] < lows[i]:
                    lows[i] = v[i]
        return tuple(lows)  # type: ignore[arg-type]

    # output -------------------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.rank,
                "terms": [{"x": list(x), "y": list(y), "c": str(c)} for x, y, c in self.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPoly":
        n = int(data["n"])
        return cls.from_terms(n, [(t["x"], t["y"], int(t["c"])) for t in data["terms"]])

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        out = []
        for x, y, c in self.items():
            factors = [_power(f"y{i + 1}", e) for i, e in enumerate(y) if e]
            factors += [_power(f"x{i + 1}", e) for i, e in enumerate(x) if e]
            mono = "*".join(factors)
            mag = abs(c)
            body = mono if mag == 1 and mono else (f"{mag}*{mono}" if mono else str(mag))
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def _power(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def _short(f: LaurentPoly, limit: int = 200) -> str:
    s = str(f)
    return s if len(s) <= limit else s[:limit] + "..."


def grade(f: LaurentPoly, B: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Degree under ``deg x_i = e_i``, ``deg y_i = -(column i of B)``.

    Raises ``NotHomogeneous`` when two terms disagree.
    """
    n = f.rank
    deg = None
    for x, y, _ in f.items():
        d = tuple(x[i] - sum(B[i][j] * y[j] for j in range(n)) for i in range(n))
        if deg is None:
            deg = d
        elif d != deg:
            raise NotHomogeneous("terms of different degree",
                                 {"degrees": [list(deg), list(d)], "poly": _short(f)})
    if deg is None:
        raise NotHomogeneous("zero polynomial has no degree")
    return deg


def y_monomial(n: int, y: Sequence[int]) -> LaurentPoly:
    return LaurentPoly.monomial(n, None, y)


def x_monomial(n: int, x: Sequence[int]) -> LaurentPoly:
    return LaurentPoly.monomial(n, x, None)
