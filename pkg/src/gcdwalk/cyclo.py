"""Exact arithmetic in the cyclotomic field Q(zeta_L).

Elements are stored in the power basis ``1, z, ..., z^(phi(L)-1)`` reduced
modulo the L-th cyclotomic polynomial, so two elements are equal exactly when
their coefficients agree. Coefficients are rationals held as an integer
numerator vector over one positive common denominator.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

_INT64_SAFE = 2**62
_FLOAT_EXACT = 2**53


def int_matmul(a: np.ndarray, b: np.ndarray, bound: int) -> np.ndarray:
    """Exact integer ``a @ b`` given a bound on every partial sum of absolute values.

    Below 2^53 the product goes through float64 BLAS, which is exact there;
    below 2^62 it uses int64, and otherwise Python integers.
    """
    if bound < _FLOAT_EXACT:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    if bound < _INT64_SAFE:
        return a.astype(np.int64) @ b.astype(np.int64)
    return a.astype(object) @ b.astype(object)


@lru_cache(maxsize=None)
def _cyclotomic(L: int) -> tuple[int, ...]:
    if L < 1:
        raise ValueError(f"root-of-unity order must be positive, got {L}")
    # x^L - 1, lowest degree first
    num = [-1] + [0] * (L - 1) + [1]
    for d in range(1, L):
        if L % d == 0:
            num, rem = _divmod_monic(num, list(_cyclotomic(d)))
            if any(rem):
                raise ArithmeticError(f"inexact division while building Phi_{L}")
    return tuple(num)


def _divmod_monic(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Polynomial long division by a monic integer polynomial (lowest degree first)."""
    num = list(num)
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j, dj in enumerate(den):
                num[i - dd + j] -= c * dj
    return quot, num[:dd] if dd else [0]


def cyclotomic_poly(L: int) -> list[int]:
    """Integer coefficients of Phi_L, constant term first."""
    return list(_cyclotomic(L))


class CycloField:
    """The field Q(zeta_L) together with a reduction table for powers of zeta."""

    def __init__(self, L: int):
        if L < 1:
            raise ValueError(f"root-of-unity order must be positive, got {L}")
        self.L = L
        self.phi = _cyclotomic(L)
        self.degree = len(self.phi) - 1
        self._table = self._power_table(max(L, 2 * self.degree - 1))
        self._table_max = int(np.abs(self._table).max()) if self._table.size else 0

    def _power_table(self, n: int) -> np.ndarray:
        deg = self.degree
        low = np.asarray(self.phi[:-1], dtype=object)
        rows = []
        cur = np.zeros(deg, dtype=object)
        cur[0] = 1
        for _ in range(n):
            rows.append(cur.copy())
            top = cur[-1]
            cur = np.concatenate(([0], cur[:-1]))
            if top:
                cur = cur - top * low
        table = np.array(rows, dtype=object).reshape(n, deg)
        if np.abs(table).max() < _INT64_SAFE // 2:
            table = table.astype(np.int64)
        return table

    def __repr__(self) -> str:
        return f"CycloField(L={self.L})"

    def __eq__(self, other) -> bool:
        return isinstance(other, CycloField) and other.L == self.L

    def __hash__(self) -> int:
        return hash(("CycloField", self.L))

    def power_table(self) -> np.ndarray:
        """Row k holds the coefficients of ``zeta^k`` for ``0 <= k < L``."""
        return self._table[: self.L]

    def reduce_counts(self, counts: np.ndarray) -> np.ndarray:
        """Reduce exponent histograms of shape ``(..., L)`` to power-basis numerators."""
        counts = np.asarray(counts)
        table = self._table[: self.L]
        bound = int(np.abs(counts).max(initial=0)) * self._table_max * self.L
        return int_matmul(counts, table, bound)

    def _reduce(self, poly: Sequence[int]) -> list[int]:
        poly = list(poly)
        if len(poly) <= self.degree:
            return poly + [0] * (self.degree - len(poly))
        if len(poly) > len(self._table):
            _, rem = _divmod_monic(poly, list(self.phi))
            return rem + [0] * (self.degree - len(rem))
        vec = np.asarray(poly, dtype=object)
        return [int(c) for c in vec @ self._table[: len(poly)].astype(object)]

    def zero(self) -> "CycloNum":
        return CycloNum(self, (0,) * self.degree)

    def one(self) -> "CycloNum":
        return self.rational(1)

    def rational(self, value) -> "CycloNum":
        value = Fraction(value)
        num = [0] * self.degree
        num[0] = value.numerator
        return CycloNum(self, num, value.denominator)

    def root(self, k: int) -> "CycloNum":
        """``zeta_L^k``; k is taken mod L."""
        return CycloNum(self, tuple(int(c) for c in self._table[k % self.L]))

    def from_coeffs(self, coeffs: Iterable) -> "CycloNum":
        """Element from rational power-basis coefficients (reduced if longer than the degree)."""
        fracs = [Fraction(c) for c in coeffs]
        den = math.lcm(1, *(f.denominator for f in fracs))
        nums = [int(f * den) for f in fracs]
        return CycloNum(self, self._reduce(nums), den)


@lru_cache(maxsize=256)
def field(L: int) -> CycloField:
    """Shared :class:`CycloField` for order L."""
    return CycloField(L)


def root_of_unity(ctx: CycloField, k: int) -> "CycloNum":
    return ctx.root(k)


class CycloNum:
    """An element of Q(zeta_L): ``sum(num[j] * zeta^j) / den``."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: CycloField, num: Sequence[int], den: int = 1):
        num = tuple(int(c) for c in num)
        den = int(den)
        if len(num) != ctx.degree:
            raise ValueError(f"expected {ctx.degree} coefficients, got {len(num)}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = tuple(-c for c in num), -den
        g = math.gcd(den, *num)
        if g > 1:
            num, den = tuple(c // g for c in num), den // g
        self.ctx = ctx
        self.num = num
        self.den = den

    @property
    def L(self) -> int:
        return self.ctx.L

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def _check(self, other: "CycloNum") -> None:
        if not isinstance(other, CycloNum):
            raise TypeError(f"expected CycloNum, got {type(other).__name__}")
        if other.ctx.L != self.ctx.L:
            raise ValueError(f"context mismatch: L={self.ctx.L} vs L={other.ctx.L}")

    def _coerce(self, other) -> "CycloNum":
        if isinstance(other, (int, Fraction)):
            return self.ctx.rational(other)
        self._check(other)
        return other

    def __add__(self, other) -> "CycloNum":
        other = self._coerce(other)
        den = math.lcm(self.den, other.den)
        a, b = den // self.den, den // other.den
        return CycloNum(self.ctx, [a * x + b * y for x, y in zip(self.num, other.num)], den)

    __radd__ = __add__

    def __neg__(self) -> "CycloNum":
        return CycloNum(self.ctx, [-x for x in self.num], self.den)

    def __sub__(self, other) -> "CycloNum":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "CycloNum":
        return self._coerce(other) - self

    def __mul__(self, other) -> "CycloNum":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        ma = max(map(abs, self.num), default=0)
        mb = max(map(abs, other.num), default=0)
        deg = self.ctx.degree
        if ma * mb * deg * max(self.ctx._table_max, 1) * 2 * deg < _INT64_SAFE and self.ctx._table.dtype == np.int64:
            prod = np.convolve(np.asarray(self.num, np.int64), np.asarray(other.num, np.int64))
            reduced = prod @ self.ctx._table[: len(prod)]
        else:
            prod = np.convolve(np.asarray(self.num, object), np.asarray(other.num, object))
            reduced = self.ctx._reduce(prod)
        return CycloNum(self.ctx, reduced, self.den * other.den)

    __rmul__ = __mul__

    def scale(self, value) -> "CycloNum":
        value = Fraction(value)
        return CycloNum(self.ctx, [x * value.numerator for x in self.num], self.den * value.denominator)

    def conjugate(self) -> "CycloNum":
        """Complex conjugation, the ring map ``zeta -> zeta^(L-1)``."""
        L = self.ctx.L
        table = self.ctx._table
        acc = np.zeros(self.ctx.degree, dtype=table.dtype if table.dtype == np.int64 else object)
        for j, c in enumerate(self.num):
            if c:
                acc = acc + c * table[(-j) % L]
        return CycloNum(self.ctx, acc, self.den)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def as_integer(self) -> int | None:
        """The rational integer this element equals, or ``None``."""
        if any(self.num[1:]) or self.den != 1:
            return None
        return self.num[0] if self.num else 0

    def as_rational(self) -> Fraction | None:
        if any(self.num[1:]):
            return None
        return Fraction(self.num[0] if self.num else 0, self.den)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.as_rational() == other
        if not isinstance(other, CycloNum):
            return NotImplemented
        return self.ctx.L == other.ctx.L and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.ctx.L, self.num, self.den))

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.ctx.L)
        return sum(c * z**j for j, c in enumerate(self.num)) / self.den

    def to_json(self) -> dict:
        return {"L": self.ctx.L, "coeffs": [[f.numerator, f.denominator] for f in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CycloNum":
        ctx = field(int(data["L"]))
        return ctx.from_coeffs(Fraction(n, d) for n, d in data["coeffs"])

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                power = "ζ" if j == 1 else f"ζ^{j}"
                terms.append(f"{c}·{power}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} [L={self.ctx.L}]"

    def __repr__(self) -> str:
        return f"CycloNum({self})"
