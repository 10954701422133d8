"""Characters of finite abelian groups and exact Cayley-graph spectra.

The character indexed by ``g`` is ``chi_g(x) = prod_j zeta_{m_j}^(g_j x_j)``.
Every Cayley adjacency matrix over the group is diagonalized by these
characters, with eigenvalue ``lambda(g) = sum_{s in S} chi_g(s)``.
Eigenvalues are computed as exact character sums, never by a dense solve.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .abelian import CayleyGraph, Element, Group
from .cyclo import CycloField, CycloNum, field


class IntegralityError(ArithmeticError):
    """A character sum did not reduce to a rational integer."""


class Parity(str, enum.Enum):
    ALL_EVEN = "all-even"
    ALL_ODD = "all-odd"
    MIXED = "mixed"


def _weights(group: Group, L: int) -> np.ndarray:
    for m in group.moduli:
        if L % m:
            raise ValueError(f"L={L} is not divisible by modulus {m}")
    return np.asarray([L // m for m in group.moduli], dtype=np.int64)


def character_exponents(group: Group, L: int, xs: np.ndarray | None = None) -> np.ndarray:
    """Exponents ``k`` with ``chi_g(x) = zeta_L^k``; shape ``(order, len(xs))``.

    Rows are indexed by the character ``g`` (in element-index order), columns
    by the elements ``xs`` (all elements when omitted).
    """
    arr = group.element_array
    if xs is None:
        xs = arr
    if group.rank == 0:
        return np.zeros((1, len(xs)), dtype=np.int64)
    xs = np.asarray(xs, dtype=np.int64).reshape(-1, group.rank)
    w = _weights(group, L)
    return ((arr * w) @ xs.T) % L


def character_value(ctx: CycloField, group: Group, g: Sequence[int], x: Sequence[int]) -> CycloNum:
    g = group.validate(g)
    x = group.validate(x)
    w = _weights(group, ctx.L)
    return ctx.root(int(sum(int(a) * b * c for a, b, c in zip(w, g, x))))


def _exponent_histograms(exps: np.ndarray, L: int) -> np.ndarray:
    """Per-row histogram over ``range(L)`` of an integer matrix of exponents."""
    rows = exps.shape[0]
    flat = (np.arange(rows, dtype=np.int64)[:, None] * L + exps).ravel()
    return np.bincount(flat, minlength=rows * L).reshape(rows, L)


def eigenvalues(graph: CayleyGraph) -> np.ndarray:
    """Exact integer eigenvalue for every character, in element-index order.

    Raises :class:`IntegralityError` if some character sum is not a rational
    integer (the connection set is then not a gcd-set).
    """
    group = graph.group
    L = group.exponent
    ctx = field(L)
    conn = graph.sorted_connection()
    if len(conn) == 0 or group.rank == 0:
        return np.full(group.order, len(conn), dtype=np.int64)
    counts = _exponent_histograms(character_exponents(group, L, conn), L)
    reduced = ctx.reduce_counts(counts)
    if reduced.shape[1] > 1 and np.any(reduced[:, 1:] != 0):
        bad = int(np.nonzero(np.any(reduced[:, 1:] != 0, axis=1))[0][0])
        raise IntegralityError(
            f"character {group.element(bad)} gives a non-integral eigenvalue on {group}"
        )
    return np.asarray(reduced[:, 0], dtype=np.int64)


def eigenvalue(graph: CayleyGraph, g: Sequence[int]) -> int:
    group = graph.group
    g = group.validate(g)
    ctx = field(group.exponent)
    total = ctx.zero()
    for s in graph.sorted_connection():
        total = total + character_value(ctx, group, g, s)
    value = total.as_integer()
    if value is None:
        raise IntegralityError(f"character {g} gives non-integral eigenvalue {total}")
    return value


@dataclass(frozen=True)
class Eigenspace:
    eigenvalue: int
    members: tuple[Element, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Spectrum:
    """Eigenspaces in strictly decreasing eigenvalue order."""

    group: Group
    spaces: tuple[Eigenspace, ...]

    @property
    def distinct(self) -> list[int]:
        return [sp.eigenvalue for sp in self.spaces]

    def multiset(self) -> list[int]:
        return [sp.eigenvalue for sp in self.spaces for _ in sp.members]

    def to_json(self) -> list[dict]:
        return [
            {
                "eigenvalue": sp.eigenvalue,
                "multiplicity": sp.multiplicity,
                "characters": [list(g) for g in sp.members],
            }
            for sp in self.spaces
        ]


def spectrum(graph: CayleyGraph) -> Spectrum:
    lam = eigenvalues(graph)
    group = graph.group
    spaces = []
    for value in sorted(set(lam.tolist()), reverse=True):
        idx = np.nonzero(lam == value)[0]
        members = tuple(sorted(group.element(int(i)) for i in idx))
        spaces.append(Eigenspace(int(value), members))
    return Spectrum(group, tuple(spaces))


def eigenvalue_parities(spec: Spectrum) -> Parity:
    parities = {ev % 2 for ev in spec.distinct}
    if parities == {0}:
        return Parity.ALL_EVEN
    if parities == {1}:
        return Parity.ALL_ODD
    return Parity.MIXED


def idempotent_row(space: Eigenspace, group: Group, ctx: CycloField) -> list[CycloNum]:
    """Row 0 of the eigenspace projector: ``F[0][u] = (1/|G|) sum_g chi_g(-u)``."""
    L = ctx.L
    if group.rank == 0:
        return [ctx.one()]
    members = np.asarray(space.members, dtype=np.int64).reshape(-1, group.rank)
    neg = (-group.element_array) % np.asarray(group.moduli, dtype=np.int64)
    exps = ((members * _weights(group, L)) @ neg.T) % L
    counts = _exponent_histograms(exps.T, L)
    reduced = ctx.reduce_counts(counts)
    return [CycloNum(ctx, row, group.order) for row in reduced.tolist()]


def idempotent_entry(space: Eigenspace, group: Group, u: Sequence[int], v: Sequence[int]) -> CycloNum:
    ctx = field(group.exponent)
    total = ctx.zero()
    diff = group.sub(u, v)
    for g in space.members:
        total = total + character_value(ctx, group, g, diff)
    return total.scale(Fraction(1, group.order))
