"""Continuous-time quantum walks on integral Cayley graphs.

The transition matrix is ``H(t) = exp(itA)``. For a Cayley graph over an
abelian group it is translation invariant, so only row 0 is kept:
``H(t)[u][v] = row[v - u]``. At ``t = pi p/q`` and integral eigenvalues every
entry lies in Q(zeta_L) with ``L = lcm(2q, exponent, 4)`` and is computed
exactly as ``(1/|G|) sum_g zeta_{2q}^(p lambda(g)) chi_g(v)``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .abelian import CayleyGraph, Element, Group, ResourceError
from .cyclo import CycloField, CycloNum, field, int_matmul
from .spectra import Spectrum, _exponent_histograms, character_exponents, eigenvalues, idempotent_row

DEFAULT_DENSE_CAP = 512
_INT64_SAFE = 2**62


@dataclass(frozen=True, init=False)
class RationalPiTime:
    """The time ``pi * p / q`` in lowest terms."""

    p: int
    q: int

    def __init__(self, p: int, q: int = 1):
        p, q = int(p), int(q)
        if q == 0:
            raise ValueError("time denominator must be nonzero")
        if q < 0:
            p, q = -p, -q
        g = math.gcd(p, q)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)

    @classmethod
    def parse(cls, text: str) -> "RationalPiTime":
        """``"1/2"`` means pi/2, ``"1"`` means pi."""
        frac = Fraction(text.strip())
        return cls(frac.numerator, frac.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __add__(self, other: "RationalPiTime") -> "RationalPiTime":
        f = self.fraction + other.fraction
        return RationalPiTime(f.numerator, f.denominator)

    def __mul__(self, k: int) -> "RationalPiTime":
        return RationalPiTime(self.p * k, self.q)

    __rmul__ = __mul__

    def __float__(self) -> float:
        return math.pi * self.p / self.q

    def __str__(self) -> str:
        if self.p == 0:
            return "0"
        num = "π" if self.p == 1 else ("-π" if self.p == -1 else f"{self.p}π")
        return num if self.q == 1 else f"{num}/{self.q}"

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q}


def walk_field(group: Group, t: RationalPiTime) -> CycloField:
    return field(math.lcm(2 * t.q, group.exponent, 4))


class TransitionRow:
    """Row 0 of ``H(t)``: ``num[v] / den`` in the power basis of ``ctx``."""

    def __init__(self, group: Group, time: RationalPiTime, ctx: CycloField, num: np.ndarray, den: int):
        num = np.asarray(num, dtype=object).reshape(group.order, ctx.degree)
        den = int(den)
        if den < 0:
            num, den = -num, -den
        g = math.gcd(den, *(int(c) for c in num.ravel()))
        if g > 1:
            num = num // g
            den //= g
        self.group = group
        self.time = time
        self.ctx = ctx
        self.num = num
        self.den = den

    def __len__(self) -> int:
        return self.group.order

    def __getitem__(self, v) -> CycloNum:
        i = v if isinstance(v, (int, np.integer)) else self.group.index(v)
        return CycloNum(self.ctx, self.num[int(i)].tolist(), self.den)

    @property
    def entries(self) -> list[CycloNum]:
        return [self[i] for i in range(len(self))]

    def matrix_entry(self, u: Sequence[int], v: Sequence[int]) -> CycloNum:
        return self[self.group.sub(v, u)]

    def nonzero_indices(self) -> list[int]:
        return [i for i in range(len(self)) if any(self.num[i])]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TransitionRow):
            return NotImplemented
        return (
            self.group == other.group
            and self.ctx.L == other.ctx.L
            and self.den == other.den
            and bool(np.all(self.num == other.num))
        )

    def to_complex(self) -> np.ndarray:
        z = np.exp(2j * np.pi * np.arange(self.ctx.degree) / self.ctx.L)
        return (self.num.astype(float) @ z) / self.den

    def conjugate(self) -> "TransitionRow":
        conj = [self[i].conjugate() for i in range(len(self))]
        return _row_from_nums(self.group, self.time, self.ctx, conj)

    def negated_argument(self) -> "TransitionRow":
        """The row ``v -> row[-v]``."""
        arr = self.group.element_array
        mod = np.asarray(self.group.moduli, dtype=np.int64)
        idx = self.group.indices((-arr) % mod) if self.group.rank else np.zeros(1, np.int64)
        return TransitionRow(self.group, self.time, self.ctx, self.num[idx], self.den)

    def is_symmetric(self) -> bool:
        return self == self.negated_argument()

    def is_unitary(self) -> bool:
        """``sum_v H[0,v] conj(H[w,v]) == delta(w)`` exactly, for every w.

        Costs about ``|G|^2 phi(L)^2`` multiply-adds, so it is a verification
        tool rather than something to run on every row.
        """
        gram = convolve_rows(self, self.conjugate().negated_argument())
        delta = self.ctx.one()
        return gram[0] == delta and gram.nonzero_indices() == [0]

    def to_json(self) -> dict:
        return {"time": self.time.to_json(), "entries": [e.to_json() for e in self.entries]}

    def __repr__(self) -> str:
        return f"TransitionRow({self.group}, t={self.time}, L={self.ctx.L})"


def _row_from_nums(group: Group, time: RationalPiTime, ctx: CycloField, values: list[CycloNum]) -> TransitionRow:
    den = math.lcm(1, *(v.den for v in values))
    num = np.array([[c * (den // v.den) for c in v.num] for v in values], dtype=object)
    return TransitionRow(group, time, ctx, num, den)


def _check_field(group: Group, t: RationalPiTime, ctx: CycloField) -> None:
    if ctx.L % (2 * t.q) or ctx.L % group.exponent:
        raise ValueError(f"L={ctx.L} must be divisible by 2q={2 * t.q} and the group exponent {group.exponent}")


def transition_row(graph: CayleyGraph, t: RationalPiTime, ctx: CycloField | None = None) -> TransitionRow:
    """Exact row 0 of ``H(pi p/q)`` for an integral Cayley graph."""
    group = graph.group
    ctx = ctx or walk_field(group, t)
    _check_field(group, t, ctx)
    L = ctx.L
    n = group.order
    lam = eigenvalues(graph)
    # e^{i lambda pi p/q} = zeta_{2q}^{p lambda}
    phase = (lam * (t.p * (L // (2 * t.q)))) % L
    num = np.empty((n, ctx.degree), dtype=object)
    chunk = max(1, (1 << 22) // max(n, 1))
    arr = group.element_array
    for start in range(0, n, chunk):
        xs = arr[start : start + chunk]
        exps = (character_exponents(group, L, xs) + phase[:, None]) % L
        counts = _exponent_histograms(exps.T, L)
        num[start : start + len(xs)] = ctx.reduce_counts(counts)
    return TransitionRow(group, t, ctx, num, n)


def _difference_index(group: Group) -> np.ndarray:
    """``D[w, v] = index(w - v)``."""
    arr = group.element_array
    if group.rank == 0:
        return np.zeros((1, 1), dtype=np.int64)
    mod = np.asarray(group.moduli, dtype=np.int64)
    diff = (arr[:, None, :] - arr[None, :, :]) % mod
    return group.indices(diff.reshape(-1, group.rank)).reshape(group.order, group.order)


def convolve_rows(a: TransitionRow, b: TransitionRow) -> TransitionRow:
    """Group convolution ``out[w] = sum_v a[v] b[w - v]``: the row of the product matrix."""
    if a.group != b.group:
        raise ValueError("rows belong to different groups")
    if a.ctx.L != b.ctx.L:
        raise ValueError(f"context mismatch: L={a.ctx.L} vs L={b.ctx.L}")
    ctx = a.ctx
    n, deg = a.group.order, ctx.degree
    D = _difference_index(a.group)
    ma = max((abs(int(c)) for c in a.num.ravel()), default=0)
    mb = max((abs(int(c)) for c in b.num.ravel()), default=0)
    raw_bound = ma * mb * n * deg
    small = raw_bound < _INT64_SAFE
    A = a.num.astype(np.int64) if small else a.num
    B = b.num.astype(np.int64) if small else b.num
    wide = np.zeros((n, 2 * deg - 1), dtype=np.int64 if small else object)
    for j in range(deg):
        Bj = B[:, j][D]  # Bj[w, v] = b[w - v]_j
        wide[:, j : j + deg] += int_matmul(Bj, A, ma * mb * n)
    table = ctx._table[: 2 * deg - 1]
    reduced = int_matmul(wide, table, raw_bound * ctx._table_max * 2 * deg)
    time = a.time + b.time if a.time is not None and b.time is not None else None
    return TransitionRow(a.group, time, ctx, reduced, a.den * b.den)


@dataclass(frozen=True)
class PstVerdict:
    """Periodicity / PST classification of row 0 of ``H(t)``.

    For ``kind == "pst"`` the transition matrix is ``phase * P`` where ``P``
    is the permutation ``x -> x + shift`` (stored as ``partner`` by index).
    """

    kind: str
    time: RationalPiTime
    phase: CycloNum | None = None
    shift: Element | None = None
    partner: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "time": self.time.to_json(),
            "phase": self.phase.to_json() if self.phase is not None else None,
            "shift": list(self.shift) if self.shift is not None else None,
            "partner": list(self.partner) if self.partner is not None else None,
        }


def verdict_from_row(row: TransitionRow) -> PstVerdict:
    group = row.group
    nz = row.nonzero_indices()
    if nz == [0]:
        return PstVerdict("periodic", row.time, phase=row[0])
    if len(nz) != 1:
        return PstVerdict("neither", row.time)
    v = group.element(nz[0])
    arr = group.element_array
    mod = np.asarray(group.moduli, dtype=np.int64)
    partner = group.indices((arr + np.asarray(v, dtype=np.int64)) % mod)
    ids = np.arange(group.order)
    if np.any(partner == ids) or np.any(partner[partner] != ids):
        raise AssertionError(f"PST partner map x -> x + {v} is not a fixed-point-free involution")
    return PstVerdict("pst", row.time, phase=row[nz[0]], shift=v, partner=tuple(int(i) for i in partner))


def classify_at(graph: CayleyGraph, t: RationalPiTime) -> PstVerdict:
    """Decide periodic / PST / neither at ``t`` from the zero pattern of the exact row."""
    return verdict_from_row(transition_row(graph, t))


@dataclass(frozen=True)
class CubelikeGraph:
    """Cayley graph over ``Z_2^n`` with a set of bit-vectors as connection set."""

    n: int
    connection: frozenset

    def __post_init__(self):
        conn = frozenset(tuple(int(b) for b in c) for c in self.connection)
        for c in conn:
            if len(c) != self.n or any(b not in (0, 1) for b in c):
                raise ValueError(f"{c} is not a bit-vector of length {self.n}")
        object.__setattr__(self, "connection", conn)

    @property
    def group(self) -> Group:
        return Group((2,) * self.n)

    @property
    def sigma(self) -> tuple[int, ...]:
        acc = [0] * self.n
        for c in self.connection:
            acc = [a ^ b for a, b in zip(acc, c)]
        return tuple(acc)

    def to_cayley(self) -> CayleyGraph:
        return CayleyGraph(self.group, self.connection)


def cubelike_half_pi(cube: CubelikeGraph) -> tuple[CycloNum, tuple[int, ...]]:
    """``H(pi/2) = i^|C| P_sigma``: returns ``(i^|C|, sigma)``."""
    return field(4).root(len(cube.connection)), cube.sigma


def union_product_row(gS: CayleyGraph, gT: CayleyGraph, t: RationalPiTime) -> TransitionRow:
    """Row of ``Cay(G, S u T)`` for disjoint S, T, as the product ``H_S(t) H_T(t)``."""
    if gS.group != gT.group:
        raise ValueError("graphs are over different groups")
    if gS.connection & gT.connection:
        raise ValueError("connection sets overlap")
    ctx = walk_field(gS.group, t)
    row = convolve_rows(transition_row(gS, t, ctx), transition_row(gT, t, ctx))
    row.time = t
    return row


def kronecker_row(cube: CubelikeGraph, factor: Spectrum, t: RationalPiTime) -> TransitionRow:
    """Row of ``X(C) x G`` from ``sum_s H_cube(mu_s t) (x) F_s``.

    The product vertex set is ``Z_2^n + V(G)`` with cube coordinates first;
    ``G`` must live on an odd-order group so that this ordering is canonical.
    """
    g2 = factor.group
    if g2.order % 2 == 0:
        raise ValueError("the factor graph must live on a group of odd order")
    product = Group((2,) * cube.n + g2.moduli)
    ctx = field(math.lcm(2 * t.q, product.exponent, 4))
    cube_graph = cube.to_cayley()
    n1, n2 = cube_graph.order, g2.order
    total = [ctx.zero() for _ in range(n1 * n2)]
    for space in factor.spaces:
        cube_row = transition_row(cube_graph, RationalPiTime(t.p * space.eigenvalue, t.q), ctx)
        proj = idempotent_row(space, g2, ctx)
        for x in range(n1):
            hx = cube_row[x]
            if hx.is_zero():
                continue
            for u in range(n2):
                if not proj[u].is_zero():
                    total[x * n2 + u] = total[x * n2 + u] + hx * proj[u]
    return _row_from_nums(product, t, ctx, total)


def dense_cap() -> int:
    raw = os.environ.get("GCDWALK_DENSE_CAP")
    return int(raw) if raw else DEFAULT_DENSE_CAP


def float_oracle(graph: CayleyGraph, t: float, cap: int | None = None) -> np.ndarray:
    """Dense ``exp(itA)`` in double precision via ``numpy.linalg.eigh`` of the adjacency matrix."""
    cap = dense_cap() if cap is None else cap
    if graph.order > cap:
        raise ResourceError(f"graph order {graph.order} exceeds the dense cap {cap}")
    A = graph.adjacency_matrix().astype(float)
    w, V = np.linalg.eigh(A)
    return (V * np.exp(1j * float(t) * w)) @ V.conj().T


def dense_eigenvalues(graph: CayleyGraph, cap: int | None = None) -> np.ndarray:
    cap = dense_cap() if cap is None else cap
    if graph.order > cap:
        raise ResourceError(f"graph order {graph.order} exceeds the dense cap {cap}")
    return np.linalg.eigvalsh(graph.adjacency_matrix().astype(float))


def oracle_deviation(graph: CayleyGraph, row: TransitionRow) -> float:
    """Max-norm gap between an exact row and row 0 of the float oracle."""
    H = float_oracle(graph, float(row.time))
    return float(np.max(np.abs(H[0] - row.to_complex())))
