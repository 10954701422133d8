"""Finite abelian groups as tuples of cyclic moduli, gcd-sets and Cayley graphs.

A group is stored in canonical form: 2-power cyclic factors first (largest
exponent first), then odd prime-power factors. Elements are plain tuples of
integers, divisor tuples are tuples of divisors of the moduli, and a divisor
set is a ``frozenset`` of divisor tuples.
"""

from __future__ import annotations

import itertools
import math
import os
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Element = tuple[int, ...]
DivisorTuple = tuple[int, ...]
DivisorSet = frozenset

DEFAULT_MAX_ORDER = 10**6


class ResourceError(RuntimeError):
    """Raised when a computation would exceed a configured size cap."""


def max_order() -> int:
    """Enumeration cap on group order; ``GCDWALK_MAX_ORDER`` overrides the default."""
    raw = os.environ.get("GCDWALK_MAX_ORDER")
    if raw is None:
        return DEFAULT_MAX_ORDER
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"GCDWALK_MAX_ORDER must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError("GCDWALK_MAX_ORDER must be positive")
    return value


def _prime_powers(n: int) -> list[tuple[int, int]]:
    """Factor n into (prime, exponent) pairs by trial division."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _canonical_moduli(moduli: Iterable[int]) -> tuple[tuple[int, ...], int]:
    twos: list[int] = []
    odds: list[tuple[int, int]] = []
    for m in moduli:
        m = int(m)
        if m < 1:
            raise ValueError(f"cyclic modulus must be >= 1, got {m}")
        for p, e in _prime_powers(m):
            if p == 2:
                twos.append(e)
            else:
                odds.append((p, e))
    twos.sort(reverse=True)
    odds.sort(key=lambda pe: (pe[0], -pe[1]))
    canon = tuple(2**e for e in twos) + tuple(p**e for p, e in odds)
    return canon, len(twos)


@dataclass(frozen=True, init=False)
class Group:
    """Finite abelian group ``Z_{m_1} + ... + Z_{m_k}`` in canonical form.

    Any moduli are accepted; they are split into prime-power cyclic factors
    and sorted, so ``Group((6, 4))`` is the same group as ``Group((4, 2, 3))``.
    """

    moduli: tuple[int, ...]
    two_part_count: int

    def __init__(self, moduli: Iterable[int] = ()):
        canon, r = _canonical_moduli(moduli)
        object.__setattr__(self, "moduli", canon)
        object.__setattr__(self, "two_part_count", r)

    @classmethod
    def parse(cls, literal: str) -> "Group":
        """Parse a literal such as ``"Z4xZ2xZ3"`` (case-insensitive)."""
        text = literal.strip().replace(" ", "")
        if not re.fullmatch(r"(?i)z\d+(xz\d+)*", text):
            raise ValueError(f"unparseable group literal {literal!r}")
        return cls(int(part[1:]) for part in text.lower().split("x"))

    @property
    def odd_part_count(self) -> int:
        return len(self.moduli) - self.two_part_count

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def exponent(self) -> int:
        return math.lcm(1, *self.moduli)

    @property
    def two_part(self) -> "Group":
        return Group(self.moduli[: self.two_part_count])

    @property
    def odd_part(self) -> "Group":
        return Group(self.moduli[self.two_part_count :])

    @property
    def identity(self) -> Element:
        return (0,) * self.rank

    def __str__(self) -> str:
        return "x".join(f"Z{m}" for m in self.moduli) or "Z1"

    def check_order(self) -> None:
        cap = max_order()
        if self.order > cap:
            raise ResourceError(f"group order {self.order} exceeds the enumeration cap {cap}")

    # elements are indexed row-major: the last coordinate varies fastest
    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides = []
        acc = 1
        for m in reversed(self.moduli):
            strides.append(acc)
            acc *= m
        return tuple(reversed(strides))

    def elements(self) -> list[Element]:
        self.check_order()
        return list(itertools.product(*(range(m) for m in self.moduli)))

    @cached_property
    def element_array(self) -> np.ndarray:
        """All elements as an ``(order, rank)`` integer array, in index order."""
        self.check_order()
        if self.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*(np.arange(m) for m in self.moduli), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    def index(self, x: Sequence[int]) -> int:
        x = self.validate(x)
        return sum(c * s for c, s in zip(x, self._strides))

    def element(self, i: int) -> Element:
        if not 0 <= i < self.order:
            raise IndexError(f"element index {i} out of range for {self}")
        out = []
        for s, m in zip(self._strides, self.moduli):
            out.append((i // s) % m)
        return tuple(out)

    def indices(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`index` for an ``(k, rank)`` array of reduced elements."""
        if self.rank == 0:
            return np.zeros(len(xs), dtype=np.int64)
        return xs @ np.asarray(self._strides, dtype=np.int64)

    def validate(self, x: Sequence[int]) -> Element:
        x = tuple(int(c) for c in x)
        if len(x) != self.rank:
            raise ValueError(f"element {x} has {len(x)} coordinates, group {self} needs {self.rank}")
        for c, m in zip(x, self.moduli):
            if not 0 <= c < m:
                raise ValueError(f"coordinate {c} out of range for Z{m}")
        return x

    def add(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def neg(self, x: Sequence[int]) -> Element:
        return tuple((-a) % m for a, m in zip(x, self.moduli))

    def sub(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return tuple((a - b) % m for a, b, m in zip(x, y, self.moduli))

    def divisor_tuples(self) -> list[DivisorTuple]:
        """Every divisor tuple of the moduli, in lexicographic order."""
        return list(itertools.product(*(_divisors(m) for m in self.moduli)))


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def gcd_tuple(x: Sequence[int], m: Sequence[int]) -> DivisorTuple:
    """Componentwise gcd with the convention gcd(0, n) = n."""
    if len(x) != len(m):
        raise ValueError(f"dimension mismatch: element {tuple(x)} vs moduli {tuple(m)}")
    return tuple(math.gcd(int(a), int(b)) for a, b in zip(x, m))


def normalize_divisor(raw: Sequence[int], m: Sequence[int]) -> DivisorTuple:
    """Map a 0 entry to the full modulus; any other entry must divide its modulus."""
    if len(raw) != len(m):
        raise ValueError(f"divisor tuple {tuple(raw)} does not match moduli {tuple(m)}")
    out = []
    for d, mi in zip(raw, m):
        d = int(d)
        if d == 0:
            out.append(mi)
        elif d < 0 or mi % d != 0:
            raise ValueError(f"{d} is not a divisor of {mi}")
        else:
            out.append(d)
    return tuple(out)


def divisor_set(raw: Iterable[Sequence[int]], g: Group) -> DivisorSet:
    """Build a normalized divisor set for ``g`` from nested integer sequences."""
    return frozenset(normalize_divisor(d, g.moduli) for d in raw)


def sorted_divisors(D: Iterable[DivisorTuple]) -> list[DivisorTuple]:
    return sorted(D)


@dataclass(frozen=True)
class ConnectionSet:
    """A symmetric subset of a group, as produced by :func:`gcd_set`."""

    elements: frozenset
    allow_identity: bool
    counts: dict = field(default_factory=dict, compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements))

    def __contains__(self, x) -> bool:
        return tuple(x) in self.elements


def gcd_set(g: Group, D: Iterable[Sequence[int]]) -> ConnectionSet:
    """The gcd-set ``{x : gcd(x, m) in D}`` with per-tuple membership counts."""
    D = divisor_set(D, g)
    counts = {d: 0 for d in D}
    chosen = []
    arr = g.element_array
    gcds = np.gcd(arr, np.asarray(g.moduli, dtype=np.int64)) if g.rank else arr
    for x, gx in zip(g.elements(), map(tuple, gcds.tolist())):
        if gx in counts:
            counts[gx] += 1
            chosen.append(x)
    # each element has exactly one gcd tuple, so the per-tuple pieces are disjoint
    assert sum(counts.values()) == len(chosen)
    elements = frozenset(chosen)
    assert all(g.neg(x) in elements for x in elements), "gcd-set is not symmetric"
    return ConnectionSet(elements, g.moduli in D, counts)


def is_symmetric(g: Group, S: Iterable[Sequence[int]]) -> bool:
    S = {tuple(x) for x in S}
    return all(g.neg(x) in S for x in S)


def generates(g: Group, S: Iterable[Sequence[int]]) -> bool:
    """Whether the subgroup generated by ``S`` is all of ``g`` (BFS closure)."""
    gens = [tuple(x) for x in S]
    seen = {g.identity}
    queue = deque([g.identity])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = g.add(x, s)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == g.order


@dataclass(frozen=True)
class CayleyGraph:
    """``Cay(group, connection)``; a loop at every vertex when the identity is in the set."""

    group: Group
    connection: frozenset

    def __post_init__(self):
        conn = frozenset(self.group.validate(x) for x in self.connection)
        object.__setattr__(self, "connection", conn)
        if not is_symmetric(self.group, conn):
            raise ValueError("connection set is not symmetric")

    @classmethod
    def gcd_graph(cls, g: Group, D: Iterable[Sequence[int]]) -> "CayleyGraph":
        return cls(g, gcd_set(g, D).elements)

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def has_loops(self) -> bool:
        return self.group.identity in self.connection

    def sorted_connection(self) -> list[Element]:
        return sorted(self.connection)

    def is_connected(self) -> bool:
        return generates(self.group, self.connection)

    def adjacency_matrix(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix; a loop contributes one on the diagonal."""
        g = self.group
        g.check_order()
        arr = g.element_array
        mod = np.asarray(g.moduli, dtype=np.int64)
        A = np.zeros((g.order, g.order), dtype=np.int64)
        for s in self.connection:
            targets = g.indices((arr + np.asarray(s, dtype=np.int64)) % mod) if g.rank else np.zeros(1, np.int64)
            A[np.arange(g.order), targets] = 1
        return A

    def edges(self) -> list[tuple[Element, Element]]:
        """Undirected edges (u, v) with index(u) <= index(v), loops included."""
        g = self.group
        out = []
        for u in g.elements():
            iu = g.index(u)
            for s in self.sorted_connection():
                v = g.add(u, s)
                if iu <= g.index(v):
                    out.append((u, v))
        return out
