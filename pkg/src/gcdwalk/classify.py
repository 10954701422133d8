"""Structure theory for gcd-graphs: cube embeddings, factorization and PST certificates.

The 2-part of a gcd-graph is isomorphic to a cubelike graph via the 2-adic
digits of each coordinate (least significant digit first). Grouping a divisor
set by its odd-part divisors splits the graph into Kronecker products
``X(C) x G``, and the XOR-sum ``sigma`` and size of ``C`` decide periodicity
and perfect state transfer at pi/2.

Certificates returned here are always checked against the exact walk engine
(``walk_confirmed``). Refusals carry a :class:`RefusalKind` that separates
"the sufficient condition does not apply" from "PST is impossible".
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .abelian import CayleyGraph, DivisorTuple, Element, Group, divisor_set, gcd_set, generates
from .cyclo import CycloNum, field as cyclo_field
from .spectra import Parity, Spectrum, eigenvalue_parities, spectrum
from .walk import CubelikeGraph, PstVerdict, RationalPiTime, classify_at

HALF_PI = RationalPiTime(1, 2)
PI = RationalPiTime(1, 1)


class NotFactorizableError(ValueError):
    """The divisor tuples do not share one odd-part divisor tuple."""


class PreconditionError(ValueError):
    """One or more theorem preconditions failed; ``failures`` lists them by code."""

    def __init__(self, failures: list[str]):
        self.failures = failures
        super().__init__("; ".join(failures))


class RefusalKind(str, enum.Enum):
    NOT_SUFFICIENT = "sufficient-condition-not-met"
    PRECONDITION = "theorem-precondition-violated"
    NOT_COVERED = "not-covered"
    IMPOSSIBLE = "impossible"


@dataclass(frozen=True)
class Refusal:
    kind: RefusalKind
    reason: str

    def to_json(self) -> dict:
        return {"refused": True, "kind": self.kind.value, "reason": self.reason}


@dataclass(frozen=True)
class Certificate:
    theorem: str
    evidence: dict
    walk_confirmed: bool

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "evidence": self.evidence, "walk_confirmed": self.walk_confirmed}


def _log2(m: int) -> int:
    if m < 1 or m & (m - 1):
        raise ValueError(f"{m} is not a power of 2")
    return m.bit_length() - 1


def cube_component_set(modulus: int, d: int) -> frozenset:
    """Image of ``S_{Z_modulus}(d)`` under the little-endian 2-adic digit map."""
    n = _log2(modulus)
    if modulus % d:
        raise ValueError(f"{d} does not divide {modulus}")
    k = _log2(d)
    if k == n:
        return frozenset({(0,) * n})
    out = set()
    for tail in itertools.product((0, 1), repeat=n - k - 1):
        out.add((0,) * k + (1,) + tail)
    return frozenset(out)


def _bits(z: int, width: int) -> tuple[int, ...]:
    return tuple((z >> j) & 1 for j in range(width))


@dataclass(frozen=True)
class CubeEmbedding:
    """Isomorphism from ``Cay(G1, S(D*))`` onto the cubelike graph ``X(C)``."""

    source: Group
    target_dim: int
    connection_image: frozenset
    divisors: frozenset = field(default=frozenset())

    @property
    def widths(self) -> tuple[int, ...]:
        return tuple(_log2(m) for m in self.source.moduli)

    @property
    def cube(self) -> CubelikeGraph:
        return CubelikeGraph(self.target_dim, self.connection_image)

    def vertex_map(self, x: Sequence[int]) -> tuple[int, ...]:
        out: tuple[int, ...] = ()
        for z, w in zip(x, self.widths):
            out += _bits(int(z), w)
        return out

    def inverse_map(self, bits: Sequence[int]) -> Element:
        out = []
        pos = 0
        for w in self.widths:
            out.append(sum(int(b) << j for j, b in enumerate(bits[pos : pos + w])))
            pos += w
        return tuple(out)

    def permutation(self) -> np.ndarray:
        """``perm[i]`` = cube-group index of the image of source element ``i``."""
        cube_group = Group((2,) * self.target_dim)
        return np.array([cube_group.index(self.vertex_map(x)) for x in self.source.elements()], dtype=np.int64)

    def verify(self) -> bool:
        """Exhaustive check that conjugating by the vertex map turns one adjacency into the other."""
        src = CayleyGraph.gcd_graph(self.source, self.divisors).adjacency_matrix()
        dst = self.cube.to_cayley().adjacency_matrix()
        perm = self.permutation()
        if len(set(perm.tolist())) != len(perm):
            return False
        return bool(np.array_equal(dst[np.ix_(perm, perm)], src))


def cube_isomorphism(g1: Group, Dstar: Iterable[Sequence[int]]) -> CubeEmbedding:
    """Cubelike connection set ``C = union_d C_{d_1} x ... x C_{d_r}`` for a 2-group."""
    for m in g1.moduli:
        _log2(m)
    Dstar = divisor_set(Dstar, g1)
    conn: set = set()
    for d in Dstar:
        parts = [cube_component_set(m, di) for m, di in zip(g1.moduli, d)]
        for combo in itertools.product(*parts):
            conn.add(sum(combo, ()))
    dim = sum(_log2(m) for m in g1.moduli)
    return CubeEmbedding(g1, dim, frozenset(conn), frozenset(Dstar))


@dataclass(frozen=True)
class Factorization:
    """``Cay(G, S(D)) ~ X(C) x Cay(G2, S({odd_divisors}))``."""

    embedding: CubeEmbedding
    odd_divisors: DivisorTuple
    odd_graph: CayleyGraph

    @property
    def cube(self) -> CubelikeGraph:
        return self.embedding.cube

    @property
    def odd_full(self) -> bool:
        return self.odd_divisors == self.odd_graph.group.moduli


def _split(g: Group, d: Sequence[int]) -> tuple[DivisorTuple, DivisorTuple]:
    r = g.two_part_count
    return tuple(d[:r]), tuple(d[r:])


def factorize(g: Group, D: Iterable[Sequence[int]]) -> Factorization:
    D = divisor_set(D, g)
    if g.moduli in D:
        raise ValueError("the full moduli tuple (loops) may not be in the divisor set")
    odd = {_split(g, d)[1] for d in D}
    if len(odd) > 1:
        raise NotFactorizableError(f"divisor tuples have different odd parts: {sorted(odd)}")
    odd_divs = odd.pop() if odd else g.odd_part.moduli
    emb = cube_isomorphism(g.two_part, [_split(g, d)[0] for d in D])
    G = CayleyGraph.gcd_graph(g.odd_part, [odd_divs])
    return Factorization(emb, odd_divs, G)


@dataclass(frozen=True)
class ClassMembership:
    in_Dprime: bool
    in_scriptD: bool
    in_Dtilde: bool
    blocks: tuple[dict, ...]

    def to_json(self) -> dict:
        return {
            "in_Dprime": self.in_Dprime,
            "in_scriptD": self.in_scriptD,
            "in_Dtilde": self.in_Dtilde,
            "blocks": list(self.blocks),
        }


def _block_evidence(g: Group, block: frozenset) -> dict:
    fac = factorize(g, block)
    cube = fac.cube
    sigma = cube.sigma
    size = len(cube.connection)
    full = fac.odd_full
    qualifies = not any(sigma) and (full or size % 4 == 0)
    return {
        "divisors": [list(d) for d in sorted(block)],
        "odd_divisors": list(fac.odd_divisors),
        "odd_full": full,
        "sigma": list(sigma),
        "cube_size": size,
        "cube_size_mod4": size % 4,
        "in_Dprime": qualifies,
    }


def membership(g: Group, D: Iterable[Sequence[int]]) -> ClassMembership:
    """Flags for the periodic classes (single block / disjoint union) and the PST class."""
    D = divisor_set(D, g)
    if g.moduli in D:
        return ClassMembership(False, False, False, ())
    by_odd: dict = {}
    for d in sorted(D):
        by_odd.setdefault(_split(g, d)[1], set()).add(d)
    blocks = tuple(_block_evidence(g, frozenset(b)) for _, b in sorted(by_odd.items()))
    in_scriptD = all(b["in_Dprime"] for b in blocks)
    in_Dprime = len(blocks) == 1 and blocks[0]["in_Dprime"]
    in_Dtilde = len(blocks) == 1 and blocks[0]["odd_full"] and any(blocks[0]["sigma"])
    return ClassMembership(in_Dprime, in_scriptD, in_Dtilde, blocks)


def _half_pi_phase(blocks: Sequence[dict]) -> CycloNum:
    # identity-type blocks contribute 1; full-odd blocks contribute i^|C|
    total = sum(b["cube_size"] for b in blocks if b["odd_full"])
    return cyclo_field(4).root(total)


def _phase_matches(phase: CycloNum, predicted: CycloNum) -> bool:
    return _embed(predicted, phase.L) == phase


def _embed(x: CycloNum, L: int) -> CycloNum:
    """Map an element of Q(zeta_4) with integer power form into Q(zeta_L)."""
    ctx = cyclo_field(L)
    out = ctx.zero()
    step = L // x.L
    for j, c in enumerate(x.coeffs):
        if c:
            out = out + ctx.root(j * step).scale(c)
    return out


def certify_periodic(g: Group, D: Iterable[Sequence[int]]) -> Certificate | Refusal:
    """Certificate that ``Cay(G, S(D))`` is periodic at pi/2 when D is a union of periodic blocks."""
    D = divisor_set(D, g)
    if g.moduli in D:
        return Refusal(RefusalKind.PRECONDITION, "divisor set contains the full moduli tuple")
    mem = membership(g, D)
    if not mem.in_scriptD:
        return Refusal(RefusalKind.NOT_SUFFICIENT, "some odd-part block has nonzero sigma or |C| not 0 mod 4")
    blocks = [dict(b, case="I" if not b["odd_full"] else "II") for b in mem.blocks]
    predicted = _half_pi_phase(blocks)
    verdict = classify_at(CayleyGraph.gcd_graph(g, D), HALF_PI)
    confirmed = verdict.kind == "periodic" and _phase_matches(verdict.phase, predicted)
    evidence = {
        "group": str(g),
        "divisors": [list(d) for d in sorted(D)],
        "blocks": blocks,
        "predicted_phase": predicted.to_json(),
        "walk_kind": verdict.kind,
    }
    return Certificate("6c", evidence, confirmed)


def certify_pst(g: Group, D1: Iterable[Sequence[int]], D2: Iterable[Sequence[int]]) -> Certificate | Refusal:
    """Certificate of connected PST at pi/2 for a periodic part D1 plus a PST part D2."""
    D1 = divisor_set(D1, g)
    D2 = divisor_set(D2, g)
    if g.order % 2:
        return Refusal(RefusalKind.IMPOSSIBLE, "odd order: gcd-graphs over odd-order groups have no PST")
    if D1 & D2:
        return Refusal(RefusalKind.PRECONDITION, "the two divisor sets intersect")
    m1, m2 = membership(g, D1), membership(g, D2)
    if not m1.in_scriptD:
        return Refusal(RefusalKind.NOT_SUFFICIENT, "periodic part is not a union of periodic blocks")
    if not m2.in_Dtilde:
        return Refusal(RefusalKind.NOT_SUFFICIENT, "PST part needs full odd divisors and nonzero sigma")
    D = D1 | D2
    S = gcd_set(g, D).elements
    if not generates(g, S):
        return Refusal(RefusalKind.NOT_SUFFICIENT, "the union does not generate the group")
    fac = factorize(g, D2)
    sigma = fac.cube.sigma
    shift = fac.embedding.inverse_map(sigma) + (0,) * g.odd_part_count
    predicted = _half_pi_phase(list(m1.blocks) + list(m2.blocks))
    verdict = classify_at(CayleyGraph(g, S), HALF_PI)
    confirmed = (
        verdict.kind == "pst" and verdict.shift == shift and _phase_matches(verdict.phase, predicted)
    )
    partner = [g.index(g.add(x, shift)) for x in g.elements()]
    evidence = {
        "group": str(g),
        "periodic_part": [list(d) for d in sorted(D1)],
        "pst_part": [list(d) for d in sorted(D2)],
        "sigma": list(sigma),
        "shift": list(shift),
        "partner": partner,
        "predicted_phase": predicted.to_json(),
        "walk_kind": verdict.kind,
    }
    return Certificate("6d", evidence, confirmed)


@dataclass(frozen=True)
class Construction:
    """A connected PST gcd-graph: ``periodic_part`` in the periodic class, ``pst_part`` in the PST class."""

    group: Group
    lemma: str
    periodic_part: frozenset
    pst_part: frozenset

    @property
    def divisors(self) -> frozenset:
        return self.periodic_part | self.pst_part

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "lemma": self.lemma,
            "periodic_part": [list(d) for d in sorted(self.periodic_part)],
            "pst_part": [list(d) for d in sorted(self.pst_part)],
            "divisors": [list(d) for d in sorted(self.divisors)],
        }


def _one_hot_tails(length: int, exactly_one: bool) -> list[tuple[int, ...]]:
    """Tails with entry 1 in exactly (or at most) one position and 0 elsewhere."""
    tails = [tuple(1 if j == i else 0 for j in range(length)) for i in range(length)]
    if not exactly_one:
        tails.append((0,) * length)
    return tails


def construct_pst(g: Group) -> Construction | Refusal:
    """Divisor set of a connected gcd-graph with PST at pi/2, for order divisible by 4."""
    if g.order % 2:
        return Refusal(RefusalKind.IMPOSSIBLE, "odd order: gcd-graphs over odd-order groups have no PST")
    if g.order % 4:
        return Refusal(RefusalKind.NOT_COVERED, "order 2 mod 4 is not covered by the construction")
    k = g.rank
    n1 = _log2(g.moduli[0])
    if n1 > 2:
        lemma = "n1"
        raw = [(1,) + tail for tail in _one_hot_tails(k - 1, exactly_one=False)]
        raw_prime = [(2 ** (n1 - 1),) + (0,) * (k - 1)]
    elif n1 == 2:
        lemma = "n2"
        raw = [(d1,) + tail for d1 in (0, 1, 2) for tail in _one_hot_tails(k - 1, exactly_one=True)]
        raw_prime = [(2,) + (0,) * (k - 1)]
    else:
        lemma = "n3"
        raw = [
            (d1, d2) + tail
            for d1 in (0, 1)
            for d2 in (0, 1)
            for tail in _one_hot_tails(k - 2, exactly_one=True)
        ]
        raw_prime = [(1, 0) + (0,) * (k - 2), (0, 1) + (0,) * (k - 2)]
    D = divisor_set(raw, g)
    Dp = divisor_set(raw_prime, g)
    if not generates(g, gcd_set(g, D | Dp).elements):
        # Z4 alone: the one-hot tail is empty, so the pi/2 matching {2} is all that is left
        if g.moduli == (4,):
            return Construction(g, "n2-cyclic", frozenset(), divisor_set([(1,)], g))
        return Refusal(RefusalKind.NOT_COVERED, f"lemma {lemma} output does not generate {g}")
    return Construction(g, lemma, D, Dp)


@dataclass(frozen=True)
class ParityVerdict:
    parity: Parity
    spectrum: Spectrum
    predicted_periodic_at_pi: bool
    walk_periodic_at_pi: bool
    pst_time: RationalPiTime

    @property
    def agrees(self) -> bool:
        return self.predicted_periodic_at_pi == self.walk_periodic_at_pi

    def to_json(self) -> dict:
        return {
            "theorem": "6e",
            "parity": self.parity.value,
            "spectrum": self.spectrum.to_json(),
            "predicted_periodic_at_pi": self.predicted_periodic_at_pi,
            "walk_periodic_at_pi": self.walk_periodic_at_pi,
            "pst_time": self.pst_time.to_json(),
            "walk_confirmed": self.agrees,
        }


def _parity_setup(g: Group, D: frozenset, Dp: frozenset, k: int) -> Factorization:
    failures = []
    if k < 1:
        failures.append("k must be a positive integer")
    if D & Dp:
        failures.append("nonempty-intersection: the divisor sets intersect")
    fac = None
    try:
        fac = factorize(g, Dp)
    except ValueError as exc:
        failures.append(f"not-factorizable: {exc}")
    if fac is not None and len(fac.cube.connection) % 2 == 0:
        failures.append(f"even-cube: |C'| = {len(fac.cube.connection)} is even")
    if k >= 1 and classify_at(CayleyGraph.gcd_graph(g, D), RationalPiTime(1, 2**k)).kind != "pst":
        failures.append(f"no-pst: Cay(G, S(D)) has no PST at pi/{2**k}")
    if failures:
        raise PreconditionError(failures)
    return fac


def parity_criterion(
    g: Group, D: Iterable[Sequence[int]], Dprime: Iterable[Sequence[int]], k: int = 1
) -> ParityVerdict:
    """Periodicity of ``Cay(G, S(D u D'))`` at pi via the eigenvalue parity of the odd factor."""
    D = divisor_set(D, g)
    Dp = divisor_set(Dprime, g)
    fac = _parity_setup(g, D, Dp, k)
    spec = spectrum(fac.odd_graph)
    parity = eigenvalue_parities(spec)
    walk = classify_at(CayleyGraph.gcd_graph(g, D | Dp), PI)
    return ParityVerdict(parity, spec, parity != Parity.MIXED, walk.kind == "periodic", RationalPiTime(1, 2**k))


@dataclass(frozen=True)
class RuleOut:
    """Outcome of the parity test for PST at every pi/2^k."""

    ruled_out: bool
    reason: str
    parity: Parity | None = None
    checked: tuple = ()

    def to_json(self) -> dict:
        return {
            "theorem": "6f",
            "ruled_out": self.ruled_out,
            "reason": self.reason,
            "parity": self.parity.value if self.parity is not None else None,
            "checked": [{"time": t.to_json(), "kind": kind} for t, kind in self.checked],
            "walk_confirmed": all(kind != "pst" for _, kind in self.checked) if self.ruled_out else None,
        }


def rule_out_pst(
    g: Group, D: Iterable[Sequence[int]], Dprime: Iterable[Sequence[int]], k: int = 1, spot_checks: int = 3
) -> RuleOut:
    """Mixed parity in the odd factor rules out PST at every pi/2^j on the union graph."""
    D = divisor_set(D, g)
    Dp = divisor_set(Dprime, g)
    union = CayleyGraph.gcd_graph(g, D | Dp)
    times = [RationalPiTime(1, 2**j) for j in range(1, spot_checks + 1)]
    if g.order % 2:
        checked = tuple((t, classify_at(union, t).kind) for t in times)
        return RuleOut(True, "odd order: no PST at any time", None, checked)
    fac = _parity_setup(g, D, Dp, k)
    parity = eigenvalue_parities(spectrum(fac.odd_graph))
    if parity != Parity.MIXED:
        return RuleOut(False, "inconclusive: odd factor eigenvalues share a parity", parity)
    checked = tuple((t, classify_at(union, t).kind) for t in times)
    return RuleOut(True, "odd factor eigenvalues have mixed parity", parity, checked)
