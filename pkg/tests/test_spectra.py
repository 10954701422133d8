import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import groups_up_to
from gcdwalk.abelian import CayleyGraph, Group, gcd_set
from gcdwalk.cyclo import field
from gcdwalk.spectra import (
    IntegralityError,
    Parity,
    character_value,
    eigenvalue,
    eigenvalue_parities,
    eigenvalues,
    idempotent_entry,
    spectrum,
)
from gcdwalk.walk import dense_eigenvalues

K3 = CayleyGraph.gcd_graph(Group((3,)), [(1,)])
K2 = CayleyGraph.gcd_graph(Group((2,)), [(1,)])


def brute_eigenvalue(graph, g):
    """Character sum in floating point, straight from the definition."""
    m = graph.group.moduli
    total = 0j
    for s in graph.connection:
        total += np.exp(2j * np.pi * sum(gi * si / mi for gi, si, mi in zip(g, s, m)))
    return total


def test_character_values():
    F = field(6)
    assert character_value(F, Group((3,)), (0,), (2,)) == 1
    assert character_value(F, Group((2,)), (1,), (1,)) == -1
    assert character_value(field(3), Group((3,)), (1,), (2,)) == field(3).root(2)
    with pytest.raises(ValueError):
        character_value(field(4), Group((3,)), (1,), (1,))


def test_k3_eigenvalues():
    assert eigenvalues(K3).tolist() == [2, -1, -1]
    assert [eigenvalue(K3, (g,)) for g in range(3)] == [2, -1, -1]
    assert eigenvalues(K2).tolist() == [1, -1]


def test_cubelike_character_sum():
    cube = CayleyGraph(Group((2, 2)), [(1, 0), (0, 1), (1, 1)])
    assert eigenvalue(cube, (1, 1)) == -1
    assert sorted(eigenvalues(cube).tolist()) == [-1, -1, -1, 3]


def test_spectra_examples():
    spec = spectrum(K3)
    assert [(sp.eigenvalue, sp.members) for sp in spec.spaces] == [(2, ((0,),)), (-1, ((1,), (2,)))]
    empty = spectrum(CayleyGraph(Group((4, 2)), []))
    assert [(sp.eigenvalue, sp.multiplicity) for sp in empty.spaces] == [(0, 8)]
    loops = spectrum(CayleyGraph.gcd_graph(Group((3,)), [(3,)]))
    assert [(sp.eigenvalue, sp.multiplicity) for sp in loops.spaces] == [(1, 3)]


def test_parities():
    assert eigenvalue_parities(spectrum(K3)) is Parity.MIXED
    assert eigenvalue_parities(spectrum(K2)) is Parity.ALL_ODD
    assert eigenvalue_parities(spectrum(CayleyGraph(Group((5,)), []))) is Parity.ALL_EVEN


def test_spectrum_json():
    assert spectrum(K3).to_json() == [
        {"eigenvalue": 2, "multiplicity": 1, "characters": [[0]]},
        {"eigenvalue": -1, "multiplicity": 2, "characters": [[1], [2]]},
    ]


def test_non_gcd_connection_set_is_rejected():
    # {1, 3} in Z8 is symmetric but not a union of gcd-sets: sqrt(2) appears
    bad = CayleyGraph(Group((8,)), [(1,), (7,)])
    with pytest.raises(IntegralityError):
        eigenvalues(bad)
    with pytest.raises(IntegralityError):
        eigenvalue(bad, (1,))


def _random_gcd_graph(draw):
    g = draw(st.sampled_from(groups_up_to(36)))
    tuples = g.divisor_tuples()
    D = draw(st.sets(st.sampled_from(tuples)))
    return CayleyGraph.gcd_graph(g, D)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_trace_and_frobenius_identities(data):
    graph = _random_gcd_graph(data.draw)
    spec = spectrum(graph)
    n = graph.order
    assert sum(sp.multiplicity for sp in spec.spaces) == n
    assert sum(sp.eigenvalue * sp.multiplicity for sp in spec.spaces) == (n if graph.has_loops else 0)
    assert sum(x * x for x in spec.multiset()) == n * len(graph.connection)
    assert spec.distinct == sorted(set(spec.distinct), reverse=True)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_spectrum_matches_dense_solver(data):
    graph = _random_gcd_graph(data.draw)
    exact = sorted(spectrum(graph).multiset())
    dense = np.sort(dense_eigenvalues(graph))
    assert np.max(np.abs(np.asarray(exact, float) - dense)) < 1e-8


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_eigenvalue_matches_brute_character_sum(data):
    graph = _random_gcd_graph(data.draw)
    lam = eigenvalues(graph)
    for i in data.draw(st.lists(st.integers(0, graph.order - 1), min_size=1, max_size=4)):
        g = graph.group.element(i)
        assert abs(brute_eigenvalue(graph, g) - lam[i]) < 1e-9
        assert eigenvalue(graph, g) == lam[i]


def test_idempotents_sum_to_identity():
    g = Group((4, 3))
    graph = CayleyGraph.gcd_graph(g, [(1, 1), (2, 3)])
    spaces = spectrum(graph).spaces
    for v in g.elements():
        total = sum((idempotent_entry(sp, g, (0, 0), v) for sp in spaces), field(g.exponent).zero())
        assert total == (1 if v == (0, 0) else 0)
