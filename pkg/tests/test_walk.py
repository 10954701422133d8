import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import assert_close, divisor_subsets, expm_oracle, groups_up_to
from gcdwalk.abelian import CayleyGraph, Group, ResourceError, gcd_set
from gcdwalk.cyclo import field
from gcdwalk.spectra import spectrum
from gcdwalk.walk import (
    CubelikeGraph,
    RationalPiTime,
    classify_at,
    convolve_rows,
    cubelike_half_pi,
    float_oracle,
    kronecker_row,
    oracle_deviation,
    transition_row,
    union_product_row,
    walk_field,
)

HALF = RationalPiTime(1, 2)
PI = RationalPiTime(1)
G24 = Group((4, 2, 3))
D_PERIODIC = [(1, 1, 1), (1, 2, 1)]
D_PST = D_PERIODIC + [(2, 2, 3), (4, 1, 3)]
K2 = CayleyGraph.gcd_graph(Group((2,)), [(1,)])
K3 = CayleyGraph.gcd_graph(Group((3,)), [(1,)])


def test_rational_time():
    t = RationalPiTime(2, -4)
    assert (t.p, t.q) == (-1, 2)
    assert RationalPiTime.parse("3/6") == HALF
    assert RationalPiTime.parse("1") == PI
    assert str(HALF) == "π/2" and str(RationalPiTime(3, 4)) == "3π/4"
    assert HALF + HALF == PI
    with pytest.raises(ValueError):
        RationalPiTime(1, 0)
    with pytest.raises(ValueError):
        RationalPiTime.parse("pi")


def test_field_choice():
    assert walk_field(G24, HALF).L == 12
    assert walk_field(Group((3,)), RationalPiTime(1, 5)).L == 60


def test_k2_half_pi():
    row = transition_row(K2, HALF)
    assert row.entries == [field(4).zero(), field(4).root(1)]
    assert_close(float_oracle(K2, np.pi / 2), [[0, 1j], [1j, 0]], 1e-12)


def test_k3_at_pi():
    row = transition_row(K3, PI)
    assert [e.as_rational() for e in row.entries] == [Fraction(-1, 3), Fraction(2, 3), Fraction(2, 3)]
    H = float_oracle(K3, np.pi)
    assert_close(np.diag(H), [-1 / 3] * 3, 1e-9)
    assert oracle_deviation(K3, row) < 1e-9


def test_time_zero_is_identity():
    graph = CayleyGraph.gcd_graph(G24, D_PST)
    row = transition_row(graph, RationalPiTime(0))
    assert row.nonzero_indices() == [0] and row[0] == 1


def test_periodic_set_on_z4_z2_z3():
    graph = CayleyGraph.gcd_graph(G24, D_PERIODIC)
    verdict = classify_at(graph, HALF)
    assert verdict.kind == "periodic" and verdict.phase == 1
    assert_close(float_oracle(graph, np.pi / 2), np.eye(24), 1e-9)


def test_pst_set_on_z4_z2_z3():
    graph = CayleyGraph.gcd_graph(G24, D_PST)
    verdict = classify_at(graph, HALF)
    assert verdict.kind == "pst"
    assert verdict.shift == (2, 1, 0)
    assert verdict.phase == -1
    perm = np.array(verdict.partner)
    assert (perm[perm] == np.arange(24)).all() and not (perm == np.arange(24)).any()


def test_k3_half_pi_is_neither():
    assert classify_at(K3, HALF).kind == "neither"


def test_verdict_json():
    data = classify_at(K2, HALF).to_json()
    assert data == {"kind": "pst", "time": {"p": 1, "q": 2}, "phase": {"L": 4, "coeffs": [[0, 1], [1, 1]]}, "shift": [1], "partner": [1, 0]}


@pytest.mark.parametrize(
    "conn, phase, sigma",
    [
        ([(1, 0, 1), (1, 1, 1), (1, 0, 0), (1, 1, 0)], 0, (0, 0, 0)),
        ([(0, 1, 0), (0, 0, 1)], 2, (0, 1, 1)),
        ([], 0, (0, 0, 0)),
    ],
)
def test_cubelike_closed_form(conn, phase, sigma):
    got_phase, got_sigma = cubelike_half_pi(CubelikeGraph(3, conn))
    assert got_phase == field(4).root(phase)
    assert got_sigma == sigma


def test_cubelike_rejects_bad_vectors():
    with pytest.raises(ValueError):
        CubelikeGraph(2, [(1, 2)])
    with pytest.raises(ValueError):
        CubelikeGraph(2, [(1, 0, 0)])


def test_union_product_examples():
    g = G24
    empty = CayleyGraph(g, [])
    full = CayleyGraph.gcd_graph(g, D_PST)
    assert union_product_row(empty, full, HALF) == transition_row(full, HALF)
    d1 = CayleyGraph.gcd_graph(g, D_PERIODIC)
    d2 = CayleyGraph.gcd_graph(g, [(2, 2, 3), (4, 1, 3)])
    assert union_product_row(d1, d2, HALF) == transition_row(full, HALF)
    with pytest.raises(ValueError):
        union_product_row(d1, full, HALF)


def test_union_product_z6_third_pi():
    g = Group((2, 3))
    t = RationalPiTime(1, 3)
    a = CayleyGraph.gcd_graph(g, [(1, 1)])
    b = CayleyGraph.gcd_graph(g, [(2, 1), (1, 3)])
    assert union_product_row(a, b, t) == transition_row(CayleyGraph.gcd_graph(g, [(1, 1), (2, 1), (1, 3)]), t)


def test_kronecker_identity_for_balanced_cube():
    cube = CubelikeGraph(3, [(1, 0, 1), (1, 1, 1), (1, 0, 0), (1, 1, 0)])
    row = kronecker_row(cube, spectrum(K3), HALF)
    assert row.nonzero_indices() == [0] and row[0] == 1


def test_kronecker_odd_cube_with_k3_is_not_scalar_at_pi():
    cube = CubelikeGraph(2, [(1, 0)])
    row = kronecker_row(cube, spectrum(K3), PI)
    assert len(row.nonzero_indices()) > 1


def test_kronecker_matches_direct_product_graph():
    # X(C) x G is the Cayley graph on Z2^n + Z3 with connection C x S
    cube = CubelikeGraph(2, [(1, 0), (1, 1)])
    direct = CayleyGraph(Group((2, 2, 3)), [c + s for c in cube.connection for s in K3.connection])
    for t in [HALF, PI, RationalPiTime(1, 3)]:
        assert kronecker_row(cube, spectrum(K3), t) == transition_row(direct, t)


def test_kronecker_single_vertex_factor():
    cube = CubelikeGraph(2, [(1, 0), (0, 1)])
    point = Group(())
    looped = spectrum(CayleyGraph(point, [()]))
    assert kronecker_row(cube, looped, HALF) == transition_row(cube.to_cayley(), HALF)
    # a loopless point has spectrum {0}: the product graph is edgeless, H = I
    bare = kronecker_row(cube, spectrum(CayleyGraph(point, [])), HALF)
    assert bare.nonzero_indices() == [0]


def test_kronecker_requires_odd_factor():
    with pytest.raises(ValueError):
        kronecker_row(CubelikeGraph(1, [(1,)]), spectrum(K2), HALF)


def test_float_oracle_cap(monkeypatch):
    monkeypatch.setenv("GCDWALK_DENSE_CAP", "8")
    with pytest.raises(ResourceError):
        float_oracle(CayleyGraph.gcd_graph(G24, D_PERIODIC), 1.0)


def test_closed_form_all_cubes_in_dimension_3():
    nonzero = [v for v in itertools.product((0, 1), repeat=3) if any(v)]
    for k in range(len(nonzero) + 1):
        for C in itertools.combinations(nonzero, k):
            cube = CubelikeGraph(3, C)
            phase, sigma = cubelike_half_pi(cube)
            verdict = classify_at(cube.to_cayley(), HALF)
            if any(sigma):
                assert verdict.kind == "pst" and verdict.shift == sigma
            else:
                assert verdict.kind == "periodic"
            assert verdict.phase == phase


@pytest.mark.parametrize("moduli", [(9,), (3, 3), (5, 3)])
def test_odd_order_never_pst(moduli):
    g = Group(moduli)
    for D in divisor_subsets(g, include_full=True):
        assert classify_at(CayleyGraph.gcd_graph(g, D), HALF).kind != "pst"


def _random_case(draw):
    g = draw(st.sampled_from(groups_up_to(36)))
    D = draw(st.sets(st.sampled_from(g.divisor_tuples())))
    t = RationalPiTime(draw(st.integers(-12, 12)), draw(st.integers(1, 12)))
    return CayleyGraph.gcd_graph(g, D), t


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_unitary_symmetric_and_matches_oracles(data):
    graph, t = _random_case(data.draw)
    row = transition_row(graph, t)
    assert row.is_unitary()
    assert row.is_symmetric()
    assert oracle_deviation(graph, row) < 1e-9
    assert_close(expm_oracle(graph, t)[0], row.to_complex(), 1e-9)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_semigroup_law(data):
    graph, t1 = _random_case(data.draw)
    t2 = RationalPiTime(data.draw(st.integers(-12, 12)), data.draw(st.integers(1, 12)))
    t = t1 + t2
    ctx = field(math.lcm(2 * t1.q, 2 * t2.q, graph.group.exponent, 4))
    prod = convolve_rows(transition_row(graph, t1, ctx), transition_row(graph, t2, ctx))
    assert prod == transition_row(graph, t, ctx)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_union_product_property(data):
    g = data.draw(st.sampled_from(groups_up_to(36)))
    tuples = g.divisor_tuples()
    labels = data.draw(st.lists(st.integers(0, 2), min_size=len(tuples), max_size=len(tuples)))
    A = [d for d, lab in zip(tuples, labels) if lab == 1]
    B = [d for d, lab in zip(tuples, labels) if lab == 2]
    t = RationalPiTime(data.draw(st.integers(-12, 12)), data.draw(st.integers(1, 12)))
    gA, gB = CayleyGraph.gcd_graph(g, A), CayleyGraph.gcd_graph(g, B)
    assert union_product_row(gA, gB, t) == transition_row(CayleyGraph.gcd_graph(g, A + B), t)


def test_row_json_shape():
    data = transition_row(K2, HALF).to_json()
    assert data["time"] == {"p": 1, "q": 2}
    assert data["entries"][1] == {"L": 4, "coeffs": [[0, 1], [1, 1]]}


def test_matrix_entry_translation_invariance():
    graph = CayleyGraph.gcd_graph(G24, D_PST)
    row = transition_row(graph, RationalPiTime(1, 3))
    H = float_oracle(graph, np.pi / 3)
    for u, v in [((1, 0, 2), (3, 1, 0)), ((2, 1, 1), (2, 1, 1))]:
        z = row.matrix_entry(u, v).to_complex()
        assert abs(H[G24.index(u), G24.index(v)] - z) < 1e-9
