import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from qcurves.exceptions import Disconnected, NoCentralClassFound, PropertyViolation
from qcurves.isogclass import IsogenyClassGraph
from qcurves.nfarith import make_number_field
from qcurves.qcore import (
    Certificate,
    SquareClass,
    certificate_from_graph,
    conjugacy_partition,
    isogeny_degree_upper_bound,
    pairwise_degree_class,
    path_independence_violations,
    square_class,
    squarefree_part,
    verify_core_properties,
)

GRAPH_LABELS = ["strict-quadratic", "nonstrict-quadratic", "quartic-core", "cubic-7-isogenous", "14a1"]


@pytest.mark.parametrize("n, rep", [(18, 2), (1, 1), (15, 15), (12, 3), (49, 1), (2 * 3 * 3 * 5, 10)])
def test_square_class_examples(n, rep):
    assert square_class(n) == SquareClass(rep)


def test_square_class_rejects():
    with pytest.raises(ValueError):
        SquareClass(4)
    with pytest.raises(ValueError):
        squarefree_part(0)


@given(st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
def test_square_class_is_multiplicative(a, b):
    assert square_class(a * b) == square_class(a) * square_class(b)


@given(st.integers(1, 10 ** 4))
def test_square_class_kills_squares(a):
    assert square_class(a * a) == SquareClass(1)


def _path_graph(labels):
    Q = make_number_field([0, 1])
    n = len(labels) + 1
    verts = [Q.element(k) for k in range(n)]
    edges = {(i, i + 1, ell) for i, ell in enumerate(labels)}
    polys = [(Fraction(-k), Fraction(1)) for k in range(n)]
    return IsogenyClassGraph(Q, verts, edges, polys, 0, set(labels))


def test_path_product_class():
    G = _path_graph([3, 3, 2])
    assert pairwise_degree_class(G, 0, 3) == SquareClass(2)
    assert isogeny_degree_upper_bound(G, 0, 3) == 18


def test_disconnected():
    G = _path_graph([2])
    G.edges.clear()
    G._adj = None
    with pytest.raises(Disconnected):
        pairwise_degree_class(G, 0, 1)


def test_no_central_class_for_lone_cubic_orbit():
    # a single vertex of degree 3 is not a complete class of 2-power degree
    K = make_number_field([-5, -5, 0, 1])
    poly = (Fraction(-5), Fraction(-5), Fraction(0), Fraction(1))
    G = IsogenyClassGraph(K, [K.gen()], set(), [poly], 0, set())
    with pytest.raises(NoCentralClassFound):
        certificate_from_graph(G)


@pytest.mark.parametrize("label", GRAPH_LABELS)
def test_path_independence(graphs, label):
    assert path_independence_violations(graphs[label]) == []


@pytest.mark.parametrize("label", GRAPH_LABELS)
def test_homomorphism_law_sampled(graphs, label):
    G = graphs[label]
    rng = random.Random(label)
    n = len(G)
    for _ in range(200):
        u, v, w = (rng.randrange(n) for _ in range(3))
        assert pairwise_degree_class(G, u, w) == pairwise_degree_class(G, u, v) * pairwise_degree_class(G, v, w)


@pytest.mark.parametrize("label", GRAPH_LABELS)
def test_conjugacy_partition_covers(graphs, label):
    G = graphs[label]
    groups = conjugacy_partition(G)
    members = sorted(i for g in groups for i in g.members)
    assert members == list(range(len(G)))
    for g in groups:
        assert len(g.members) <= g.degree


EXPECTED = {
    "strict-quadratic": (1, 1, 2, 2),
    "nonstrict-quadratic": (0, 0, 1, 1),
    "quartic-core": (2, 2, 15, 4),
    "cubic-7-isogenous": (0, 0, 1, 1),
    "14a1": (0, 0, 1, 1),
}


@pytest.mark.parametrize("label", GRAPH_LABELS)
def test_certificates(graphs, label):
    c = certificate_from_graph(graphs[label])
    assert (c.r, c.rho, c.level, len(c.H) - 1) == EXPECTED[label]
    c.check()


def test_nonstrict_rational_central_vertex(graphs):
    c = certificate_from_graph(graphs["nonstrict-quadratic"])
    assert c.H == (Fraction(-10976), Fraction(1))


@pytest.mark.parametrize("label", GRAPH_LABELS)
def test_core_properties(graphs, label):
    G = graphs[label]
    c = certificate_from_graph(G)
    report = verify_core_properties(G, c)
    assert report.subgroup and report.homomorphism and report.conjugate_degrees_divisible
    assert len(report.degree_set) == 2 ** c.rho
    assert all(c.level % d == 0 for d in report.degree_set)


def test_quartic_degree_set(graphs):
    G = graphs["quartic-core"]
    report = verify_core_properties(G, certificate_from_graph(G))
    assert report.degree_set == (1, 3, 5, 15)
    assert report.full_core


@pytest.mark.parametrize("label", GRAPH_LABELS)
def test_power_of_two_divides_vertex_degrees(graphs, label):
    G = graphs[label]
    c = certificate_from_graph(G)
    for m in G.min_polys:
        assert (len(m) - 1) % 2 ** c.rho == 0


def test_odd_degree_level_one(graphs):
    G = graphs["cubic-7-isogenous"]
    c = certificate_from_graph(G)
    assert c.level == 1
    assert verify_core_properties(G, c).odd_degree_rational is True


def test_wrong_certificate_is_rejected(graphs):
    G = graphs["strict-quadratic"]
    c = certificate_from_graph(G)
    bad = Certificate("NonCM", c.r, c.rho, 3, c.H)
    with pytest.raises(PropertyViolation):
        verify_core_properties(G, bad)


@pytest.mark.parametrize(
    "r, rho, N, deg, clause",
    [
        (1, 0, 4, 1, "level_squarefree"),
        (2, 1, 6 * 5, 2, "r_is_omega_N"),
        (1, 2, 2, 4, "rho_le_r"),
        (1, 1, 2, 3, "deg_H"),
        (1, 0, 2, 1, "rational_chain"),
    ],
)
def test_certificate_check_clauses(r, rho, N, deg, clause):
    H = tuple(Fraction(1) for _ in range(deg + 1))
    with pytest.raises(PropertyViolation) as exc:
        Certificate("NonCM", r, rho, N, H).check()
    assert exc.value.clause == clause


@given(st.sets(st.sampled_from([2, 3, 5, 7, 11, 13]), max_size=4), st.data())
def test_rational_chain_equivalence(primes, data):
    # r = 0, rho = 0, N = 1 and deg H = 1 hold together or not at all
    N = 1
    for p in primes:
        N *= p
    r = len(primes)
    rho = data.draw(st.integers(0, r))
    c = Certificate("NonCM", r, rho, N, tuple(Fraction(1) for _ in range(2 ** rho + 1)))
    consistent = len({c.r == 0, c.rho == 0, c.level == 1, len(c.H) == 2}) == 1
    if consistent:
        c.check()
    else:
        with pytest.raises(PropertyViolation):
            c.check()


@pytest.mark.parametrize("label", GRAPH_LABELS)
def test_certificate_json_round_trip(graphs, label):
    c = certificate_from_graph(graphs[label])
    assert Certificate.from_json(c.to_json()) == c


def test_cm_certificate_json():
    c = Certificate.cm(-15, [Fraction(-121287375), Fraction(191025), Fraction(1)])
    assert c.to_json() == {"kind": "CM", "cm_disc": -15, "r": None, "rho": None, "level": None,
                           "H": [-121287375, 191025, 1]}
    assert Certificate.from_json(c.to_json()) == c


def test_strict_pair_degree(graphs):
    G = graphs["strict-quadratic"]
    g = [g for g in conjugacy_partition(G) if g.degree == 2 and g.complete][0]
    for u, v in combinations(g.members, 2):
        assert pairwise_degree_class(G, u, v) == SquareClass(2)
