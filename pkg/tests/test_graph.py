from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_corpus
from walkcent.errors import BudgetExceeded, GraphFormatError, ParameterError
from walkcent.exact import cospectral
from walkcent.graph import (
    Graph,
    adjacency_matrix,
    automorphism_maps,
    parse_edge_list,
    parse_graph6,
    to_edge_list,
    to_graph6,
)


@st.composite
def simple_graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, tuple((u, v, Fraction(1)) for u, v in chosen))


@pytest.mark.parametrize("code,n,edges", [
    ("@", 1, []),
    ("A_", 2, [(0, 1)]),
    ("Bw", 3, [(0, 1), (0, 2), (1, 2)]),
    ("Bg", 3, [(0, 1), (1, 2)]),
])
def test_graph6_small(code, n, edges):
    g = parse_graph6(code)
    assert g.n == n
    assert [(u, v) for u, v, _ in g.edges] == edges
    assert to_graph6(g) == code


def test_graph6_matches_networkx_on_corpus():
    for line in small_corpus(6):
        ours = parse_graph6(line)
        ref = nx.from_graph6_bytes(line.encode())
        assert ours.n == ref.number_of_nodes()
        assert {(u, v) for u, v, _ in ours.edges} == {tuple(sorted(e)) for e in ref.edges()}


@settings(max_examples=200, deadline=None)
@given(simple_graphs(max_n=20))
def test_graph6_roundtrip(g):
    code = to_graph6(g)
    assert parse_graph6(code) == g
    assert nx.to_graph6_bytes(_to_nx(g), header=False).decode().strip() == code


@settings(max_examples=100, deadline=None)
@given(simple_graphs())
def test_edge_list_roundtrip(g):
    assert parse_edge_list(to_edge_list(g)) == g


def _to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from((u, v) for u, v, _ in g.edges)
    return G


@pytest.mark.parametrize("bad", ["", "!!", "B", "Bww", "~~~~"])
def test_graph6_rejects(bad):
    with pytest.raises(GraphFormatError):
        parse_graph6(bad)


def test_edge_list_header_and_weights():
    g = parse_edge_list("# triangle with one heavy edge\nn=4\n0 1 3/2\n1 2\n2 0\n")
    assert g.n == 4
    assert g.weighted
    assert g.edges[0] == (0, 1, Fraction(3, 2))
    A = adjacency_matrix(g)
    assert A[1, 0] == Fraction(3, 2)
    assert not g.is_connected()


def test_edge_list_directed_loops():
    g = parse_edge_list("n=2 directed=true loops=true\n0 0\n0 1\n")
    A = adjacency_matrix(g)
    assert A[0, 0] == 1 and A[0, 1] == 1 and A[1, 0] == 0
    assert not A.is_symmetric()


@pytest.mark.parametrize("text,lineno", [
    ("0 1\n1 x\n", 2),
    ("n=2\n0 5\n", 2),
    ("0 1\n0 1\n", 2),
    ("0 0\n", 1),
    ("0 1 0\n", 1),
    ("0 1 abc\n", 1),
])
def test_edge_list_errors_carry_line(text, lineno):
    with pytest.raises(GraphFormatError, match=f"line {lineno}"):
        parse_edge_list(text)


def test_decimal_weight_is_exact():
    g = parse_edge_list("0 1 0.1\n")
    assert g.edges[0][2] == Fraction(1, 10)


def test_empty_edge_list_needs_header():
    with pytest.raises(GraphFormatError):
        parse_edge_list("# nothing\n")
    assert parse_edge_list("n=3\n").n == 3


def test_automorphism_small():
    p3 = parse_graph6("Bg")
    assert automorphism_maps(p3, (0, 2))
    assert not automorphism_maps(p3, (0, 1))
    with pytest.raises(BudgetExceeded):
        automorphism_maps(Graph(13, ((0, 1, Fraction(1)),)), (0, 1))
    with pytest.raises(ParameterError):
        automorphism_maps(parse_edge_list("directed=true\n0 1\n"), (0, 1))


def test_automorphic_pairs_are_cospectral():
    # automorphism => cospectral, checked against networkx's isomorphism matcher
    for line in small_corpus(6)[::3]:
        g = parse_graph6(line)
        A = adjacency_matrix(g)
        G = _to_nx(g)
        orbits = {}
        for phi in nx.algorithms.isomorphism.GraphMatcher(G, G).isomorphisms_iter():
            for v, w in phi.items():
                orbits.setdefault(v, set()).add(w)
        for i in range(g.n):
            for j in range(i + 1, g.n):
                ours = automorphism_maps(g, (i, j))
                assert ours == (j in orbits[i]), (line, i, j)
                if ours:
                    assert cospectral(A, (i, j))
