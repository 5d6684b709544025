from fractions import Fraction

import mpmath
import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_corpus
from walkcent.errors import DisconnectedGraphError, ParameterError
from walkcent.exact import walk_counts
from walkcent.graph import Graph, adjacency_matrix, parse_edge_list, parse_graph6
from walkcent.spectral import Precision, decompose, perron_vector, spectral_projector


def test_precision_policy():
    p = Precision(50)
    assert p.dps == 70
    with p.workdps():
        assert p.eps_w == mpmath.mpf(10) ** -40
        assert p.eps_class == mpmath.mpf(10) ** -35
    with pytest.raises(ParameterError):
        Precision(20)


def test_p3_spectrum():
    sd = decompose(adjacency_matrix(parse_graph6("Bg")), 50)
    with sd.precision.workdps():
        r2 = mpmath.sqrt(2)
        assert abs(sd.eigenvalues[0] - r2) < 1e-60
        assert sd.eigenvalues[1] == 0
        assert abs(sd.eigenvalues[2] + r2) < 1e-60
        # end vertex: 1/4, 1/2, 1/4; centre: 1/2, 0, 1/2
        assert [abs(c - e) < 1e-60 for c, e in zip(sd.column(0), (0.25, 0.5, 0.25))] == [True] * 3
        assert [abs(c - e) < 1e-60 for c, e in zip(sd.column(1), (0.5, 0, 0.5))] == [True] * 3
        assert abs(sd.perron[1] - 1 / r2) < 1e-60


@pytest.mark.parametrize("n", [2, 3, 5])
def test_complete_graph_multiplicity(n):
    g = Graph(n, tuple((u, v, Fraction(1)) for u in range(n) for v in range(u + 1, n)))
    sd = decompose(adjacency_matrix(g), 40)
    assert sd.eigenvalues == (n - 1, -1)
    assert sd.multiplicities == (1, n - 1)
    with sd.precision.workdps():
        for i in range(n):
            assert abs(sd.C[0][i] - mpmath.mpf(1) / n) < 1e-50


def test_weighted_edges():
    # a single edge of weight 1/2: eigenvalues +-1/2, bracketed by exact rationals
    sd = decompose(adjacency_matrix(parse_edge_list("0 1 1/2\n")), 30)
    (a, b), (c, d) = sd.intervals
    assert a <= Fraction(1, 2) <= b and c <= Fraction(-1, 2) <= d
    assert b - a < Fraction(1, 10 ** 40)


def test_projector_is_idempotent():
    A = adjacency_matrix(parse_graph6("Dhc"))
    sd = decompose(A, 40)
    with sd.precision.workdps():
        for h in range(sd.d):
            E = mpmath.matrix(spectral_projector(A, sd.eigenvalues, h))
            assert mpmath.mnorm(E * E - E, 1) < mpmath.mpf(10) ** -40
            for i in range(A.n):
                assert abs(E[i, i] - sd.C[h][i]) < mpmath.mpf(10) ** -40


def test_moments_reconstruct_walks():
    for line in small_corpus(6)[::7]:
        A = adjacency_matrix(parse_graph6(line))
        sd = decompose(A, 50, with_perron=False)
        w = walk_counts(A, A.n)
        for i in range(A.n):
            assert abs(sd.moment(i, 0) - 1) < mpmath.mpf(10) ** -40
            for r in range(1, A.n + 1):
                assert abs(sd.moment(i, r) - w[i][r - 1]) < mpmath.mpf(10) ** -35


def test_eigenvalues_match_numpy():
    for line in small_corpus(7)[::23]:
        A = adjacency_matrix(parse_graph6(line))
        sd = decompose(A, 30, with_perron=False)
        ref = np.linalg.eigvalsh(np.array(A.rows(), dtype=float))[::-1]
        ours = [float(mu) for mu, m in zip(sd.eigenvalues, sd.multiplicities) for _ in range(m)]
        assert np.allclose(ours, ref, atol=1e-9)


def test_perron_matches_networkx():
    for line in small_corpus(7)[::37]:
        g = parse_graph6(line)
        if g.n < 2:
            continue
        vec = perron_vector(adjacency_matrix(g), 30)
        G = nx.from_graph6_bytes(line.encode())
        ref = nx.eigenvector_centrality_numpy(G)
        assert np.allclose([float(x) for x in vec], [ref[i] for i in range(g.n)], atol=1e-8)


def test_perron_refuses_disconnected_and_directed():
    with pytest.raises(DisconnectedGraphError):
        perron_vector(adjacency_matrix(parse_edge_list("n=3\n0 1\n")), 30)
    with pytest.raises(ParameterError):
        perron_vector(adjacency_matrix(parse_edge_list("directed=true\n0 1\n1 2\n")), 30)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.data())
def test_coefficients_sum_to_one(n, data):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1))
    weights = data.draw(st.lists(st.fractions(1, 3, max_denominator=4), min_size=len(chosen),
                                 max_size=len(chosen)))
    g = Graph(n, tuple((u, v, w) for (u, v), w in zip(chosen, weights)))
    A = adjacency_matrix(g)
    sd = decompose(A, 30, with_perron=False)
    assert sum(sd.multiplicities) == n
    with sd.precision.workdps():
        for i in range(n):
            assert abs(mpmath.fsum(sd.column(i)) - 1) < mpmath.mpf(10) ** -40
            deg2 = sum(x * x for x in A.rows()[i])
            assert abs(sd.moment(i, 2) - mpmath.mpf(deg2.numerator) / deg2.denominator) < mpmath.mpf(10) ** -30
