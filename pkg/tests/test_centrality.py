from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkcent.centrality import (
    classify_values,
    degree_centrality,
    eigenvector_centrality,
    resolvent_centrality,
    subgraph_centrality_spectral,
    subgraph_centrality_taylor,
    taylor_terms_needed,
    walk_entropy,
)
from walkcent.errors import ParameterError, PrecisionError
from walkcent.exact import ExactMatrix
from walkcent.graph import adjacency_matrix, parse_edge_list, parse_graph6
from walkcent.spectral import Precision, decompose

K2 = adjacency_matrix(parse_graph6("A_"))
K3 = adjacency_matrix(parse_graph6("Bw"))
P3 = adjacency_matrix(parse_graph6("Bg"))


def test_k2_cosh():
    rep = subgraph_centrality_taylor(K2, 1, 50)
    with mpmath.workdps(70):
        # the series is truncated once the tail drops below 10^-(P+5)
        assert abs(rep.values[0] - mpmath.cosh(1)) < mpmath.mpf(10) ** -55
    assert rep.to_json()["values"][0]["value"].startswith("1.5430806348152437784779056207570616826015")


def test_k3_closed_form():
    with mpmath.workdps(80):
        ref = (mpmath.e ** 2 + 2 / mpmath.e) / 3
    for backend in ("taylor", "spectral"):
        if backend == "taylor":
            rep = subgraph_centrality_taylor(K3, 1, 65)
        else:
            rep = subgraph_centrality_spectral(decompose(K3, 60), 1)
        with mpmath.workdps(80):
            assert all(abs(v - ref) < mpmath.mpf(10) ** -60 for v in rep.values)
        assert rep.single_class()


def test_p3_values_and_classes():
    rep = subgraph_centrality_taylor(P3, 1, 40)
    with mpmath.workdps(60):
        r2 = mpmath.sqrt(2)
        centre = mpmath.cosh(r2)
        end = (1 + mpmath.cosh(r2)) / 2
        assert abs(rep.values[1] - centre) < mpmath.mpf(10) ** -45
        assert abs(rep.values[0] - end) < mpmath.mpf(10) ** -45
    assert rep.classes == ((0, 2), (1,))
    assert rep.borderline == ()


def test_directed_taylor_matches_expm():
    g = parse_edge_list("n=3 directed=true loops=true\n0 1\n1 2 2/3\n2 0\n1 1 1/2\n")
    A = adjacency_matrix(g)
    rep = subgraph_centrality_taylor(A, Fraction(3, 2), 40)
    with mpmath.workdps(80):
        E = mpmath.expm(mpmath.matrix([[mpmath.mpf(x.numerator) / x.denominator for x in r]
                                       for r in A.rows()]) * mpmath.mpf(3) / 2)
        for i in range(3):
            assert abs(rep.values[i] - E[i, i]) < mpmath.mpf(10) ** -45


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), st.data(), st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(-2)]))
def test_backends_agree(n, data, beta):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1))
    text = "".join(f"{u} {v}\n" for u, v in chosen)
    A = adjacency_matrix(parse_edge_list(f"n={n}\n" + text))
    t = subgraph_centrality_taylor(A, beta, 40)
    s = subgraph_centrality_spectral(decompose(A, 40, with_perron=False), beta)
    with mpmath.workdps(60):
        assert max(abs(a - b) for a, b in zip(t.values, s.values)) < mpmath.mpf(10) ** -35


def test_mpf_beta_is_accepted():
    with mpmath.workdps(70):
        b = mpmath.log(2)
    rep = subgraph_centrality_taylor(K2, b, 50)
    with mpmath.workdps(70):
        assert abs(rep.values[0] - mpmath.cosh(b)) < mpmath.mpf(10) ** -55
    assert rep.extra["beta_exact"] is False


def test_beta_zero_rejected():
    with pytest.raises(ParameterError):
        subgraph_centrality_taylor(K2, 0, 30)


def test_spectral_refuses_coarser_data():
    sd = decompose(K3, 30)
    with pytest.raises(PrecisionError):
        subgraph_centrality_spectral(sd, 1, Precision(60))


def test_terms_needed_monotone():
    ks = [taylor_terms_needed(x, 50) for x in (Fraction(1, 2), 1, 4, 16)]
    assert ks == sorted(ks)


def test_resolvent():
    rep = resolvent_centrality(P3, Fraction(1, 2), 30)
    assert rep.exact == (Fraction(3, 2), Fraction(2), Fraction(3, 2))
    assert resolvent_centrality(K2, Fraction(1, 3), 30).exact == (Fraction(9, 8),) * 2
    with pytest.raises(ParameterError):
        resolvent_centrality(P3, Fraction(3, 4), 30)
    with pytest.raises(ParameterError):
        resolvent_centrality(K2, Fraction(1), 30)  # alpha = 1/rho exactly
    with pytest.raises(ParameterError):
        resolvent_centrality(K2, -Fraction(1, 3), 30)


def test_resolvent_directed_uses_row_sum_bound():
    A = adjacency_matrix(parse_edge_list("directed=true\n0 1\n1 2\n"))
    assert resolvent_centrality(A, Fraction(1, 2), 30).exact == (1, 1, 1)
    with pytest.raises(ParameterError):
        resolvent_centrality(A, Fraction(1), 30)


def test_degree_and_eigenvector():
    assert degree_centrality(P3) == (1, 2, 1)
    rep = eigenvector_centrality(P3, 30)
    with mpmath.workdps(50):
        assert abs(rep.values[1] - 1 / mpmath.sqrt(2)) < mpmath.mpf(10) ** -40
    assert rep.classes == ((0, 2), (1,))


def test_entropy_k3_and_p3():
    S, p = walk_entropy(subgraph_centrality_taylor(K3, 1, 50))
    with mpmath.workdps(70):
        assert abs(S - mpmath.log(3)) < mpmath.mpf(10) ** -45
    S, _ = walk_entropy(subgraph_centrality_taylor(P3, 1, 50))
    with mpmath.workdps(70):
        assert mpmath.log(3) - S > mpmath.mpf(10) ** -3
    with pytest.raises(ParameterError):
        walk_entropy(resolvent_centrality(P3, Fraction(1, 2), 30))


def test_classify_borderline_band():
    with mpmath.workdps(30):
        eps = mpmath.mpf(10) ** -10
        vals = [mpmath.mpf(1), 1 + eps / 2, 1 + 5 * eps, mpmath.mpf(2)]
        classes, border = classify_values(vals, eps)
    assert classes == ((0, 1), (2,), (3,))
    assert border == ((1, 2),)


def test_report_serialisation():
    rep = subgraph_centrality_taylor(P3, Fraction(1, 2), 30)
    js = rep.to_json()
    assert js["parameter"] == "1/2"
    assert all(v["digits"] == 30 for v in js["values"])
    csv_text = rep.to_csv().splitlines()
    assert csv_text[0] == "vertex,value,digits,class"
    assert len(csv_text) == 4


def test_exact_matrix_weighted_taylor_denominator():
    # den > 1 path: A = [[0, 1/3], [1/3, 0]] -> cosh(beta/3)
    A = ExactMatrix.from_rows([[0, Fraction(1, 3)], [Fraction(1, 3), 0]])
    rep = subgraph_centrality_taylor(A, 3, 40)
    with mpmath.workdps(60):
        assert abs(rep.values[0] - mpmath.cosh(1)) < mpmath.mpf(10) ** -45
