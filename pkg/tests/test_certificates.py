import json
import math

import pytest

from oracles import alpha_A, alpha_D, alpha_I, alpha_L

from hyperspectra.certificates import (
    Subnormality,
    WeightedIncidenceMatrix,
    check_alpha_normal,
    check_alpha_subnormal,
    check_consistency,
    cycle_ratio,
    rho_from_alpha,
    solve_certificate,
    subnormal_witness,
    witness_slack,
)
from hyperspectra.errors import CertificateError, InputError, StructureError
from hyperspectra.families import build_family, build_star
from hyperspectra.hypergraph import UniformHypergraph
from hyperspectra.spectral import spectral_radius

EDGE = UniformHypergraph.from_edges(3, [(0, 1, 2)])


def _star_matrix():
    s = build_star(4, 3)
    w = {(v, ei): (0.25 if v == s["u0"] else 1.0) for ei, e in enumerate(s.graph.edges) for v in e}
    return WeightedIncidenceMatrix(s.graph, w)


def test_alpha_normal_examples():
    unit = WeightedIncidenceMatrix(EDGE, {(v, 0): 1.0 for v in range(3)})
    assert check_alpha_normal(unit, 1.0)
    B = _star_matrix()
    assert check_alpha_normal(B, 0.25)
    assert not check_alpha_normal(B, 1 / 3)


def test_matrix_validation():
    with pytest.raises(InputError):
        WeightedIncidenceMatrix(EDGE, {(0, 0): 1.0, (1, 0): 1.0})
    with pytest.raises(InputError):
        WeightedIncidenceMatrix(EDGE, {(0, 0): 1.0, (1, 0): 1.0, (2, 0): 0.0})
    with pytest.raises(InputError):
        WeightedIncidenceMatrix(EDGE, {(0, 0): 1.0, (1, 0): 1.0, (2, 0): 1.0, (3, 0): 1.0})


def test_consistency_examples():
    assert check_consistency(_star_matrix())
    assert cycle_ratio(_star_matrix()) is None
    sol = solve_certificate("D", 2, 3)
    assert check_consistency(sol.matrix)
    A = solve_certificate("A", 3, 3)
    lh = A.labeled
    w = dict(A.matrix.weights)
    # swap c0 and d0 on one side only
    v1, v2 = lh["v1"], lh["v2"]
    e3, e2 = lh.edge_labels["e3"], lh.edge_labels["e2"]
    w[v1, e3], w[v2, e2] = A.params["d0"] * 1.3, A.params["c0"]
    assert not check_consistency(WeightedIncidenceMatrix(lh.graph, w))


def test_consistency_rejects_two_cycles():
    g = UniformHypergraph.from_edges(3, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    B = WeightedIncidenceMatrix(g, {(v, ei): 0.5 for ei, e in enumerate(g.edges) for v in e})
    with pytest.raises(StructureError):
        check_consistency(B)


def test_subnormal_classification():
    B = _star_matrix()
    assert check_alpha_subnormal(B, 0.25) is Subnormality.SUBNORMAL
    w = dict(B.weights)
    w[(1, 0)] = 1.1
    assert check_alpha_subnormal(WeightedIncidenceMatrix(B.host, w), 0.25) is Subnormality.NOT_SUBNORMAL
    assert check_alpha_subnormal(B, 0.2) is Subnormality.STRICTLY_SUBNORMAL
    wit = subnormal_witness("B-under-A", 3, 3)
    assert check_alpha_subnormal(wit.matrix, wit.alpha) is Subnormality.STRICTLY_SUBNORMAL


def test_rho_from_alpha():
    assert rho_from_alpha(1.0, 3) == 1.0
    assert rho_from_alpha(0.25, 3) == pytest.approx(1.587401, abs=1e-6)
    assert rho_from_alpha(1 / 8, 3) == pytest.approx(2.0, abs=1e-15)
    for bad in (0.0, -0.1, 1.5, math.nan):
        with pytest.raises(InputError):
            rho_from_alpha(bad, 3)
    with pytest.raises(InputError):
        rho_from_alpha(0.5, 1)


ORACLES = {"A": alpha_A, "D": alpha_D, "L": alpha_L, "I": alpha_I}
MIN_M = {"A": 3, "D": 2, "L": 2, "I": 1}


@pytest.mark.parametrize("k", [3, 4])
@pytest.mark.parametrize("family", "ADLI")
def test_alpha_matches_independent_oracle(family, k):
    for m in range(MIN_M[family], 11):
        sol = solve_certificate(family, m, k)
        assert sol.alpha == pytest.approx(ORACLES[family](m, k), abs=1e-12)
        assert sol.max_equation_residual <= 1e-12
        assert 0 < sol.alpha < 1
        assert all(0 < v < 1 for nm, v in sol.params.items() if nm != "b")


def test_l_and_i_examples():
    sol = solve_certificate("L", 2, 3)
    assert sol.alpha == pytest.approx(0.15229, abs=5e-6)
    assert (1 - sol.alpha) ** 3 == pytest.approx(4 * sol.alpha, abs=1e-13)
    assert sol.rho == pytest.approx(1.8726, abs=5e-5)
    sol = solve_certificate("I", 1, 3)
    assert sol.rho == pytest.approx(spectral_radius(build_family("I", 1, 3).graph).rho, abs=1e-6)


def test_a_symmetric_solution():
    sol = solve_certificate("A", 5, 3)
    p = sol.params
    assert p["x0"] == pytest.approx(p["c0"], abs=1e-12)
    assert p["y0"] + p["d0"] + sol.alpha == pytest.approx(1, abs=1e-13)


@pytest.mark.parametrize("family", "ADLI")
def test_alpha_decreases_in_m(family):
    alphas = [solve_certificate(family, m, 3).alpha for m in range(MIN_M[family], 11)]
    assert all(a > b for a, b in zip(alphas, alphas[1:]))


def test_range_errors():
    for family, m in [("A", 2), ("D", 1), ("L", 1), ("I", 0)]:
        with pytest.raises(InputError):
            solve_certificate(family, m, 3)
    with pytest.raises(InputError):
        solve_certificate("B", 3, 3)


def test_serialization():
    sol = solve_certificate("L", 2, 3)
    obj = json.loads(sol.to_json())
    assert list(obj) == ["family", "m", "k", "alpha", "rho", "params", "weights"]
    assert obj["family"] == "L" and obj["params"].keys() == {"x4", "y4"}
    keys = [(v, e) for v, e, _ in obj["weights"]]
    assert keys == sorted(keys) and len(keys) == 3 * sol.labeled.graph.num_edges


def test_normal_implies_subnormal_not_strict():
    for family, m in [("A", 4), ("D", 3), ("L", 2), ("I", 2)]:
        sol = solve_certificate(family, m, 4)
        assert check_alpha_subnormal(sol.matrix, sol.alpha) is Subnormality.SUBNORMAL


@pytest.mark.parametrize("pair,m", [("B-under-A", 3), ("A-under-D", 9), ("I-under-L", 2), ("J-under-I", 2)])
@pytest.mark.parametrize("k", [3, 4])
def test_witness_examples(pair, m, k):
    w = subnormal_witness(pair, m, k)
    assert w.slack > 0
    assert w.slack == pytest.approx(witness_slack(pair, m, k), abs=0)


def test_a_under_d_slack_matches_matrix():
    w = subnormal_witness("A-under-D", 9, 3)
    v1 = w.labeled["v1"]
    assert 1 - w.matrix.vertex_sums()[v1] == pytest.approx(w.slack, abs=1e-13)


def test_j_under_i_slack_matches_matrix():
    w = subnormal_witness("J-under-I", 4, 4)
    et2 = w.labeled.edge_labels["et2"]
    assert w.matrix.edge_products()[et2] - w.alpha == pytest.approx(w.slack, abs=1e-13)


def test_witness_ranges():
    with pytest.raises(InputError):
        subnormal_witness("A-under-D", 8, 3)
    with pytest.raises(InputError):
        subnormal_witness("B-under-A", 2, 3)
    with pytest.raises(InputError):
        subnormal_witness("X-under-Y", 3, 3)
    # below the stated range the raw margin is only recorded
    assert isinstance(witness_slack("A-under-D", 8, 3), float)
    assert witness_slack("A-under-D", 3, 3) < 0


def test_witness_failure_is_loud(monkeypatch):
    from hyperspectra import certificates

    monkeypatch.setattr(certificates, "_WITNESS_MIN_M", dict(certificates._WITNESS_MIN_M, **{"A-under-D": 3}))
    with pytest.raises(CertificateError):
        subnormal_witness("A-under-D", 3, 3)
