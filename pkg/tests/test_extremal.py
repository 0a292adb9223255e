import itertools
import json

import pytest

from hyperspectra.canonical import are_isomorphic, canonical_form
from hyperspectra.errors import CapacityError, InputError
from hyperspectra.extremal import (
    brute_force_unicyclic_pm,
    enumerate_unicyclic_pm,
    resolve_open_comparison,
    verify_theorem,
)
from hyperspectra.families import build_family
from hyperspectra.hypergraph import (
    UniformHypergraph,
    cyclomatic_number,
    find_perfect_matching,
    is_connected,
    is_linear,
)


@pytest.fixture(scope="module")
def all_12():
    return enumerate_unicyclic_pm(12, 3)


def test_six_three_single_member():
    res = enumerate_unicyclic_pm(6, 3)
    assert len(res.members) == 1
    assert are_isomorphic(res.members[0].graph, build_family("I", 1, 3).graph)
    assert are_isomorphic(res.members[0].graph, build_family("J", 1, 3).graph)


def test_six_three_matches_brute_force():
    res = enumerate_unicyclic_pm(6, 3)
    assert {mb.canonical for mb in res.members} == brute_force_unicyclic_pm(6, 3)


def test_twelve_three_matches_unpruned_pairs(all_12):
    # every pair of extra edges over the fixed matching, no partial dedup
    n, k = 12, 3
    base = [tuple(range(i, i + 3)) for i in range(0, n, 3)]
    pool = [s for s in itertools.combinations(range(n), k) if s not in base]
    seen = set()
    for a, b in itertools.combinations(pool, 2):
        g = UniformHypergraph(k, n, (*base, a, b))
        if is_connected(g) and cyclomatic_number(g) == 1:
            seen.add(canonical_form(g, cap=n))
    assert seen == {mb.canonical for mb in all_12.members}


def test_members_are_valid(all_12):
    forms = [mb.canonical for mb in all_12.members]
    assert len(set(forms)) == len(forms)
    top = all_12.members[all_12.maximizer].rho
    for mb in all_12.members:
        g = mb.graph
        assert is_connected(g) and cyclomatic_number(g) == 1
        assert find_perfect_matching(g) is not None
        assert 1 < mb.rho <= top


def test_twelve_three_maximizer_is_l(all_12):
    top = all_12.members[all_12.maximizer]
    assert are_isomorphic(top.graph, build_family("L", 2, 3).graph)
    assert all_12.co_maximizers == [all_12.maximizer]
    assert all_12.runner_up_gap() > 1e-8


def test_filters(all_12):
    lin = enumerate_unicyclic_pm(12, 3, "linear-only")
    non = enumerate_unicyclic_pm(12, 3, "nonlinear-only")
    assert len(lin.members) + len(non.members) == len(all_12.members)
    assert all(is_linear(mb.graph) for mb in lin.members)
    assert not any(is_linear(mb.graph) for mb in non.members)
    assert are_isomorphic(non.members[non.maximizer].graph, build_family("L", 2, 3).graph)


def test_linear_twelve_three_contents():
    lin = enumerate_unicyclic_pm(12, 3, "linear-only")
    assert len(lin.members) >= 1
    top = lin.members[lin.maximizer]
    assert are_isomorphic(top.graph, build_family("D", 2, 3).graph)
    assert are_isomorphic(top.graph, build_family("B", 2, 3).graph)
    # the other member is a 4-cycle
    assert sorted(mb.label.cycle_length for mb in lin.members) == [3, 4]


def test_serialization(all_12):
    obj = json.loads(all_12.to_json())
    assert obj["count"] == len(all_12.members)
    assert "elapsed" not in json.dumps(obj)
    rows = all_12.to_csv().strip().splitlines()
    assert rows[0] == "hash,kind,tags,rho" and len(rows) == len(all_12.members) + 1
    assert all_12.to_json() == enumerate_unicyclic_pm(12, 3).to_json()


def test_parameter_checks(monkeypatch):
    with pytest.raises(InputError):
        enumerate_unicyclic_pm(9, 3)
    with pytest.raises(InputError):
        enumerate_unicyclic_pm(12, 3, "both")
    with pytest.raises(CapacityError):
        enumerate_unicyclic_pm(24, 3)
    with pytest.raises(CapacityError):
        enumerate_unicyclic_pm(24, 4)
    monkeypatch.setenv("HYPERSPECTRA_CAP", "6")
    with pytest.raises(CapacityError):
        enumerate_unicyclic_pm(12, 3)


def test_workers_give_identical_output():
    a = enumerate_unicyclic_pm(12, 3, workers=1)
    b = enumerate_unicyclic_pm(12, 3, workers=2)
    assert a.to_json() == b.to_json()


@pytest.mark.slow
def test_eighteen_three():
    res = enumerate_unicyclic_pm(18, 3)
    top = res.members[res.maximizer]
    assert are_isomorphic(top.graph, build_family("L", 3, 3).graph)
    assert res.runner_up_gap() > 1e-8
    u1 = [mb for mb in res.members if mb.label.has("U1")]
    best = max(u1, key=lambda mb: mb.rho)
    assert are_isomorphic(best.graph, build_family("A", 3, 3).graph)


def test_theorem_5_1_exhaustive():
    rep = verify_theorem("5.1", 3, [2], "exhaustive")
    assert rep.verdict == "confirmed" and rep.min_gap > 1e-8
    rep = verify_theorem("5.1", 3, [1], "exhaustive")
    assert rep.verdict == "confirmed"


def test_theorem_3_1_m2_reports_members():
    rep = verify_theorem("3.1", 3, [2], "exhaustive")
    assert rep.verdict == "confirmed"
    assert any("2 non-isomorphic members" in s for s in rep.notes)


def test_theorem_4_1_exhaustive_k4():
    rep = verify_theorem("4.1", 4, [1], "exhaustive")
    assert rep.verdict == "confirmed"


def test_c3_1_needs_m3():
    assert verify_theorem("C3.1", 3, [2], "exhaustive").verdict == "out-of-range"


def test_family_mode_lemmas():
    rep = verify_theorem("L3.9", 3, range(9, 13))
    assert rep.verdict == "confirmed" and rep.min_gap > 0
    rep = verify_theorem("L4.7", 3, [2])
    assert rep.verdict == "confirmed" and rep.evidence[0]["gap"] > 0
    assert verify_theorem("L3.9", 3, range(3, 10)).verdict == "out-of-range"
    with pytest.raises(InputError):
        verify_theorem("C4.2", 3, [2])
    with pytest.raises(InputError):
        verify_theorem("9.9", 3, [2])
    with pytest.raises(CapacityError):
        verify_theorem("5.1", 3, [4], "exhaustive")


def test_refutation_is_reported(monkeypatch):
    from hyperspectra import extremal

    monkeypatch.setitem(extremal._LEMMAS, "L4.7", [("J", "I", 2)])
    rep = verify_theorem("L4.7", 3, [2, 3])
    assert rep.verdict == "refuted" and rep.counterexample is not None


def test_open_comparison():
    rows = resolve_open_comparison(3, range(3, 10))
    assert [r.m for r in rows] == list(range(3, 10))
    assert rows[-1].gap > 0 and rows[-1].leader(1e-8) == "D"
    with pytest.raises(InputError):
        resolve_open_comparison(3, [2])
