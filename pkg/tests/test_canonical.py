import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperspectra.canonical import are_isomorphic, canonical_edges, canonical_form
from hyperspectra.errors import CapacityError
from hyperspectra.families import build_family, build_linear_cycle, build_star
from hyperspectra.hypergraph import UniformHypergraph

INSTANCES = {
    "A_18_3": build_family("A", 3, 3).graph,
    "B_18_3": build_family("B", 3, 3).graph,
    "J_12_3": build_family("J", 2, 3).graph,
    "L_24_4": build_family("L", 2, 4).graph,
    "C5": build_linear_cycle(5, 3).graph,
}


def test_relabeled_single_edge():
    a = UniformHypergraph.from_edges(3, [(0, 1, 2)])
    b = a.relabel([2, 0, 1])
    assert canonical_form(a) == canonical_form(b)


def test_family_isomorphisms():
    assert canonical_form(build_family("B", 2, 3).graph) == canonical_form(build_family("D", 2, 3).graph)
    assert canonical_form(build_family("I", 1, 3).graph) == canonical_form(build_family("J", 1, 3).graph)
    assert are_isomorphic(build_family("I", 1, 4).graph, build_family("J", 1, 4).graph)


def test_non_isomorphic_pairs():
    g = INSTANCES["A_18_3"]
    assert are_isomorphic(g, g)
    assert not are_isomorphic(UniformHypergraph.from_edges(3, [(0, 1, 2)]), build_star(2, 3).graph)
    assert not are_isomorphic(INSTANCES["A_18_3"], INSTANCES["B_18_3"])
    assert not are_isomorphic(build_family("B", 3, 3).graph, build_family("D", 3, 3).graph)
    assert not are_isomorphic(build_family("I", 2, 3).graph, build_family("J", 2, 3).graph)


def test_form_is_normal_json():
    g = build_family("L", 2, 3).graph
    text = canonical_form(g).decode()
    h = UniformHypergraph.from_json(text.replace(",", ", ").replace(":", ": "))
    assert are_isomorphic(g, h)


def test_cap():
    g = INSTANCES["A_18_3"]
    with pytest.raises(CapacityError):
        canonical_form(g, cap=12)
    assert canonical_edges(g, cap=18)


@pytest.mark.parametrize("name", sorted(INSTANCES))
@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_invariant_under_relabeling(name, data):
    g = INSTANCES[name]
    perm = data.draw(st.permutations(range(g.n)))
    assert canonical_form(g.relabel(perm)) == canonical_form(g)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_distinguishes_random_pairs_like_brute_force(seed):
    # for tiny graphs compare with an exhaustive permutation search
    import itertools

    rng = np.random.default_rng(seed)
    n, k = 6, 3
    pool = list(itertools.combinations(range(n), k))

    def pick():
        idx = rng.choice(len(pool), size=3, replace=False)
        return UniformHypergraph(k, n, tuple(pool[i] for i in idx))

    g, h = pick(), pick()
    target = set(h.edges)
    brute = any(
        {tuple(sorted(p[v] for v in e)) for e in g.edges} == target for p in itertools.permutations(range(n))
    )
    assert are_isomorphic(g, h) == brute
