"""Independent reference computations used by the tests.

Nothing here calls the solvers under test: tensors are materialized in full,
alpha roots come from polynomial roots or brentq on separately derived
equations, and random instances are grown edge by edge.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from hyperspectra.hypergraph import UniformHypergraph


def adjacency_tensor(g: UniformHypergraph) -> np.ndarray:
    """Dense order-k tensor with 1/(k-1)! at every ordering of every edge."""
    k, n = g.k, g.n
    A = np.zeros((n,) * k)
    w = 1.0 / math.factorial(k - 1)
    for e in g.edges:
        for perm in itertools.permutations(e):
            A[perm] = w
    return A


def tensor_apply(g: UniformHypergraph, x) -> np.ndarray:
    """(A x)_i = sum over i_2..i_k of a_{i i_2 .. i_k} x_{i_2} .. x_{i_k}."""
    out = adjacency_tensor(g)
    x = np.asarray(x, dtype=float)
    for _ in range(g.k - 1):
        out = out @ x
    return out


def _unique_root(poly: Polynomial, lo: float = 0.0, hi: float = 1.0) -> float:
    roots = [r.real for r in poly.roots() if abs(r.imag) < 1e-12 and lo < r.real < hi]
    assert len(roots) == 1, f"expected one root in ({lo}, {hi}), got {roots}"
    return roots[0]


def alpha_L(m: int, k: int) -> float:
    """Root of (1 - alpha)^k = (m + 2) alpha."""
    one_minus = Polynomial([1, -1])
    return _unique_root(one_minus ** k - Polynomial([0, m + 2]))


def alpha_D(m: int, k: int) -> float:
    """Family D after the substitution s = sqrt(alpha), denominators cleared."""
    s = Polynomial([0, 1])
    q = (1 - s ** 2) ** (k - 1)
    poly = 2 * s ** 2 * (1 + s) + s ** 2 * q + (m - 2) * s ** 2 - q
    return _unique_root(poly) ** 2


def alpha_I(m: int, k: int) -> float:
    def f(a):
        b = a * (1 + (1 - a) ** (1 - k / 2)) ** 2
        return (m - 1) * a / (1 - a) ** (k - 1) + b - 1

    return brentq(f, 1e-12, 0.5, xtol=1e-15)


def alpha_A(m: int, k: int) -> float:
    """Symmetric solution x0 = c0, d0 = sqrt(alpha / (1 - alpha)^(k-2))."""

    def f(a):
        t = (1 - a) ** (k - 2)
        d0 = math.sqrt(a / t)
        y0 = 1 - a - d0
        if y0 <= 0:
            return math.inf
        x0 = a / (y0 * t)
        return 2 * x0 + a + (m - 3) * a / (1 - a) ** (k - 1) - 1

    return brentq(f, 1e-12, 0.3, xtol=1e-15)


def random_hypergraph(rng: np.random.Generator, k: int, n_max: int, cycle: bool = False) -> UniformHypergraph:
    """Random connected k-graph: a hypertree, plus one cycle-closing edge if asked."""
    edges = [tuple(range(k))]
    n = k
    while n + (k - 1) <= n_max - (k - 2 if cycle else 0):
        if rng.random() < 0.25 and len(edges) > 1:
            break
        v = int(rng.integers(n))
        edges.append((v, *range(n, n + k - 1)))
        n += k - 1
    if cycle:
        # two old vertices from different edges plus fresh ones close a cycle
        while True:
            a, b = (int(x) for x in rng.choice(n, size=2, replace=False))
            if not any(a in e and b in e for e in edges):
                break
        edges.append((a, b, *range(n, n + k - 2)))
        n += k - 2
    return UniformHypergraph.from_edges(k, edges, n)
