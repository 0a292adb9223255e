"""Adjacency-tensor application and power iteration for the spectral radius.

The adjacency tensor of a k-uniform hypergraph has entry 1/(k-1)! at every
ordering of every edge. In ``(A x)_i`` the (k-1)! orderings of ``e - {i}``
each contribute the same product, so the factorial cancels:

    (A x)_i = sum over edges e containing i of prod_{j in e, j != i} x_j

Power iteration uses ``x <- (A x)^(1/(k-1))`` with the Collatz-Wielandt
quotients ``(A x)_i / x_i^(k-1)`` bracketing the spectral
radius from both sides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InputError
from .hypergraph import UniformHypergraph, is_connected

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000

# floating-point allowance when checking that the brackets never widen
_MONOTONE_SLACK = 1e-13


@dataclass(frozen=True)
class EigenPair:
    rho: float
    x: np.ndarray
    residual: float
    iterations: int
    lower: float
    upper: float
    monotone: bool  # brackets never widened during the run
    k: int

    @property
    def normalization_error(self) -> float:
        return abs(float(np.sum(self.x ** self.k)) - 1.0)


def _edge_array(g: UniformHypergraph) -> np.ndarray:
    return np.asarray(g.edges, dtype=np.intp).reshape(len(g.edges), g.k)


def apply_adjacency(g: UniformHypergraph, x) -> np.ndarray:
    """``A(G) x`` as a length-n vector."""
    x = np.asarray(x, dtype=float)
    if x.shape != (g.n,):
        raise InputError(f"vector has shape {x.shape}, expected ({g.n},)")
    if not np.all(np.isfinite(x)):
        raise InputError("vector entries must be finite")
    if not g.edges:
        return np.zeros(g.n)
    E = _edge_array(g)
    return _apply(E, x, g.n)


def _apply(E: np.ndarray, x: np.ndarray, n: int) -> np.ndarray:
    X = x[E]
    a, k = X.shape
    # product of all entries except column j via prefix and suffix products
    prefix = np.ones((a, k))
    suffix = np.ones((a, k))
    prefix[:, 1:] = np.cumprod(X[:, :-1], axis=1)
    suffix[:, :-1] = np.cumprod(X[:, :0:-1], axis=1)[:, ::-1]
    others = prefix * suffix
    return np.bincount(E.ravel(), weights=others.ravel(), minlength=n)


def spectral_radius(
    g: UniformHypergraph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> EigenPair:
    """Spectral radius and principal eigenvector of a connected hypergraph.

    Stops once ``upper - lower <= tol``; ``rho`` is the bracket midpoint and
    ``x`` is normalized so that ``sum(x**k) == 1``.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    if not g.edges:
        raise InputError("spectral_radius needs at least one edge")
    if not is_connected(g):
        raise InputError("spectral_radius needs a connected hypergraph")
    k, n = g.k, g.n
    E = _edge_array(g)
    x = np.full(n, n ** (-1.0 / k))
    prev_lo, prev_hi = -np.inf, np.inf
    monotone = True
    for it in range(1, max_iter + 1):
        y = _apply(E, x, n)
        xk1 = x ** (k - 1)
        ratios = y / xk1
        lo, hi = float(ratios.min()), float(ratios.max())
        slack = _MONOTONE_SLACK * max(1.0, hi)
        if lo < prev_lo - slack or hi > prev_hi + slack:
            monotone = False
        prev_lo, prev_hi = max(prev_lo, lo), min(prev_hi, hi)
        if hi - lo <= tol:
            rho = 0.5 * (lo + hi)
            residual = float(np.max(np.abs(y - rho * xk1)))
            return EigenPair(rho, x, residual, it, lo, hi, monotone, k)
        z = y ** (1.0 / (k - 1))
        x = z / np.sum(z ** k) ** (1.0 / k)
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations "
        f"(bracket [{prev_lo:.15g}, {prev_hi:.15g}])",
        lower=prev_lo,
        upper=prev_hi,
        iterations=max_iter,
    )
