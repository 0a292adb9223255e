"""Weighted incidence matrices and alpha-normal certificates.

A weighted incidence matrix B assigns a positive weight to every incidence
(v, e). It is alpha-normal when every vertex sum is 1 and every edge product
is alpha, and consistent when the ratios B(v_i, e_i) / B(v_{i-1}, e_i) multiply
to 1 around the cycle. A connected hypergraph carrying a consistent
alpha-normal matrix has spectral radius alpha^(-1/k); an alpha-subnormal one
(vertex sums <= 1, edge products >= alpha) has radius at most alpha^(-1/k),
with strict inequality when some inequality is strict.

For the families A, D, L and I the certificate equations reduce to one
scalar residual in alpha, solved by bisection. Every matrix entry that is
not one of the solved unknowns follows the same rule set for all families,
see :func:`family_weights`.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np
from scipy.optimize import bisect

from .errors import CertificateError, InputError, SolverError, StructureError
from .families import LabeledHypergraph, build_family, star_center
from .hypergraph import UniformHypergraph, cyclomatic_number, find_incidence_cycle

CHECK_TOL = 1e-10
# finer than the 1e-13 contract so every equation residual stays below 1e-12
ALPHA_TOL = 1e-15
EQUATION_TOL = 1e-12
ALPHA_BRACKET = (1e-9, 1 - 1e-9)

CERTIFIED_FAMILIES = ("A", "D", "L", "I")
WITNESS_PAIRS = ("B-under-A", "A-under-D", "I-under-L", "J-under-I")

_MIN_M = {"A": 3, "D": 2, "L": 2, "I": 1}
_WITNESS_MIN_M = {"B-under-A": 3, "A-under-D": 9, "I-under-L": 2, "J-under-I": 2}


@dataclass(frozen=True, eq=False)
class WeightedIncidenceMatrix:
    """Weights keyed by ``(vertex, edge_index)``; every incidence must be present."""

    host: UniformHypergraph
    weights: Mapping[tuple[int, int], float]

    def __post_init__(self):
        g = self.host
        expected = {(v, ei) for ei, e in enumerate(g.edges) for v in e}
        keys = set(self.weights)
        if keys != expected:
            extra, missing = keys - expected, expected - keys
            raise InputError(
                f"weights must cover exactly the incidences; "
                f"missing {sorted(missing)[:3]}, not incidences {sorted(extra)[:3]}"
            )
        for key, w in self.weights.items():
            if not (math.isfinite(w) and w > 0):
                raise InputError(f"weight at {key} must be positive and finite, got {w}")

    def __getitem__(self, key: tuple[int, int]) -> float:
        return self.weights[key]

    def vertex_sums(self) -> np.ndarray:
        out = np.zeros(self.host.n)
        for (v, _), w in self.weights.items():
            out[v] += w
        return out

    def edge_products(self) -> np.ndarray:
        out = np.ones(self.host.num_edges)
        for (_, ei), w in self.weights.items():
            out[ei] *= w
        return out

    def sorted_items(self) -> list[tuple[int, int, float]]:
        return [(v, ei, w) for (v, ei), w in sorted(self.weights.items())]


def check_alpha_normal(B: WeightedIncidenceMatrix, alpha: float, tol: float = CHECK_TOL) -> bool:
    sums_ok = np.all(np.abs(B.vertex_sums() - 1.0) <= tol)
    prods_ok = np.all(np.abs(B.edge_products() - alpha) <= tol)
    return bool(sums_ok and prods_ok)


def cycle_ratio(B: WeightedIncidenceMatrix) -> Optional[float]:
    """Product of B(v_{i+1}, e_i) / B(v_i, e_i) around the unique cycle."""
    r = cyclomatic_number(B.host)
    if r >= 2:
        raise StructureError(f"consistency check supports at most one cycle, host has cycle rank {r}")
    if r == 0:
        return None
    cyc = find_incidence_cycle(B.host)
    l = len(cyc.edges)
    prod = 1.0
    for i, ei in enumerate(cyc.edges):
        a, b = cyc.vertices[i], cyc.vertices[(i + 1) % l]
        prod *= B[b, ei] / B[a, ei]
    return prod


def check_consistency(B: WeightedIncidenceMatrix, tol: float = CHECK_TOL) -> bool:
    ratio = cycle_ratio(B)
    return ratio is None or abs(ratio - 1.0) <= tol


class Subnormality(enum.Enum):
    NOT_SUBNORMAL = "not-subnormal"
    SUBNORMAL = "subnormal"
    STRICTLY_SUBNORMAL = "strictly-subnormal"


def check_alpha_subnormal(B: WeightedIncidenceMatrix, alpha: float, tol: float = CHECK_TOL) -> Subnormality:
    sums, prods = B.vertex_sums(), B.edge_products()
    if np.any(sums > 1 + tol) or np.any(prods < alpha - tol):
        return Subnormality.NOT_SUBNORMAL
    if np.any(sums < 1 - tol) or np.any(prods > alpha + tol):
        return Subnormality.STRICTLY_SUBNORMAL
    return Subnormality.SUBNORMAL


def rho_from_alpha(alpha: float, k: int) -> float:
    # alpha = 1 is allowed: a single edge with unit weights
    if not (isinstance(k, int) and k >= 2):
        raise InputError(f"k must be an integer >= 2, got {k!r}")
    if not (0 < alpha <= 1):
        raise InputError(f"alpha must lie in (0, 1), got {alpha!r}")
    return alpha ** (-1.0 / k)


# -- shared weight assignment ----------------------------------------------


def family_weights(
    lh: LabeledHypergraph,
    family: str,
    alpha: float,
    special: Mapping[tuple[str, str], float],
) -> WeightedIncidenceMatrix:
    """Full matrix for a family member from its special cycle entries.

    Rules, first match wins: an entry of ``special`` keyed by (vertex label,
    edge label); 1 at a degree-one vertex; alpha at the attachment vertex of
    a pendent edge; alpha/(1-alpha)^(k-1) on a star edge at the star center;
    1-alpha at a degree-two vertex on its non-pendent edge.
    """
    g, k = lh.graph, lh.graph.k
    vnames, enames = lh.vertex_names, lh.edge_names
    center = lh[star_center(family)]
    star_w = alpha / (1 - alpha) ** (k - 1)
    weights = {}
    for ei, e in enumerate(g.edges):
        ename = enames[ei]
        for v in e:
            key = (vnames[v], ename)
            deg = len(g.incidence[v])
            if key in special:
                w = special[key]
            elif deg == 1:
                w = 1.0
            elif ename.startswith("p@"):
                w = alpha
            elif ename.startswith("g") and v == center:
                w = star_w
            elif deg == 2:
                w = 1 - alpha
            else:
                raise CertificateError(f"no weight rule for incidence {key} in family {family}")
            weights[v, ei] = w
    return WeightedIncidenceMatrix(g, weights)


# -- certificate systems -----------------------------------------------------


@dataclass(frozen=True)
class _System:
    """Closed chain for one family: alpha -> params, and the scalar residual."""

    params: Callable[[float, int, int], dict]
    residual: Callable[[float, int, int], float]
    special: Callable[[dict, float, int], dict]
    equations: Callable[[dict, float, int, int], list]


def _star(alpha: float, k: int) -> float:
    return alpha / (1 - alpha) ** (k - 1)


def _a_inner(alpha: float, k: int, d0: float) -> tuple[float, float, float]:
    """(x0, y0, c0) from (alpha, d0) via the e1 product, v2 sum and v3 sum."""
    t = (1 - alpha) ** (k - 2)
    y0 = 1 - alpha - d0
    x0 = alpha / (y0 * t)
    c0 = alpha / (t * (1 - alpha - alpha / (d0 * t)))
    return x0, y0, c0


def _a_d0(alpha: float, k: int) -> Optional[float]:
    lo, hi = _star(alpha, k), 1 - alpha
    if not lo < hi:
        return None

    def f(d0):
        if d0 <= lo:
            return -math.inf
        if d0 >= hi:
            return math.inf
        x0, y0, c0 = _a_inner(alpha, k, d0)
        return x0 * d0 * d0 - y0 * c0 * c0

    return bisect(f, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=400)


def _a_params(alpha, m, k):
    d0 = _a_d0(alpha, k)
    if d0 is None:
        raise SolverError(f"family A system infeasible at alpha={alpha}")
    x0, y0, c0 = _a_inner(alpha, k, d0)
    return {"x0": x0, "y0": y0, "c0": c0, "d0": d0}


def _a_residual(alpha, m, k):
    d0 = _a_d0(alpha, k)
    if d0 is None:
        return math.inf
    x0, _, c0 = _a_inner(alpha, k, d0)
    return x0 + alpha + c0 + (m - 3) * _star(alpha, k) - 1


def _a_special(p, alpha, k):
    t = (1 - alpha) ** (k - 2)
    return {
        ("v1", "e1"): p["x0"],
        ("v2", "e1"): p["y0"],
        ("v1", "e3"): p["c0"],
        ("v2", "e2"): p["d0"],
        ("v3", "e3"): alpha / (p["c0"] * t),
        ("v3", "e2"): alpha / (p["d0"] * t),
    }


def _a_equations(p, alpha, m, k):
    t = (1 - alpha) ** (k - 2)
    x0, y0, c0, d0 = p["x0"], p["y0"], p["c0"], p["d0"]
    return [
        x0 + alpha + c0 + (m - 3) * _star(alpha, k) - 1,
        y0 + alpha + d0 - 1,
        alpha / (c0 * t) + alpha / (d0 * t) + alpha - 1,
        x0 * y0 * t - alpha,
        x0 * d0 * d0 / (y0 * c0 * c0) - 1,
    ]


def _d_params(alpha, m, k):
    c1 = math.sqrt(alpha)
    y2 = 1 - c1
    x2 = alpha / (y2 * (1 - alpha) ** (k - 2))
    return {"x2": x2, "y2": y2, "c1": c1}


def _d_residual(alpha, m, k):
    p = _d_params(alpha, m, k)
    return 2 * p["x2"] + alpha + (m - 2) * _star(alpha, k) - 1


def _d_special(p, alpha, k):
    return {
        ("v1", "e1"): p["x2"], ("v1", "e3"): p["x2"],
        ("v2", "e1"): p["y2"], ("v3", "e3"): p["y2"],
        ("v2", "e2"): p["c1"], ("v3", "e2"): p["c1"],
    }


def _d_equations(p, alpha, m, k):
    t = (1 - alpha) ** (k - 2)
    return [
        p["y2"] + p["c1"] - 1,
        2 * p["x2"] + alpha + (m - 2) * _star(alpha, k) - 1,
        p["x2"] * p["y2"] * t - alpha,
        p["c1"] ** 2 - alpha,
    ]


def _l_params(alpha, m, k):
    return {"x4": 2 * alpha / (1 - alpha) ** (k - 1), "y4": (1 - alpha) / 2}


def _l_residual(alpha, m, k):
    return 2 * _l_params(alpha, m, k)["x4"] + alpha + (m - 2) * _star(alpha, k) - 1


def _l_special(p, alpha, k):
    return {
        ("u1", "et1"): p["x4"], ("u1", "et2"): p["x4"],
        ("u2", "et1"): p["y4"], ("u2", "et2"): p["y4"],
    }


def _l_equations(p, alpha, m, k):
    return [
        2 * p["x4"] + alpha + (m - 2) * _star(alpha, k) - 1,
        2 * p["y4"] + alpha - 1,
        p["x4"] * p["y4"] * (1 - alpha) ** (k - 2) - alpha,
    ]


def _i_params(alpha, m, k):
    s = (1 - alpha) ** (k / 2 - 1)
    d3 = s / (1 + s)
    y6 = 1 / (1 + s)
    b = alpha / (d3 * d3)
    return {"x6": b * y6, "y6": y6, "c3": b * d3, "d3": d3, "b": b}


def _i_residual(alpha, m, k):
    return (m - 1) * _star(alpha, k) - (1 - _i_params(alpha, m, k)["b"])


def _i_special(p, alpha, k):
    return {
        ("u1", "et2"): p["x6"], ("u2", "et2"): p["y6"],
        ("u1", "et1"): p["c3"], ("u2", "et1"): p["d3"],
    }


def _i_equations(p, alpha, m, k):
    return [
        p["x6"] + p["c3"] + (m - 1) * _star(alpha, k) - 1,
        p["y6"] + p["d3"] - 1,
        p["c3"] * p["d3"] - alpha,
        p["x6"] * p["y6"] * (1 - alpha) ** (k - 2) - alpha,
        p["x6"] * p["d3"] - p["y6"] * p["c3"],
    ]


_SYSTEMS = {
    "A": _System(_a_params, _a_residual, _a_special, _a_equations),
    "D": _System(_d_params, _d_residual, _d_special, _d_equations),
    "L": _System(_l_params, _l_residual, _l_special, _l_equations),
    "I": _System(_i_params, _i_residual, _i_special, _i_equations),
}


@dataclass(frozen=True, eq=False)
class CertificateSolution:
    family: str
    m: int
    k: int
    alpha: float
    params: dict
    matrix: WeightedIncidenceMatrix = field(repr=False)
    rho: float
    labeled: LabeledHypergraph = field(repr=False)
    max_equation_residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "m": self.m,
            "k": self.k,
            "alpha": self.alpha,
            "rho": self.rho,
            "params": dict(self.params),
            "weights": [[v, ei, w] for v, ei, w in self.matrix.sorted_items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def _check_range(m: int, k: int, minimum: int, what: str):
    if not isinstance(k, int) or k < 3:
        raise InputError(f"k must be an integer >= 3, got {k!r}")
    if not isinstance(m, int) or m < minimum:
        raise InputError(f"{what} needs m >= {minimum}, got {m!r}")


def solve_alpha(family: str, m: int, k: int, xtol: float = ALPHA_TOL) -> float:
    """Root of the family's scalar residual on the bracket (1e-9, 1 - 1e-9)."""
    system = _SYSTEMS[family]

    def f(alpha):
        return system.residual(alpha, m, k)

    lo, hi = ALPHA_BRACKET
    flo, fhi = f(lo), f(hi)
    if not (flo < 0 < fhi or fhi < 0 < flo):
        raise SolverError(
            f"no sign change for family {family} (m={m}, k={k}): "
            f"residual {flo:.3g} at alpha={lo}, {fhi:.3g} at alpha={hi}"
        )
    # bisect until the bracket is below xtol or floating point runs out
    return bisect(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)


def solve_certificate(
    family: str, m: int, k: int, xtol: float = ALPHA_TOL, check_tol: float = CHECK_TOL
) -> CertificateSolution:
    """Solve and self-check the certificate of A, D, L or I at (m, k)."""
    if family not in _SYSTEMS:
        raise InputError(f"no normal certificate for family {family!r}; expected one of {CERTIFIED_FAMILIES}")
    _check_range(m, k, _MIN_M[family], f"family {family}")
    system = _SYSTEMS[family]
    alpha = solve_alpha(family, m, k, xtol)
    params = system.params(alpha, m, k)
    if not all(0 < v < 1 for nm, v in params.items() if nm != "b"):
        raise SolverError(f"family {family} parameters leave (0, 1): {params}")
    lh = build_family(family, m, k)
    B = family_weights(lh, family, alpha, system.special(params, alpha, k))
    residual = max(abs(r) for r in system.equations(params, alpha, m, k))
    if residual > max(EQUATION_TOL, 1e3 * xtol):
        raise SolverError(f"family {family} (m={m}, k={k}) equation residual {residual:.3g} too large")
    if not check_alpha_normal(B, alpha, check_tol):
        raise CertificateError(f"family {family} (m={m}, k={k}) matrix is not alpha-normal")
    if not check_consistency(B, check_tol):
        raise CertificateError(f"family {family} (m={m}, k={k}) matrix is not consistent")
    return CertificateSolution(family, m, k, alpha, params, B, rho_from_alpha(alpha, k), lh, residual)


# -- strict subnormality witnesses ------------------------------------------


@dataclass(frozen=True, eq=False)
class SubnormalWitness:
    pair: str
    m: int
    k: int
    alpha: float
    matrix: WeightedIncidenceMatrix = field(repr=False)
    slack: float
    labeled: LabeledHypergraph = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "pair": self.pair,
            "m": self.m,
            "k": self.k,
            "alpha": self.alpha,
            "slack": self.slack,
            "weights": [[v, ei, w] for v, ei, w in self.matrix.sorted_items()],
        }


def _witness_entries(pair: str, m: int, k: int) -> tuple[str, float, dict, float]:
    """Dominated family, comparator alpha, special entries and slack."""
    if pair == "B-under-A":
        sol = solve_certificate("A", m, k)
        a, p = sol.alpha, sol.params
        t = (1 - a) ** (k - 2)
        x1 = 1 - p["c0"] - (m - 2) * _star(a, k)
        y1 = 1 - p["d0"]
        special = {
            ("v1", "e1"): x1, ("v2", "e1"): y1,
            ("v1", "e3"): p["c0"], ("v2", "e2"): p["d0"],
            ("v3", "e3"): a / (p["c0"] * t), ("v3", "e2"): a / (p["d0"] * t),
        }
        return "B", a, special, x1 * y1 - a
    if pair == "A-under-D":
        a = solve_certificate("D", m, k).alpha
        t = (1 - a) ** (k - 2)
        c2 = math.sqrt(a / t)
        y3 = 1 - c2 - a
        x3 = a / (y3 * t)
        special = {
            ("v1", "e1"): x3, ("v1", "e3"): x3,
            ("v2", "e1"): y3, ("v3", "e3"): y3,
            ("v2", "e2"): c2, ("v3", "e2"): c2,
        }
        return "A", a, special, 1 - (2 * x3 + a + (m - 3) * _star(a, k))
    if pair == "I-under-L":
        sol = solve_certificate("L", m, k)
        a, p = sol.alpha, sol.params
        x5 = 1 - p["x4"] - (m - 1) * _star(a, k)
        y5 = 1 - p["y4"]
        special = {
            ("u1", "et1"): x5, ("u2", "et1"): y5,
            ("u1", "et2"): p["x4"], ("u2", "et2"): p["y4"],
        }
        return "I", a, special, x5 * y5 - a
    if pair == "J-under-I":
        sol = solve_certificate("I", m, k)
        a, p = sol.alpha, sol.params
        x7, y7 = 1 - p["c3"], 1 - p["d3"]
        hub = 1 - a - (m - 1) * _star(a, k)
        special = {
            ("u2", "et2"): x7, ("u1", "et2"): y7,
            ("u2", "et1"): p["c3"], ("u1", "et1"): p["d3"],
            ("u2_1", "et2"): hub,
        }
        slack = x7 * y7 * hub * (1 - a) ** (k - 3) - a
        return "J", a, special, slack
    raise InputError(f"unknown witness pair {pair!r}; expected one of {WITNESS_PAIRS}")


def witness_slack(pair: str, m: int, k: int) -> float:
    """The witness margin without range or sign checks, for exploring small m."""
    if pair not in WITNESS_PAIRS:
        raise InputError(f"unknown witness pair {pair!r}; expected one of {WITNESS_PAIRS}")
    minimum = {"B-under-A": 3, "A-under-D": 3, "I-under-L": 2, "J-under-I": 2}[pair]
    _check_range(m, k, minimum, pair)
    return _witness_entries(pair, m, k)[3]


def subnormal_witness(pair: str, m: int, k: int, tol: float = CHECK_TOL) -> SubnormalWitness:
    """Strictly subnormal matrix on the dominated family at the comparator's alpha."""
    if pair not in WITNESS_PAIRS:
        raise InputError(f"unknown witness pair {pair!r}; expected one of {WITNESS_PAIRS}")
    _check_range(m, k, _WITNESS_MIN_M[pair], pair)
    family, alpha, special, slack = _witness_entries(pair, m, k)
    if not slack > 0:
        raise CertificateError(f"{pair} (m={m}, k={k}) has nonpositive slack {slack:.3g}")
    lh = build_family(family, m, k)
    try:
        B = family_weights(lh, family, alpha, special)
    except InputError as exc:
        raise CertificateError(f"{pair} (m={m}, k={k}): {exc}") from exc
    status = check_alpha_subnormal(B, alpha, tol)
    if status is not Subnormality.STRICTLY_SUBNORMAL:
        raise CertificateError(f"{pair} (m={m}, k={k}) matrix is {status.value}")
    return SubnormalWitness(pair, m, k, alpha, B, slack, lh)
