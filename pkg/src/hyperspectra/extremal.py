"""Exhaustive enumeration of unicyclic hypergraphs with perfect matchings,
and numerical checks of the extremal orderings between the named families.

Enumeration fixes the perfect matching {0..k-1}, {k..2k-1}, ... and adds the
remaining m = n / (k(k-1)) edges one at a time. Partial states are kept up to
isomorphism: an isomorphism between two states carries the extensions of one
bijectively onto the extensions of the other, so one representative per class
suffices. Adding an edge never lowers the cyclomatic number, which prunes
states whose cycle rank already exceeds one.
"""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .canonical import canonical_edges
from .errors import CapacityError, InputError
from .families import build_family
from .canonical import are_isomorphic
from .hypergraph import (
    ClassLabel,
    UniformHypergraph,
    classify,
    cyclomatic_number,
    find_perfect_matching,
    is_connected,
    is_linear,
)
from .spectral import DEFAULT_TOL, spectral_radius

FILTERS = ("all", "linear-only", "nonlinear-only")
CO_MAX_TOL = 1e-9
GAP_TOL = 1e-9
CAP_ENV = "HYPERSPECTRA_CAP"


def default_enumeration_cap(k: int) -> int:
    env = os.environ.get(CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{CAP_ENV} must be an integer, got {env!r}") from None
    return {3: 18, 4: 12}.get(k, k * (k - 1))


@dataclass(frozen=True)
class Member:
    canonical: bytes
    label: ClassLabel
    rho: float
    graph: UniformHypergraph = field(repr=False, compare=False)

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.canonical).hexdigest()[:16]

    def to_dict(self) -> dict:
        return {
            "hash": self.digest,
            "canonical": json.loads(self.canonical),
            "label": self.label.to_dict(),
            "rho": self.rho,
        }


@dataclass
class EnumerationResult:
    n: int
    k: int
    filter: str
    members: list[Member]
    maximizer: Optional[int]
    co_maximizers: list[int]
    stats: dict
    elapsed: float = 0.0

    @property
    def m(self) -> int:
        return self.n // (self.k * (self.k - 1))

    def ranked(self) -> list[Member]:
        return sorted(self.members, key=lambda mb: (-mb.rho, mb.canonical))

    def runner_up_gap(self) -> Optional[float]:
        r = self.ranked()
        if len(r) < 2:
            return None
        return r[0].rho - r[1].rho

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "filter": self.filter,
            "count": len(self.members),
            "maximizer": self.maximizer,
            "co_maximizers": self.co_maximizers,
            "stats": self.stats,
            "members": [mb.to_dict() for mb in self.members],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["hash", "kind", "tags", "rho"])
        for mb in self.members:
            w.writerow([mb.digest, mb.label.kind, " ".join(sorted(mb.label.tags)), repr(mb.rho)])
        return buf.getvalue()


def _check_params(n: int, k: int, cap: Optional[int]) -> int:
    if not isinstance(k, int) or k < 3:
        raise InputError(f"k must be an integer >= 3, got {k!r}")
    if not isinstance(n, int) or n <= 0 or n % (k * (k - 1)):
        raise InputError(f"n must be a positive multiple of k(k-1) = {k * (k - 1)}, got {n!r}")
    cap = default_enumeration_cap(k) if cap is None else cap
    if n > cap:
        raise CapacityError(
            f"enumeration of n = {n} exceeds the cap {cap} for k = {k}; "
            f"raise {CAP_ENV} or use family mode"
        )
    return cap


def _components(n: int, edges: Iterable[Sequence[int]]) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = n
    for e in edges:
        r0 = find(e[0])
        for v in e[1:]:
            r = find(v)
            if r != r0:
                parent[r] = r0
                count -= 1
    return count


def _generate(n: int, k: int) -> tuple[list[tuple], list[int]]:
    """Canonical edge sets of all final graphs, and the state count per level."""
    m = n // (k * (k - 1))
    base = tuple(tuple(range(i, i + k)) for i in range(0, n, k))
    subsets = list(itertools.combinations(range(n), k))
    states = {canonical_edges(UniformHypergraph(k, n, base), cap=n)}
    sizes = [1]
    for level in range(1, m + 1):
        remaining = m - level
        nxt = set()
        for edges in states:
            present = set(edges)
            a = len(edges) + 1
            for s in subsets:
                if s in present:
                    continue
                new = edges + (s,)
                omega = _components(n, new)
                rank = a * (k - 1) - n + omega
                # rank never drops; each later edge merges at most k-1 components
                if rank > 1 or omega - 1 > remaining * (k - 1):
                    continue
                if remaining == 0 and omega != 1:
                    continue
                nxt.add(canonical_edges(UniformHypergraph(k, n, tuple(sorted(new))), cap=n))
        states = nxt
        sizes.append(len(states))
    return sorted(states), sizes


def brute_force_unicyclic_pm(n: int, k: int) -> set[bytes]:
    """Canonical forms from every n/(k-1)-edge subset of all k-subsets.

    Independent of the matching-first generator; only feasible for tiny n.
    """
    from .canonical import canonical_form

    a = n // (k - 1)
    out = set()
    for edges in itertools.combinations(itertools.combinations(range(n), k), a):
        g = UniformHypergraph(k, n, edges)
        if any(not inc for inc in g.incidence):
            continue
        if not is_connected(g) or cyclomatic_number(g) != 1:
            continue
        if find_perfect_matching(g) is None:
            continue
        out.add(canonical_form(g, cap=n))
    return out


def _evaluate(args) -> tuple[bytes, ClassLabel, float, UniformHypergraph]:
    k, n, edges, tol = args
    g = UniformHypergraph(k, n, edges)
    payload = {"k": k, "n": n, "edges": [list(e) for e in edges]}
    canon = json.dumps(payload, separators=(",", ":")).encode()
    return canon, classify(g), spectral_radius(g, tol=tol).rho, g


def enumerate_unicyclic_pm(
    n: int,
    k: int,
    filter: str = "all",
    cap: Optional[int] = None,
    workers: int = 1,
    tol: float = DEFAULT_TOL,
) -> EnumerationResult:
    """All connected unicyclic k-graphs on n vertices with a perfect matching."""
    if filter not in FILTERS:
        raise InputError(f"filter must be one of {FILTERS}, got {filter!r}")
    _check_params(n, k, cap)
    t0 = time.perf_counter()
    finals, sizes = _generate(n, k)
    if filter != "all":
        want_linear = filter == "linear-only"
        finals = [e for e in finals if is_linear(UniformHypergraph(k, n, e)) == want_linear]
    jobs = [(k, n, e, tol) for e in finals]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            evaluated = list(pool.map(_evaluate, jobs, chunksize=16))
    else:
        evaluated = [_evaluate(j) for j in jobs]
    members = sorted((Member(c, lab, rho, g) for c, lab, rho, g in evaluated), key=lambda mb: mb.canonical)
    maximizer, co = None, []
    if members:
        top = max(mb.rho for mb in members)
        co = [i for i, mb in enumerate(members) if top - mb.rho <= CO_MAX_TOL]
        maximizer = co[0]
    stats = {"states_per_level": sizes, "candidates": len(finals)}
    return EnumerationResult(n, k, filter, members, maximizer, co, stats, time.perf_counter() - t0)


# -- theorem checks ------------------------------------------------------------

THEOREM_IDS = ("3.1", "4.1", "5.1", "C3.1", "C3.2", "C4.1", "C4.2", "L3.7", "L3.9", "L4.3", "L4.4", "L4.7")

# smallest m for which each statement is made
_THEOREM_MIN_M = {
    "3.1": 2, "4.1": 1, "5.1": 1, "C3.1": 3, "C3.2": 3, "C4.1": 2, "C4.2": 2,
    "L3.7": 3, "L3.9": 9, "L4.3": 2, "L4.4": 2, "L4.7": 2,
}
_LEMMAS = {
    "L3.7": [("A", "B", 3)],
    "L3.9": [("D", "A", 9)],
    "L4.3": [("L", "A", 3), ("L", "D", 2)],
    "L4.4": [("L", "I", 2)],
    "L4.7": [("I", "J", 2)],
}
_EXHAUSTIVE_ONLY = ("C3.1", "C4.2")


@dataclass
class TheoremReport:
    theorem: str
    k: int
    m_values: list[int]
    mode: str
    verdict: str
    evidence: list[dict]
    min_gap: Optional[float] = None
    counterexample: Optional[str] = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "k": self.k,
            "m_values": self.m_values,
            "mode": self.mode,
            "verdict": self.verdict,
            "min_gap": self.min_gap,
            "counterexample": self.counterexample,
            "notes": self.notes,
            "evidence": self.evidence,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class _RhoCache:
    def __init__(self, k: int, tol: float):
        self.k, self.tol = k, tol
        self._rho: dict[tuple[str, int], float] = {}

    def __call__(self, family: str, m: int) -> float:
        key = (family, m)
        if key not in self._rho:
            self._rho[key] = spectral_radius(build_family(family, m, self.k).graph, tol=self.tol).rho
        return self._rho[key]


def _pair(rho: _RhoCache, big: str, small: str, m: int, claim: str) -> dict:
    gap = rho(big, m) - rho(small, m)
    return {"m": m, "claim": claim, "gap": gap, "ok": gap > GAP_TOL}


def _iso(k: int, a: str, b: str, m: int, claim: str) -> dict:
    same = are_isomorphic(build_family(a, m, k).graph, build_family(b, m, k).graph)
    return {"m": m, "claim": claim, "gap": None, "ok": same}


def _family_checks(tid: str, k: int, m: int, rho: _RhoCache) -> list[dict]:
    out = []
    if tid in _LEMMAS:
        for big, small, lo in _LEMMAS[tid]:
            if m >= lo:
                out.append(_pair(rho, big, small, m, f"rho({big}) > rho({small})"))
        return out
    if tid == "3.1":
        if m == 2:
            out.append(_iso(k, "B", "D", m, "B ~ D"))
        else:
            out.append(_pair(rho, "A", "B", m, "rho(A) > rho(B)"))
            if m >= 9:
                out.append(_pair(rho, "D", "A", m, "rho(D) > rho(A)"))
    elif tid == "C3.2":
        gap = max(rho("A", m), rho("D", m)) - rho("B", m)
        out.append({"m": m, "claim": "max(rho(A), rho(D)) > rho(B)", "gap": gap, "ok": gap > GAP_TOL})
        if m >= 9:
            out.append(_pair(rho, "D", "A", m, "rho(D) > rho(A)"))
    elif tid in ("4.1", "C4.1"):
        if m == 1:
            out.append(_iso(k, "I", "J", m, "I ~ J"))
        else:
            out.append(_pair(rho, "L", "I", m, "rho(L) > rho(I)"))
            out.append(_pair(rho, "L" if tid == "C4.1" else "I", "J", m,
                             "rho(L) > rho(J)" if tid == "C4.1" else "rho(I) > rho(J)"))
    elif tid == "5.1":
        if m == 1:
            out.append(_iso(k, "I", "J", m, "I ~ J"))
        else:
            for other in ("A", "B", "D", "I", "J"):
                if other == "A" and m < 3:
                    continue
                out.append(_pair(rho, "L", other, m, f"rho(L) > rho({other})"))
    return out


def _predicted(tid: str, m: int) -> Optional[str]:
    """Family expected to be the unique maximizer of the enumerated subset."""
    if tid in ("5.1", "4.1"):
        return "I" if m == 1 else "L"
    if tid in ("3.1", "C3.2"):
        return "D" if (m >= 9 or m == 2) else None
    if tid == "C3.1":
        return "A"
    if tid == "C4.2":
        return "L"
    return None


def _subset(tid: str, members: list[Member]) -> list[Member]:
    tag = {"C3.1": "U1", "C3.2": "U2", "C4.1": "G1", "C4.2": "G2"}.get(tid)
    if tag is None:
        return members
    return [mb for mb in members if mb.label.has(tag)]


def _exhaustive_checks(tid: str, k: int, m: int, tol: float, cap: Optional[int], notes: list[str]):
    n = m * k * (k - 1)
    flt = {"3.1": "linear-only", "C3.1": "linear-only", "C3.2": "linear-only",
           "4.1": "nonlinear-only", "C4.1": "nonlinear-only", "C4.2": "nonlinear-only"}.get(tid, "all")
    res = enumerate_unicyclic_pm(n, k, flt, cap=cap, tol=tol)
    pool = sorted(_subset(tid, res.members), key=lambda mb: (-mb.rho, mb.canonical))
    out = []
    if not pool:
        notes.append(f"m={m}: the enumerated subset is empty")
        return out, None
    if tid == "3.1" and m == 2 and len(pool) > 1:
        notes.append(
            f"m=2: {len(pool)} non-isomorphic members; the single-member reading fails "
            f"and only the maximizer statement is checked"
        )
    if tid == "C4.1":
        rl = spectral_radius(build_family("L", m, k).graph, tol=tol).rho
        gap = rl - pool[0].rho
        ok = gap > GAP_TOL
        out.append({"m": m, "claim": "rho(L) > max over G1", "gap": gap, "ok": ok, "count": len(pool)})
        return out, None if ok else pool[0]
    if tid == "C3.2" and 3 <= m <= 8:
        best = max(spectral_radius(build_family(f, m, k).graph, tol=tol).rho for f in "AD")
        gap = best - pool[0].rho
        ok = gap > -GAP_TOL
        out.append({"m": m, "claim": "max(rho(A), rho(D)) >= max over U2", "gap": gap, "ok": ok, "count": len(pool)})
        return out, None if ok else pool[0]
    fam = _predicted(tid, m)
    if tid == "3.1" and 3 <= m <= 8:
        best = max(spectral_radius(build_family(f, m, k).graph, tol=tol).rho for f in "AD")
        gap = best - pool[0].rho
        ok = gap > -GAP_TOL
        out.append({"m": m, "claim": "max(rho(A), rho(D)) >= max over U", "gap": gap, "ok": ok, "count": len(pool)})
        return out, None if ok else pool[0]
    target = build_family(fam, m, k).graph
    top_is = are_isomorphic(pool[0].graph, target)
    gap = pool[0].rho - pool[1].rho if len(pool) > 1 else None
    if m == 1 and tid in ("4.1", "5.1"):
        ok = len(pool) == 1 and top_is
        out.append({"m": m, "claim": "single member ~ I ~ J", "gap": None, "ok": ok, "count": len(pool)})
    else:
        ok = top_is and (gap is None or gap > GAP_TOL)
        out.append({"m": m, "claim": f"maximizer ~ {fam}", "gap": gap, "ok": ok, "count": len(pool)})
    return out, None if ok else pool[0]


def verify_theorem(
    theorem: str,
    k: int,
    m_values: Iterable[int],
    mode: str = "family",
    tol: float = DEFAULT_TOL,
    cap: Optional[int] = None,
) -> TheoremReport:
    if theorem not in THEOREM_IDS:
        raise InputError(f"unknown theorem id {theorem!r}; expected one of {THEOREM_IDS}")
    if mode not in ("family", "exhaustive"):
        raise InputError(f"mode must be 'family' or 'exhaustive', got {mode!r}")
    if not isinstance(k, int) or k < 3:
        raise InputError(f"k must be an integer >= 3, got {k!r}")
    ms = sorted(set(m_values))
    if not ms:
        raise InputError("empty m range")
    lo = _THEOREM_MIN_M[theorem]
    if ms[0] < lo:
        return TheoremReport(
            theorem, k, ms, mode, "out-of-range", [],
            notes=[f"{theorem} is stated for m >= {lo}; requested {ms[0]}..{ms[-1]}"],
        )
    if mode == "family" and theorem in _EXHAUSTIVE_ONLY:
        raise InputError(f"{theorem} has no pairwise family check; use exhaustive mode")
    if mode == "exhaustive" and theorem in _LEMMAS:
        mode = "family"
    if mode == "exhaustive":
        for m in ms:
            _check_params(m * k * (k - 1), k, cap)
    rho = _RhoCache(k, tol)
    evidence, notes = [], []
    counterexample = None
    for m in ms:
        if mode == "family":
            checks = _family_checks(theorem, k, m, rho)
        else:
            checks, bad = _exhaustive_checks(theorem, k, m, tol, cap, notes)
            if bad is not None and counterexample is None:
                counterexample = bad.canonical.decode()
        evidence.extend(checks)
    gaps = [c["gap"] for c in evidence if c["gap"] is not None]
    refuted = [c for c in evidence if not c["ok"]]
    verdict = "refuted" if refuted else "confirmed"
    if refuted and counterexample is None:
        counterexample = json.dumps({"m": refuted[0]["m"], "claim": refuted[0]["claim"]})
    return TheoremReport(
        theorem, k, ms, mode, verdict, evidence,
        min_gap=min(gaps) if gaps else None, counterexample=counterexample, notes=notes,
    )


@dataclass(frozen=True)
class ComparisonRow:
    m: int
    rho_a: float
    rho_d: float

    @property
    def gap(self) -> float:
        """rho(D) - rho(A); positive means D is larger."""
        return self.rho_d - self.rho_a

    def leader(self, tol: float) -> str:
        if self.gap > tol:
            return "D"
        if self.gap < -tol:
            return "A"
        return "tie"


def resolve_open_comparison(k: int, m_values: Iterable[int], tol: float = 1e-8) -> list[ComparisonRow]:
    """rho(A) against rho(D) by power iteration for each m (m >= 3)."""
    rows = []
    for m in sorted(set(m_values)):
        if not isinstance(m, int) or m < 3:
            raise InputError(f"A is defined for m >= 3, got {m!r}")
        ptol = min(DEFAULT_TOL, tol)
        ra = spectral_radius(build_family("A", m, k).graph, tol=ptol).rho
        rd = spectral_radius(build_family("D", m, k).graph, tol=ptol).rho
        rows.append(ComparisonRow(m, ra, rd))
    return rows
