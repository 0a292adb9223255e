"""k-uniform hypergraphs and the combinatorial predicates built on them.

Vertices are dense integers ``0..n-1``. Edges are stored canonically: each
edge is an ascending tuple and the edge tuple is sorted lexicographically, so
two hypergraphs with the same edge set compare equal.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import ClassificationError, InputError

Edge = tuple[int, ...]


@dataclass(frozen=True)
class UniformHypergraph:
    """A simple k-uniform hypergraph on the vertex set ``0..n-1``.

    Direct construction tolerates isolated vertices (``capped_hypergraph``
    and intermediate enumeration states need them); ``from_edges`` and
    ``from_json`` reject them.
    """

    k: int
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 2:
            raise InputError(f"uniformity k must be an integer >= 2, got {self.k!r}")
        if not isinstance(self.n, int) or self.n < 0:
            raise InputError(f"vertex count n must be a non-negative integer, got {self.n!r}")
        canon = []
        for e in self.edges:
            t = tuple(sorted(int(v) for v in e))
            if len(t) != self.k or len(set(t)) != self.k:
                raise InputError(f"edge {tuple(e)} does not have {self.k} distinct vertices")
            if t[0] < 0 or t[-1] >= self.n:
                raise InputError(f"edge {t} has a vertex outside 0..{self.n - 1}")
            canon.append(t)
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise InputError(f"multiple edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_edges(cls, k: int, edges: Iterable[Sequence[int]], n: Optional[int] = None):
        """Build from an edge list; ``n`` defaults to ``max vertex + 1``."""
        edges = [tuple(e) for e in edges]
        if n is None:
            n = 1 + max((v for e in edges for v in e), default=-1)
        g = cls(k, n, tuple(edges))
        isolated = [v for v in range(g.n) if not g.incidence[v]]
        if isolated:
            raise InputError(f"isolated vertices not allowed: {isolated}")
        return g

    @classmethod
    def from_json(cls, text: str):
        """Parse the strict JSON normal form ``{"k":..,"n":..,"edges":[..]}``."""
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
        if not isinstance(obj, dict) or set(obj) != {"k", "n", "edges"}:
            raise InputError('hypergraph JSON must have exactly the fields "k", "n", "edges"')
        k, n, edges = obj["k"], obj["n"], obj["edges"]
        for name, val in (("k", k), ("n", n)):
            if not isinstance(val, int) or isinstance(val, bool):
                raise InputError(f'"{name}" must be an integer')
        if not isinstance(edges, list):
            raise InputError('"edges" must be an array')
        for e in edges:
            if not isinstance(e, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in e
            ):
                raise InputError(f"edge {e!r} must be an array of integers")
            if any(a >= b for a, b in zip(e, e[1:])):
                raise InputError(f"edge {e} is not strictly ascending")
        if any(a >= b for a, b in zip(edges, edges[1:])):
            raise InputError("edges are not sorted lexicographically (or contain duplicates)")
        return cls.from_edges(k, edges, n)

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "n": self.n, "edges": [list(e) for e in self.edges]})

    # -- basic structure ----------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """For each vertex, the indices of the edges containing it."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def index_of(self, edge: Sequence[int]) -> int:
        try:
            return self.edge_index[tuple(sorted(edge))]
        except KeyError:
            raise InputError(f"{tuple(edge)} is not an edge") from None

    def has_edge(self, edge: Sequence[int]) -> bool:
        return tuple(sorted(edge)) in self.edge_index

    def relabel(self, perm: Sequence[int]) -> "UniformHypergraph":
        """Image under the vertex map ``v -> perm[v]``."""
        return UniformHypergraph(self.k, self.n, tuple(tuple(perm[v] for v in e) for e in self.edges))

    def is_pendent(self, edge_idx: int) -> bool:
        """Exactly one vertex of the edge has degree >= 2."""
        return sum(1 for v in self.edges[edge_idx] if len(self.incidence[v]) >= 2) == 1


@dataclass(frozen=True)
class Matching:
    """Pairwise disjoint edges of a host on ``n`` vertices."""

    edges: tuple[Edge, ...]
    n: int
    perfect: bool = field(init=False)

    def __post_init__(self):
        edges = tuple(sorted(tuple(sorted(e)) for e in self.edges))
        seen: set[int] = set()
        for e in edges:
            if seen.intersection(e):
                raise InputError(f"matching edges overlap at {sorted(seen.intersection(e))}")
            seen.update(e)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "perfect", len(seen) == self.n and seen == set(range(self.n)))

    def __len__(self):
        return len(self.edges)

    def edge_indices(self, host: UniformHypergraph) -> list[int]:
        return sorted(host.index_of(e) for e in self.edges)


# -- predicates -------------------------------------------------------------


def degree(g: UniformHypergraph, v: int) -> int:
    if not 0 <= v < g.n:
        raise InputError(f"vertex {v} outside 0..{g.n - 1}")
    return len(g.incidence[v])


def is_linear(g: UniformHypergraph) -> bool:
    """Every pair of edges shares at most one vertex."""
    seen_pairs: set[tuple[int, int]] = set()
    for e in g.edges:
        for i in range(len(e)):
            for j in range(i + 1, len(e)):
                p = (e[i], e[j])
                if p in seen_pairs:
                    return False
                seen_pairs.add(p)
    return True


def connected_components(g: UniformHypergraph) -> list[list[int]]:
    """Vertex partition into connected parts, each sorted, ordered by minimum."""
    comp = [-1] * g.n
    parts = []
    for s in range(g.n):
        if comp[s] >= 0:
            continue
        cid = len(parts)
        comp[s] = cid
        part = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for ei in g.incidence[v]:
                for w in g.edges[ei]:
                    if comp[w] < 0:
                        comp[w] = cid
                        part.append(w)
                        queue.append(w)
        parts.append(sorted(part))
    return parts


def is_connected(g: UniformHypergraph) -> bool:
    return g.n > 0 and len(connected_components(g)) == 1


def cyclomatic_number(g: UniformHypergraph) -> int:
    """``a(k-1) - n + omega``; equals 1 exactly for unicyclic hypergraphs."""
    return g.num_edges * (g.k - 1) - g.n + len(connected_components(g))


def find_perfect_matching(g: UniformHypergraph) -> Optional[Matching]:
    """Backtracking exact cover: branch on the lowest uncovered vertex."""
    if g.n % g.k:
        return None
    covered = [False] * g.n
    chosen: list[int] = []

    def search(start: int) -> bool:
        v = start
        while v < g.n and covered[v]:
            v += 1
        if v == g.n:
            return True
        for ei in g.incidence[v]:
            e = g.edges[ei]
            if any(covered[w] for w in e):
                continue
            for w in e:
                covered[w] = True
            chosen.append(ei)
            if search(v + 1):
                return True
            chosen.pop()
            for w in e:
                covered[w] = False
        return False

    if search(0):
        return Matching(tuple(g.edges[i] for i in chosen), g.n)
    return None


def capped_hypergraph(g: UniformHypergraph, matching: Matching) -> UniformHypergraph:
    """The hypergraph induced by the non-matching edges, isolated vertices dropped."""
    if not matching.perfect or matching.n != g.n:
        raise InputError("capped_hypergraph needs a perfect matching of the host")
    for e in matching.edges:
        if not g.has_edge(e):
            raise InputError(f"matching edge {e} is not an edge of the host")
    in_m = set(matching.edges)
    rest = [e for e in g.edges if e not in in_m]
    verts = sorted({v for e in rest for v in e})
    remap = {v: i for i, v in enumerate(verts)}
    return UniformHypergraph(g.k, len(verts), tuple(tuple(remap[v] for v in e) for e in rest))


# -- the unique cycle -------------------------------------------------------


@dataclass(frozen=True)
class IncidenceCycle:
    """The unique cycle of the vertex/edge incidence graph.

    ``vertices[i]`` and ``vertices[i+1]`` (cyclically) both lie in
    ``edges[i]``; a nonlinear C_2 has two vertices and two edges.
    """

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __len__(self):
        return len(self.edges)


def find_incidence_cycle(g: UniformHypergraph) -> Optional[IncidenceCycle]:
    """The unique incidence cycle, or ``None`` for a forest.

    Callers must ensure the cycle rank is at most one; leaf stripping leaves
    exactly the cycle nodes in that case.
    """
    n = g.n
    adj: list[list[int]] = [list(n + ei for ei in g.incidence[v]) for v in range(n)]
    adj += [list(e) for e in g.edges]
    deg = [len(a) for a in adj]
    alive = [True] * len(adj)
    queue = deque(i for i, d in enumerate(deg) if d <= 1)
    while queue:
        x = queue.popleft()
        if not alive[x]:
            continue
        alive[x] = False
        for y in adj[x]:
            if alive[y]:
                deg[y] -= 1
                if deg[y] == 1:
                    queue.append(y)
    core = [i for i in range(len(adj)) if alive[i]]
    if not core:
        return None
    start = min(i for i in core if i >= n)
    seq = [start]
    prev, cur = None, start
    while True:
        nbrs = [y for y in adj[cur] if alive[y] and y != prev]
        if len(nbrs) != (2 if prev is None else 1):
            raise ClassificationError("incidence graph has more than one cycle")
        prev, cur = cur, min(nbrs)
        if cur == start:
            break
        seq.append(cur)
    edges = [x - n for x in seq[0::2]]
    verts = seq[1::2]
    # rotate so that vertices[i] and vertices[i+1] both lie in edges[i]
    verts = verts[-1:] + verts[:-1]
    return IncidenceCycle(tuple(verts), tuple(edges))


# -- classification ---------------------------------------------------------

TAGS = (
    "U1", "U2", "U1bar", "U2bar", "U21bar", "U22bar",
    "G1", "G2", "G1bar", "G11bar", "G12bar", "G2bar",
)


@dataclass(frozen=True)
class ClassLabel:
    """Class membership of a connected unicyclic hypergraph with a perfect matching.

    ``kind`` is ``"U"`` (linear cycle of length >= 3) or ``"Gamma"`` (two
    edges sharing two vertices). Tags use ``bar`` for the barred subclasses,
    e.g. ``U21bar`` and ``G11bar``.
    """

    kind: str
    cycle_length: int
    pm_edges_on_cycle: int
    tags: frozenset[str]

    def has(self, tag: str) -> bool:
        return tag in self.tags

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "cycle_length": self.cycle_length,
            "pm_edges_on_cycle": self.pm_edges_on_cycle,
            "tags": sorted(self.tags),
        }


def _hanging_edges(g: UniformHypergraph, w: int, cycle_edges: set[int]) -> list[int]:
    """Edges reachable from ``w`` without using a cycle edge."""
    seen_e: set[int] = set()
    seen_v = {w}
    queue = deque([w])
    while queue:
        v = queue.popleft()
        for ei in g.incidence[v]:
            if ei in cycle_edges or ei in seen_e:
                continue
            seen_e.add(ei)
            for x in g.edges[ei]:
                if x not in seen_v:
                    seen_v.add(x)
                    queue.append(x)
    return sorted(seen_e)


def _pendent_at(g: UniformHypergraph, w: int, ei: int) -> bool:
    return all(len(g.incidence[x]) == 1 for x in g.edges[ei] if x != w)


class _Attachments:
    """Pendent-edge and heavy-hypertree predicates for vertices on cycle edges.

    A vertex is "heavy" when the tree hanging at it, apart from one pendent
    edge, has at least k edges. With a perfect matching a nontrivial branch
    always has at least k edges, so this is the "attached by a hypertree
    which has at least k edges" condition.
    """

    def __init__(self, g: UniformHypergraph, cycle_edges: set[int]):
        self.g = g
        self.cycle_edges = cycle_edges
        self._cache: dict[int, tuple[bool, bool]] = {}

    def _info(self, w: int) -> tuple[bool, bool]:
        if w not in self._cache:
            g = self.g
            hang = _hanging_edges(g, w, self.cycle_edges)
            pendent = any(w in g.edges[ei] and _pendent_at(g, w, ei) for ei in hang)
            heavy = len(hang) - (1 if pendent else 0) >= g.k
            self._cache[w] = (pendent, heavy)
        return self._cache[w]

    def pendent(self, w: int) -> bool:
        return self._info(w)[0]

    def heavy(self, w: int) -> bool:
        return self._info(w)[1]


def classify(g: UniformHypergraph, matching: Optional[Matching] = None) -> ClassLabel:
    """Locate the unique cycle and assign the U / Gamma class tags.

    When no subclass vertex is heavy the split tags (``U21bar``/``U22bar``,
    ``G11bar``/``G12bar``) are both set: the hanging star is empty and the
    two placements coincide.
    """
    if not is_connected(g):
        raise ClassificationError("classify: hypergraph is not connected")
    r = cyclomatic_number(g)
    if r != 1:
        raise ClassificationError(f"classify: cyclomatic number is {r}, not 1")
    if matching is None:
        matching = find_perfect_matching(g)
        if matching is None:
            raise ClassificationError("classify: no perfect matching")
    elif not matching.perfect or matching.n != g.n or not all(g.has_edge(e) for e in matching.edges):
        raise ClassificationError("classify: supplied matching is not a perfect matching of G")

    cyc = find_incidence_cycle(g)
    assert cyc is not None
    m_idx = set(matching.edge_indices(g))
    cyc_edges = set(cyc.edges)
    on_cycle = [ei for ei in cyc.edges if ei in m_idx]
    att = _Attachments(g, cyc_edges)
    tags: set[str] = set()

    if len(cyc) == 2:
        kind = "Gamma"
        u1, u2 = cyc.vertices
        if on_cycle:
            tags.add("G1")
            et1 = on_cycle[0]
            et2 = next(ei for ei in cyc.edges if ei != et1)
            inner1 = [v for v in g.edges[et1] if v not in (u1, u2)]
            inner2 = [v for v in g.edges[et2] if v not in (u1, u2)]
            if all(len(g.incidence[v]) == 1 for v in inner1) and all(att.pendent(v) for v in inner2):
                heavy = [v for v in g.edges[et2] if att.heavy(v)]
                if len(heavy) <= 1:
                    tags.add("G1bar")
                    if not heavy or heavy[0] in (u1, u2):
                        tags.add("G11bar")
                    if not heavy or heavy[0] not in (u1, u2):
                        tags.add("G12bar")
        else:
            tags.add("G2")
            allv = set(g.edges[cyc.edges[0]]) | set(g.edges[cyc.edges[1]])
            if all(att.pendent(v) for v in allv) and sum(att.heavy(v) for v in (u1, u2)) <= 1:
                tags.add("G2bar")
    else:
        kind = "U"
        tags.add("U2" if on_cycle else "U1")
        if len(cyc) == 3:
            cv = cyc.vertices
            if not on_cycle:
                allv = {v for ei in cyc.edges for v in g.edges[ei]}
                if all(att.pendent(v) for v in allv) and sum(att.heavy(v) for v in cv) <= 1:
                    tags.add("U1bar")
            else:
                for pos, e1 in enumerate(cyc.edges):
                    if e1 not in m_idx:
                        continue
                    a, b = cv[pos], cv[(pos + 1) % 3]
                    c = cv[(pos + 2) % 3]
                    others = [ei for ei in cyc.edges if ei != e1]
                    inner1 = [v for v in g.edges[e1] if v not in (a, b)]
                    rest = {v for ei in others for v in g.edges[ei]} - {a, b}
                    if not all(len(g.incidence[v]) == 1 for v in inner1):
                        continue
                    if not all(att.pendent(v) for v in rest):
                        continue
                    heavy_c = [v for v in (a, b, c) if att.heavy(v)]
                    if len(heavy_c) > 1 or any(att.heavy(v) for v in rest - {c}):
                        continue
                    tags.add("U2bar")
                    if not heavy_c or heavy_c[0] in (a, b):
                        tags.add("U21bar")
                    if not heavy_c or heavy_c[0] == c:
                        tags.add("U22bar")
    return ClassLabel(kind, len(cyc), len(on_cycle), frozenset(tags))
