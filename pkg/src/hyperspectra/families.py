"""Builders for the named hypergraph families and the two transformations.

Every builder returns a :class:`LabeledHypergraph`: the hypergraph plus a
name for every vertex and every edge. Named vertices follow the figures
(``v1``, ``v2``, ``v3``, ``v1_1`` for v_{1,1}, ``u0``, ``u1``, ``u2``,
``u2_1`` for u_{2,1}); named edges are ``e1..el`` for linear cycles, ``et1``
and ``et2`` for the two edges of C_2, ``g1..ga`` for star edges, and
``p@<vertex>`` for the pendent edge attached at a vertex.

Fresh vertices always take the next unused index, so builds are
reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import InputError, StructureError
from .hypergraph import Edge, Matching, UniformHypergraph, is_connected

FAMILIES = ("S", "C_linear", "C2", "A", "B", "D", "I", "J", "L")

# minimum size parameter per family
_MIN_PARAM = {"S": 1, "C_linear": 3, "C2": 0, "A": 3, "B": 2, "D": 2, "I": 1, "J": 1, "L": 2}


@dataclass(frozen=True)
class LabeledHypergraph:
    graph: UniformHypergraph
    labels: dict[str, int]
    edge_labels: dict[str, int]
    matching: Optional[Matching] = None

    def __post_init__(self):
        if len(set(self.labels.values())) != len(self.labels):
            raise InputError("vertex labels must be injective")
        if self.matching is not None and not self.matching.perfect:
            raise InputError("recorded matching is not perfect")

    def __getitem__(self, name: str) -> int:
        return self.labels[name]

    def edge(self, name: str) -> Edge:
        return self.graph.edges[self.edge_labels[name]]

    @property
    def vertex_names(self) -> dict[int, str]:
        return {v: s for s, v in self.labels.items()}

    @property
    def edge_names(self) -> dict[int, str]:
        return {i: s for s, i in self.edge_labels.items()}

    def sidecar(self) -> dict:
        """Label map and matching edge indices, for the JSON sidecar file."""
        out = {
            "labels": dict(sorted(self.labels.items(), key=lambda kv: kv[1])),
            "edge_labels": dict(sorted(self.edge_labels.items(), key=lambda kv: kv[1])),
        }
        out["matching"] = self.matching.edge_indices(self.graph) if self.matching else None
        return out


class _Draft:
    """Mutable staging area; frozen into a LabeledHypergraph by ``finish``."""

    def __init__(self, k: int):
        self.k = k
        self.n = 0
        self.labels: dict[str, int] = {}
        self.edges: list[tuple[str, Edge]] = []

    def vertex(self, name: str) -> int:
        if name in self.labels:
            raise InputError(f"duplicate vertex label {name!r}")
        self.labels[name] = self.n
        self.n += 1
        return self.n - 1

    def add_edge(self, name: str, verts: Sequence[int]):
        if any(name == nm for nm, _ in self.edges):
            raise InputError(f"duplicate edge label {name!r}")
        self.edges.append((name, tuple(sorted(verts))))

    @classmethod
    def of(cls, lh: LabeledHypergraph) -> "_Draft":
        d = cls(lh.graph.k)
        d.n = lh.graph.n
        d.labels = dict(lh.labels)
        names = lh.edge_names
        d.edges = [(names[i], e) for i, e in enumerate(lh.graph.edges)]
        return d

    def finish(self, matching_names: Optional[Sequence[str]] = None) -> LabeledHypergraph:
        tuples = [e for _, e in self.edges]
        if len(set(tuples)) != len(tuples):
            raise StructureError("construction produced multiple edges")
        g = UniformHypergraph(self.k, self.n, tuple(tuples))
        edge_labels = {name: g.index_of(e) for name, e in self.edges}
        matching = None
        if matching_names is not None:
            by_name = dict(self.edges)
            matching = Matching(tuple(by_name[nm] for nm in matching_names), g.n)
        return LabeledHypergraph(g, self.labels, edge_labels, matching)


def _check_k(k: int, minimum: int = 3):
    if not isinstance(k, int) or k < minimum:
        raise InputError(f"uniformity k must be an integer >= {minimum}, got {k!r}")


def build_star(a: int, k: int) -> LabeledHypergraph:
    """S_{a,k}: ``a`` edges sharing only the center ``u0``."""
    _check_k(k, 2)
    if not isinstance(a, int) or a < 1:
        raise InputError(f"star needs a >= 1 edges, got {a!r}")
    d = _Draft(k)
    u0 = d.vertex("u0")
    for i in range(1, a + 1):
        leaves = [d.vertex(f"g{i}_{j}") for j in range(1, k)]
        d.add_edge(f"g{i}", [u0, *leaves])
    return d.finish()


def build_linear_cycle(l: int, k: int) -> LabeledHypergraph:
    """C_l with e_i = {v_i, v_{i,1}, .., v_{i,k-2}, v_{i+1}}."""
    _check_k(k)
    if not isinstance(l, int) or l < 3:
        raise InputError(f"linear cycle needs l >= 3, got {l!r}")
    d = _Draft(k)
    vs = [d.vertex(f"v{i}") for i in range(1, l + 1)]
    for i in range(1, l + 1):
        inner = [d.vertex(f"v{i}_{j}") for j in range(1, k - 1)]
        d.add_edge(f"e{i}", [vs[i - 1], *inner, vs[i % l]])
    return d.finish()


def build_c2(k: int) -> LabeledHypergraph:
    """Two edges sharing exactly ``u1`` and ``u2``."""
    _check_k(k)
    d = _Draft(k)
    u1, u2 = d.vertex("u1"), d.vertex("u2")
    for t in (1, 2):
        inner = [d.vertex(f"u{t}_{j}") for j in range(1, k - 1)]
        d.add_edge(f"et{t}", [u1, *inner, u2])
    return d.finish()


def coalesce(g: LabeledHypergraph, v: str, h: LabeledHypergraph, w: str) -> LabeledHypergraph:
    """G(v, w)H: disjoint union with ``v`` of G identified with ``w`` of H."""
    if g.graph.k != h.graph.k:
        raise InputError("coalesce needs equal uniformity")
    if v not in g.labels or w not in h.labels:
        raise InputError(f"unknown vertex label {v if v not in g.labels else w!r}")
    d = _Draft.of(g)
    target = g.labels[v]
    remap = {}
    for name, x in sorted(h.labels.items(), key=lambda kv: kv[1]):
        if name == w:
            remap[x] = target
        else:
            remap[x] = d.vertex(_fresh_name(name, d.labels))
    for x in range(h.graph.n):
        if x not in remap:
            remap[x] = d.n
            d.n += 1
    h_names = h.edge_names
    taken = {nm for nm, _ in d.edges}
    for i, e in enumerate(h.graph.edges):
        name = _fresh_name(h_names[i], taken)
        taken.add(name)
        d.add_edge(name, [remap[x] for x in e])
    return d.finish()


def _fresh_name(name: str, taken) -> str:
    # labels clashing with the host get primes appended
    while name in taken:
        name += "'"
    return name


def attach_pendent(g: LabeledHypergraph, v: Union[str, int]) -> LabeledHypergraph:
    """Add one edge containing ``v`` and k-1 fresh vertices."""
    d = _Draft.of(g)
    _attach(d, v)
    return d.finish()


def _attach(d: _Draft, v: Union[str, int]):
    if isinstance(v, str):
        if v not in d.labels:
            raise InputError(f"unknown vertex label {v!r}")
        x, base = d.labels[v], v
    else:
        if not 0 <= v < d.n:
            raise InputError(f"vertex {v} outside 0..{d.n - 1}")
        x = v
        base = next((nm for nm, i in d.labels.items() if i == v), f"#{v}")
    name = f"p@{base}"
    while any(nm == name for nm, _ in d.edges):
        name += "'"
    fresh = [d.vertex(f"{name}.{j}") for j in range(1, d.k)]
    d.add_edge(name, [x, *fresh])


@dataclass(frozen=True)
class FamilySpec:
    """Family tag plus its uniformity and size parameter (a, l, or m)."""

    family: str
    k: int
    size: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        _check_k(self.k, 2 if self.family == "S" else 3)
        if self.family == "C2":
            return
        if not isinstance(self.size, int) or self.size < _MIN_PARAM[self.family]:
            raise InputError(
                f"family {self.family} needs size parameter >= {_MIN_PARAM[self.family]}, got {self.size!r}"
            )

    @property
    def n(self) -> Optional[int]:
        if self.family in "ABDIJL":
            return self.size * self.k * (self.k - 1)
        return None


def _base(center_graph: LabeledHypergraph, center: str, a: int) -> LabeledHypergraph:
    if a <= 0:
        return center_graph
    return coalesce(center_graph, center, build_star(a, center_graph.graph.k), "u0")


def _pendents_except(base: LabeledHypergraph, excluded: Sequence[str], extra_matching: Sequence[str]):
    d = _Draft.of(base)
    skip = set()
    for nm in excluded:
        skip.update(base.edge(nm))
    names = base.vertex_names
    for x in range(base.graph.n):
        if x not in skip:
            _attach(d, names[x])
    pend = [nm for nm, _ in d.edges if nm.startswith("p@")]
    return d.finish(list(extra_matching) + pend)


def build_family(spec: Union[FamilySpec, str], m: Optional[int] = None, k: Optional[int] = None) -> LabeledHypergraph:
    """Build a family member.

    Accepts a :class:`FamilySpec` or ``build_family("L", m, k)``. For
    A, B, D, I, J, L the size parameter is m and the result has
    ``n = m k (k-1)`` vertices with its canonical perfect matching recorded.
    """
    if isinstance(spec, str):
        spec = FamilySpec(spec, k if k is not None else 3, m)
    f, k, s = spec.family, spec.k, spec.size
    if f == "S":
        return build_star(s, k)
    if f == "C_linear":
        return build_linear_cycle(s, k)
    if f == "C2":
        return build_c2(k)
    if f in "ABD":
        c3 = build_linear_cycle(3, k)
        if f == "A":
            return _pendents_except(_base(c3, "v1", s - 3), [], [])
        skipped = "e1" if f == "B" else "e2"
        return _pendents_except(_base(c3, "v1", s - 2), [skipped], [skipped])
    c2 = build_c2(k)
    if f == "L":
        return _pendents_except(_base(c2, "u1", s - 2), [], [])
    center = "u1" if f == "I" else "u2_1"
    return _pendents_except(_base(c2, center, s - 1), ["et1"], ["et1"])


def star_center(family: str) -> str:
    """Label of the vertex carrying the star edges g_i in each family."""
    return {"A": "v1", "B": "v1", "D": "v1", "I": "u1", "L": "u1", "J": "u2_1"}[family]


# -- transformations --------------------------------------------------------


@dataclass(frozen=True)
class MoveResult:
    """Outcome of an edge move; ``graph`` is ``None`` when edges collide."""

    edges: tuple[Edge, ...]
    k: int
    n: int
    multiple_edges: bool
    connected: bool
    graph: Optional[UniformHypergraph] = field(default=None, compare=False)

    def require_simple(self) -> UniformHypergraph:
        if self.graph is None:
            raise StructureError("edge move produced multiple edges")
        return self.graph


def move_edges(
    g: UniformHypergraph,
    edges: Sequence[Sequence[int]],
    from_vertices: Sequence[int],
    to_vertex: int,
) -> MoveResult:
    """Replace each e_i by (e_i minus v_i) plus u.

    Structural problems of the result (multiple edges, disconnection) are
    reported as flags, not raised.
    """
    if len(edges) != len(from_vertices):
        raise InputError("edges and from_vertices must have equal length")
    if not 0 <= to_vertex < g.n:
        raise InputError(f"vertex {to_vertex} outside 0..{g.n - 1}")
    idx = [g.index_of(e) for e in edges]
    if len(set(idx)) != len(idx):
        raise InputError("an edge is listed twice")
    new = list(g.edges)
    for i, v in zip(idx, from_vertices):
        e = g.edges[i]
        if to_vertex in e:
            raise InputError(f"target vertex {to_vertex} already lies in edge {e}")
        if v not in e:
            raise InputError(f"vertex {v} is not in edge {e}")
        new[i] = tuple(sorted([x for x in e if x != v] + [to_vertex]))
    multiple = len(set(new)) != len(new)
    graph = None
    connected = False
    if not multiple:
        graph = UniformHypergraph(g.k, g.n, tuple(new))
        connected = is_connected(graph)
    else:
        connected = is_connected(UniformHypergraph(g.k, g.n, tuple(set(new))))
    return MoveResult(tuple(sorted(new)), g.k, g.n, multiple, connected, graph)


def edge_release(g: UniformHypergraph, e: Sequence[int], u: int) -> UniformHypergraph:
    """Move every edge meeting ``e`` at a vertex other than ``u`` onto ``u``.

    Edges already incident with ``u`` stay put.
    """
    ei = g.index_of(e)
    e = g.edges[ei]
    if u not in e:
        raise InputError(f"vertex {u} is not in edge {e}")
    if g.is_pendent(ei) or all(len(g.incidence[x]) == 1 for x in e):
        raise InputError(f"edge {e} is pendent (or isolated); edge release needs a non-pendent edge")
    moved, froms = [], []
    for v in e:
        if v == u:
            continue
        for fi in g.incidence[v]:
            f = g.edges[fi]
            if fi == ei or u in f:
                continue
            moved.append(f)
            froms.append(v)
    if not moved:
        return g
    res = move_edges(g, moved, froms, u)
    return res.require_simple()
