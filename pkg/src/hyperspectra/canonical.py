"""Canonical forms of small hypergraphs by individualization-refinement.

Vertices with identical incident-edge sets (twins) are interchangeable, so
they are collapsed into one weighted node before the search. The remaining
structure is the bipartite incidence graph between twin classes and edges.
Color refinement produces an equitable ordered partition; the search then
individualizes class nodes of the first non-singleton class cell, pruning
children that lie in the same orbit of automorphisms already discovered.
"""

from __future__ import annotations

import json
from typing import Optional

from .errors import CapacityError
from .hypergraph import UniformHypergraph

DEFAULT_CAP = 24


def default_cap() -> int:
    return DEFAULT_CAP


class _Canonizer:
    def __init__(self, g: UniformHypergraph):
        self.g = g
        groups: dict[tuple[int, ...], list[int]] = {}
        for v in range(g.n):
            groups.setdefault(g.incidence[v], []).append(v)
        self.classes = list(groups.values())
        self.class_edges = list(groups.keys())
        c = len(self.classes)
        self.c = c
        a = g.num_edges
        adj: list[list[int]] = [[] for _ in range(c + a)]
        for ci, eds in enumerate(self.class_edges):
            for ei in eds:
                adj[ci].append(c + ei)
                adj[c + ei].append(ci)
        self.adj = adj
        self.size = [len(x) for x in self.classes]
        self.best: Optional[tuple] = None
        self.first: Optional[tuple] = None
        self.first_pos: Optional[list[int]] = None
        self.best_pos: Optional[list[int]] = None
        self.gens: list[list[int]] = []

    # -- partitions are lists of cells (lists of node ids), order matters --

    def initial(self) -> list[list[int]]:
        keys = {}
        for x in range(len(self.adj)):
            if x < self.c:
                keys[x] = (0, self.size[x], len(self.adj[x]))
            else:
                keys[x] = (1, len(self.adj[x]))
        cells: dict[tuple, list[int]] = {}
        for x, key in keys.items():
            cells.setdefault(key, []).append(x)
        return [cells[key] for key in sorted(cells)]

    def refine(self, cells: list[list[int]]) -> list[list[int]]:
        while True:
            cell_of = {}
            for i, cell in enumerate(cells):
                for x in cell:
                    cell_of[x] = i
            new_cells = []
            for i, cell in enumerate(cells):
                if len(cell) == 1:
                    new_cells.append(cell)
                    continue
                split: dict[tuple, list[int]] = {}
                for x in cell:
                    sig = tuple(sorted(cell_of[y] for y in self.adj[x]))
                    split.setdefault(sig, []).append(x)
                for sig in sorted(split):
                    new_cells.append(split[sig])
            if len(new_cells) == len(cells):
                return new_cells
            cells = new_cells

    def target(self, cells: list[list[int]]) -> Optional[int]:
        for i, cell in enumerate(cells):
            if len(cell) > 1 and cell[0] < self.c:
                return i
        return None

    def leaf(self, cells: list[list[int]]) -> tuple[tuple, list[int]]:
        """Certificate and class-node position map for a discrete partition."""
        pos = [0] * self.c
        start = [0] * self.c
        order = 0
        label = 0
        for cell in cells:
            x = cell[0]
            if x < self.c:
                pos[x] = order
                start[x] = label
                order += 1
                label += self.size[x]
        edges = []
        for ei, e in enumerate(self.g.edges):
            verts = []
            for x in self.adj[self.c + ei]:
                verts.extend(range(start[x], start[x] + self.size[x]))
            edges.append(tuple(sorted(verts)))
        edges.sort()
        return tuple(edges), pos

    def _record_automorphism(self, pos_a: list[int], pos_b: list[int]):
        inv_b = [0] * self.c
        for x, p in enumerate(pos_b):
            inv_b[p] = x
        gamma = [inv_b[pos_a[x]] for x in range(self.c)]
        if any(gamma[x] != x for x in range(self.c)):
            self.gens.append(gamma)

    def _orbit_roots(self, fixed: list[int], cell: list[int]) -> dict[int, int]:
        parent = {x: x for x in range(self.c)}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for gamma in self.gens:
            if all(gamma[f] == f for f in fixed):
                for x in range(self.c):
                    rx, ry = find(x), find(gamma[x])
                    if rx != ry:
                        parent[rx] = ry
        return {x: find(x) for x in cell}

    def search(self, cells: list[list[int]], path: list[int]):
        cells = self.refine(cells)
        t = self.target(cells)
        if t is None:
            cert, pos = self.leaf(cells)
            if self.first is None:
                self.first, self.first_pos = cert, pos
                self.best, self.best_pos = cert, pos
                return
            if cert == self.first:
                self._record_automorphism(self.first_pos, pos)
            elif cert == self.best:
                self._record_automorphism(self.best_pos, pos)
            elif cert < self.best:
                self.best, self.best_pos = cert, pos
            return
        cell = cells[t]
        done_roots: set[int] = set()
        for v in sorted(cell):
            roots = self._orbit_roots(path, cell)
            if roots[v] in {roots[d] for d in done_roots}:
                continue
            child = cells[:t] + [[v], [x for x in cell if x != v]] + cells[t + 1:]
            self.search(child, path + [v])
            done_roots.add(v)

    def run(self) -> tuple:
        self.search(self.initial(), [])
        return self.best


def canonical_edges(g: UniformHypergraph, cap: Optional[int] = None) -> tuple:
    """Canonically relabeled, sorted edge tuple."""
    cap = default_cap() if cap is None else cap
    if g.n > cap:
        raise CapacityError(f"canonical form needs n <= {cap}, got n = {g.n}")
    if g.num_edges == 0:
        return ()
    return _Canonizer(g).run()


def canonical_form(g: UniformHypergraph, cap: Optional[int] = None) -> bytes:
    """Byte string equal for two hypergraphs iff they are isomorphic."""
    edges = canonical_edges(g, cap)
    payload = {"k": g.k, "n": g.n, "edges": [list(e) for e in edges]}
    return json.dumps(payload, separators=(",", ":")).encode()


def are_isomorphic(g1: UniformHypergraph, g2: UniformHypergraph, cap: Optional[int] = None) -> bool:
    return canonical_form(g1, cap) == canonical_form(g2, cap)
