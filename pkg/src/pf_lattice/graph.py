"""Support digraphs and strongly connected components.

Edge convention: a positive entry (i, j) is the edge j -> i, so a coordinate set
is an invariant ideal exactly when it is closed under successors.
"""

from __future__ import annotations

import numpy as np


def support_digraph(matrices, threshold: float) -> list[list[int]]:
    """Successor lists of the union support digraph (self loops dropped)."""
    mats = [np.asarray(m, dtype=float) for m in matrices]
    n = mats[0].shape[0]
    pos = np.zeros((n, n), dtype=bool)
    for m in mats:
        pos |= np.abs(m) > threshold
    np.fill_diagonal(pos, False)
    return [np.flatnonzero(pos[:, j]).tolist() for j in range(n)]


def relation_digraph(edges) -> list[list[int]]:
    """Successor lists for a boolean relation with edges[i][j] meaning j -> i."""
    e = np.array(edges, dtype=bool)
    np.fill_diagonal(e, False)
    return [np.flatnonzero(e[:, j]).tolist() for j in range(e.shape[0])]


def tarjan_scc(n: int, succ) -> list[list[int]]:
    """Strongly connected components, iterative Tarjan. Components come out in
    reverse topological order (sinks first); each is sorted."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, k = work[-1]
            if k < len(succ[v]):
                work[-1] = (v, k + 1)
                w = succ[v][k]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


class Condensation:
    """Component DAG of a digraph on {0..n-1}."""

    def __init__(self, n: int, succ):
        self.n = n
        self.components = sorted(tarjan_scc(n, succ), key=lambda c: c[0])
        self.component_of = [0] * n
        for k, comp in enumerate(self.components):
            for v in comp:
                self.component_of[v] = k
        self.successors: list[set[int]] = [set() for _ in self.components]
        for v in range(n):
            for w in succ[v]:
                a, b = self.component_of[v], self.component_of[w]
                if a != b:
                    self.successors[a].add(b)

    @property
    def strongly_connected(self) -> bool:
        return len(self.components) == 1

    def sinks(self) -> list[int]:
        return [k for k, s in enumerate(self.successors) if not s]

    def closed_order(self) -> list[int]:
        """Components ordered so every prefix union is successor-closed; ties go
        to the component holding the smallest coordinate."""
        placed: set[int] = set()
        order = []
        remaining = set(range(len(self.components)))
        while remaining:
            ready = [k for k in remaining if self.successors[k] <= placed]
            k = min(ready)  # components are indexed by their smallest coordinate
            order.append(k)
            placed.add(k)
            remaining.remove(k)
        return order
