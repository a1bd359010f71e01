"""Candidate FIFO/LIFO structures: label-homogeneous paths and their depths."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .compat import Compat, CompatGraph
from .constraints import TimedDatum


@dataclass(frozen=True)
class StructPath:
    label: Compat
    nodes: tuple[int, ...]  # chronological node indices in the graph

    def __len__(self):
        return len(self.nodes)

    def data(self, g: CompatGraph) -> list[TimedDatum]:
        return [g.nodes[i] for i in self.nodes]

    def ids(self, g: CompatGraph) -> list[str]:
        return [g.nodes[i].id for i in self.nodes]


def longest_paths(g: CompatGraph, label: Compat, alive: Optional[np.ndarray] = None) -> list[StructPath]:
    """One longest `label` path from every source of the label sub-DAG.

    Only nodes flagged in `alive` take part.  A source is a node with an
    outgoing `label` edge and no incoming one, so each returned path is
    maximal at both ends.  Among equally long continuations the earliest
    successor wins, which yields the lexicographically smallest path.
    """
    if label not in (Compat.F, Compat.L):
        raise ValueError(f"structures are FIFO or LIFO paths, not {label}")
    n = len(g)
    if n == 0:
        return []
    adj = g.adjacency(label)
    if alive is not None:
        adj = adj & alive[:, None] & alive[None, :]

    length = np.ones(n, dtype=np.int64)
    succ = np.full(n, -1, dtype=np.int64)
    has_out = adj.any(axis=1)
    for i in np.flatnonzero(has_out)[::-1]:
        nbrs = np.flatnonzero(adj[i])
        k = int(nbrs[np.argmax(length[nbrs])])
        succ[i] = k
        length[i] = length[k] + 1

    sources = np.flatnonzero(has_out & ~adj.any(axis=0))
    paths = []
    for s in sources:
        nodes = [int(s)]
        while succ[nodes[-1]] >= 0:
            nodes.append(int(succ[nodes[-1]]))
        paths.append(StructPath(label, tuple(nodes)))
    return paths


def lifo_depth(p: StructPath) -> int:
    """Every member of a LIFO path nests inside its predecessor, so all are co-resident."""
    if p.label is not Compat.L:
        raise ValueError(f"lifo_depth needs an L path, got {p.label.value}")
    return len(p.nodes)


def fifo_depth(g: CompatGraph, p: StructPath) -> int:
    """1 + the largest number of F edges entering a path node from earlier path nodes.

    Walks from the last node backwards and stops once the nodes left cannot
    beat the current maximum (node k has at most k predecessors on the path).
    """
    if p.label is not Compat.F:
        raise ValueError(f"fifo_depth needs an F path, got {p.label.value}")
    nodes = np.asarray(p.nodes, dtype=np.int64)
    fifo = g.adjacency(Compat.F)
    best = 0
    for k in range(len(nodes) - 1, 0, -1):
        if k <= best:
            break
        incoming = int(np.count_nonzero(fifo[nodes[:k], nodes[k]]))
        if incoming > best:
            best = incoming
    return 1 + best


def path_depth(g: CompatGraph, p: StructPath) -> int:
    return fifo_depth(g, p) if p.label is Compat.F else lifo_depth(p)


def occupancy_oracle(data: Iterable[TimedDatum]) -> int:
    """Peak number of simultaneously resident data.

    A datum occupies storage from its write until its last read; at a cycle
    where one leaves and another arrives the departure happens first.
    """
    events = []
    for d in data:
        events.append((d.tau_min, 1))
        events.append((d.tau_max, 0))
    events.sort()
    cur = peak = 0
    for _, arrive in events:
        cur += 1 if arrive else -1
        peak = max(peak, cur)
    return peak
