"""Greedy assignment of data to FIFO/LIFO/register hierarchical nodes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .compat import Compat, CompatGraph
from .constraints import TimedDatum
from .structures import StructPath, longest_paths, path_depth


class Kind(str, Enum):
    FIFO = "fifo"
    LIFO = "lifo"
    REGISTER = "reg"


_KIND_OF_LABEL = {Compat.F: Kind.FIFO, Compat.L: Kind.LIFO}


@dataclass(frozen=True)
class Weights:
    depth: float = 1.0
    demux: float = 0.5
    util: float = 1.0

    def __post_init__(self):
        for name in ("depth", "demux", "util"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"weight {name} must be finite and >= 0, got {v}")

    @classmethod
    def parse(cls, text: str) -> "Weights":
        """Parse ``depth=X,demux=Y,util=Z``; omitted keys keep their defaults."""
        values = {}
        for part in filter(None, (s.strip() for s in text.split(","))):
            key, sep, val = part.partition("=")
            key = key.strip()
            if not sep or key not in ("depth", "demux", "util"):
                raise ValueError(f"bad weight spec {part!r}; expected depth=,demux=,util=")
            values[key] = float(val)
        return cls(**values)

    def __str__(self):
        return f"depth={self.depth:g},demux={self.demux:g},util={self.util:g}"


@dataclass(frozen=True)
class Metrics:
    depth: int
    demux: int
    utilization: float


@dataclass(frozen=True)
class HierNode:
    kind: Kind
    depth: int
    members: tuple[TimedDatum, ...]
    lifetimes: tuple[tuple[int, int], ...]

    @property
    def ids(self) -> list[str]:
        return [d.id for d in self.members]

    @property
    def start(self) -> int:
        return self.lifetimes[0][0]

    @classmethod
    def register(cls, d: TimedDatum) -> "HierNode":
        return cls(Kind.REGISTER, 1, (d,), ((d.tau_min, d.tau_max),))

    @classmethod
    def from_path(cls, g: CompatGraph, p: StructPath, depth: int) -> "HierNode":
        members = tuple(p.data(g))
        first, last = members[0], members[-1]
        if p.label is Compat.F:
            span = (first.tau_min, last.tau_max)
        else:
            span = (first.tau_min, first.tau_max)
        return cls(_KIND_OF_LABEL[p.label], depth, members, (span,))

    def describe(self) -> str:
        lo, hi = self.lifetimes[0]
        return f"{self.kind.value}(depth={self.depth}) [{', '.join(self.ids)}] life=[{lo},{hi}]"


def metrics(members: list[TimedDatum], depth: int, span: tuple[int, int]) -> Metrics:
    ports = {d.write_port for d in members} | {r.port for d in members for r in d.reads}
    busy = sum(d.tau_max - d.tau_min for d in members)
    util = busy / (depth * (span[1] - span[0]))
    return Metrics(depth, len(ports), util)


def score(n_members: int, m: Metrics, w: Weights) -> float:
    """Higher is better: cells saved by sharing, plus utilization, minus port fan-in/out."""
    return w.depth * (n_members - m.depth) + w.util * m.utilization - w.demux * m.demux


@dataclass(frozen=True)
class Candidate:
    path: StructPath
    node: HierNode
    metrics: Metrics
    score: float

    def sort_key(self):
        # best first: score, more members, earliest start, node indices
        return (-self.score, -len(self.path), self.node.members[0].tau_min, self.path.nodes)


def candidates(g: CompatGraph, alive: np.ndarray, w: Weights) -> list[Candidate]:
    out = []
    for label in (Compat.F, Compat.L):
        for p in longest_paths(g, label, alive):
            node = HierNode.from_path(g, p, path_depth(g, p))
            m = metrics(list(node.members), node.depth, node.lifetimes[0])
            out.append(Candidate(p, node, m, score(len(p), m, w)))
    out.sort(key=Candidate.sort_key)
    return out


@dataclass
class Assignment:
    structures: list[HierNode]
    leftovers: list[TimedDatum]
    trace: list[str] = field(default_factory=list)

    @property
    def nodes(self) -> list[HierNode]:
        """Structures followed by one depth-1 register per leftover datum."""
        return self.structures + [HierNode.register(d) for d in self.leftovers]


def assign(g: CompatGraph, w: Weights = Weights()) -> Assignment:
    """Repeatedly fuse the best-scoring FIFO/LIFO path until none of length >= 2 is left."""
    alive = np.ones(len(g), dtype=bool)
    structures: list[HierNode] = []
    trace: list[str] = []
    while True:
        cands = candidates(g, alive, w)
        if not cands:
            break
        best = cands[0]
        structures.append(best.node)
        alive[list(best.path.nodes)] = False
        trace.append(f"iter {len(structures)}: {len(cands)} candidates, picked {best.node.describe()} "
                     f"score={best.score:.6f} demux={best.metrics.demux} util={best.metrics.utilization:.6f}")
    leftovers = [g.nodes[i] for i in np.flatnonzero(alive)]
    trace.append(f"{len(leftovers)} datum(s) left as registers")
    return Assignment(structures, leftovers, trace)
