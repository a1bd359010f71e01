"""Pairwise storage compatibility and the labeled compatibility DAG."""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constraints import ConstraintSet, TimedDatum, chrono_key


class Compat(str, Enum):
    R = "R"
    F = "F"
    L = "L"
    INCOMPATIBLE = "-"

    @property
    def code(self) -> int:
        return _CODES[self]


_CODES = {Compat.INCOMPATIBLE: 0, Compat.R: 1, Compat.F: 2, Compat.L: 3}
_FROM_CODE = {v: k for k, v in _CODES.items()}


class MultiReadError(ValueError):
    pass


def classify_pair(a: TimedDatum, b: TimedDatum) -> Compat:
    """Storage kind able to hold both `a` and the later datum `b`.

    Register when the lifetimes do not overlap, FIFO when `b` arrives while
    `a` is resident but leaves after it, LIFO when `b` is read before `a` is
    first read.
    """
    if a.tau_min > b.tau_min:
        raise ValueError(f"unordered pair: {a.id!r} written after {b.id!r}")
    if b.tau_min >= a.tau_max:
        return Compat.R
    if b.tau_min > a.tau_min and b.tau_first > a.tau_max and b.tau_min < a.tau_max:
        return Compat.F
    if a.tau_min < b.tau_min and a.tau_first > b.tau_max:
        return Compat.L
    return Compat.INCOMPATIBLE


def label_matrix(nodes: list[TimedDatum]) -> np.ndarray:
    """Vectorized classify_pair over every ordered pair (i < j)."""
    n = len(nodes)
    tmin = np.array([d.tau_min for d in nodes], dtype=np.int64)
    tfirst = np.array([d.tau_first for d in nodes], dtype=np.int64)
    tmax = np.array([d.tau_max for d in nodes], dtype=np.int64)
    a_min, a_first, a_max = tmin[:, None], tfirst[:, None], tmax[:, None]
    b_min, b_first, b_max = tmin[None, :], tfirst[None, :], tmax[None, :]

    reg = b_min >= a_max
    fifo = ~reg & (b_min > a_min) & (b_first > a_max) & (b_min < a_max)
    lifo = ~reg & ~fifo & (a_min < b_min) & (a_first > b_max)
    out = np.zeros((n, n), dtype=np.int8)
    out[reg] = 1
    out[fifo] = 2
    out[lifo] = 3
    return np.triu(out, k=1)


@dataclass(frozen=True, eq=False)
class CompatGraph:
    """Chronologically ordered data plus an upper-triangular label matrix.

    Node i precedes node j iff i < j.  The polar source and sink are implicit.
    """
    nodes: tuple[TimedDatum, ...]
    labels: np.ndarray

    def __post_init__(self):
        self.labels.setflags(write=False)

    def __len__(self):
        return len(self.nodes)

    def index(self, datum_id: str) -> int:
        for i, d in enumerate(self.nodes):
            if d.id == datum_id:
                return i
        raise KeyError(datum_id)

    def label(self, i: int, j: int) -> Compat:
        if i > j:
            i, j = j, i
        return _FROM_CODE[int(self.labels[i, j])]

    def adjacency(self, label: Compat) -> np.ndarray:
        return self.labels == label.code

    def edges(self) -> list[tuple[int, int, Compat]]:
        ii, jj = np.nonzero(self.labels)
        return [(int(i), int(j), _FROM_CODE[int(self.labels[i, j])]) for i, j in zip(ii, jj)]

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self.labels))

    def label_counts(self) -> dict[str, int]:
        return {c.value: int(np.count_nonzero(self.labels == c.code)) for c in (Compat.R, Compat.F, Compat.L)}

    def to_json(self) -> str:
        doc = {
            "nodes": [d.id for d in self.nodes],
            "edges": [[self.nodes[i].id, self.nodes[j].id, lab.value] for i, j, lab in self.edges()],
        }
        return json.dumps(doc, sort_keys=True) + "\n"


def build_graph(cs: ConstraintSet) -> CompatGraph:
    multi = [d.id for d in cs.data if not d.single_read]
    if multi:
        raise MultiReadError(f"synthesis supports single-read data only; multi-read: {', '.join(multi[:10])}")
    nodes = sorted(cs.data, key=chrono_key)
    return CompatGraph(tuple(nodes), label_matrix(nodes))


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _dot_id(s: str) -> str:
    return f'"{_dot_escape(s)}"'


def export_dot(g: CompatGraph, name: str = "compat") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for d in g.nodes:
        lines.append(f'  {_dot_id(d.id)} [label="{_dot_escape(d.id)}\\n[{d.tau_min},{d.tau_max}]"];')
    for i, j, lab in g.edges():
        lines.append(f'  {_dot_id(g.nodes[i].id)} -> {_dot_id(g.nodes[j].id)} [label="{lab.value}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
