"""Sharing physical elements between structures whose lifetimes never overlap."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .allocation import HierNode, Kind, Weights


@dataclass(frozen=True)
class MergedElement:
    structures: tuple[HierNode, ...]

    def __post_init__(self):
        object.__setattr__(self, "structures", tuple(sorted(self.structures, key=_node_key)))

    @property
    def depth(self) -> int:
        return max(s.depth for s in self.structures)

    @property
    def modes(self) -> list[tuple[tuple[int, int], HierNode]]:
        return sorted(((iv, s) for s in self.structures for iv in s.lifetimes), key=lambda m: m[0])

    @property
    def lifetimes(self) -> tuple[tuple[int, int], ...]:
        return tuple(iv for iv, _ in self.modes)

    @property
    def kinds(self) -> set[Kind]:
        return {s.kind for s in self.structures}

    @property
    def members(self) -> list:
        return [d for s in self.structures for d in s.members]


def _node_key(s: HierNode):
    return (s.lifetimes[0], s.kind.value, tuple(s.ids))


Storable = Union[HierNode, MergedElement]


def _disjoint(a: tuple[int, int], b: tuple[int, int]) -> bool:
    # touching at one cycle is fine: the old datum leaves before the new one arrives
    return a[1] <= b[0] or b[1] <= a[0]


def register_compatible(x: Storable, y: Storable) -> bool:
    return all(_disjoint(a, b) for a in x.lifetimes for b in y.lifetimes)


def _as_element(x: Storable) -> MergedElement:
    return x if isinstance(x, MergedElement) else MergedElement((x,))


def optimize(nodes: Sequence[Storable], w: Weights = Weights(),
             trace: Optional[list[str]] = None) -> list[MergedElement]:
    """Greedy pairwise merging of register-compatible elements.

    Each step merges the compatible pair that frees the most cells (the
    smaller of the two depths), earliest pair first on ties; on plain
    registers this packs like the left-edge algorithm.  A merged element is
    compatible with a third one iff both parts were, so the compatibility
    matrix is updated by a row-wise AND.  `w` is accepted for symmetry with
    assignment; the cell objective fixes the merge order on its own.
    """
    elems = sorted((_as_element(x) for x in nodes), key=lambda e: _node_key(e.structures[0]))
    k = len(elems)
    depth = np.array([e.depth for e in elems], dtype=np.int64)
    compat = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(i + 1, k):
            compat[i, j] = compat[j, i] = register_compatible(elems[i], elems[j])
    alive = np.ones(k, dtype=bool)
    if trace is not None:
        trace.append(f"{k} element(s), {int(depth.sum())} cell(s) before merging")

    while k > 1:
        live = np.triu(compat & alive[:, None] & alive[None, :], k=1)
        saving = np.where(live, np.minimum(depth[:, None], depth[None, :]), 0)
        flat = int(np.argmax(saving))  # row-major: earliest (i, j) among the best
        if saving.flat[flat] == 0:
            break
        i, j = divmod(flat, k)
        merged = MergedElement(elems[i].structures + elems[j].structures)
        if trace is not None:
            trace.append(f"merge {_label(elems[i])} + {_label(elems[j])} -> depth {merged.depth}, "
                         f"saves {int(saving[i, j])} cell(s)")
        elems[i] = merged
        depth[i] = merged.depth
        compat[i] &= compat[j]
        compat[:, i] = compat[i]
        alive[j] = False

    out = [elems[i] for i in np.flatnonzero(alive)]
    if trace is not None:
        trace.append(f"{len(out)} element(s), {int(depth[alive].sum())} cell(s) after merging")
    return out


def _label(e: MergedElement) -> str:
    return "{" + "; ".join(f"{s.kind.value}:{','.join(s.ids)}" for s in e.structures) + "}"


def total_cells(elems: Sequence[Storable]) -> int:
    return sum(e.depth for e in elems)


def optimal_merge_cells(nodes: Sequence[Storable], limit: int = 10) -> int:
    """Exhaustive minimum of total cells over all legal groupings of `nodes`.

    Enumerates set partitions whose blocks are pairwise register compatible;
    meant for small inputs only.
    """
    items = [_as_element(x) for x in nodes]
    k = len(items)
    if k > limit:
        raise ValueError(f"exhaustive merge search limited to {limit} elements, got {k}")
    ok = [[register_compatible(a, b) for b in items] for a in items]
    best = [sum(e.depth for e in items)]

    def rec(i, blocks, cost):
        if cost >= best[0]:
            return
        if i == k:
            best[0] = cost
            return
        d = items[i].depth
        for b in blocks:
            if all(ok[i][m] for m in b[0]):
                old = b[1]
                b[0].append(i)
                b[1] = max(old, d)
                rec(i + 1, blocks, cost - old + b[1])
                b[0].pop()
                b[1] = old
        blocks.append([[i], d])
        rec(i + 1, blocks, cost + d)
        blocks.pop()

    rec(0, [], 0)
    return best[0]
