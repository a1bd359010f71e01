"""Constraint sets for block interleavers (frame reordering at fixed rates)."""
from __future__ import annotations

from dataclasses import dataclass

from .constraints import INPUT, OUTPUT, ConstraintSet, Port, Read, TimedDatum


class InfeasibleError(ValueError):
    def __init__(self, message: str, min_latency: int):
        self.min_latency = min_latency
        super().__init__(f"{message}; minimal feasible latency is {min_latency}")


def block_permutation(rows: int, cols: int) -> list[int]:
    """Row-written, column-read block interleaver: output k carries input pi[k]."""
    if rows < 1 or cols < 1:
        raise ValueError(f"rows and cols must be >= 1, got {rows}x{cols}")
    n = rows * cols
    return [(i % rows) * cols + i // rows for i in range(n)]


def identity_permutation(n: int) -> list[int]:
    return list(range(n))


@dataclass(frozen=True)
class InterleaverSpec:
    n: int
    permutation: tuple[int, ...]
    input_period: int = 1
    latency: int = 1
    output_period: int = 1

    def __post_init__(self):
        object.__setattr__(self, "permutation", tuple(self.permutation))
        if self.n < 0 or len(self.permutation) != self.n:
            raise ValueError(f"permutation has {len(self.permutation)} entries, expected {self.n}")
        if sorted(self.permutation) != list(range(self.n)):
            raise ValueError("permutation is not a bijection on [0, n)")
        if self.input_period < 1 or self.output_period < 1:
            raise ValueError("periods must be >= 1")
        if self.latency < 0:
            raise ValueError("latency must be >= 0")

    def ranks(self) -> list[int]:
        rank = [0] * self.n
        for pos, i in enumerate(self.permutation):
            rank[i] = pos
        return rank


def min_latency(spec: InterleaverSpec) -> int:
    """Smallest latency for which every datum is read strictly after it is written."""
    ranks = spec.ranks()
    worst = max((i * spec.input_period - ranks[i] * spec.output_period for i in range(spec.n)), default=0)
    return max(1, worst + 1)


def full_frame_latency(n: int, input_period: int = 1) -> int:
    """Latency at which the first read comes right after the last write (whole frame resident)."""
    return max(1, (n - 1) * input_period + 1)


def generate(spec: InterleaverSpec, in_port: str = "in", out_port: str = "out") -> ConstraintSet:
    need = min_latency(spec)
    if spec.latency < need:
        raise InfeasibleError(f"latency {spec.latency} reads some datum before it is written", need)
    ranks = spec.ranks()
    width = len(str(max(spec.n - 1, 0)))
    data = [
        TimedDatum(f"d{i:0{width}d}", in_port, i * spec.input_period,
                   (Read(spec.latency + ranks[i] * spec.output_period, out_port),))
        for i in range(spec.n)
    ]
    return ConstraintSet((Port(in_port, INPUT), Port(out_port, OUTPUT)), tuple(data), word_width=1)


def parse_scheme(scheme: str, n: int) -> list[int]:
    """``identity``, ``block:RxC`` or ``file:PATH`` (whitespace/comma separated indices)."""
    if scheme == "identity":
        return identity_permutation(n)
    kind, _, arg = scheme.partition(":")
    if kind == "block":
        r, _, c = arg.lower().partition("x")
        try:
            rows, cols = int(r), int(c)
        except ValueError:
            raise ValueError(f"bad block scheme {scheme!r}, expected block:ROWSxCOLS") from None
        if rows * cols != n:
            raise ValueError(f"block {rows}x{cols} holds {rows * cols} data, but n={n}")
        return block_permutation(rows, cols)
    if kind == "file":
        with open(arg, encoding="utf-8") as fh:
            perm = [int(tok) for tok in fh.read().replace(",", " ").replace("[", " ").replace("]", " ").split()]
        if len(perm) != n:
            raise ValueError(f"{arg}: {len(perm)} indices, expected {n}")
        return perm
    raise ValueError(f"unknown scheme {scheme!r}")

