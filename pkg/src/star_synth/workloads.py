"""Random constraint sets for property tests and stress runs."""
from __future__ import annotations

import random
from typing import Optional

from .constraints import INPUT, OUTPUT, ConstraintSet, Port, Read, TimedDatum


def random_constraints(n: int, seed: Optional[int] = None, *, in_ports: int = 1, out_ports: int = 1,
                       horizon: Optional[int] = None, max_life: Optional[int] = None) -> ConstraintSet:
    """`n` single-read data with random lifetimes on the given port counts.

    Write slots are drawn without replacement per input port; each read is
    placed a random gap after its write and bumped to the next free cycle of
    its output port, so the result always validates.
    """
    rng = random.Random(seed)
    horizon = horizon or max(2, 2 * n // in_ports + 1)
    max_life = max_life or max(2, horizon // 2)
    ins = [f"i{k}" for k in range(in_ports)]
    outs = [f"o{k}" for k in range(out_ports)]

    slots = [(t, p) for p in ins for t in range(horizon)]
    writes = sorted(rng.sample(slots, n)) if n <= len(slots) else None
    if writes is None:
        raise ValueError(f"{n} data do not fit {in_ports} port(s) over {horizon} cycles")
    busy = {p: set() for p in outs}
    data = []
    for k, (t, p) in enumerate(writes):
        port = rng.choice(outs)
        r = t + rng.randint(1, max_life)
        while r in busy[port]:
            r += 1
        busy[port].add(r)
        data.append(TimedDatum(f"x{k}", p, t, (Read(r, port),)))
    ports = [Port(p, INPUT) for p in ins] + [Port(p, OUTPUT) for p in outs]
    return ConstraintSet(tuple(ports), tuple(data))
