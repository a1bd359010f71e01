"""Cycle-accurate replay of a netlist against its constraint set."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .allocation import Kind
from .constraints import ConstraintSet
from .netlist import Element, MicroOp, Netlist, NetlistError, WRITE_OPS


class StorageFault(Exception):
    """Illegal access on one element; `diagnostic` is the short failure name."""

    def __init__(self, diagnostic: str, detail: str):
        self.diagnostic = diagnostic
        super().__init__(f"{diagnostic}: {detail}")


class ElementState:
    """Contents of one physical element; behaviour follows the active mode's kind."""

    def __init__(self, element: Element):
        self.element = element
        self.cells: list[str] = []
        self.pushes = 0
        self.pops = 0
        self.peak = 0

    def __len__(self):
        return len(self.cells)

    def step(self, kind: Kind, op: str, datum: str) -> Optional[str]:
        """Apply one access; returns the datum leaving the element on reads."""
        depth = self.element.depth
        if op in WRITE_OPS:
            if len(self.cells) >= depth:
                raise StorageFault("overflow", f"{self.element.id} full (depth {depth}) when writing {datum}")
            self.cells.append(datum)
            self.pushes += 1
            self.peak = max(self.peak, len(self.cells))
            return None

        if not self.cells:
            name = "drive on stale" if kind is Kind.REGISTER else "pop on empty"
            raise StorageFault(name, f"{self.element.id} empty when reading {datum}")
        self.pops += 1
        if kind is Kind.FIFO:
            return self.cells.pop(0)
        if kind is Kind.LIFO:
            return self.cells.pop()
        # register: the slot must still hold what was last loaded for this datum
        if datum not in self.cells:
            raise StorageFault("drive on stale", f"{self.element.id} no longer holds {datum}")
        self.cells.remove(datum)
        return datum


_ORDER_DIAG = {Kind.FIFO: "FIFO order violated", Kind.LIFO: "LIFO order violated",
               Kind.REGISTER: "register value mismatch"}


@dataclass(frozen=True)
class Divergence:
    t: int
    diagnostic: str
    detail: str

    def __str__(self):
        return f"cycle {self.t}: {self.diagnostic}: {self.detail}"


@dataclass
class CycleRecord:
    t: int
    occupancy: tuple[int, ...]
    ops: tuple[MicroOp, ...]
    outputs: tuple[tuple[str, str], ...]


@dataclass
class SimTrace:
    element_ids: tuple[str, ...]
    cycles: list[CycleRecord] = field(default_factory=list)
    divergences: list[Divergence] = field(default_factory=list)
    peaks: dict[str, int] = field(default_factory=dict)
    pushes: dict[str, int] = field(default_factory=dict)
    pops: dict[str, int] = field(default_factory=dict)
    final_occupancy: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.divergences

    @property
    def first_divergence(self) -> Optional[Divergence]:
        return self.divergences[0] if self.divergences else None

    @property
    def peak_total_occupancy(self) -> int:
        return max((sum(c.occupancy) for c in self.cycles), default=0)

    def verdict(self) -> str:
        if self.passed:
            return f"PASS ({len(self.cycles)} cycles)"
        return f"FAIL {self.first_divergence} ({len(self.divergences)} divergence(s))"

    def to_jsonl(self) -> str:
        lines = []
        for c in self.cycles:
            lines.append(json.dumps({
                "t": c.t,
                "occupancy": dict(zip(self.element_ids, c.occupancy)),
                "ops": [op.to_dict() for op in c.ops],
                "outputs": [list(o) for o in c.outputs],
            }, sort_keys=True))
        lines.append(json.dumps({"verdict": "pass" if self.passed else "fail",
                                 "divergences": [str(d) for d in self.divergences]}, sort_keys=True))
        return "\n".join(lines) + "\n"


def _check_wellformed(n: Netlist, cs: ConstraintSet):
    ids = [e.id for e in n.elements]
    if len(set(ids)) != len(ids):
        raise NetlistError("duplicate element ids")
    known = set(ids)
    data = cs.by_id()
    unbound = [d for d in data if d not in n.binding]
    if unbound:
        raise NetlistError(f"unbound data: {', '.join(sorted(unbound)[:10])}")
    for op in n.ops():
        if op.element not in known:
            raise NetlistError(f"op on unknown element {op.element!r} at cycle {op.t}")
        if op.datum not in data:
            raise NetlistError(f"op on unknown datum {op.datum!r} at cycle {op.t}")


def simulate(n: Netlist, cs: ConstraintSet) -> SimTrace:
    """Execute the schedule and compare every observable event with the constraints.

    Reads execute before writes inside a cycle.  The datum that actually
    leaves an element is decided by the element's storage discipline, so a
    wrong binding shows up as an order violation or an unexpected output.
    """
    _check_wellformed(n, cs)
    states = {e.id: ElementState(e) for e in n.elements}
    order = [e.id for e in n.elements]
    trace = SimTrace(tuple(order))
    fail = trace.divergences

    expected_writes = {(d.id, d.write_port, d.write_time) for d in cs.data}
    expected_reads = {(d.id, r.port, r.t) for d in cs.data for r in d.reads}
    seen_writes, seen_reads = set(), set()

    ops_at = dict(n.schedule)
    for t in range(max(cs.horizon, max(ops_at, default=-1)) + 1):
        ops = ops_at.get(t, ())
        outputs = []
        for op in sorted(ops, key=lambda o: 0 if o.is_read else 1):
            if n.binding.get(op.datum) != op.element:
                fail.append(Divergence(t, "binding mismatch", f"{op.datum} scheduled on {op.element}, "
                                                              f"bound to {n.binding.get(op.datum)}"))
            st = states[op.element]
            mode = st.element.mode_at(t, op.is_read)
            if mode is None:
                fail.append(Divergence(t, "inactive element", f"{op.op} {op.datum} outside every mode of {op.element}"))
                continue
            try:
                got = st.step(mode.kind, op.op, op.datum)
            except StorageFault as exc:
                fail.append(Divergence(t, exc.diagnostic, str(exc).split(": ", 1)[1]))
                continue
            if op.is_read:
                if got != op.datum:
                    fail.append(Divergence(t, _ORDER_DIAG[mode.kind],
                                           f"{op.element} yielded {got}, schedule expects {op.datum}"))
                outputs.append((op.port, got))
                key = (got, op.port, t)
                if key not in expected_reads:
                    fail.append(Divergence(t, "unexpected output", f"{got} on {op.port}"))
                elif key in seen_reads:
                    fail.append(Divergence(t, "duplicate output", f"{got} on {op.port}"))
                seen_reads.add(key)
            else:
                key = (op.datum, op.port, t)
                if key not in expected_writes:
                    fail.append(Divergence(t, "unexpected write", f"{op.datum} from {op.port}"))
                seen_writes.add(key)
        trace.cycles.append(CycleRecord(t, tuple(len(states[e]) for e in order), tuple(ops), tuple(outputs)))

    for d, port, t in sorted(expected_writes - seen_writes, key=lambda k: (k[2], k[0])):
        fail.append(Divergence(t, "missing write", f"{d} from {port}"))
    for d, port, t in sorted(expected_reads - seen_reads, key=lambda k: (k[2], k[0])):
        fail.append(Divergence(t, "missing output", f"{d} on {port}"))
    fail.sort(key=lambda dv: dv.t)

    for eid, st in states.items():
        trace.peaks[eid] = st.peak
        trace.pushes[eid] = st.pushes
        trace.pops[eid] = st.pops
        trace.final_occupancy[eid] = len(st)
        if len(st):
            fail.append(Divergence(len(trace.cycles), "residual data", f"{eid} still holds {', '.join(st.cells)}"))
    return trace
