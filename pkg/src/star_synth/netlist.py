"""Final architecture: storage elements, data binding, interconnect and control schedule."""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional, Sequence

from .allocation import Kind
from .constraints import ConstraintSet
from .merge import MergedElement

SCHEMA_VERSION = "star-netlist/1"

WRITE_OPS = {"push", "load"}
READ_OPS = {"pop", "drive"}
_OP_FOR = {Kind.FIFO: ("push", "pop"), Kind.LIFO: ("push", "pop"), Kind.REGISTER: ("load", "drive")}
_ID_PREFIX = {Kind.FIFO: "fifo", Kind.LIFO: "lifo", Kind.REGISTER: "reg"}


class NetlistError(ValueError):
    pass


@dataclass(frozen=True)
class Mode:
    start: int
    end: int
    kind: Kind


@dataclass(frozen=True)
class Element:
    id: str
    depth: int
    modes: tuple[Mode, ...]

    @property
    def kind(self) -> str:
        """fifo/lifo/reg when every mode agrees, otherwise "mixed"."""
        kinds = {m.kind for m in self.modes}
        return kinds.pop().value if len(kinds) == 1 else "mixed"

    def mode_at(self, t: int, reading: bool) -> Optional[Mode]:
        # a read at t belongs to the interval ending at t, a write to the one starting at t
        for m in self.modes:
            if (m.start < t <= m.end) if reading else (m.start <= t < m.end):
                return m
        return None


@dataclass(frozen=True)
class MicroOp:
    t: int
    op: str
    port: str
    element: str
    datum: str

    @property
    def is_read(self) -> bool:
        return self.op in READ_OPS

    def to_dict(self) -> dict:
        return {"op": self.op, "port": self.port, "element": self.element, "datum": self.datum}


def _op_order(op: MicroOp):
    # reads before writes within a cycle: a freed cell is reusable in the same cycle
    return (0 if op.is_read else 1, op.element, op.port, op.datum)


@dataclass(frozen=True)
class Netlist:
    elements: tuple[Element, ...]
    binding: dict[str, str]
    inputs: dict[str, tuple[str, ...]]    # input port -> elements fed
    outputs: dict[str, tuple[str, ...]]   # element -> output ports served
    schedule: tuple[tuple[int, tuple[MicroOp, ...]], ...]

    def element(self, eid: str) -> Element:
        for e in self.elements:
            if e.id == eid:
                return e
        raise KeyError(eid)

    @property
    def total_cells(self) -> int:
        return sum(e.depth for e in self.elements)

    @property
    def op_count(self) -> int:
        return sum(len(ops) for _, ops in self.schedule)

    def ops(self):
        for _, ops in self.schedule:
            yield from ops


def _interconnect(binding, cs: ConstraintSet):
    inputs, outputs = defaultdict(set), defaultdict(set)
    for d in cs.data:
        eid = binding[d.id]
        inputs[d.write_port].add(eid)
        for r in d.reads:
            outputs[eid].add(r.port)
    return ({p: tuple(sorted(v)) for p, v in sorted(inputs.items())},
            {e: tuple(sorted(v)) for e, v in sorted(outputs.items())})


def _build_schedule(ops: list[MicroOp]):
    by_t = defaultdict(list)
    for op in ops:
        by_t[op.t].append(op)
    return tuple((t, tuple(sorted(by_t[t], key=_op_order))) for t in sorted(by_t))


def emit(merged: Sequence[MergedElement], cs: ConstraintSet) -> Netlist:
    """Lay out one physical element per merged element and schedule every access."""
    counters: dict[str, int] = defaultdict(int)
    elements, binding, kind_of = [], {}, {}
    known = cs.by_id()
    for me in merged:
        modes = tuple(Mode(iv[0], iv[1], s.kind) for iv, s in me.modes)
        kinds = {m.kind for m in modes}
        prefix = _ID_PREFIX[kinds.pop()] if len(kinds) == 1 else "mix"
        eid = f"{prefix}{counters[prefix]}"
        counters[prefix] += 1
        elements.append(Element(eid, me.depth, modes))
        for s in me.structures:
            for d in s.members:
                if d.id in binding:
                    raise NetlistError(f"datum {d.id!r} bound to both {binding[d.id]} and {eid}")
                if d.id not in known:
                    raise NetlistError(f"datum {d.id!r} is not in the constraint set")
                binding[d.id] = eid
                kind_of[d.id] = s.kind
    missing = [d.id for d in cs.data if d.id not in binding]
    if missing:
        raise NetlistError(f"coverage gap, unbound data: {', '.join(missing[:10])}")

    ops = []
    for d in cs.data:
        eid = binding[d.id]
        wr, rd = _OP_FOR[kind_of[d.id]]
        ops.append(MicroOp(d.write_time, wr, d.write_port, eid, d.id))
        for r in d.reads:
            ops.append(MicroOp(r.t, rd, r.port, eid, d.id))
    inputs, outputs = _interconnect(binding, cs)
    return Netlist(tuple(elements), dict(sorted(binding.items())), inputs, outputs, _build_schedule(ops))


# --------------------------------------------------------------- serialization

def to_dict(n: Netlist) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "elements": [
            {"id": e.id, "depth": e.depth,
             "modes": [{"from": m.start, "to": m.end, "kind": m.kind.value} for m in e.modes]}
            for e in n.elements
        ],
        "binding": dict(n.binding),
        "interconnect": {"inputs": {p: list(v) for p, v in n.inputs.items()},
                         "outputs": {e: list(v) for e, v in n.outputs.items()}},
        "schedule": [{"t": t, "ops": [op.to_dict() for op in ops]} for t, ops in n.schedule],
    }


def write_netlist(n: Netlist) -> str:
    return json.dumps(to_dict(n), sort_keys=True, indent=1) + "\n"


def read_netlist(text: str) -> Netlist:
    try:
        doc = json.loads(text)
        elements = tuple(
            Element(str(e["id"]), int(e["depth"]),
                    tuple(Mode(int(m["from"]), int(m["to"]), Kind(m["kind"])) for m in e["modes"]))
            for e in doc["elements"]
        )
        binding = {str(k): str(v) for k, v in doc["binding"].items()}
        ops = [MicroOp(int(entry["t"]), str(op["op"]), str(op["port"]), str(op["element"]), str(op["datum"]))
               for entry in doc["schedule"] for op in entry["ops"]]
        ic = doc.get("interconnect", {})
        inputs = {p: tuple(v) for p, v in ic.get("inputs", {}).items()}
        outputs = {e: tuple(v) for e, v in ic.get("outputs", {}).items()}
    except json.JSONDecodeError as exc:
        raise NetlistError(f"netlist is not valid JSON: {exc}") from None
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise NetlistError(f"malformed netlist: {exc!r}") from None
    bad = [op.op for op in ops if op.op not in WRITE_OPS | READ_OPS]
    if bad:
        raise NetlistError(f"unknown micro-op {bad[0]!r}")
    return Netlist(elements, binding, inputs, outputs, _build_schedule(ops))


# --------------------------------------------------------------------- report

def summary(n: Netlist) -> dict:
    """Structure counts per kind and extreme depths, in the shape of a results table."""
    counts = {"fifo": 0, "lifo": 0, "reg": 0, "mixed": 0}
    depths = defaultdict(list)
    for e in n.elements:
        counts[e.kind] += 1
        depths[e.kind].append(e.depth)
    out = {
        "FIFO": counts["fifo"], "LIFO": counts["lifo"], "Reg": counts["reg"], "Mixed": counts["mixed"],
        "Total": len(n.elements),
        "largest_fifo": max(depths["fifo"], default=None), "smallest_fifo": min(depths["fifo"], default=None),
        "largest_lifo": max(depths["lifo"], default=None), "smallest_lifo": min(depths["lifo"], default=None),
        "total_cells": n.total_cells,
    }
    return out


def _dash(v):
    return "-" if v is None else str(v)


def summary_line(s: dict) -> str:
    kinds = f"FIFO={s['FIFO']}, LIFO={s['LIFO']}, Reg={s['Reg']}"
    if s["Mixed"]:
        kinds += f", Mixed={s['Mixed']}"
    return f"{kinds}, Total={s['Total']} structures, total cells={s['total_cells']}"


def write_report(n: Netlist, *, cs: Optional[ConstraintSet] = None, graph=None,
                 assignment_trace: Sequence[str] = (), merge_trace: Sequence[str] = (),
                 notes: Sequence[str] = ()) -> str:
    s = summary(n)
    lines = ["STAR synthesis report", ""]
    if cs is not None:
        n_in = sum(1 for p in cs.ports if p.direction == "in")
        lines.append(f"constraints: {len(cs.data)} data, {n_in} input port(s), {len(cs.ports) - n_in} output port(s)")
    if graph is not None:
        c = graph.label_counts()
        lines.append(f"graph: {len(graph)} nodes, {graph.edge_count} edges (R={c['R']} F={c['F']} L={c['L']})")
    lines += [summary_line(s), ""]
    header = ["FIFO", "LIFO", "Reg", "Mixed", "Total", "largest_fifo", "smallest_fifo",
              "largest_lifo", "smallest_lifo", "total_cells"]
    lines.append("\t".join(header))
    lines.append("\t".join(_dash(s[h]) for h in header))
    lines += ["", "elements:"]
    members = defaultdict(list)
    for d, e in n.binding.items():
        members[e].append(d)
    for e in n.elements:
        modes = " ".join(f"{m.kind.value}[{m.start},{m.end}]" for m in e.modes)
        lines.append(f"  {e.id} depth={e.depth} modes={modes} data={','.join(sorted(members[e.id]))}")
    if assignment_trace:
        lines += ["", "assignment:"] + [f"  {t}" for t in assignment_trace]
    if merge_trace:
        lines += ["", "optimization:"] + [f"  {t}" for t in merge_trace]
    if notes:
        lines += [""] + list(notes)
    return "\n".join(lines) + "\n"


def pseudo_hdl(n: Netlist) -> str:
    """Human-readable structural sketch; not meant for synthesis."""
    out = ["-- STAR datapath sketch (informational only)", "entity star_adapter is"]
    ports = sorted(set(n.inputs) | {p for v in n.outputs.values() for p in v})
    out += [f"  port {p};" for p in ports]
    out.append("end entity;")
    for e in n.elements:
        out.append(f"  {e.id}: storage generic map (depth => {e.depth}, kind => \"{e.kind}\");")
    for p, elems in n.inputs.items():
        out.append(f"  -- demux {p} -> {', '.join(elems)}")
    for e, ps in n.outputs.items():
        out.append(f"  -- mux {e} -> {', '.join(ps)}")
    return "\n".join(out) + "\n"
