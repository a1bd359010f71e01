"""I/O constraint model: ports, timed data and the JSON constraint file.

A constraint set describes, for one operating mode, when each datum enters
the adapter (port + cycle) and when it must leave it.  Everything downstream
(graph, allocation, netlist, simulation) is derived from this.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

CONSTRAINT_SCHEMA = "star-constraints/1"
INPUT = "in"
OUTPUT = "out"
_DIR_ALIASES = {"in": INPUT, "input": INPUT, "out": OUTPUT, "output": OUTPUT}


class ConstraintSyntaxError(ValueError):
    """Malformed constraint file (bad JSON or wrong shape)."""

    def __init__(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        self.line = line
        self.col = col
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(message + where)


class ConstraintError(ValueError):
    """Constraint set that parses but breaks a semantic invariant."""

    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        lines = "\n".join(f"  - {v}" for v in violations)
        super().__init__(f"{len(violations)} constraint violation(s):\n{lines}")


@dataclass(frozen=True)
class Port:
    name: str
    direction: str


@dataclass(frozen=True, order=True)
class Read:
    t: int
    port: str


@dataclass(frozen=True)
class TimedDatum:
    id: str
    write_port: str
    write_time: int
    reads: tuple[Read, ...]

    def __post_init__(self):
        object.__setattr__(self, "reads", tuple(sorted(self.reads)))

    @property
    def tau_min(self) -> int:
        return self.write_time

    @property
    def tau_first(self) -> int:
        return self.reads[0].t

    @property
    def tau_max(self) -> int:
        return self.reads[-1].t

    @property
    def lifetime(self) -> tuple[int, int]:
        return lifetime(self)

    @property
    def single_read(self) -> bool:
        return len(self.reads) == 1


def lifetime(d: TimedDatum) -> tuple[int, int]:
    """Closed interval [production time, last consumption time]."""
    return (d.write_time, d.reads[-1].t)


def datum(id: str, write: int, read: int | Iterable[int], *, in_port: str = "in",
          out_port: str = "out") -> TimedDatum:
    """Shorthand constructor used by the generators and tests."""
    times = [read] if isinstance(read, int) else list(read)
    return TimedDatum(id, in_port, write, tuple(Read(t, out_port) for t in times))


def chrono_key(d: TimedDatum) -> tuple:
    # ties on write time broken by (write port, id)
    return (d.write_time, d.write_port, d.id)


@dataclass(frozen=True)
class ConstraintSet:
    ports: tuple[Port, ...]
    data: tuple[TimedDatum, ...]
    word_width: Optional[int] = None

    def __post_init__(self):
        # canonical order so that equality does not depend on input order
        object.__setattr__(self, "ports", tuple(sorted(self.ports, key=lambda p: (p.name, p.direction))))
        object.__setattr__(self, "data", tuple(sorted(self.data, key=lambda d: (d.write_time, d.id))))

    @classmethod
    def simple(cls, data: Iterable[TimedDatum], word_width: Optional[int] = None) -> "ConstraintSet":
        """Build a set whose ports are inferred from the data."""
        data = list(data)
        ins = {d.write_port for d in data}
        outs = {r.port for d in data for r in d.reads}
        ports = [Port(p, INPUT) for p in ins] + [Port(p, OUTPUT) for p in outs]
        return cls(tuple(ports), tuple(data), word_width)

    def __len__(self):
        return len(self.data)

    def port(self, name: str) -> Port:
        for p in self.ports:
            if p.name == name:
                return p
        raise KeyError(name)

    def by_id(self) -> dict[str, TimedDatum]:
        return {d.id: d for d in self.data}

    def chronological(self) -> list[TimedDatum]:
        return sorted(self.data, key=chrono_key)

    def production_sequence(self) -> list[str]:
        return [d.id for d in self.chronological()]

    def consumption_sequence(self) -> list[str]:
        events = sorted((r.t, r.port, d.id) for d in self.data for r in d.reads)
        return [e[2] for e in events]

    @property
    def horizon(self) -> int:
        """Last event cycle, or -1 for an empty set."""
        return max((d.tau_max for d in self.data), default=-1)


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    message: str

    def __str__(self):
        return f"[{self.kind}] {self.subject}: {self.message}"


def validate(cs: ConstraintSet) -> list[Violation]:
    """Check every invariant of the model; an empty list means valid."""
    out: list[Violation] = []
    dirs: dict[str, str] = {}
    for p in cs.ports:
        if p.name in dirs:
            out.append(Violation("duplicate-port", p.name, "port declared more than once"))
        if p.direction not in (INPUT, OUTPUT):
            out.append(Violation("direction", p.name, f"unknown direction {p.direction!r}"))
        dirs.setdefault(p.name, p.direction)

    seen: set[str] = set()
    writes: dict[tuple[str, int], str] = {}
    reads: dict[tuple[str, int], str] = {}
    for d in cs.data:
        if d.id in seen:
            out.append(Violation("duplicate-id", d.id, "datum id used more than once"))
        seen.add(d.id)
        if d.write_time < 0:
            out.append(Violation("negative-time", d.id, f"write at cycle {d.write_time}"))
        if not d.reads:
            out.append(Violation("no-reads", d.id, "datum is never read"))
            continue

        if d.write_port not in dirs:
            out.append(Violation("unknown-port", d.id, f"write port {d.write_port!r} not declared"))
        elif dirs[d.write_port] != INPUT:
            out.append(Violation("direction", d.id, f"written on output port {d.write_port!r}"))
        key = (d.write_port, d.write_time)
        if key in writes:
            out.append(Violation("port-collision", d.id,
                                 f"port {d.write_port!r} already written by {writes[key]!r} at cycle {d.write_time}"))
        else:
            writes[key] = d.id

        for r in d.reads:
            if r.t <= d.write_time:
                out.append(Violation("order", d.id, f"read at cycle {r.t} not after write at cycle {d.write_time}"))
            if r.port not in dirs:
                out.append(Violation("unknown-port", d.id, f"read port {r.port!r} not declared"))
            elif dirs[r.port] != OUTPUT:
                out.append(Violation("direction", d.id, f"read on input port {r.port!r}"))
            key = (r.port, r.t)
            if key in reads:
                out.append(Violation("port-collision", d.id,
                                     f"port {r.port!r} already read for {reads[key]!r} at cycle {r.t}"))
            else:
                reads[key] = d.id
    if cs.word_width is not None and cs.word_width < 1:
        out.append(Violation("word-width", "word_width", f"must be >= 1, got {cs.word_width}"))
    return out


# ---------------------------------------------------------------- file format

def to_dict(cs: ConstraintSet) -> dict:
    doc: dict = {
        "ports": [{"name": p.name, "dir": p.direction} for p in cs.ports],
        "data": [
            {"id": d.id,
             "write": {"port": d.write_port, "t": d.write_time},
             "reads": [{"port": r.port, "t": r.t} for r in d.reads]}
            for d in cs.data
        ],
    }
    if cs.word_width is not None:
        doc["word_width"] = cs.word_width
    return doc


def serialize(cs: ConstraintSet) -> str:
    return json.dumps(to_dict(cs), sort_keys=True, indent=1) + "\n"


def _need(obj, key, where, kind):
    if not isinstance(obj, dict) or key not in obj:
        raise ConstraintSyntaxError(f"{where}: missing key {key!r}")
    val = obj[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise ConstraintSyntaxError(f"{where}.{key}: expected integer, got {val!r}")
    if kind is not int and not isinstance(val, kind):
        raise ConstraintSyntaxError(f"{where}.{key}: expected {kind.__name__}, got {type(val).__name__}")
    return val


def from_dict(doc) -> ConstraintSet:
    """Build a ConstraintSet from decoded JSON without validating semantics."""
    if not isinstance(doc, dict):
        raise ConstraintSyntaxError("top level must be an object")
    ports = []
    for i, p in enumerate(_need(doc, "ports", "$", list)):
        where = f"ports[{i}]"
        name = _need(p, "name", where, str)
        direction = _need(p, "dir", where, str)
        ports.append(Port(name, _DIR_ALIASES.get(direction, direction)))
    data = []
    for i, d in enumerate(_need(doc, "data", "$", list)):
        where = f"data[{i}]"
        ident = _need(d, "id", where, str)
        w = _need(d, "write", where, dict)
        reads = tuple(
            Read(_need(r, "t", f"{where}.reads[{k}]", int), _need(r, "port", f"{where}.reads[{k}]", str))
            for k, r in enumerate(_need(d, "reads", where, list))
        )
        data.append(TimedDatum(ident, _need(w, "port", where + ".write", str),
                               _need(w, "t", where + ".write", int), reads))
    width = doc.get("word_width")
    if width is not None and (isinstance(width, bool) or not isinstance(width, int)):
        raise ConstraintSyntaxError(f"$.word_width: expected integer, got {width!r}")
    return ConstraintSet(tuple(ports), tuple(data), width)


def parse_constraints(text: str) -> ConstraintSet:
    """Parse and validate constraint-file content.

    Raises ConstraintSyntaxError for malformed input and ConstraintError when
    the content breaks a semantic invariant.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConstraintSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    cs = from_dict(doc)
    violations = validate(cs)
    if violations:
        raise ConstraintError(violations)
    return cs


def load_constraints(path) -> ConstraintSet:
    with open(path, encoding="utf-8") as fh:
        return parse_constraints(fh.read())
