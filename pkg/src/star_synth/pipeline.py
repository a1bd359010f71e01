"""End-to-end flow: graph -> structures -> assignment -> optimization -> netlist."""
from __future__ import annotations

from dataclasses import dataclass, field

from .allocation import Assignment, Weights, assign
from .compat import CompatGraph, build_graph
from .constraints import ConstraintSet
from .merge import MergedElement, optimal_merge_cells, optimize
from .netlist import Netlist, emit, write_report


@dataclass
class BuildResult:
    constraints: ConstraintSet
    graph: CompatGraph
    assignment: Assignment
    elements: list[MergedElement]
    netlist: Netlist
    merge_trace: list[str] = field(default_factory=list)

    @property
    def cells_before_merge(self) -> int:
        return sum(n.depth for n in self.assignment.nodes)

    def report(self, exhaustive_limit: int = 8) -> str:
        notes = []
        nodes = self.assignment.nodes
        if 0 < len(nodes) <= exhaustive_limit:
            best = optimal_merge_cells(nodes, limit=exhaustive_limit)
            notes.append(f"exhaustive merge optimum: {best} cell(s), greedy gap {self.netlist.total_cells - best}")
        return write_report(self.netlist, cs=self.constraints, graph=self.graph,
                            assignment_trace=self.assignment.trace, merge_trace=self.merge_trace, notes=notes)


def synthesize(cs: ConstraintSet, weights: Weights = Weights()) -> BuildResult:
    graph = build_graph(cs)
    assignment = assign(graph, weights)
    trace: list[str] = []
    elements = optimize(assignment.nodes, weights, trace=trace)
    netlist = emit(elements, cs)
    return BuildResult(cs, graph, assignment, elements, netlist, trace)
