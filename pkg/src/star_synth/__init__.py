"""Space-time adapter synthesis.

Turns the I/O timing constraints between two hardware blocks into a buffer
architecture of FIFOs, LIFOs and registers plus a per-cycle control
schedule, and replays that schedule to prove it honours the constraints.
"""
from .allocation import HierNode, Kind, Weights, assign
from .compat import Compat, CompatGraph, build_graph, classify_pair, export_dot
from .constraints import (ConstraintError, ConstraintSet, ConstraintSyntaxError, Port, Read, TimedDatum,
                          lifetime, load_constraints, parse_constraints, serialize, validate)
from .interleaver import InterleaverSpec, block_permutation, generate
from .merge import MergedElement, optimize, register_compatible
from .netlist import Netlist, emit, read_netlist, write_netlist
from .pipeline import BuildResult, synthesize
from .simulator import SimTrace, simulate
from .structures import StructPath, fifo_depth, lifo_depth, longest_paths, occupancy_oracle

__version__ = "0.1.0"
