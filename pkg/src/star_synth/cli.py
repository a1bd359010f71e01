"""Command-line entry point.

Exit codes: 0 success/pass, 1 usage or I/O problem, 2 invalid constraints,
3 simulation failure.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile

from . import __version__
from .allocation import Weights
from .compat import MultiReadError, export_dot, build_graph
from .constraints import CONSTRAINT_SCHEMA, ConstraintError, ConstraintSyntaxError, load_constraints, serialize
from .interleaver import InfeasibleError, InterleaverSpec, generate, min_latency, parse_scheme
from .netlist import SCHEMA_VERSION, NetlistError, read_netlist, write_netlist
from .pipeline import synthesize
from .simulator import simulate

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_SIMFAIL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def write_atomic(path: str, text: str):
    """Write via a temp file in the same directory, then rename over `path`."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".star-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _require_input(path):
    if not os.path.isfile(path):
        raise UsageError(f"no such file: {path}")


def _require_output(path):
    if path is None:
        return
    d = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(d):
        raise UsageError(f"output directory does not exist: {d}")


def _weights(text):
    try:
        return Weights.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="star", description="Space-time adapter synthesis")
    p.add_argument("--version", action="version",
                   version=f"star {__version__} (constraints {CONSTRAINT_SCHEMA}, netlist {SCHEMA_VERSION})")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_build_opts(sp):
        sp.add_argument("--constraints", required=True, help="constraint file (JSON)")
        sp.add_argument("--weights", type=_weights, default=Weights(), help="depth=X,demux=Y,util=Z")
        sp.add_argument("--out", help="netlist JSON output")
        sp.add_argument("--report", help="report output (stdout if omitted)")
        sp.add_argument("--dot", help="compatibility graph DOT output")

    with_build_opts(sub.add_parser("build", help="run the full synthesis flow"))
    ck = sub.add_parser("check", help="build, then simulate the result")
    with_build_opts(ck)
    ck.add_argument("--trace", help="simulation trace output (JSON lines)")

    sim = sub.add_parser("simulate", help="replay a netlist against constraints")
    sim.add_argument("--netlist", required=True)
    sim.add_argument("--constraints", required=True)
    sim.add_argument("--trace")

    gr = sub.add_parser("graph", help="export the compatibility graph only")
    gr.add_argument("--constraints", required=True)
    gr.add_argument("--out", help="DOT output (stdout if omitted)")
    gr.add_argument("--json", help="graph JSON dump")

    gen = sub.add_parser("gen-interleaver", help="generate interleaver constraints")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--scheme", default="identity", help="identity | block:ROWSxCOLS | file:PATH")
    gen.add_argument("--in-period", type=int, default=1)
    gen.add_argument("--latency", type=int, help="default: minimal feasible latency")
    gen.add_argument("--out-period", type=int, default=1)
    gen.add_argument("--out", help="constraint file output (stdout if omitted)")
    return p


def _emit(path, text):
    if path:
        write_atomic(path, text)
    else:
        sys.stdout.write(text)


def _cmd_build(args, simulate_after=False) -> int:
    for path in (args.out, args.report, args.dot, getattr(args, "trace", None)):
        _require_output(path)
    _require_input(args.constraints)
    cs = load_constraints(args.constraints)
    result = synthesize(cs, args.weights)
    if args.dot:
        write_atomic(args.dot, export_dot(result.graph))
    if args.out:
        write_atomic(args.out, write_netlist(result.netlist))
    _emit(args.report, result.report())
    if not simulate_after:
        return EXIT_OK
    trace = simulate(result.netlist, cs)
    if args.trace:
        write_atomic(args.trace, trace.to_jsonl())
    print(f"simulation: {trace.verdict()}", file=sys.stderr)
    return EXIT_OK if trace.passed else EXIT_SIMFAIL


def _cmd_simulate(args) -> int:
    _require_output(args.trace)
    _require_input(args.netlist)
    _require_input(args.constraints)
    cs = load_constraints(args.constraints)
    with open(args.netlist, encoding="utf-8") as fh:
        netlist = read_netlist(fh.read())
    trace = simulate(netlist, cs)
    if args.trace:
        write_atomic(args.trace, trace.to_jsonl())
    print(f"simulation: {trace.verdict()}")
    for d in trace.divergences[:20]:
        print(f"  {d}", file=sys.stderr)
    return EXIT_OK if trace.passed else EXIT_SIMFAIL


def _cmd_graph(args) -> int:
    _require_output(args.out)
    _require_output(args.json)
    _require_input(args.constraints)
    g = build_graph(load_constraints(args.constraints))
    _emit(args.out, export_dot(g))
    if args.json:
        write_atomic(args.json, g.to_json())
    return EXIT_OK


def _cmd_gen(args) -> int:
    _require_output(args.out)
    try:
        perm = parse_scheme(args.scheme, args.n)
        probe = InterleaverSpec(args.n, perm, args.in_period, 0, args.out_period)
        latency = args.latency if args.latency is not None else min_latency(probe)
        spec = InterleaverSpec(args.n, perm, args.in_period, latency, args.out_period)
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc))
    _emit(args.out, serialize(generate(spec)))
    return EXIT_OK


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "build":
            return _cmd_build(args)
        if args.command == "check":
            return _cmd_build(args, simulate_after=True)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "graph":
            return _cmd_graph(args)
        return _cmd_gen(args)
    except UsageError as exc:
        print(f"star: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConstraintSyntaxError as exc:
        print(f"star: invalid constraint file: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConstraintError as exc:
        print(f"star: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (MultiReadError, InfeasibleError) as exc:
        print(f"star: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NetlistError as exc:
        print(f"star: bad netlist: {exc}", file=sys.stderr)
        return EXIT_SIMFAIL
    except OSError as exc:
        print(f"star: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
