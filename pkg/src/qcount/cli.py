"""Command-line entry point: ``qcount <subcommand> ...``.

Exit codes: 0 on success or a positive verdict, 1 on a negative verdict,
2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .circuit import Circuit
from .cnf import CNFError, WeightedCNF, parse_wdimacs, write_wdimacs
from .counter import CounterError, count_with
from .encoder import EncodingError, encode_bra, encode_circuit, encode_zero_state
from .equivalence import EquivalenceError, cyclic_formula, verdict
from .gates import GateError, load_gate_config
from .qasm import QasmError, parse_qasm, to_qasm
from .report import RunReport, plot_synthesis
from .simulation import SimulationError, probability_from_count, simulation_formula
from .synthesis import (GateSet, SynthesisError, _threshold, export_maxcount,
                        synthesis_formula, synthesize, verify_result)
from .verification import VerificationError, parse_condition, verify_detailed

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2

_INPUT_ERRORS = (QasmError, CNFError, GateError, EncodingError, SimulationError,
                 EquivalenceError, VerificationError, SynthesisError, CounterError,
                 OSError)


def _read_circuit(path: str) -> Circuit:
    return parse_qasm(Path(path).read_text(encoding="utf-8"))


def _stats(res) -> dict:
    return {"decisions": res.decisions, "propagations": res.propagations,
            "cache_hits": res.cache_hits}


def _emit(f: WeightedCNF, path: str) -> None:
    Path(path).write_text(write_wdimacs(f))
    print(f"wrote {path}")


def cmd_simulate(args) -> tuple[int, RunReport]:
    c = _read_circuit(args.circuit)
    f = simulation_formula(c, args.measure)
    if args.emit_cnf:
        _emit(f, args.emit_cnf)
        return EXIT_OK, RunReport("simulate", [args.circuit], {"emitted": args.emit_cnf})
    res = count_with(f, args.solver)
    p = probability_from_count(res.value)
    print(f"{p:.12g}")
    return EXIT_OK, RunReport("simulate", [args.circuit],
                              {"probability": p, "measure": args.measure}, stats=_stats(res))


def cmd_equiv(args) -> tuple[int, RunReport]:
    u, v = _read_circuit(args.u), _read_circuit(args.v)
    f = cyclic_formula(u, v)
    if args.emit_cnf:
        _emit(f, args.emit_cnf)
        return EXIT_OK, RunReport("equiv", [args.u, args.v], {"emitted": args.emit_cnf})
    res = count_with(f, args.solver)
    ver = verdict(res.value, u.n, args.epsilon)
    print(f"fidelity={ver.fidelity:.12g} equivalent={str(ver.equivalent).lower()}")
    rep = RunReport("equiv", [args.u, args.v],
                    {"fidelity": ver.fidelity, "equivalent": ver.equivalent,
                     "epsilon": ver.epsilon, "trace": ver.trace_value}, stats=_stats(res))
    return (EXIT_OK if ver.equivalent else EXIT_NEGATIVE), rep


def cmd_verify(args) -> tuple[int, RunReport]:
    from .verification import verification_formula
    c = _read_circuit(args.circuit)
    pre, post = parse_condition(args.pre, c.n), parse_condition(args.post, c.n)
    if args.emit_cnf:
        _emit(verification_formula(pre, c, post), args.emit_cnf)
        return EXIT_OK, RunReport("verify", [args.circuit], {"emitted": args.emit_cnf})
    r = verify_detailed(pre, c, post, args.solver, args.two_counts)
    print("True" if r.holds else "False")
    rep = RunReport("verify", [args.circuit],
                    {"holds": r.holds, "pre": str(pre), "post": str(post),
                     "lhs": r.lhs, "rhs": r.rhs})
    return (EXIT_OK if r.holds else EXIT_NEGATIVE), rep


def cmd_synth(args) -> tuple[int, RunReport]:
    target = _read_circuit(args.target)
    gs = GateSet.parse(args.gates)
    if args.export_maxcnf:
        f, groups = synthesis_formula(target, gs, args.max_depth)
        Path(args.export_maxcnf).write_text(export_maxcount(f, groups))
        print(f"wrote {args.export_maxcnf}")
    r = synthesize(target, gs, args.epsilon, args.max_depth, args.method)
    print(to_qasm(r.circuit), end="")
    print(f"depth={r.depth} fidelity={r.fidelity:.12g} iterations={r.iterations}")
    if args.plot:
        plot_synthesis(r.stats, _threshold(args.epsilon), args.plot)
        print(f"wrote {args.plot}")
    rep = RunReport("synth", [args.target],
                    {"success": r.success, "depth": r.depth, "fidelity": r.fidelity,
                     "iterations": r.iterations, "gates": str(gs),
                     "checked_fidelity": verify_result(r, target) if r.success else None},
                    stats={"per_depth": [vars(s) for s in r.stats]})
    return (EXIT_OK if r.success else EXIT_NEGATIVE), rep


def cmd_encode(args) -> tuple[int, RunReport]:
    c = _read_circuit(args.circuit)
    if args.measure:
        f = simulation_formula(c, args.measure)
    else:
        f = WeightedCNF()
        frame = encode_circuit(f, c, encode_zero_state(f, c.n))
        if args.bra:
            encode_bra(f, frame, args.bra)
    text = write_wdimacs(f)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK, RunReport("encode", [args.circuit],
                              {"vars": f.num_vars, "clauses": len(f.clauses),
                               "output": args.output})


def cmd_count(args) -> tuple[int, RunReport]:
    f = parse_wdimacs(Path(args.file).read_text())
    res = count_with(f, args.solver)
    print(f"{res.value.real:.17g} {res.value.imag:.17g}")
    print(f"decisions={res.decisions} propagations={res.propagations} "
          f"cache_hits={res.cache_hits}")
    return EXIT_OK, RunReport("count", [args.file], {"value": res.value}, stats=_stats(res))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcount", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qcount {__version__}")
    p.add_argument("--gate-config", metavar="FILE", help="register extra gates from FILE")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def solver(sp):
        sp.add_argument("--solver", choices=["dpll", "bruteforce"], default="dpll")

    sp = sub.add_parser("simulate", help="probability of a basis measurement outcome")
    sp.add_argument("circuit")
    sp.add_argument("--measure", required=True, help="string over I,0,1 (one per qubit)")
    sp.add_argument("--emit-cnf", metavar="PATH")
    solver(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("equiv", help="(approximate) equivalence of two circuits")
    sp.add_argument("u")
    sp.add_argument("v")
    sp.add_argument("--epsilon", type=float, default=0.0)
    sp.add_argument("--emit-cnf", metavar="PATH")
    solver(sp)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("verify", help="decide a Hoare triple {pre} C {post}")
    sp.add_argument("circuit")
    sp.add_argument("--pre", required=True)
    sp.add_argument("--post", required=True)
    sp.add_argument("--two-counts", action="store_true",
                    help="count Tr(P) with a second solver call")
    sp.add_argument("--emit-cnf", metavar="PATH")
    solver(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("synth", help="depth-optimal synthesis over a gate set")
    sp.add_argument("target")
    sp.add_argument("--gates", required=True, help="e.g. H,T,CX,CSX")
    sp.add_argument("--epsilon", type=float, default=0.0)
    sp.add_argument("--max-depth", type=int, default=4)
    sp.add_argument("--method", choices=["auto", "matrix", "wmc"], default="auto")
    sp.add_argument("--export-maxcnf", metavar="PATH",
                    help="write the max-depth parametric instance with c max lines")
    sp.add_argument("--plot", metavar="PATH", help="save a per-depth fidelity figure")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("encode", help="write the weighted CNF of a circuit")
    sp.add_argument("circuit")
    sp.add_argument("--bra", help="pin the output to this basis state")
    sp.add_argument("--measure", help="emit the simulation sandwich for this spec instead")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("count", help="weighted model count of a .wcnf file")
    sp.add_argument("file")
    solver(sp)
    sp.set_defaults(func=cmd_count)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    t0 = time.perf_counter()
    try:
        if args.gate_config:
            load_gate_config(Path(args.gate_config).read_text())
        code, report = args.func(args)
    except _INPUT_ERRORS as e:
        print(f"qcount {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    report.seconds = time.perf_counter() - t0
    print(report.line())
    return code


if __name__ == "__main__":
    sys.exit(main())
