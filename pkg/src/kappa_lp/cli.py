"""Command line interface: ``kappa-lp solve | gen | check | kappa``."""

from __future__ import annotations

import argparse
import sys
from contextlib import ExitStack

from . import generators, io
from .driver import DriverConfig, Tolerances, solve
from .lp_core import InstanceError, Verdict, certificate_violations, check_delta_feasible
from .trace import Trace

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_KAPPA_CAP = 3

_VERDICT_EXIT = {Verdict.SOLVED: EXIT_OK, Verdict.INFEASIBLE: EXIT_INFEASIBLE, Verdict.KAPPA_CAP_REACHED: EXIT_KAPPA_CAP}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _cmd_solve(args) -> int:
    inst = io.parse_instance(_read(args.instance), normalize=args.normalize)
    config = DriverConfig(delta=args.delta, kappa_hat_init=args.kappa_hint, kappa_hat_cap=args.max_kappa,
                          budget_multiplier=args.budget_multiplier)
    with ExitStack() as stack:
        stream = stack.enter_context(open(args.trace, "a", encoding="utf-8")) if args.trace else None
        report = solve(inst, config, Trace(stream) if stream else None)
    doc = io.solution_document(inst, report)
    if args.oracle_check:
        from .circuit_oracle import exact_lp

        exact = exact_lp(inst)
        doc["oracle"] = {"status": exact.status.value,
                         "optimum": None if exact.phi is None else float(exact.phi)}
        if report.x is not None and exact.phi is not None:
            doc["oracle"]["within_delta"] = inst.objective(report.x) <= float(exact.phi) + args.delta * inst.c_inf
    _write(args.output, io.dump(doc))
    if args.emit_cert and report.certificate is not None:
        level = 2 * Tolerances.for_instance(inst, args.delta, report.kappa_hat_final).delta_opt
        _write(args.emit_cert, io.dump(io.certificate_document(report.certificate, level, report.rhs)))
    return _VERDICT_EXIT[report.verdict]


def _cmd_gen(args) -> int:
    if args.kind == "netflow":
        inst = generators.gen_netflow(args.nodes, args.arcs, args.seed)
    elif args.kind == "random":
        inst = generators.gen_random(args.rows, args.cols, args.seed)
    else:
        inst, _ = generators.gen_hoffman(args.epsilon)
    _write(args.output, io.serialize_instance(inst))
    return EXIT_OK


def _cmd_check(args) -> int:
    inst = io.parse_instance(_read(args.instance), normalize=args.normalize)
    x = io.parse_solution(_read(args.solution))
    problems = []
    if x.shape != (inst.n,):
        problems.append(f"x has {x.size} entries, expected {inst.n}")
    elif not check_delta_feasible(inst, x, args.delta):
        problems.append(f"x is not {args.delta!r}-feasible (residual {inst.residual_l1(x):.3e})")
    if args.certificate and not problems:
        cert, level, rhs = io.parse_certificate(_read(args.certificate))
        if args.cert_delta is not None:
            level = args.cert_delta
        target = inst
        if rhs is not None:
            if rhs.shape != (inst.m,):
                raise InstanceError(f"certificate rhs has {rhs.size} entries, expected {inst.m}")
            # The certificate refers to the feasible right-hand side found by phase one.
            target = inst.replace(b=rhs)
        problems += certificate_violations(target, x, cert, level if level is not None else args.delta)
    for p in problems:
        print(p, file=sys.stderr)
    if problems:
        return EXIT_ERROR
    print("ok")
    return EXIT_OK


def _cmd_kappa(args) -> int:
    from .circuit_oracle import kappa_extended

    inst = io.parse_instance(_read(args.instance), normalize=args.normalize)
    k, kbar = kappa_extended(inst.A.toarray())
    _write(None, io.dump({"kappa": str(k), "kappa_bar": kbar}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kappa-lp", description="First-order LP solver with certified accuracy.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve an instance")
    s.add_argument("instance", help="instance document, or - for stdin")
    s.add_argument("--delta", type=float, default=1e-3)
    s.add_argument("--kappa-hint", type=float, default=1.0, help="initial condition number estimate")
    s.add_argument("--max-kappa", type=float, default=2.0**60)
    s.add_argument("--budget-multiplier", type=float, default=1.0)
    s.add_argument("--normalize", action="store_true", help="rescale A and b so that ||A||_1 = 1")
    s.add_argument("--trace", metavar="PATH", help="append NDJSON trace events to PATH")
    s.add_argument("--emit-cert", metavar="PATH", help="write the dual certificate to PATH")
    s.add_argument("--oracle-check", action="store_true", help="compare against the exact optimum (tiny instances)")
    s.add_argument("-o", "--output", help="solution document path (default stdout)")
    s.set_defaults(func=_cmd_solve)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("kind", choices=["netflow", "random", "hoffman"])
    g.add_argument("--nodes", type=int, default=5)
    g.add_argument("--arcs", type=int, default=10)
    g.add_argument("--rows", type=int, default=3)
    g.add_argument("--cols", type=int, default=8)
    g.add_argument("--epsilon", type=float, default=0.1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=_cmd_gen)

    c = sub.add_parser("check", help="validate a solution and certificate against an instance")
    c.add_argument("instance")
    c.add_argument("solution")
    c.add_argument("certificate", nargs="?")
    c.add_argument("--delta", type=float, default=1e-3, help="feasibility tolerance for x")
    c.add_argument("--cert-delta", type=float, help="certificate accuracy (default: the one recorded in it)")
    c.add_argument("--normalize", action="store_true")
    c.set_defaults(func=_cmd_check)

    k = sub.add_parser("kappa", help="exact circuit imbalances of a tiny instance")
    k.add_argument("instance")
    k.add_argument("--normalize", action="store_true")
    k.set_defaults(func=_cmd_kappa)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, ValueError, OSError) as exc:
        print(f"kappa-lp: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
