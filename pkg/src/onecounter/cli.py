"""Command-line front end.

Exit codes: 0 true / pass, 1 false / fail, 2 malformed input or refused
computation, 3 indeterminate.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import checker
from .arith import DomainError, primes_first
from .ctl import CtlSyntaxError, lud, parse, render, size
from .gadgets.boolean import parse_bool, parse_dimacs, parse_qbf
from .gadgets.circuits import LayeredCircuit, ef_of_circuit, ocn_of_circuit
from .gadgets.crr import (Lit, crr_equals_formula, crr_formula_of_predicate, eliminate_negations,
                          ocn_of_crr_formula, parse_crr, prop1_goal, serial_compose)
from .gadgets.fig7 import figure7, phi_div, psi_bit, qbf_reduce
from .gadgets.wagner import wagner_reduce
from .ocmdp import (BudgetError, almost_sure_reach, exact_max_reach_values, induced_finite_mdp,
                    mdp_of_crr_formula, mdp_serial_compose, parse_ocmdp, prepare_nfa,
                    render_ocmdp)
from .ocp import StructuralError, parse_nfa, parse_ocp, render_ocp

EXIT_TRUE, EXIT_FALSE, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_counter(text: str) -> int:
    """Decimal, or binary with a 0b prefix."""
    text = text.strip().replace("_", "")
    try:
        n = int(text[2:], 2) if text.lower().startswith("0b") else int(text, 10)
    except ValueError:
        raise UsageError(f"bad counter value {text!r}") from None
    if n < 0:
        raise UsageError("counter values are natural numbers")
    return n


def parse_at(text: str) -> tuple[str, int]:
    if ":" not in text:
        raise UsageError("--at expects LOCATION:COUNTER")
    q, n = text.rsplit(":", 1)
    return q, parse_counter(n)


def _emit(record: dict, out):
    for k, v in record.items():
        print(f"{k}={v}", file=out)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# check


def _guard(O, B, budget):
    size = len(O.locations) * (B + 1)
    if size > budget:
        raise UsageError(f"infeasible: bounded oracle needs {size} states (budget {budget})")


def cmd_check(args, out) -> int:
    O = parse_ocp(_read(args.ocp), expand=False)
    text = args.formula if args.formula is not None else _read(args.formula_file)
    phi = parse(text.strip())
    q, n = parse_at(args.at)
    O.index(q)
    record = {"formula": render(phi), "location": q, "counter": n}
    engine = args.engine
    t0 = time.perf_counter()
    answer = None
    if engine in ("periodic", "auto"):
        try:
            table = checker.evaluate_periodic(O, phi, budget=args.budget)
            p = table.params
            answer = table.holds(q, n)
            record.update(engine="periodic", threshold=p.threshold, period=p.period,
                          representative=checker.representative(n, p.threshold, p.period))
        except (checker.InfeasibleError, StructuralError) as exc:
            if engine == "periodic":
                raise UsageError(str(exc)) from None
            record["periodic_skipped"] = str(exc).split(";")[0]
    if answer is None:
        m = re.fullmatch(r"(capped|tv):(\d+)", engine)
        if m:
            B = int(m.group(2))
            _guard(O, B, args.budget)
            table = checker.BoundedOracle(O).table(phi, B, "capped" if m.group(1) == "capped" else "tv")
            answer = table.value(q, n)
            record.update(engine=m.group(1), bound=B)
        elif engine == "auto":
            B0 = args.b0 if args.b0 is not None else max(64, 2 * n)
            _guard(O, 4 * B0, args.budget)
            answer, info = checker.BoundedOracle(O).check_verbose(phi, q, n, B0)
            record.update(engine=f"oracle-{info['engine']}",
                          bounds=",".join(map(str, info["bounds"])))
        elif engine != "periodic":
            raise UsageError(f"unknown engine {engine!r}")
    record["answer"] = {True: "true", False: "false", None: "indeterminate"}[answer]
    if not args.machine:
        record["seconds"] = f"{time.perf_counter() - t0:.3f}"
    _emit(record, out)
    return {True: EXIT_TRUE, False: EXIT_FALSE, None: EXIT_UNKNOWN}[answer]


# gadgets


def parse_circuit(text: str) -> LayeredCircuit:
    """``layer KIND : c,c c,c ...`` lines from the output down, then ``inputs : x1_0 ...``."""
    kinds, children, inputs = [], [], None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line == "circuit":
            continue
        head, _, body = line.partition(":")
        head = head.split()
        try:
            if head and head[0] == "layer" and len(head) == 2:
                kinds.append(head[1].upper())
                children.append(tuple(tuple(int(c) for c in g.split(",")) for g in body.split()))
            elif head == ["inputs"]:
                inputs = []
                for tok in body.split():
                    mm = re.fullmatch(r"x(\d+)_(\d+)", tok)
                    if not mm:
                        raise StructuralError(f"bad input variable {tok!r}")
                    inputs.append(Lit(int(mm.group(1)), int(mm.group(2))))
            else:
                raise StructuralError(f"cannot parse {line!r}")
        except ValueError:
            raise StructuralError(f"line {lineno}: bad child index") from None
    if inputs is None:
        raise StructuralError("circuit needs an 'inputs' line")
    return LayeredCircuit(tuple(kinds), tuple(children), tuple(inputs))


def parse_truth(text: str, m: int) -> list[int]:
    bits = [c for c in text if c in "01"]
    if len(bits) != 2**m:
        raise StructuralError(f"truth table needs {2**m} bits, found {len(bits)}")
    return [int(c) for c in bits]


def _primes_for(m: int | None, *lits) -> list[int]:
    if m is None:
        m = max([v.i for v in lits] + [1])
    return primes_first(m)


def _crr_lits(F):
    if isinstance(F, Lit):
        return [F]
    out = []
    for attr in ("arg", "left", "right"):
        if hasattr(F, attr):
            out += _crr_lits(getattr(F, attr))
    return out


def cmd_gadget(args, out) -> int:
    kind = args.kind
    start = None
    if kind == "fig7":
        O, phi = figure7(), None
    elif kind in ("phidiv", "psibit"):
        i = int(args.arg)
        O, phi = figure7(), (phi_div(i) if kind == "phidiv" else psi_bit(i))
    elif kind == "qbf":
        O, phi, start = figure7(), qbf_reduce(parse_qbf(_read(args.arg))), "tb:0"
    elif kind == "prop1":
        F = parse_crr(_read(args.crr))
        primes = _primes_for(args.primes, *_crr_lits(F))
        gad = ocn_of_crr_formula(eliminate_negations(F, primes), primes)
        O, phi, start = gad.ocp, prop1_goal(), gad.in_loc
    elif kind == "circuit":
        C = parse_circuit(_read(args.arg))
        primes = _primes_for(args.primes, *C.inputs)
        gad = ocn_of_circuit(C, primes)
        O, phi, start = gad.ocp, ef_of_circuit(C), gad.in_loc
    elif kind == "serial":
        if args.m is None:
            raise UsageError("serial needs --m")
        primes = primes_first(args.m)
        truth = parse_truth(_read(args.pred), args.m)
        F = crr_formula_of_predicate(truth, primes, args.m)
        G = crr_equals_formula(primes, 2**args.m)
        O, s0, phi = serial_compose(parse_nfa(_read(args.nfa)), F, G, primes,
                                    "eg" if args.eg else "until")
        start = f"{s0}:0"
    elif kind == "wagner":
        text = _read(args.arg)
        if re.search(r"^\s*p\s+cnf", text, re.M):
            psi, nv = parse_dimacs(text)
        else:
            psi, nv = parse_bool(text), None
        m = args.m if args.m is not None else nv
        if m is None:
            raise UsageError("wagner needs --m for formula input")
        O, q0, phi = wagner_reduce(psi, m)
        start = f"{q0}:0"
    elif kind == "lemma5":
        F = parse_crr(_read(args.crr))
        primes = _primes_for(args.primes, *_crr_lits(F))
        A, qF, R = mdp_of_crr_formula(eliminate_negations(F, primes), primes)
        text = render_ocmdp(A, R) + f"# start: {qF}\n"
        return _write(args, text, None)
    elif kind == "thm10":
        if args.m is None:
            raise UsageError("thm10 needs --m")
        primes = primes_first(args.m)
        F = crr_formula_of_predicate(parse_truth(_read(args.pred), args.m), primes, args.m)
        G = crr_equals_formula(primes, 2**args.m)
        A, s0, R = mdp_serial_compose(prepare_nfa(parse_nfa(_read(args.nfa))), F, G, primes)
        return _write(args, render_ocmdp(A, R) + f"# start: {s0}\n", None)
    else:
        raise UsageError(f"unknown gadget {kind!r}")
    text = render_ocp(O)
    if start is not None:
        text += f"# start: {start}\n"
    if phi is not None:
        text += f"# formula: {render(phi)}\n# size: {size(phi)}\n# lud: {lud(phi)}\n"
    return _write(args, text, phi)


def _write(args, text, phi) -> int:
    if args.out:
        suffix = ".ocmdp" if args.kind in ("lemma5", "thm10") else ".ocp"
        Path(args.out + suffix).write_text(text)
        if phi is not None:
            Path(args.out + ".ctl").write_text(render(phi) + "\n")
    else:
        sys.stdout.write(text)
    return EXIT_TRUE


# MDP analysis


def cmd_mdp(args, out) -> int:
    A, targets = parse_ocmdp(_read(args.mdp))
    q, n = parse_at(args.at)
    if q not in A.locations:
        raise StructuralError(f"unknown location {q!r}")
    modes = {"opt": ["optimistic"], "pess": ["pessimistic"],
             "both": ["pessimistic", "optimistic"]}[args.frontier]
    record = {"location": q, "counter": n, "bound": args.bound}
    results = {}
    for mode in modes:
        fm = induced_finite_mdp(A, (q, n), args.bound, mode)
        T = fm.targets_at_zero(targets)
        if args.query == "value":
            results[mode] = exact_max_reach_values(fm, T)[0]
        else:
            results[mode] = 0 in almost_sure_reach(fm, T)
        record[f"{mode}_vertices"] = len(fm.vertices)
    for mode, v in results.items():
        record[mode] = (f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction)
                        else str(v).lower())
    if len(results) == 2:
        lo, hi = results["pessimistic"], results["optimistic"]
        record["sandwich"] = "ok" if lo <= hi else "violated"
    if args.query == "value" and args.at_most is not None:
        claim = Fraction(args.at_most)
        record["at_most"] = str(claim)
        record["claim"] = "PASS" if all(v <= claim for v in results.values()) else "FAIL"
    _emit(record, out)
    if args.query == "asure":
        vals = set(results.values())
        if len(vals) > 1:
            return EXIT_UNKNOWN
        return EXIT_TRUE if vals.pop() else EXIT_FALSE
    if record.get("claim") == "FAIL" or record.get("sandwich") == "violated":
        return EXIT_FALSE
    return EXIT_TRUE


# selftest


def cmd_selftest(args, out) -> int:
    from .suites import SUITES

    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        res = SUITES[name]()
        print(f"{name}: {res.summary()}", file=out)
        ok &= res.ok
    return EXIT_TRUE if ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    from .suites import SUITES

    ap = argparse.ArgumentParser(prog="onecounter", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide (q, n) |= formula")
    c.add_argument("--ocp", required=True)
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--formula")
    g.add_argument("--formula-file")
    c.add_argument("--at", required=True, help="LOCATION:COUNTER (decimal or 0b...)")
    c.add_argument("--engine", default="auto", help="periodic | capped:B | tv:B | auto")
    c.add_argument("--budget", type=int, default=checker.DEFAULT_BUDGET)
    c.add_argument("--b0", type=int, help="first oracle bound for auto escalation")
    c.add_argument("--machine", action="store_true", help="omit timing for byte-stable output")

    gd = sub.add_parser("gadget", help="emit a reduction instance")
    gd.add_argument("kind", choices=["fig7", "phidiv", "psibit", "qbf", "prop1", "circuit",
                                     "serial", "wagner", "lemma5", "thm10"])
    gd.add_argument("arg", nargs="?", help="index or input file, depending on the gadget")
    gd.add_argument("--crr")
    gd.add_argument("--primes", type=int, help="number of primes m")
    gd.add_argument("--nfa")
    gd.add_argument("--pred")
    gd.add_argument("--m", type=int)
    gd.add_argument("--eg", action="store_true")
    gd.add_argument("--out", help="write PREFIX.ocp and PREFIX.ctl instead of stdout")

    m = sub.add_parser("mdp", help="exact reachability on a counter-capped OC-MDP")
    m.add_argument("query", choices=["value", "asure"])
    m.add_argument("--mdp", required=True)
    m.add_argument("--at", required=True)
    m.add_argument("--bound", type=int, required=True)
    m.add_argument("--frontier", choices=["opt", "pess", "both"], default="both")
    m.add_argument("--at-most", help="report whether the value is at most this rational")

    s = sub.add_parser("selftest", help="run the cross-validation suites")
    s.add_argument("suite", choices=[*SUITES, "all"])
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    handler = {"check": cmd_check, "gadget": cmd_gadget, "mdp": cmd_mdp,
               "selftest": cmd_selftest}[args.command]
    try:
        return handler(args, sys.stdout)
    except (UsageError, StructuralError, CtlSyntaxError, DomainError, BudgetError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
