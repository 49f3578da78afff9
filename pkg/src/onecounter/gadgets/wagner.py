"""EF encoding of the lexicographic-maximum parity problem.

Given psi over x_1..x_m, decide whether the largest M < 2^m whose binary
digits (x_i = bit_i(M)) satisfy psi exists and is even.
"""

from __future__ import annotations

from ..arith import bit, primes_first
from ..ctl import And, Atom, ExistsFinally, ExistsNext, Formula, Not, conj
from ..ocp import Ocp, StructuralError
from .boolean import BAnd, BNot, BoolFormula, BVar, bool_eval, bool_vars
from .circuits import LayeredCircuit, ef_of_circuit, ocn_of_circuit
from .crr import _Builder, crr_equals_formula, Lit


def binary_env(M: int, m: int) -> dict[str, bool]:
    return {f"x{i}": bool(bit(i, M)) for i in range(1, m + 1)}


def lexmax_even_oracle(psi: BoolFormula, m: int) -> bool:
    if m > 20:
        raise ValueError("brute force is limited to m <= 20")
    best = None
    for M in range(2**m):
        if bool_eval(psi, binary_env(M, m)):
            best = M
    return best is not None and best % 2 == 0


def _literals(F) -> list[Lit]:
    if isinstance(F, Lit):
        return [F]
    return _literals(F.left) + _literals(F.right)


def _two_layer(kind_top: str, groups: list[list[Lit]]) -> LayeredCircuit:
    """One gate of ``kind_top`` over a layer of the dual gates, one per group."""
    inputs: list[Lit] = []
    where: dict[Lit, int] = {}
    layer2 = []
    for grp in groups:
        kids = []
        for v in grp:
            if v not in where:
                where[v] = len(inputs)
                inputs.append(v)
            kids.append(where[v])
        layer2.append(tuple(kids))
    dual = "AND" if kind_top == "OR" else "OR"
    return LayeredCircuit((kind_top, dual), ((tuple(range(len(groups))),), tuple(layer2)),
                          tuple(inputs))


def wagner_circuits(psi: BoolFormula, m: int):
    """Circuits C (psi on CRR(M)), its complement, the evenness test and G (M = 2^m)."""
    primes = primes_first(m)
    sat = [M for M in range(2**m) if bool_eval(psi, binary_env(M, m))]
    clash = [Lit(1, 0), Lit(1, 1)]
    terms = [[Lit(i, M % p) for i, p in enumerate(primes, start=1)] for M in sat]
    C = _two_layer("OR", terms or [clash])
    # complement: every satisfying residue vector is excluded by some other residue
    blocks = [[Lit(v.i, r) for v in term for r in range(primes[v.i - 1]) if r != v.r]
              for term in terms]
    notC = _two_layer("AND", blocks or [clash])
    E = LayeredCircuit((), (), (Lit(1, 0),))
    G = LayeredCircuit(("AND",), ((tuple(range(m)),),), tuple(_literals(crr_equals_formula(primes, 2**m))))
    return primes, C, notC, E, G


def wagner_reduce(psi: BoolFormula, m: int) -> tuple[Ocp, str, Formula]:
    """Skeleton q0/p/r/s with circuit gadgets hanging off it; the EF goal at
    (q0, 0) holds iff the lexicographic maximum exists and is even.

    With m = 1 the residue of 2^m modulo 2 coincides with that of 0, so the
    instance is padded to m = 2 with x_2 forced to 0.
    """
    if m < 1:
        raise StructuralError("need m >= 1")
    extra = bool_vars(psi) - {f"x{i}" for i in range(1, m + 1)}
    if extra:
        raise StructuralError(f"variables outside x1..x{m}: {sorted(extra)}")
    if m == 1:
        psi, m = BAnd(psi, BNot(BVar("x2"))), 2
    primes, C, notC, E, G = wagner_circuits(psi, m)
    b = _Builder()
    for q in ("q0", "p", "r", "s"):
        b.loc(q, f"at_{q}")
    for src, d, dst in (("q0", 1, "q0"), ("q0", 0, "p"), ("q0", 1, "r")):
        b.both(src, d, dst)
    for tr in (("p", -1, "p"), ("r", 1, "r"), ("r", 0, "s"), ("s", -1, "s")):
        b.pos.add(tr)
    probes = {}
    for name, circuit, host in (("C", C, "q0"), ("E", E, "q0"), ("Gp", G, "p"),
                                ("Gs", G, "s"), ("NC", notC, "r")):
        gad = ocn_of_circuit(circuit, primes, prefix=f"{name}.")
        sub = gad.ocp
        for q in sub.locations:
            b.loc(q)
        for p, locs in sub.labeling.items():
            for q in locs:
                b.loc(q, p)
        b.zero |= sub.zero_transitions
        b.pos |= sub.pos_transitions
        b.loc(gad.in_loc, f"in_{name}")
        b.both(host, 0, gad.in_loc)
        probes[name] = ExistsNext(And(Atom(f"in_{name}"), ef_of_circuit(circuit)))
    at = {q: Atom(f"at_{q}") for q in ("q0", "p", "r", "s")}
    below_p = Not(ExistsNext(And(at["p"], ExistsFinally(And(at["p"], probes["Gp"])))))
    below_s = Not(ExistsNext(And(at["s"], ExistsFinally(And(at["s"], probes["Gs"])))))
    larger = ExistsFinally(conj(at["r"], below_s, Not(probes["NC"])))
    goal = ExistsFinally(conj(at["q0"], probes["C"], probes["E"], below_p, Not(larger)))
    return b.ocp(), "q0", goal
