"""Layered AND/OR circuits over residue variables and their EF encoding."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..arith import CrrAssignment
from ..ctl import And, Atom, ExistsFinally, ExistsNext, ForallNext, Formula, Not
from ..ocp import StructuralError
from .crr import BETA, GAMMA, ALPHA, GadgetOcn, Lit, _Builder, check_vars


@dataclass(frozen=True)
class LayeredCircuit:
    """``kinds[j]`` is "AND" or "OR" for gate layer j+1 (layer 1 holds the output).

    ``children[j][g]`` lists the indices of gate g's children in the next
    layer; the last layer is ``inputs``, a tuple of variables.
    """

    kinds: tuple[str, ...]
    children: tuple[tuple[tuple[int, ...], ...], ...]
    inputs: tuple[Lit, ...]

    def __post_init__(self):
        if len(self.kinds) != len(self.children):
            raise StructuralError("one kind per gate layer")
        if any(k not in ("AND", "OR") for k in self.kinds):
            raise StructuralError("layer kinds are AND or OR")
        widths = [len(layer) for layer in self.children] + [len(self.inputs)]
        if widths[0] != 1:
            raise StructuralError("exactly one output gate")
        for j, layer in enumerate(self.children):
            for kids in layer:
                if not kids:
                    raise StructuralError("non-input gates need a child")
                if any(not 0 <= c < widths[j + 1] for c in kids):
                    raise StructuralError("child index out of range")

    @property
    def depth(self) -> int:
        return len(self.kinds)

    def gate_count(self) -> int:
        return sum(len(layer) for layer in self.children) + len(self.inputs)

    def evaluate(self, x: CrrAssignment) -> bool:
        vals = [bool(x.value(v.i, v.r)) for v in self.inputs]
        for kind, layer in zip(reversed(self.kinds), reversed(self.children)):
            op = all if kind == "AND" else any
            vals = [op(vals[c] for c in kids) for kids in layer]
        return vals[0]


def _gate(layer: int, idx: int) -> str:
    return f"g{layer}_{idx}"


def ocn_of_circuit(C: LayeredCircuit, primes: Sequence[int], prefix: str = "") -> GadgetOcn:
    """Gates become locations with 0-edges to their children; input gates
    branch into the residue tester.  The entry is the output gate."""
    for v in C.inputs:
        check_vars(v, primes)
    b = _Builder()
    k = C.depth
    for j, layer in enumerate(C.children):
        for g in range(len(layer)):
            b.loc(prefix + _gate(j + 1, g))
    for g in range(len(C.inputs)):
        b.loc(prefix + _gate(k + 1, g), ALPHA)
    b.div_gadget(prefix, primes)
    for j, layer in enumerate(C.children):
        for g, kids in enumerate(layer):
            for c in kids:
                b.both(prefix + _gate(j + 1, g), 0, prefix + _gate(j + 2, c))
    for g, v in enumerate(C.inputs):
        b.branch(prefix, prefix + _gate(k + 1, g), v, primes)
    return GadgetOcn(b.ocp(), prefix + _gate(1, 0))


def ef_probe_tail() -> Formula:
    """EX EF(beta & ~EX gamma): from an input gate, the residue test succeeds."""
    return ExistsNext(ExistsFinally(And(Atom(BETA), Not(ExistsNext(Atom(GAMMA))))))


def ef_of_circuit(C: LayeredCircuit) -> Formula:
    """M_1 ... M_k EX EF(beta & ~EX gamma) with M_j = EX for OR layers, AX for AND."""
    f = ef_probe_tail()
    for kind in reversed(C.kinds):
        f = ExistsNext(f) if kind == "OR" else ForallNext(f)
    return f
