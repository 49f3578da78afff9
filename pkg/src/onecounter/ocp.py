"""One-counter processes, their configurations, and binary NFAs.

An :class:`Ocp` keeps two transition relations: zero transitions fire only
at counter 0, positive transitions only at counter > 0.  Transitions carry
an integer counter update.  Unit updates (-1, 0, +1) are the normal case;
larger magnitudes are accepted as single steps that require the counter
to stay non-negative, and :func:`normalize_weighted` rewrites them into
unit chains when a unit process is required.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple


class StructuralError(ValueError):
    """Malformed process, automaton or input file."""


class Configuration(NamedTuple):
    location: str
    counter: int


Transition = tuple[str, int, str]


@dataclass(frozen=True, eq=False)
class Ocp:
    locations: tuple[str, ...]
    labeling: Mapping[str, frozenset[str]]
    zero_transitions: frozenset[Transition]
    pos_transitions: frozenset[Transition]
    # per-location successor lists, (dst id, delta), sorted
    _index: dict = field(init=False, repr=False)
    _zero_out: tuple = field(init=False, repr=False)
    _pos_out: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if not self.locations:
            raise StructuralError("an OCP needs at least one location")
        if len(set(self.locations)) != len(self.locations):
            raise StructuralError("duplicate location names")
        index = {q: i for i, q in enumerate(self.locations)}
        for p, locs in self.labeling.items():
            bad = set(locs) - index.keys()
            if bad:
                raise StructuralError(f"proposition {p} labels unknown locations {sorted(bad)}")
        for kind, trans in (("zero", self.zero_transitions), ("pos", self.pos_transitions)):
            for src, delta, dst in trans:
                if src not in index or dst not in index:
                    raise StructuralError(f"{kind} transition {(src, delta, dst)} has an unknown endpoint")
                if kind == "zero" and delta < 0:
                    raise StructuralError(f"zero transition {(src, delta, dst)} decrements")
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_zero_out", _out_lists(index, self.zero_transitions))
        object.__setattr__(self, "_pos_out", _out_lists(index, self.pos_transitions))

    @classmethod
    def build(cls, locations: Iterable[str], labeling: Mapping[str, Iterable[str]] | None = None,
              zero: Iterable[Transition] = (), pos: Iterable[Transition] = ()) -> "Ocp":
        labeling = labeling or {}
        return cls(
            tuple(locations),
            {p: frozenset(ls) for p, ls in labeling.items() if ls},
            frozenset((s, int(d), t) for s, d, t in zero),
            frozenset((s, int(d), t) for s, d, t in pos),
        )

    # dense ids

    @property
    def size(self) -> int:
        """|Q| + sum |Q_p| + |delta_0| + |delta_>0|."""
        return (len(self.locations) + sum(len(v) for v in self.labeling.values())
                + len(self.zero_transitions) + len(self.pos_transitions))

    def index(self, q: str) -> int:
        try:
            return self._index[q]
        except KeyError:
            raise StructuralError(f"unknown location {q!r}") from None

    def zero_out(self, i: int) -> tuple[tuple[int, int], ...]:
        return self._zero_out[i]

    def pos_out(self, i: int) -> tuple[tuple[int, int], ...]:
        return self._pos_out[i]

    def props(self) -> list[str]:
        return sorted(self.labeling)

    def label_ids(self, p: str) -> frozenset[int]:
        return frozenset(self._index[q] for q in self.labeling.get(p, ()))

    @property
    def is_unit(self) -> bool:
        return all(-1 <= d <= 1 for _, d, _ in self.pos_transitions) and all(
            d <= 1 for _, d, _ in self.zero_transitions)

    def max_increment(self) -> int:
        deltas = [d for _, d, _ in self.zero_transitions | self.pos_transitions]
        return max([0, *deltas])

    def relabel(self, extra: Mapping[str, Iterable[str]]) -> "Ocp":
        labeling = {p: set(v) for p, v in self.labeling.items()}
        for p, locs in extra.items():
            labeling.setdefault(p, set()).update(locs)
        return Ocp.build(self.locations, labeling, self.zero_transitions, self.pos_transitions)


def _out_lists(index, transitions):
    out = [[] for _ in index]
    for src, delta, dst in transitions:
        out[index[src]].append((index[dst], delta))
    return tuple(tuple(sorted(lst)) for lst in out)


def successors(O: Ocp, c: Configuration) -> list[Configuration]:
    """Successor configurations, ordered by destination index then update."""
    q, n = c
    if n < 0:
        raise StructuralError("counter values are natural numbers")
    i = O.index(q)
    out = O.zero_out(i) if n == 0 else O.pos_out(i)
    return [Configuration(O.locations[j], n + d) for j, d in out if n + d >= 0]


def is_net(O: Ocp) -> bool:
    return O.zero_transitions <= O.pos_transitions


def normalize_weighted(O: Ocp) -> tuple[Ocp, dict[str, str]]:
    """Expand every transition of magnitude > 1 into a chain of unit steps.

    Returns the unit process and a map from each location of the result to
    the location of ``O`` it stands for (fresh chain locations map to the
    source of their transition).  Chain locations carry no propositions.
    A chain built from a zero transition starts with the zero-test step and
    continues with positive steps, since the counter is already positive.
    """
    locations = list(O.locations)
    origin = {q: q for q in locations}
    zero: set[Transition] = set()
    pos: set[Transition] = set()
    chains: dict[tuple[str, str, int, str], list[str]] = {}

    def chain(kind, src, delta, dst):
        key = (kind, src, delta, dst)
        if key not in chains:
            names = [f"{src}~{kind}{delta:+d}~{dst}~{j}" for j in range(1, abs(delta))]
            for nm in names:
                if nm in origin:
                    raise StructuralError(f"fresh name clash: {nm}")
                locations.append(nm)
                origin[nm] = src
            chains[key] = names
        return chains[key]

    for kind, trans, target in (("z", O.zero_transitions, zero), ("p", O.pos_transitions, pos)):
        for src, delta, dst in sorted(trans):
            if -1 <= delta <= 1:
                target.add((src, delta, dst))
                continue
            step = 1 if delta > 0 else -1
            hops = [src, *chain(kind, src, delta, dst), dst]
            target.add((hops[0], step, hops[1]))
            for a, b in zip(hops[1:], hops[2:]):
                pos.add((a, step, b))
    labeling = {p: set(v) for p, v in O.labeling.items()}
    return Ocp.build(locations, labeling, zero, pos), origin


# NFAs over {0, 1}


@dataclass(frozen=True)
class Nfa:
    states: tuple[str, ...]
    transitions: frozenset[tuple[str, int, str]]
    initial: str
    finals: frozenset[str]

    def __post_init__(self):
        names = set(self.states)
        if self.initial not in names:
            raise StructuralError("initial state is not a state")
        if not self.finals <= names:
            raise StructuralError("final states must be states")
        for s, b, t in self.transitions:
            if s not in names or t not in names or b not in (0, 1):
                raise StructuralError(f"bad NFA transition {(s, b, t)}")

    @classmethod
    def build(cls, states, transitions, initial, finals) -> "Nfa":
        return cls(tuple(states), frozenset((s, int(b), t) for s, b, t in transitions),
                   initial, frozenset(finals))

    def step(self, current: set[str], b: int) -> set[str]:
        return {t for s, c, t in self.transitions if c == b and s in current}


def nfa_accepts(A: Nfa, w: str) -> bool:
    current = {A.initial}
    for ch in w:
        if ch not in "01":
            raise StructuralError(f"NFA input must be a bit string, got {ch!r}")
        current = A.step(current, int(ch))
        if not current:
            return False
    return bool(current & A.finals)


# text formats


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_ocp(text: str, expand: bool = False) -> Ocp:
    """Read the line-oriented OCP format.

    ``wzero``/``wpos`` lines carry arbitrary integer updates.  They are
    kept as single steps unless ``expand`` is set, in which case the whole
    process goes through :func:`normalize_weighted`.
    """
    locations: list[str] = []
    labeling: dict[str, list[str]] = {}
    zero: list[Transition] = []
    pos: list[Transition] = []
    header = False
    for lineno, toks in _lines(text):
        kw = toks[0]
        try:
            if kw == "ocp":
                header = True
            elif kw == "loc":
                locations.extend(toks[1:])
            elif kw == "prop":
                if len(toks) < 3 or toks[2] != ":":
                    raise StructuralError("expected 'prop NAME : loc...'")
                labeling.setdefault(toks[1], []).extend(toks[3:])
            elif kw in ("zero", "pos", "wzero", "wpos"):
                if len(toks) != 4:
                    raise StructuralError(f"expected '{kw} src delta dst'")
                delta = int(toks[2])
                if kw == "zero" and delta not in (0, 1):
                    raise StructuralError("zero transitions update by 0 or +1")
                if kw == "pos" and delta not in (-1, 0, 1):
                    raise StructuralError("positive transitions update by -1, 0 or +1")
                (zero if kw.endswith("zero") else pos).append((toks[1], delta, toks[3]))
            else:
                raise StructuralError(f"unknown keyword {kw!r}")
        except (StructuralError, ValueError) as exc:
            raise StructuralError(f"line {lineno}: {exc}") from None
    if not header:
        raise StructuralError("missing 'ocp' header")
    O = Ocp.build(locations, labeling, zero, pos)
    if expand and not O.is_unit:
        O, _ = normalize_weighted(O)
    return O


def render_ocp(O: Ocp) -> str:
    out = ["ocp", "loc " + " ".join(O.locations)]
    for p in O.props():
        locs = [q for q in O.locations if q in O.labeling[p]]
        out.append(f"prop {p} : " + " ".join(locs))
    order = {q: i for i, q in enumerate(O.locations)}

    def key(t):
        return (order[t[0]], order[t[2]], t[1])

    for src, d, dst in sorted(O.zero_transitions, key=key):
        out.append(f"{'zero' if d in (0, 1) else 'wzero'} {src} {d} {dst}")
    for src, d, dst in sorted(O.pos_transitions, key=key):
        out.append(f"{'pos' if -1 <= d <= 1 else 'wpos'} {src} {d} {dst}")
    return "\n".join(out) + "\n"


def parse_nfa(text: str) -> Nfa:
    states: list[str] = []
    finals: list[str] = []
    trans: list[tuple[str, int, str]] = []
    initial = None
    header = False
    for lineno, toks in _lines(text):
        kw = toks[0]
        if kw == "nfa":
            header = True
        elif kw == "state":
            states.extend(toks[1:])
        elif kw == "init" and len(toks) == 2:
            initial = toks[1]
        elif kw == "final":
            finals.extend(toks[1:])
        elif kw == "trans" and len(toks) == 4 and toks[2] in ("0", "1"):
            trans.append((toks[1], int(toks[2]), toks[3]))
        else:
            raise StructuralError(f"line {lineno}: cannot parse {' '.join(toks)!r}")
    if not header or initial is None:
        raise StructuralError("NFA file needs an 'nfa' header and an 'init' line")
    return Nfa.build(states, trans, initial, finals)


def render_nfa(A: Nfa) -> str:
    out = ["nfa", "state " + " ".join(A.states), f"init {A.initial}"]
    if A.finals:
        out.append("final " + " ".join(s for s in A.states if s in A.finals))
    order = {s: i for i, s in enumerate(A.states)}
    for s, b, t in sorted(A.transitions, key=lambda x: (order[x[0]], x[1], order[x[2]])):
        out.append(f"trans {s} {b} {t}")
    return "\n".join(out) + "\n"
