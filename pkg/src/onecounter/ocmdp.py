"""One-counter Markov decision processes with exact rational analysis.

Locations are split into nondeterministic ones (a strategy picks the
transition) and probabilistic ones (a fixed distribution picks it).  The
analyses run on the finite MDP induced by capping the counter at B; an
increment above B leads to a sink whose value is pinned to 1
(``optimistic``) or 0 (``pessimistic``), so the two modes bracket the true
value.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .gadgets.crr import (Bot, Conj, CrrFormula, Disj, Lit, Neg, Top,
                          check_vars, eliminate_negations, _is_leaf_conjunction)
from .ocp import Configuration, Nfa, StructuralError

DEFAULT_VERTEX_BUDGET = 10**5
HALF = Fraction(1, 2)

Transition = tuple[str, int, str]


class BudgetError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class OcMdp:
    nondet: tuple[str, ...]
    prob: tuple[str, ...]
    zero_transitions: frozenset[Transition]
    pos_transitions: frozenset[Transition]
    # probabilistic location -> {(delta, dst): probability}
    f_zero: Mapping[str, Mapping[tuple[int, str], Fraction]] = field(default_factory=dict)
    f_pos: Mapping[str, Mapping[tuple[int, str], Fraction]] = field(default_factory=dict)

    def __post_init__(self):
        locs = self.nondet + self.prob
        if not locs:
            raise StructuralError("an OC-MDP needs at least one location")
        if len(set(locs)) != len(locs):
            raise StructuralError("duplicate or doubly classified locations")
        names = set(locs)
        for kind, trans, lo in (("zero", self.zero_transitions, 0), ("pos", self.pos_transitions, -1)):
            for s, d, t in trans:
                if s not in names or t not in names:
                    raise StructuralError(f"{kind} transition {(s, d, t)} has an unknown endpoint")
                if not lo <= d <= 1:
                    raise StructuralError(f"{kind} transition {(s, d, t)} has an invalid update")
        prob = set(self.prob)
        for kind, dist, trans in (("zero", self.f_zero, self.zero_transitions),
                                  ("pos", self.f_pos, self.pos_transitions)):
            for q, dq in dist.items():
                if q not in prob:
                    raise StructuralError(f"distribution given for non-probabilistic {q}")
                out = {(d, t) for s, d, t in trans if s == q}
                if set(dq) != out:
                    raise StructuralError(f"{kind} distribution of {q} must cover exactly its transitions")
                if any(p <= 0 for p in dq.values()) or sum(dq.values()) != 1:
                    raise StructuralError(f"{kind} distribution of {q} must be positive and sum to 1")
            for q in prob:
                if any(s == q for s, _, _ in trans) and q not in dist:
                    raise StructuralError(f"probabilistic {q} lacks a {kind} distribution")
        object.__setattr__(self, "_prob_set", frozenset(self.prob))
        object.__setattr__(self, "_out", {
            kind: _out_map(trans, dist)
            for kind, trans, dist in (("zero", self.zero_transitions, self.f_zero),
                                      ("pos", self.pos_transitions, self.f_pos))})

    @property
    def locations(self) -> tuple[str, ...]:
        return self.nondet + self.prob

    def is_probabilistic(self, q: str) -> bool:
        return q in self._prob_set

    def moves(self, q: str, n: int) -> list[tuple[Fraction | None, str, int]]:
        """(probability or None, dst, new counter), ordered by (delta, dst)."""
        out = self._out["zero" if n == 0 else "pos"].get(q, ())
        return [(p, t, n + d) for d, t, p in out]

    def missing(self) -> list[tuple[str, str]]:
        """(location, "zero" | "pos") pairs without outgoing transitions."""
        has_zero = {s for s, _, _ in self.zero_transitions}
        has_pos = {s for s, _, _ in self.pos_transitions}
        out = []
        for q in self.locations:
            if q not in has_zero:
                out.append((q, "zero"))
            if q not in has_pos:
                out.append((q, "pos"))
        return out

    def is_wellformed(self) -> bool:
        return not self.missing()


def _out_map(trans, dist):
    out: dict[str, list] = {}
    for s, d, t in sorted(trans):
        p = dist[s][(d, t)] if s in dist else None
        out.setdefault(s, []).append((d, t, p))
    return out


def complete_wellformed(A: OcMdp) -> tuple[OcMdp, list[tuple[str, str]]]:
    """Add (q, 0, q) loops where a location lacks zero or positive transitions.

    Returns the completed process and the list of additions.
    """
    added = A.missing()
    if not added:
        return A, []
    zero, pos = set(A.zero_transitions), set(A.pos_transitions)
    f_zero = {q: dict(d) for q, d in A.f_zero.items()}
    f_pos = {q: dict(d) for q, d in A.f_pos.items()}
    prob = set(A.prob)
    for q, kind in added:
        (zero if kind == "zero" else pos).add((q, 0, q))
        if q in prob:
            (f_zero if kind == "zero" else f_pos)[q] = {(0, q): Fraction(1)}
    return OcMdp(A.nondet, A.prob, frozenset(zero), frozenset(pos), f_zero, f_pos), added


# finite truncation

SINK = ("<sink>", -1)


@dataclass
class FiniteMdp:
    vertices: list[tuple[str, int]]
    probabilistic: list[bool]
    # per vertex: list of (probability or None, successor index)
    edges: list[list[tuple[Fraction | None, int]]]
    frontier_mode: str
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {v: j for j, v in enumerate(self.vertices)}

    @property
    def sink(self) -> int | None:
        return self.index.get(SINK)

    def ids(self, vs: Iterable[tuple[str, int]]) -> set[int]:
        return {self.index[v] for v in vs if v in self.index}

    def targets_at_zero(self, R: Iterable[str]) -> set[int]:
        return self.ids((q, 0) for q in R)

    def effective_targets(self, T: Iterable[int]) -> set[int]:
        T = set(T)
        s = self.sink
        if s is not None:
            if self.frontier_mode == "optimistic":
                T.add(s)
            else:
                T.discard(s)
        return T


def induced_finite_mdp(A: OcMdp, start: Configuration | tuple[str, int], B: int,
                       frontier_mode: str = "pessimistic",
                       budget: int = DEFAULT_VERTEX_BUDGET) -> FiniteMdp:
    if frontier_mode not in ("optimistic", "pessimistic"):
        raise ValueError("frontier mode is 'optimistic' or 'pessimistic'")
    if not A.is_wellformed():
        raise StructuralError(f"ill-formed OC-MDP, missing transitions: {A.missing()[:5]}; "
                              "use complete_wellformed first")
    q, n = start
    if q not in A.locations:
        raise StructuralError(f"unknown location {q!r}")
    if not 0 <= n <= B:
        raise ValueError("start counter must lie in [0, B]")
    prob = A._prob_set
    vertices = [(q, n)]
    index = {(q, n): 0}
    edges: list[list] = []
    kinds: list[bool] = []
    queue = deque([0])
    while queue:
        j = queue.popleft()
        v = vertices[j]
        while len(edges) <= j:
            edges.append([])
            kinds.append(False)
        if v == SINK:
            edges[j] = [(None, j)]
            continue
        loc, c = v
        kinds[j] = loc in prob
        out = []
        for p, dst, m in A.moves(loc, c):
            w = (dst, m) if m <= B else SINK
            if w not in index:
                index[w] = len(vertices)
                vertices.append(w)
                queue.append(index[w])
                if len(vertices) > budget:
                    raise BudgetError(f"truncated MDP exceeds {budget} vertices")
            out.append((p, index[w]))
        # parallel moves into the sink merge
        edges[j] = _merge(out, kinds[j])
    while len(edges) < len(vertices):
        edges.append([])
        kinds.append(False)
    return FiniteMdp(vertices, kinds, edges, frontier_mode, index)


def _merge(out, probabilistic):
    if not probabilistic:
        seen, res = set(), []
        for p, w in out:
            if w not in seen:
                seen.add(w)
                res.append((None, w))
        return res
    acc: dict[int, Fraction] = {}
    for p, w in out:
        acc[w] = acc.get(w, Fraction(0)) + p
    return [(p, w) for w, p in acc.items()]


# qualitative analysis


def _can_reach(M: FiniteMdp, T: set[int], allowed: set[int]) -> set[int]:
    """Vertices of ``allowed`` with some path into T staying inside ``allowed``."""
    preds: dict[int, list[int]] = {}
    for v in allowed:
        for _, w in M.edges[v]:
            preds.setdefault(w, []).append(v)
    seen = set(T & allowed)
    work = list(seen)
    while work:
        w = work.pop()
        for v in preds.get(w, ()):
            if v not in seen:
                seen.add(v)
                work.append(v)
    return seen


def almost_sure_reach(M: FiniteMdp, T: Iterable[int]) -> set[int]:
    """Vertices from which some strategy reaches T with probability 1."""
    T = M.effective_targets(T)
    R = set(range(len(M.vertices)))
    while True:
        # drop probabilistic vertices that may leave R and nondeterministic ones stuck outside
        changed = True
        while changed:
            changed = False
            for v in list(R):
                if v in T:
                    continue
                succ = [w for _, w in M.edges[v]]
                ok = all(w in R for w in succ) if M.probabilistic[v] else any(w in R for w in succ)
                if not ok:
                    R.discard(v)
                    changed = True
        restricted = _restricted_reach(M, T, R)
        if restricted == R:
            return R
        R = restricted


def _restricted_reach(M, T, R):
    """Vertices of R that reach T while every probabilistic step stays in R."""
    preds: dict[int, list[int]] = {}
    for v in R:
        if M.probabilistic[v] and any(w not in R for _, w in M.edges[v]):
            continue
        for _, w in M.edges[v]:
            if w in R:
                preds.setdefault(w, []).append(v)
    seen = set(T & R)
    work = list(seen)
    while work:
        w = work.pop()
        for v in preds.get(w, ()):
            if v not in seen:
                seen.add(v)
                work.append(v)
    return seen


# exact quantitative analysis


def _sccs(n: int, succ) -> list[list[int]]:
    """Tarjan, iterative; components come out sinks first."""
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on[v] = True
            kids = succ[v]
            recurse = False
            while i < len(kids):
                w = kids[i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return out


def _solve(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Exact Gauss-Jordan elimination; A is square and nonsingular."""
    n = len(b)
    rows = [A[i][:] + [b[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular system")
        rows[col], rows[piv] = rows[piv], rows[col]
        pr = rows[col]
        inv = 1 / pr[col]
        for j in range(col, n + 1):
            pr[j] *= inv
        for r in range(n):
            if r != col and rows[r][col] != 0:
                fac = rows[r][col]
                row = rows[r]
                for j in range(col, n + 1):
                    if pr[j]:
                        row[j] -= fac * pr[j]
    return [rows[i][n] for i in range(n)]


def exact_max_reach_values(M: FiniteMdp, T: Iterable[int],
                           budget: int = DEFAULT_VERTEX_BUDGET) -> dict[int, Fraction]:
    """Maximal reachability probabilities, exactly.

    Components are processed sinks first.  Single-vertex components have a
    closed form; larger ones run policy iteration over memoryless
    deterministic strategies, each policy evaluated by exact elimination.
    """
    n = len(M.vertices)
    if n > budget:
        raise BudgetError(f"{n} vertices exceed the budget of {budget}")
    T = M.effective_targets(T)
    everything = set(range(n))
    positive = _can_reach(M, T, everything)
    val: dict[int, Fraction] = {}
    succ = [[w for _, w in M.edges[v]] for v in range(n)]
    for comp in _sccs(n, succ):
        members = set(comp)
        for v in comp:
            if v in T:
                val[v] = Fraction(1)
            elif v not in positive:
                val[v] = Fraction(0)
        open_ = [v for v in comp if v not in val]
        if not open_:
            continue
        if len(open_) == 1 and len(comp) == 1:
            v = open_[0]
            val[v] = _single(M, v, val)
        else:
            val.update(_policy_iteration(M, open_, members, val))
    return val


def _single(M, v, val):
    edges = M.edges[v]
    if M.probabilistic[v]:
        stay = sum((p for p, w in edges if w == v), Fraction(0))
        if stay == 1:
            return Fraction(0)
        return sum((p * val[w] for p, w in edges if w != v), Fraction(0)) / (1 - stay)
    return max((val[w] for _, w in edges if w != v), default=Fraction(0))


def _policy_iteration(M, open_, members, val):
    opened = set(open_)

    def value_of(w, cur):
        return cur[w] if w in opened else val[w]

    # initial policy: step towards known positive values, attractor order
    policy: dict[int, int] = {}
    reached: set[int] = set()
    progress = True
    while progress:
        progress = False
        for v in open_:
            if v in reached:
                continue
            good = [w for _, w in M.edges[v]
                    if w in reached or (w not in opened and val[w] > 0)]
            if good:
                reached.add(v)
                if not M.probabilistic[v]:
                    policy[v] = good[0]
                progress = True
    for v in open_:
        if not M.probabilistic[v]:
            policy.setdefault(v, M.edges[v][0][1])

    while True:
        cur = _evaluate_policy(M, open_, opened, policy, val)
        improved = False
        for v in open_:
            if M.probabilistic[v]:
                continue
            best = value_of(policy[v], cur)
            for _, w in M.edges[v]:
                if value_of(w, cur) > best:
                    best = value_of(w, cur)
                    policy[v] = w
                    improved = True
        if not improved:
            return cur


def _evaluate_policy(M, open_, opened, policy, val):
    # vertices that cannot reach a positive exit under the policy get 0
    def moves(v):
        if M.probabilistic[v]:
            return M.edges[v]
        return [(Fraction(1), policy[v])]

    preds: dict[int, list[int]] = {}
    good = set()
    for v in open_:
        for _, w in moves(v):
            if w in opened:
                preds.setdefault(w, []).append(v)
            elif val[w] > 0:
                good.add(v)
    work = list(good)
    while work:
        w = work.pop()
        for v in preds.get(w, ()):
            if v not in good:
                good.add(v)
                work.append(v)
    live = [v for v in open_ if v in good]
    pos = {v: j for j, v in enumerate(live)}
    size = len(live)
    A = [[Fraction(0)] * size for _ in range(size)]
    b = [Fraction(0)] * size
    for v in live:
        j = pos[v]
        A[j][j] += 1
        for p, w in moves(v):
            if w in pos:
                A[j][pos[w]] -= p
            elif w not in opened:
                b[j] += p * val[w]
    sol = _solve(A, b) if size else []
    cur = {v: Fraction(0) for v in open_}
    for v in live:
        cur[v] = sol[pos[v]]
    return cur


def bellman_residual(M: FiniteMdp, T: Iterable[int], val: Mapping[int, Fraction]) -> Fraction:
    """max |x_v - (Bellman update of x)_v|; zero for the exact solution."""
    T = M.effective_targets(T)
    worst = Fraction(0)
    for v in range(len(M.vertices)):
        if v in T:
            rhs = Fraction(1)
        elif M.probabilistic[v]:
            rhs = sum((p * val[w] for p, w in M.edges[v]), Fraction(0))
        else:
            rhs = max(val[w] for _, w in M.edges[v])
        worst = max(worst, abs(val[v] - rhs))
    return worst


def float_value_iteration(M: FiniteMdp, T: Iterable[int], rounds: int = 1000) -> list[float]:
    """Approximate preview only; the exact analysis is :func:`exact_max_reach_values`."""
    T = M.effective_targets(T)
    x = [1.0 if v in T else 0.0 for v in range(len(M.vertices))]
    for _ in range(rounds):
        y = []
        for v in range(len(M.vertices)):
            if v in T:
                y.append(1.0)
            elif M.probabilistic[v]:
                y.append(sum(float(p) * x[w] for p, w in M.edges[v]))
            else:
                y.append(max(x[w] for _, w in M.edges[v]))
        if y == x:
            break
        x = y
    return x


# builders


class _MdpBuilder:
    def __init__(self):
        self.nondet: list[str] = []
        self.prob: list[str] = []
        self.zero: set = set()
        self.pos: set = set()
        self.f_zero: dict = {}
        self.f_pos: dict = {}

    def node(self, name, probabilistic=False):
        if name not in self.nondet and name not in self.prob:
            (self.prob if probabilistic else self.nondet).append(name)
        return name

    def both(self, src, d, dst, p=None):
        self.zero.add((src, d, dst))
        self.pos.add((src, d, dst))
        if p is not None:
            self.f_zero.setdefault(src, {})[(d, dst)] = p
            self.f_pos.setdefault(src, {})[(d, dst)] = p

    def build(self) -> OcMdp:
        return OcMdp(tuple(self.nondet), tuple(self.prob), frozenset(self.zero),
                     frozenset(self.pos), self.f_zero, self.f_pos)


def _expand_constants(F: CrrFormula) -> CrrFormula:
    if isinstance(F, Top):
        return Disj(Lit(1, 0), Lit(1, 1))
    if isinstance(F, Bot):
        return Conj(Lit(1, 0), Lit(1, 1))
    if isinstance(F, (Conj, Disj)):
        return type(F)(_expand_constants(F.left), _expand_constants(F.right))
    return F


def _add_crr_mdp(b: _MdpBuilder, F: CrrFormula, primes, prefix: str) -> tuple[str, set[str]]:
    if isinstance(F, Neg) or not _negation_free(F):
        raise StructuralError("the gadget needs a negation-free formula")
    check_vars(F, primes)
    F = _expand_constants(F)
    for p in primes:
        for j in range(p):
            b.node(f"{prefix}q({j},{p})")
    for p in primes:
        for j in range(p):
            here = f"{prefix}q({j},{p})"
            b.pos.add((here, -1, f"{prefix}q({(j - 1) % p},{p})"))
            b.zero.add((here, 0, here))

    def go(G, path):
        name = f"{prefix}q[{path}]"
        if isinstance(G, Lit):
            b.node(name)
            b.both(name, 0, f"{prefix}q({G.r},{primes[G.i - 1]})")
        elif isinstance(G, Disj):
            b.node(name)
            b.both(name, 0, go(G.left, path + "0"))
            b.both(name, 0, go(G.right, path + "1"))
        else:
            b.node(name, probabilistic=True)
            left, right = go(G.left, path + "0"), go(G.right, path + "1")
            b.both(name, 0, left, HALF)
            b.both(name, 0, right, HALF)
        return name

    root = go(F, "r")
    return root, {f"{prefix}q(0,{p})" for p in primes}


def _negation_free(F):
    if isinstance(F, Neg):
        return False
    if isinstance(F, (Conj, Disj)):
        return _negation_free(F.left) and _negation_free(F.right)
    return True


def mdp_of_crr_formula(F: CrrFormula, primes: Sequence[int],
                       prefix: str = "") -> tuple[OcMdp, str, set[str]]:
    """From (q_F, M) the targets R x {0} are reached almost surely iff F holds
    on CRR(M); otherwise some branch fails with probability >= 2^-|F|."""
    b = _MdpBuilder()
    root, R = _add_crr_mdp(b, F, primes, prefix)
    return b.build(), root, R


def prepare_nfa(A: Nfa) -> Nfa:
    """Equivalent NFA (on non-empty words) whose final states have no outgoing
    transitions and whose other states all have one.

    A final state with outgoing edges is split: a fresh final twin receives
    copies of its incoming edges and the original stops being final.  States
    without outgoing edges move to a fresh dead state.
    """
    states = list(A.states)
    trans = set(A.transitions)
    twin = {s: f"{s}^f" for s in A.states
            if s in A.finals and any(x == s for x, _, _ in A.transitions)}
    states += [twin[s] for s in A.states if s in twin]
    trans |= {(s, bit, twin[t]) for s, bit, t in A.transitions if t in twin}
    finals = {twin.get(s, s) for s in A.finals}
    stuck = [s for s in states if s not in finals and not any(x == s for x, _, _ in trans)]
    if stuck:
        dead = "dead"
        while dead in states:
            dead += "'"
        states.append(dead)
        trans |= {(s, 0, dead) for s in stuck}
        trans |= {(dead, 0, dead), (dead, 1, dead)}
    return Nfa.build(states, trans, A.initial, finals)


def mdp_serial_compose(A: Nfa, F: CrrFormula, G: CrrFormula,
                       primes: Sequence[int]) -> tuple[OcMdp, str, set[str]]:
    """Each NFA step (s, b, t) goes through a probabilistic location that
    moves to t with counter + 1 or enters the gadget for F & ~G (b = 1) or
    ~F & ~G (b = 0), each with probability 1/2.  Final states enter the G
    gadget.  Targets are the union of the gadgets' target sets."""
    for s in A.states:
        out = any(x == s for x, _, _ in A.transitions)
        if s in A.finals and out:
            raise StructuralError(f"final state {s} has outgoing transitions; see prepare_nfa")
        if s not in A.finals and not out:
            raise StructuralError(f"non-final state {s} has no outgoing transition; see prepare_nfa")
    if not _is_leaf_conjunction(G):
        raise StructuralError("G must be a conjunction of variables")
    b = _MdpBuilder()
    for s in A.states:
        b.node(s)
    one = eliminate_negations(Conj(F, Neg(G)), primes)
    zero = eliminate_negations(Conj(Neg(F), Neg(G)), primes)
    in_one, R1 = _add_crr_mdp(b, one, primes, "F1.")
    in_zero, R0 = _add_crr_mdp(b, zero, primes, "F0.")
    in_g, RG = _add_crr_mdp(b, G, primes, "G.")
    order = {s: j for j, s in enumerate(A.states)}
    for s, bit, t in sorted(A.transitions, key=lambda x: (order[x[0]], x[1], order[x[2]])):
        mid = b.node(f"({s},{bit},{t})", probabilistic=True)
        b.both(s, 0, mid)
        b.both(mid, 1, t, HALF)
        b.both(mid, 0, in_one if bit else in_zero, HALF)
    for s in A.states:
        if s in A.finals:
            b.both(s, 0, in_g)
    mdp, added = complete_wellformed(b.build())
    if added:
        raise AssertionError(f"composition left locations without transitions: {added}")
    return mdp, A.initial, R1 | R0 | RG


# text format


def parse_ocmdp(text: str) -> tuple[OcMdp, set[str]]:
    """Returns the process and the declared target locations."""
    nondet: list[str] = []
    prob: list[str] = []
    targets: set[str] = set()
    zero: set = set()
    pos: set = set()
    f_zero: dict = {}
    f_pos: dict = {}
    header = False
    pending = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kw = toks[0]
        if kw == "ocmdp":
            header = True
        elif kw == "nloc":
            nondet.extend(toks[1:])
        elif kw == "ploc":
            prob.extend(toks[1:])
        elif kw == "target":
            targets.update(toks[1:])
        elif kw in ("zero", "pos") and len(toks) in (4, 5):
            try:
                d = int(toks[2])
                p = Fraction(toks[4]) if len(toks) == 5 else None
            except ValueError:
                raise StructuralError(f"line {lineno}: bad number") from None
            pending.append((lineno, kw, toks[1], d, toks[3], p))
        else:
            raise StructuralError(f"line {lineno}: cannot parse {line!r}")
    if not header:
        raise StructuralError("missing 'ocmdp' header")
    probset = set(prob)
    for lineno, kw, s, d, t, p in pending:
        if (s in probset) != (p is not None):
            raise StructuralError(f"line {lineno}: probabilities are required exactly on probabilistic sources")
        (zero if kw == "zero" else pos).add((s, d, t))
        if p is not None:
            (f_zero if kw == "zero" else f_pos).setdefault(s, {})[(d, t)] = p
    A = OcMdp(tuple(nondet), tuple(prob), frozenset(zero), frozenset(pos), f_zero, f_pos)
    unknown = targets - set(A.locations)
    if unknown:
        raise StructuralError(f"unknown target locations {sorted(unknown)}")
    return A, targets


def render_ocmdp(A: OcMdp, targets: Iterable[str] = ()) -> str:
    out = ["ocmdp"]
    if A.nondet:
        out.append("nloc " + " ".join(A.nondet))
    if A.prob:
        out.append("ploc " + " ".join(A.prob))
    order = {q: j for j, q in enumerate(A.locations)}
    for kw, trans, dist in (("zero", A.zero_transitions, A.f_zero), ("pos", A.pos_transitions, A.f_pos)):
        for s, d, t in sorted(trans, key=lambda x: (order[x[0]], order[x[2]], x[1])):
            line = f"{kw} {s} {d} {t}"
            if s in dist:
                line += f" {dist[s][(d, t)]}"
            out.append(line)
    targets = [q for q in A.locations if q in set(targets)]
    if targets:
        out.append("target " + " ".join(targets))
    return "\n".join(out) + "\n"
