"""CTL model checking over one-counter processes.

Three backends share one explicit-graph evaluator:

* ``evaluate_periodic`` works on the wrapped graph Q x [0, t+K], where an
  increment out of the top is redirected to t+1.  Combined with the
  threshold/period bounds this answers queries for arbitrary counters.
* ``evaluate_capped`` truncates at a bound B and drops transitions above it.
* ``evaluate_three_valued`` truncates at B but treats the dropped successors
  as unknown, so every definite answer is sound for the real system.

The evaluator always computes a pair (lower, upper) of state sets per
subformula: lower holds for sure, upper possibly.  The first two backends
have no unknown successors, so both sets coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .arith import lcm_upto
from .ctl import (And, Atom, ExistsNext, ExistsUntil, ExistsWeakUntil, FalseF, Formula,
                  Not, TrueF, desugar, lud, subformulas)
from .ocp import Ocp, StructuralError

DEFAULT_BUDGET = 10**7


class InfeasibleError(RuntimeError):
    """The wrapped domain is larger than the configured budget."""

    def __init__(self, domain_size: int, budget: int):
        super().__init__(
            f"infeasible: wrapped domain has {domain_size} states (budget {budget}); "
            "use a bounded oracle instead")
        self.domain_size = domain_size
        self.budget = budget


# explicit graph over Q x [0, top]


class _Graph:
    """States are ids ``n * k + q``; successors above ``top`` are wrapped or cut."""

    def __init__(self, O: Ocp, top: int, wrap: tuple[int, int] | None = None):
        k = len(O.locations)
        self.O, self.k, self.top = O, k, top
        total = k * (top + 1)
        self.size = total
        succ: list[list[int]] = [[] for _ in range(total)]
        preds: list[list[int]] = [[] for _ in range(total)]
        frontier = set()
        for n in range(top + 1):
            for q in range(k):
                s = n * k + q
                out = O.zero_out(q) if n == 0 else O.pos_out(q)
                for j, d in out:
                    m = n + d
                    if m < 0:
                        continue
                    if m > top:
                        if wrap is None:
                            frontier.add(s)
                            continue
                        t, K = wrap
                        m = t + 1 + (m - t - 1) % K
                    dst = m * k + j
                    succ[s].append(dst)
                    preds[dst].append(s)
        self.succ = succ
        self.preds = preds
        self.frontier = frozenset(frontier)
        self.all = frozenset(range(total))

    def states_at(self, locs: Iterable[int]) -> set[int]:
        k = self.k
        locs = list(locs)
        return {n * k + q for n in range(self.top + 1) for q in locs}

    def pre(self, S) -> set[int]:
        preds = self.preds
        return {p for s in S for p in preds[s]}

    def lfp(self, seed: set[int], allowed) -> set[int]:
        """Least Z with seed ⊆ Z and allowed ∩ pre(Z) ⊆ Z."""
        Z = set(seed)
        work = list(Z)
        preds = self.preds
        while work:
            s = work.pop()
            for p in preds[s]:
                if p not in Z and p in allowed:
                    Z.add(p)
                    work.append(p)
        return Z

    def gfp(self, keep: set[int], cand, frontier) -> set[int]:
        """Greatest Z = keep ∪ (cand ∩ (pre(Z) ∪ frontier))."""
        Z = set(keep) | set(cand)
        succ, preds = self.succ, self.preds
        count = {s: sum(1 for d in succ[s] if d in Z) for s in Z}
        work = [s for s in Z if s not in keep and count[s] == 0 and s not in frontier]
        dead = set()
        while work:
            s = work.pop()
            if s in dead:
                continue
            dead.add(s)
            Z.discard(s)
            for p in preds[s]:
                if p in Z and p not in keep:
                    count[p] -= 1
                    if count[p] == 0 and p not in frontier:
                        work.append(p)
        return Z


class _Evaluator:
    def __init__(self, graph: _Graph):
        self.g = graph
        self.memo: dict[Formula, tuple[frozenset, frozenset]] = {}

    def __call__(self, f: Formula) -> tuple[frozenset, frozenset]:
        f = desugar(f)
        for sub in subformulas(f):
            if sub not in self.memo:
                self.memo[sub] = self._step(sub)
        return self.memo[f]

    def _step(self, f):
        g, memo = self.g, self.memo
        if isinstance(f, TrueF):
            return g.all, g.all
        if isinstance(f, FalseF):
            return frozenset(), frozenset()
        if isinstance(f, Atom):
            S = frozenset(g.states_at(g.O.label_ids(f.name)))
            return S, S
        if isinstance(f, Not):
            lo, up = memo[f.arg]
            return g.all - up, g.all - lo
        if isinstance(f, And):
            (l1, u1), (l2, u2) = memo[f.left], memo[f.right]
            return l1 & l2, u1 & u2
        if isinstance(f, ExistsNext):
            lo, up = memo[f.arg]
            return frozenset(g.pre(lo)), frozenset(g.pre(up) | g.frontier)
        (l1, u1), (l2, u2) = memo[f.left], memo[f.right]
        if isinstance(f, ExistsUntil):
            lo = g.lfp(l2, l1)
            up = g.lfp(set(u2) | (u1 & g.frontier), u1)
            return frozenset(lo), frozenset(up)
        if isinstance(f, ExistsWeakUntil):
            lo = g.gfp(l2, l1, frozenset())
            up = g.gfp(u2, u1, g.frontier)
            return frozenset(lo), frozenset(up)
        raise TypeError(f"unexpected formula node {f!r}")


# bounded tables


@dataclass
class BoundedTable:
    """Satisfaction over Q x [0, B]; ``value`` returns True, False or None (unknown)."""

    O: Ocp
    bound: int
    lower: frozenset
    upper: frozenset

    def _sid(self, q, n):
        if not 0 <= n <= self.bound:
            return None
        return n * len(self.O.locations) + self.O.index(q)

    def value(self, q: str, n: int):
        s = self._sid(q, n)
        if s is None:
            return None
        if s in self.lower:
            return True
        if s not in self.upper:
            return False
        return None

    def holds(self, q: str, n: int) -> bool:
        v = self.value(q, n)
        if v is None:
            raise ValueError(f"no definite value at ({q}, {n})")
        return v

    def definite_fraction(self) -> float:
        total = len(self.O.locations) * (self.bound + 1)
        return 1 - len(self.upper - self.lower) / total


def evaluate_capped(O: Ocp, phi: Formula, B: int) -> BoundedTable:
    """Plain CTL on Q x [0, B] with transitions above B deleted."""
    if B < 0:
        raise ValueError("bound must be >= 0")
    g = _Graph(O, B)
    g.frontier = frozenset()
    lo, up = _Evaluator(g)(phi)
    return BoundedTable(O, B, lo, up)


def evaluate_three_valued(O: Ocp, phi: Formula, B: int) -> BoundedTable:
    """Kleene evaluation on Q x [0, B]; successors above B count as unknown."""
    if B < 0:
        raise ValueError("bound must be >= 0")
    lo, up = _Evaluator(_Graph(O, B))(phi)
    return BoundedTable(O, B, lo, up)


class BoundedOracle:
    """Caches graphs and per-formula tables for repeated bounded queries on one OCP."""

    def __init__(self, O: Ocp):
        self.O = O
        self._evals: dict[tuple[str, int], _Evaluator] = {}

    def _evaluator(self, mode, B):
        key = (mode, B)
        if key not in self._evals:
            g = _Graph(self.O, B)
            if mode == "capped":
                g.frontier = frozenset()
            self._evals[key] = _Evaluator(g)
        return self._evals[key]

    def table(self, phi: Formula, B: int, mode: str = "tv") -> BoundedTable:
        lo, up = self._evaluator(mode, B)(phi)
        return BoundedTable(self.O, B, lo, up)

    def check(self, phi: Formula, q: str, n: int, B0: int, rounds: int = 3):
        """True/False, or None when the escalation stays indeterminate."""
        return self.check_verbose(phi, q, n, B0, rounds)[0]

    def check_verbose(self, phi, q, n, B0, rounds=3):
        bounds = [max(B0, 1) * 2**j for j in range(rounds)]
        for B in bounds:
            v = self.table(phi, B, "tv").value(q, n)
            if v is not None:
                return v, {"engine": "tv", "bound": B, "bounds": bounds}
        if len(bounds) >= 2:
            hi = [self.table(phi, B, "capped").value(q, n) for B in bounds[-2:]]
            if hi[0] is not None and hi[0] == hi[1]:
                return hi[0], {"engine": "capped", "bound": bounds[-1], "bounds": bounds}
        return None, {"engine": "none", "bounds": bounds}


def oracle_check(O: Ocp, phi: Formula, q: str, n: int, B0: int, rounds: int = 3):
    """Three-valued escalation over B0, 2*B0, 4*B0, then capped agreement.

    Returns True, False, or None for indeterminate.
    """
    return BoundedOracle(O).check(phi, q, n, B0, rounds)


# periodic engine


@dataclass(frozen=True)
class PeriodParameters:
    k: int
    K: int
    # subformula -> (K_psi, t(psi)), keyed by the desugared subformula
    table: dict = field(hash=False)
    goal: Formula = None

    @property
    def threshold(self) -> int:
        return self.table[self.goal][1]

    @property
    def period(self) -> int:
        return self.table[self.goal][0]


def period_params(O: Ocp, phi: Formula) -> PeriodParameters:
    k = len(O.locations)
    K = lcm_upto(k)
    core = desugar(phi)
    table = {}
    for f in subformulas(core):
        Kf = K ** lud(f)
        if isinstance(f, (Atom, TrueF, FalseF)):
            t = 0
        elif isinstance(f, Not):
            t = table[f.arg][1]
        elif isinstance(f, And):
            t = max(table[f.left][1], table[f.right][1])
        elif isinstance(f, ExistsNext):
            t = table[f.arg][1] + table[f.arg][0]
        else:
            t = max(table[f.left][1], table[f.right][1]) + 2 * k * k * Kf
        table[f] = (Kf, t)
    return PeriodParameters(k, K, table, core)


def representative(n: int, t: int, K: int) -> int:
    """n itself up to t, else the number in [t+1, t+K] congruent to n mod K."""
    if n <= t:
        return n
    return t + 1 + (n - t - 1) % K


@dataclass
class SatTable:
    O: Ocp
    params: PeriodParameters
    states: frozenset  # ids n*k+q over the wrapped domain

    @property
    def top(self) -> int:
        return self.params.threshold + self.params.period

    def contains(self, q: str, m: int) -> bool:
        if not 0 <= m <= self.top:
            raise ValueError(f"counter {m} outside the wrapped domain")
        return m * len(self.O.locations) + self.O.index(q) in self.states

    def holds(self, q: str, n: int) -> bool:
        if n < 0:
            raise ValueError("counter values are natural numbers")
        return self.contains(q, representative(n, self.params.threshold, self.params.period))


def wrapped_domain_size(O: Ocp, phi: Formula) -> int:
    p = period_params(O, phi)
    return len(O.locations) * (p.threshold + p.period + 1)


def evaluate_periodic(O: Ocp, phi: Formula, budget: int = DEFAULT_BUDGET) -> SatTable:
    if not O.is_unit:
        raise StructuralError("the periodic engine needs unit counter updates; normalize first")
    params = period_params(O, phi)
    t, K = params.threshold, params.period
    size = len(O.locations) * (t + K + 1)
    if size > budget:
        raise InfeasibleError(size, budget)
    g = _Graph(O, t + K, wrap=(t, K))
    lo, _ = _Evaluator(g)(phi)
    return SatTable(O, params, lo)


def check(O: Ocp, phi: Formula, q: str, n: int, budget: int = DEFAULT_BUDGET) -> bool:
    return evaluate_periodic(O, phi, budget).holds(q, n)
