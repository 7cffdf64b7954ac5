"""Extended-real processes on the situation tree and the supermartingale calculus.

A Process stores one value per situation up to a horizon, as level
tables.  Values are never -inf (bounded-belowness is part of what makes
a process a supermartingale candidate, so it is enforced at
construction).  A process may carry a terminal cut: a complete cut such
that the process is constant on the whole subtree of each member.  Only
terminal processes support path-limit queries; at a finite horizon a
liminf is undecidable otherwise, and the engine refuses rather than
approximates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .credal import LocalVariable, local_upper
from .errors import (
    HorizonMismatch,
    NegativeWeight,
    NotTerminal,
    SpaceMismatch,
)
from .tree import Cut, Situation, rank, situations_at, unrank
from .xreal import XR, add, le_within, neg, scale, xr


@dataclass(frozen=True)
class Process:
    arity: int
    horizon: int
    levels: tuple[tuple[XR, ...], ...]
    terminal_cut: Cut | None = None

    def __post_init__(self):
        levels = tuple(tuple(xr(v) for v in level) for level in self.levels)
        object.__setattr__(self, "levels", levels)
        if len(levels) != self.horizon + 1:
            raise ValueError(f"expected {self.horizon + 1} levels, got {len(levels)}")
        for depth, level in enumerate(levels):
            if len(level) != self.arity**depth:
                raise ValueError(f"level {depth} has {len(level)} entries")
            for v in level:
                if v.is_neg_inf:
                    raise ValueError("processes must be bounded below: -inf value found")
        if self.terminal_cut is not None:
            self._check_terminal()

    def _check_terminal(self):
        cut = self.terminal_cut
        if cut.max_depth() > self.horizon:
            raise ValueError("terminal cut lies beyond the horizon")
        coverage = sum((Fraction(1, self.arity ** len(m)) for m in cut.members), Fraction(0))
        if coverage != 1:
            raise ValueError("terminal cut must be complete")
        for member in cut:
            tail = self.value_at(member)
            base = rank(member, self.arity)
            for depth in range(len(member) + 1, self.horizon + 1):
                block = self.arity ** (depth - len(member))
                segment = self.levels[depth][base * block:(base + 1) * block]
                if any(v != tail for v in segment):
                    raise ValueError(
                        f"process is not constant beyond terminal member {member}")

    def value_at(self, s: Situation) -> XR:
        if len(s) > self.horizon:
            if self.terminal_cut is not None and self.terminal_cut.member_before(s):
                return self.value_at(s[:self.horizon])
            raise ValueError(f"situation {s} lies beyond horizon {self.horizon}")
        return self.levels[len(s)][rank(s, self.arity)]

    def children_of(self, s: Situation) -> LocalVariable:
        if len(s) >= self.horizon:
            raise ValueError("no stored children at the horizon")
        base = rank(s, self.arity)
        level = self.levels[len(s) + 1]
        return LocalVariable(tuple(level[base * self.arity:(base + 1) * self.arity]))

    def map(self, fn) -> "Process":
        return Process(self.arity, self.horizon,
                       tuple(tuple(fn(v) for v in level) for level in self.levels),
                       self.terminal_cut)

    def min_value(self) -> XR:
        return min(v for level in self.levels for v in level)


def from_values(arity: int, horizon: int, value_of, terminal_cut: Cut | None = None) -> Process:
    """Build a process from a callable situation -> value."""
    levels = tuple(tuple(xr(value_of(s)) for s in situations_at(d, arity))
                   for d in range(horizon + 1))
    return Process(arity, horizon, levels, terminal_cut)


def constant_process(arity: int, horizon: int, value,
                     terminal_cut: Cut | None = None) -> Process:
    return Process(arity, horizon,
                   tuple((xr(value),) * arity**d for d in range(horizon + 1)),
                   terminal_cut)


@dataclass(frozen=True)
class SupermartingaleVerdict:
    is_supermartingale: bool
    worst_violation: tuple[Situation, XR] | None
    is_bounded_below: bool


def check_supermartingale(tree, M: Process, tol=0) -> SupermartingaleVerdict:
    """Verify the local decrease condition at every internal node.

    The comparison is order-based (Q <= M(s) + tol) rather than a
    subtraction test, so nodes where both sides are +inf verify
    correctly under the +inf - inf = +inf convention.
    """
    if tree.space.size != M.arity:
        raise SpaceMismatch("process and tree disagree on the state space")
    if M.horizon > tree.max_depth:
        raise HorizonMismatch(
            f"process horizon {M.horizon} exceeds tree depth {tree.max_depth}")
    tol = xr(tol)
    worst: tuple[Situation, XR] | None = None
    ok = True
    for depth in range(M.horizon):
        for i in range(M.arity**depth):
            s = unrank(i, depth, M.arity)
            q = local_upper(tree.local_model_at(s), M.children_of(s))
            m = M.levels[depth][i]
            if not le_within(q, m, tol):
                ok = False
                gap = add(q, neg(m))
                if worst is None or gap > worst[1]:
                    worst = (s, gap)
    bounded = all(not v.is_neg_inf for level in M.levels for v in level)
    return SupermartingaleVerdict(ok and bounded, worst, bounded)


def truncate(M: Process, bound) -> Process:
    """Pointwise min with a finite real; the output is real-valued."""
    bound = xr(bound)
    if not bound.is_finite:
        raise ValueError("truncation level must be finite")
    return M.map(lambda v: v if v < bound else bound)


def shift(M: Process, c) -> Process:
    """Pointwise addition of a finite constant (supermartingales stay such)."""
    c = xr(c)
    if not c.is_finite:
        raise ValueError("shift constant must be finite")
    return M.map(lambda v: add(v, c))


def mix(processes, weights) -> Process:
    """Finite convex-cone combination: sum of weights[i] * processes[i]."""
    processes = list(processes)
    weights = [xr(w) for w in weights]
    if len(processes) != len(weights):
        raise ValueError("one weight per process required")
    if not processes:
        raise ValueError("cannot mix zero processes")
    for w in weights:
        if not w.is_finite:
            raise ValueError("mixture weights must be finite")
        if w < XR(0):
            raise NegativeWeight(f"negative mixture weight {w.to_text()}")
    first = processes[0]
    for p in processes[1:]:
        if p.horizon != first.horizon:
            raise HorizonMismatch("mixed processes must share a horizon")
        if p.arity != first.arity:
            raise SpaceMismatch("mixed processes must share the state space")
    levels = []
    for depth in range(first.horizon + 1):
        row = []
        for i in range(first.arity**depth):
            total = XR(0)
            for p, w in zip(processes, weights):
                total = add(total, scale(w, p.levels[depth][i]))
            row.append(total)
        levels.append(tuple(row))
    cuts = {p.terminal_cut for p in processes}
    shared = cuts.pop() if len(cuts) == 1 else None
    return Process(first.arity, first.horizon, tuple(levels), shared)


def path_liminf(M: Process, prefix: Situation) -> XR:
    """Limit of M along any path through ``prefix``.

    Defined only for terminal processes, where the tail is constant; for
    anything else a finite horizon cannot decide a liminf.
    """
    if M.terminal_cut is None:
        raise NotTerminal("path limits are only defined for terminal processes")
    member = M.terminal_cut.member_before(tuple(prefix))
    if member is None:
        raise ValueError(f"prefix {prefix} does not reach the terminal cut")
    return M.value_at(member)


def min_tail(M: Process, s: Situation) -> XR:
    """Minimum tail value over terminal-cut members at or after s."""
    if M.terminal_cut is None:
        raise NotTerminal("tail values need a terminal process")
    s = tuple(s)
    member = M.terminal_cut.member_before(s)
    if member is not None:
        return M.value_at(member)
    tails = [M.value_at(u) for u in M.terminal_cut if u[:len(s)] == s]
    if not tails:
        raise ValueError(f"no terminal members follow {s}")
    return min(tails)
