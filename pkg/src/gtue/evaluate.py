"""The global game-theoretic upper expectation on an imprecise probability tree.

For finitary variables the value is computed by exact backward recursion:
the table at depth n is the variable itself, and each shallower node
applies its local upper expectation to the child values.  The recursion
is exact (the law of iterated upper expectations makes it so), which is
why the global operator is computed rather than represented as an
infimum over supermartingales; the infimum enters only through
certificate_bound and the brute-force oracle.

Variable sequences are evaluated by iterating the finitary engine.  Only
declared-monotone sequences are accepted: those are the cases a limit
theorem licenses, and they make a truncated run still meaningful (the
last iterate bounds the limit from the declared side).
"""

from __future__ import annotations

from dataclasses import dataclass

from .credal import CredalSet, LocalVariable, StateSpace, local_upper
from .errors import (
    DepthExceeded,
    DominanceFailed,
    MonotonicityViolated,
    NotASupermartingale,
    NotBoundedAbove,
    NotBoundedBelow,
    NotTerminal,
    SpaceMismatch,
)
from .process import Process, check_supermartingale
from .tree import (
    FinitarySequence,
    FinitaryVariable,
    Monotonicity,
    ROOT,
    Situation,
    level_cut,
    rank,
    unrank,
)
from .xreal import POS_INF, XR, le_within, neg, xr

STATUS_EXACT = "exact"
STATUS_CONVERGED = "converged"
STATUS_BUDGET = "budget_exhausted"

DEFAULT_BUDGET = 64
DEFAULT_CEILING = 1e12


class TreeModel:
    """A state space, a depth bound, and a credal set for every situation."""

    __slots__ = ("space", "max_depth", "kind", "_assignment")

    def __init__(self, space: StateSpace, max_depth: int, kind: str, assignment):
        if max_depth < 0:
            raise ValueError("max_depth must be non-negative")
        self.space = space
        self.max_depth = max_depth
        self.kind = kind
        self._assignment = assignment
        self._validate()

    @classmethod
    def stationary(cls, space: StateSpace, model: CredalSet, max_depth: int) -> "TreeModel":
        return cls(space, max_depth, "stationary", model)

    @classmethod
    def by_depth(cls, space: StateSpace, models, max_depth: int) -> "TreeModel":
        return cls(space, max_depth, "by_depth", tuple(models))

    @classmethod
    def table(cls, space: StateSpace, models: dict, max_depth: int) -> "TreeModel":
        return cls(space, max_depth, "table", {tuple(k): v for k, v in models.items()})

    def _validate(self):
        if self.kind == "stationary":
            self._check_model(self._assignment)
        elif self.kind == "by_depth":
            if len(self._assignment) < self.max_depth:
                raise ValueError(
                    f"by_depth assignment needs {self.max_depth} levels, "
                    f"got {len(self._assignment)}")
            for model in self._assignment:
                self._check_model(model)
        elif self.kind == "table":
            for depth in range(self.max_depth):
                for i in range(self.space.size**depth):
                    s = unrank(i, depth, self.space.size)
                    if s not in self._assignment:
                        raise ValueError(f"table assignment misses situation {s}")
            for model in self._assignment.values():
                self._check_model(model)
        else:
            raise ValueError(f"unknown assignment kind {self.kind!r}")

    def _check_model(self, model: CredalSet):
        if model.size != self.space.size:
            raise SpaceMismatch("credal set size does not match the state space")

    def local_model_at(self, s: Situation) -> CredalSet:
        s = tuple(s)
        if len(s) >= self.max_depth and self.kind != "stationary":
            raise DepthExceeded(f"no local model at depth {len(s)}")
        if self.kind == "stationary":
            return self._assignment
        if self.kind == "by_depth":
            return self._assignment[len(s)]
        return self._assignment[s]

    def distinct_models(self):
        if self.kind == "stationary":
            return (self._assignment,)
        if self.kind == "by_depth":
            seen = []
            for m in self._assignment[:self.max_depth]:
                if m not in seen:
                    seen.append(m)
            return tuple(seen)
        seen = []
        for m in self._assignment.values():
            if m not in seen:
                seen.append(m)
        return tuple(seen)


@dataclass
class EvalResult:
    value: XR
    status: str
    iterations: int
    last_delta: XR | None = None
    bound_direction: str | None = None


def _check_variable(tree: TreeModel, f: FinitaryVariable):
    if f.arity != tree.space.size:
        raise SpaceMismatch("variable arity does not match the tree's state space")
    if f.depth > tree.max_depth:
        raise DepthExceeded(f"variable depth {f.depth} exceeds tree depth {tree.max_depth}")


def backward_levels(tree: TreeModel, f: FinitaryVariable, down_to: int = 0) -> list:
    """Level tables of the backward recursion, from depth f.depth down."""
    _check_variable(tree, f)
    if not f.bounded_below:
        raise NotBoundedBelow("the upper expectation needs a bounded-below variable")
    arity = f.arity
    levels: list = [None] * (f.depth + 1)
    levels[f.depth] = list(f.values)
    for depth in range(f.depth - 1, down_to - 1, -1):
        below = levels[depth + 1]
        row = []
        for i in range(arity**depth):
            s = unrank(i, depth, arity)
            children = LocalVariable(tuple(below[i * arity:(i + 1) * arity]))
            row.append(local_upper(tree.local_model_at(s), children))
        levels[depth] = row
    return levels


def eval_finitary(tree: TreeModel, f: FinitaryVariable, s: Situation = ROOT) -> XR:
    """Upper expectation of a bounded-below finitary variable, conditional on s."""
    s = tuple(s)
    if len(s) > f.depth:
        raise ValueError("conditioning situation is deeper than the variable")
    levels = backward_levels(tree, f, down_to=len(s))
    return levels[len(s)][rank(s, f.arity)]


def eval_process(tree: TreeModel, f: FinitaryVariable) -> Process:
    """The process s -> upper expectation of f given s, terminal at level f.depth."""
    levels = backward_levels(tree, f, down_to=0)
    return Process(f.arity, f.depth, tuple(tuple(level) for level in levels),
                   terminal_cut=level_cut(f.arity, f.depth))


def eval_lower_finitary(tree: TreeModel, f: FinitaryVariable, s: Situation = ROOT) -> XR:
    """Conjugate lower expectation of a bounded-above finitary variable."""
    if not f.bounded_above:
        raise NotBoundedAbove("the lower expectation needs a bounded-above variable")
    return neg(eval_finitary(tree, f.map(neg), s))


def eval_limit(tree: TreeModel, seq: FinitarySequence, s: Situation = ROOT,
               tol=1e-9, budget: int = DEFAULT_BUDGET, ceiling=DEFAULT_CEILING,
               spot_k: int = 16) -> EvalResult:
    """Iterate the finitary engine along a declared-monotone sequence.

    Stops when two successive values agree within tol (converged), when a
    monotonically increasing run passes the divergence ceiling (converged
    to +inf), or at the budget.  A budget-exhausted value is still a
    one-sided bound: a lower bound on the limit for non-decreasing
    sequences, an upper bound for non-increasing ones.
    """
    if seq.monotonicity is Monotonicity.NONE:
        raise MonotonicityViolated(
            "eval_limit needs a declared monotone sequence; no theorem covers the rest")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    seq.spot_check(min(spot_k, budget))
    tol_x = xr(tol)
    ceiling_x = xr(ceiling)
    increasing = seq.monotonicity is Monotonicity.NON_DECREASING

    previous: XR | None = None
    delta: XR | None = None
    for n in range(budget):
        value = eval_finitary(tree, seq.element(n), s)
        if previous is not None:
            ordered = le_within(previous, value, tol_x) if increasing \
                else le_within(value, previous, tol_x)
            if not ordered:
                raise MonotonicityViolated(
                    f"iterate {n} broke the declared {seq.monotonicity.value} order")
            delta = _abs_gap(value, previous)
            if not delta > tol_x:
                return EvalResult(value, STATUS_CONVERGED, n + 1, delta)
        if increasing and value == POS_INF:
            return EvalResult(POS_INF, STATUS_CONVERGED, n + 1, XR(0))
        if increasing and value > ceiling_x and (previous is None or value > previous):
            return EvalResult(POS_INF, STATUS_CONVERGED, n + 1, delta)
        previous = value
    return EvalResult(previous, STATUS_BUDGET, budget, delta,
                      bound_direction="lower" if increasing else "upper")


def _abs_gap(a: XR, b: XR) -> XR:
    if a == b:
        return XR(0)
    if not (a.is_finite and b.is_finite):
        return POS_INF
    return XR(abs(a.v - b.v))


def certificate_bound(tree: TreeModel, M: Process, f: FinitaryVariable,
                      s: Situation = ROOT, tol=0) -> XR:
    """Certified upper bound on the upper expectation of f at s.

    M must be a verified supermartingale with a terminal cut at or below
    f's depth whose tail values dominate f; then M(s) upper-bounds the
    value at s, and the canonical choice M = eval_process(f) is tight.
    """
    verdict = check_supermartingale(tree, M, tol)
    if not verdict.is_supermartingale:
        raise NotASupermartingale(
            f"certificate fails the supermartingale check: worst violation "
            f"{verdict.worst_violation}")
    if M.terminal_cut is None:
        raise NotTerminal("certificates must be terminal processes")
    tol_x = xr(tol)
    for member in M.terminal_cut:
        if len(member) < f.depth:
            raise ValueError(
                f"terminal member {member} is shallower than the variable depth {f.depth}")
        tail = M.value_at(member)
        needed = f.value_at(member)
        if not le_within(needed, tail, tol_x):
            raise DominanceFailed(
                f"tail value {tail.to_text()} at {member} does not dominate "
                f"f = {needed.to_text()}", witness=member)
    return M.value_at(tuple(s))


@dataclass
class ComparisonEvidence:
    value_a: XR
    value_b: XR
    local_dominance_held: bool


def compare_models(tree_a: TreeModel, tree_b: TreeModel, f: FinitaryVariable,
                   s: Situation = ROOT) -> ComparisonEvidence:
    """Evidence for two-tree dominance on one variable.

    Runs both recursions and spot-checks, at every node, that B's local
    model dominates A's on A's own recursion values.  When those checks
    all hold, the A-value at s cannot exceed the B-value (monotonicity
    closes the induction), and the pair of values is returned as
    evidence.  This is a property check, not a decision procedure for
    dominance in general.
    """
    if tree_a.space.labels != tree_b.space.labels:
        raise SpaceMismatch("compared trees must share the state space")
    if tree_a.max_depth != tree_b.max_depth:
        raise SpaceMismatch("compared trees must share the depth bound")
    s = tuple(s)
    levels_a = backward_levels(tree_a, f, down_to=len(s))
    levels_b = backward_levels(tree_b, f, down_to=len(s))
    arity = f.arity
    held = True
    for depth in range(len(s), f.depth):
        below_a = levels_a[depth + 1]
        for i in range(arity**depth):
            sit = unrank(i, depth, arity)
            h_a = LocalVariable(tuple(below_a[i * arity:(i + 1) * arity]))
            q_a = local_upper(tree_a.local_model_at(sit), h_a)
            q_b_on_a = local_upper(tree_b.local_model_at(sit), h_a)
            if q_a > q_b_on_a:
                held = False
    value_a = levels_a[len(s)][rank(s, arity)]
    value_b = levels_b[len(s)][rank(s, arity)]
    return ComparisonEvidence(value_a, value_b, held)
