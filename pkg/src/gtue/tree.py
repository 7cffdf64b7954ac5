"""Situations, cuts, finitary variables, and finitary sequences.

Situations are tuples of state indices (not labels); the empty tuple is
the initial situation.  Tables over X^n are laid out lexicographically,
so the cylinder block of a prefix is a contiguous slice and lookups are
pure index arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable

from .credal import StateSpace
from .errors import MonotonicityViolated, NotBoundedBelow
from .xreal import POS_INF, XR, xr

Situation = tuple[int, ...]

ROOT: Situation = ()


class Relation(Enum):
    PRECEDES = "precedes"
    FOLLOWS = "follows"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def relate(s: Situation, t: Situation) -> Relation:
    """Strict prefix order on situations plus equality."""
    if s == t:
        return Relation.EQUAL
    if len(s) < len(t) and t[:len(s)] == s:
        return Relation.PRECEDES
    if len(t) < len(s) and s[:len(t)] == t:
        return Relation.FOLLOWS
    return Relation.INCOMPARABLE


def precedes_or_equal(s: Situation, t: Situation) -> bool:
    return len(s) <= len(t) and t[:len(s)] == s


def rank(s: Situation, arity: int) -> int:
    """Lexicographic index of a situation among those of its depth."""
    r = 0
    for x in s:
        r = r * arity + x
    return r


def unrank(index: int, depth: int, arity: int) -> Situation:
    out = []
    for _ in range(depth):
        index, x = divmod(index, arity)
        out.append(x)
    return tuple(reversed(out))


def situations_at(depth: int, arity: int):
    for i in range(arity**depth):
        yield unrank(i, depth, arity)


@dataclass(frozen=True)
class Cut:
    """A finite set of pairwise incomparable situations."""

    members: frozenset[Situation]

    def __post_init__(self):
        members = frozenset(tuple(m) for m in self.members)
        object.__setattr__(self, "members", members)
        ordered = sorted(members)
        for a, b in zip(ordered, ordered[1:]):
            # Lexicographic neighbours are the only candidate prefix pairs.
            if precedes_or_equal(a, b):
                raise ValueError(f"cut members {a} and {b} are comparable")

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def member_before(self, s: Situation) -> Situation | None:
        """The unique member preceding-or-equal s, if any."""
        for depth in range(len(s) + 1):
            if s[:depth] in self.members:
                return s[:depth]
        return None

    def max_depth(self) -> int:
        return max((len(m) for m in self.members), default=0)


def level_cut(arity: int, depth: int) -> Cut:
    return Cut(frozenset(situations_at(depth, arity)))


def is_complete(cut: Cut, space: StateSpace) -> bool:
    """Exact coverage test: the leaf measures of the members sum to one."""
    total = sum((Fraction(1, space.size ** len(m)) for m in cut.members), Fraction(0))
    return total == 1


@dataclass(frozen=True)
class FinitaryVariable:
    """A depth-n table over X^n, standing for an n-measurable global variable."""

    arity: int
    depth: int
    values: tuple[XR, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(xr(v) for v in self.values))
        if len(self.values) != self.arity**self.depth:
            raise ValueError(
                f"table has {len(self.values)} entries, expected {self.arity ** self.depth}")

    @property
    def bounded_below(self) -> bool:
        return all(not v.is_neg_inf for v in self.values)

    @property
    def bounded_above(self) -> bool:
        return all(not v.is_pos_inf for v in self.values)

    def value_at(self, s: Situation) -> XR:
        """Value on the cylinder of s; s must be at least depth long."""
        if len(s) < self.depth:
            raise ValueError(f"situation {s} is shallower than depth {self.depth}")
        return self.values[rank(s[:self.depth], self.arity)]

    def sup(self) -> XR:
        return max(self.values)

    def inf(self) -> XR:
        return min(self.values)

    def map(self, fn) -> "FinitaryVariable":
        return FinitaryVariable(self.arity, self.depth, tuple(fn(v) for v in self.values))

    def combine(self, other: "FinitaryVariable", fn) -> "FinitaryVariable":
        if other.arity != self.arity:
            raise ValueError("cannot combine variables over different state spaces")
        depth = max(self.depth, other.depth)
        a, b = lift(self, depth), lift(other, depth)
        return FinitaryVariable(self.arity, depth,
                                tuple(fn(x, y) for x, y in zip(a.values, b.values)))


def constant(arity: int, value, depth: int = 0) -> FinitaryVariable:
    return FinitaryVariable(arity, depth, (xr(value),) * arity**depth)


def indicator(arity: int, depth: int, cells) -> FinitaryVariable:
    """Indicator of a set of depth-n cells, given as situations or ranks."""
    hits = {c if isinstance(c, int) else rank(tuple(c), arity) for c in cells}
    return FinitaryVariable(arity, depth,
                            tuple(XR(1) if i in hits else XR(0) for i in range(arity**depth)))


def lift(f: FinitaryVariable, depth: int) -> FinitaryVariable:
    """Re-express an n-measurable table at a deeper level; a pure copy."""
    if depth < f.depth:
        raise ValueError("can only lift to a greater or equal depth")
    if depth == f.depth:
        return f
    block = f.arity ** (depth - f.depth)
    values = tuple(v for v in f.values for _ in range(block))
    return FinitaryVariable(f.arity, depth, values)


def pointwise_leq(f: FinitaryVariable, g: FinitaryVariable) -> bool:
    depth = max(f.depth, g.depth)
    a, b = lift(f, depth), lift(g, depth)
    return all(x <= y for x, y in zip(a.values, b.values))


class Monotonicity(Enum):
    NON_DECREASING = "non_decreasing"
    NON_INCREASING = "non_increasing"
    NONE = "none"


@dataclass
class FinitarySequence:
    """A lazily generated sequence of finitary variables.

    The generator must be a pure function of the index.  A declared
    monotonicity is spot-verified on a prefix at evaluation time and
    trusted beyond it; violations observed later abort evaluation.
    Pointwise limits are never materialized: the limit exists only
    through evaluation.
    """

    generator: Callable[[int], FinitaryVariable]
    monotonicity: Monotonicity = Monotonicity.NONE
    uniform_lower_bound: object = None
    _cache: dict = field(default_factory=dict, repr=False)

    def element(self, n: int) -> FinitaryVariable:
        if n not in self._cache:
            self._cache[n] = self.generator(n)
        return self._cache[n]

    def spot_check(self, k: int = 16):
        """Verify the declared monotonicity on the first k elements."""
        if self.monotonicity is Monotonicity.NONE:
            return
        for n in range(k - 1):
            a, b = self.element(n), self.element(n + 1)
            ordered = pointwise_leq(a, b) if self.monotonicity is Monotonicity.NON_DECREASING \
                else pointwise_leq(b, a)
            if not ordered:
                raise MonotonicityViolated(
                    f"declared {self.monotonicity.value} order fails between "
                    f"elements {n} and {n + 1}")


def clamp_levels(n: int) -> int:
    """Clamp magnitude used by the CLI sequence templates: 2**n.

    Geometric levels reach the divergence ceiling within the iteration
    budget; linear levels cannot.
    """
    return 2**n


def clamp_above_sequence(base: FinitaryVariable) -> FinitarySequence:
    """min(f, 2**n): non-decreasing gambles converging to f from below."""
    if not base.bounded_below:
        raise NotBoundedBelow("clamp-above sequences need a bounded-below base")

    def gen(n: int) -> FinitaryVariable:
        level = XR(clamp_levels(n))
        return base.map(lambda v: v if v < level else level)

    return FinitarySequence(gen, Monotonicity.NON_DECREASING, uniform_lower_bound=base.inf())


def clamp_below_sequence(base: FinitaryVariable) -> FinitarySequence:
    """max(f, -(2**n)): the lower-cut sweep, non-increasing towards f."""
    if not base.bounded_below:
        raise NotBoundedBelow("the lower-cut sweep needs a bounded-below base")

    def gen(n: int) -> FinitaryVariable:
        floor = XR(-clamp_levels(n))
        return base.map(lambda v: v if v > floor else floor)

    return FinitarySequence(gen, Monotonicity.NON_INCREASING)


def explicit_sequence(items, monotonicity: Monotonicity = Monotonicity.NONE,
                      uniform_lower_bound=None) -> FinitarySequence:
    """A finite list of variables, repeated at the tail (so limits exist)."""
    items = tuple(items)
    if not items:
        raise ValueError("an explicit sequence needs at least one element")
    return FinitarySequence(lambda n: items[min(n, len(items) - 1)],
                            monotonicity, uniform_lower_bound)


def normalize_sequence(seq: FinitarySequence, sup_f: XR, inf_f: XR) -> FinitarySequence:
    """Turn a pointwise-convergent sequence into n-measurable clamped gambles.

    Element n of the output has depth at most n: whenever the next input
    element is too deep, the previous output element is repeated, and
    once taken, each element is clamped into [inf_f, min(n, sup_f)].
    The output is uniformly bounded below, and non-decreasing inputs stay
    non-decreasing (the clamps are monotone and the clamp level rises).
    """
    sup_f, inf_f = xr(sup_f), xr(inf_f)
    if inf_f == POS_INF:
        # The limit is identically +inf; the increasing constant sequence works.
        return FinitarySequence(lambda n: constant(seq.element(0).arity, n),
                                Monotonicity.NON_DECREASING, uniform_lower_bound=XR(0))
    if not inf_f.is_finite:
        raise ValueError("inf_f must be finite or +inf")

    state: dict[int, tuple[FinitaryVariable, int]] = {}

    def padded(n: int) -> FinitaryVariable:
        # Returns the unclamped element h_n together with the input cursor.
        if n in state:
            return state[n][0]
        if n == 0:
            h, cursor = constant(seq.element(0).arity, inf_f), 0
        else:
            prev = padded(n - 1)
            cursor = state[n - 1][1]
            candidate = seq.element(cursor)
            if candidate.depth <= n:
                h, cursor = candidate, cursor + 1
            else:
                h = prev
        state[n] = (h, cursor)
        return h

    def gen(n: int) -> FinitaryVariable:
        h = padded(n)
        cap = min(XR(n), sup_f)

        def clamp(v: XR) -> XR:
            if v.is_neg_inf:
                raise NotBoundedBelow("sequence element contains -inf")
            v = v if v < cap else cap
            return v if v > inf_f else inf_f

        return h.map(clamp)

    out_monotone = Monotonicity.NON_DECREASING \
        if seq.monotonicity is Monotonicity.NON_DECREASING else Monotonicity.NONE
    return FinitarySequence(gen, out_monotone, uniform_lower_bound=inf_f)
