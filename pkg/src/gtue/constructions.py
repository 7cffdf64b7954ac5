"""Upcrossing machinery: the Doob transform and the Lévy multiplicative transform.

Both constructions walk the tree once, carrying a per-path crossing
state.  A path is *idle* until its running quantity first drops below a
(that node joins the current V cut and the path turns *active*), and
active until the quantity first exceeds b (that node joins the U cut,
one upcrossing is complete, and the path turns idle again).  First-hit
semantics make the cuts pairwise incomparable by construction.

While a path is active the Doob transform mirrors the base increments,

    M'(child) = M'(s) + (M(child) - M(s)),

and copies its value otherwise; the Levy transform multiplies by the
certificate ratio E(child)/E(s) instead.  The active region is taken as
"at or after the V member and not at or after any U member", so paths
that drop below a and never recover to b keep mirroring; the closed
bracket alone would be empty whenever the U cut is, which contradicts
the case analysis the bounds rely on.

Window parameters are rationals and all transform arithmetic runs on
exact rationals internally (finite floats are converted losslessly), so
the telescoping gain identity, the per-upcrossing width bound and the
(b/a)^k growth bound are machine-checkable with zero tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .credal import CredalSet
from .errors import (
    BadWindow,
    HorizonMismatch,
    NonFiniteRoot,
    SpaceMismatch,
    WeightSumMismatch,
    WindowOutsideRange,
)
from .evaluate import TreeModel, backward_levels
from .process import Process, mix
from .tree import (
    Cut,
    FinitaryVariable,
    Situation,
    level_cut,
    precedes_or_equal,
    rank,
    unrank,
)
from .xreal import XR, add, neg, scale


@dataclass(frozen=True)
class CutSystem:
    """Interleaved first-hit cuts (V_k, U_k) for k = 1..K, below a root."""

    root: Situation
    pairs: tuple[tuple[Cut, Cut], ...]

    def __post_init__(self):
        object.__setattr__(self, "root", tuple(self.root))
        for k, (v_cut, u_cut) in enumerate(self.pairs, start=1):
            for u in u_cut:
                if not any(v != u and precedes_or_equal(v, u) for v in v_cut):
                    raise ValueError(f"U_{k} member {u} follows no V_{k} member")
            if k > 1:
                prev_u = self.pairs[k - 2][1]
                for v in v_cut:
                    if not any(u != v and precedes_or_equal(u, v) for u in prev_u):
                        raise ValueError(f"V_{k} member {v} follows no U_{k - 1} member")

    def chain_state(self, s: Situation) -> tuple[int, bool] | None:
        """(completed upcrossings, active?) for a situation below the root."""
        s = tuple(s)
        if not precedes_or_equal(self.root, s):
            return None
        completed, active = 0, False
        for depth in range(len(self.root), len(s) + 1):
            prefix = s[:depth]
            if completed >= len(self.pairs):
                break
            v_cut, u_cut = self.pairs[completed]
            if active:
                if prefix in u_cut.members:
                    completed, active = completed + 1, False
            else:
                if prefix in v_cut.members:
                    active = True
        return completed, active

    def hits_along(self, s: Situation) -> list[tuple[Situation, Situation]]:
        """Completed (v_k, u_k) pairs on the chain of s, in order."""
        s = tuple(s)
        out = []
        current_v = None
        completed, active = 0, False
        for depth in range(len(self.root), len(s) + 1):
            prefix = s[:depth]
            if completed >= len(self.pairs):
                break
            v_cut, u_cut = self.pairs[completed]
            if active and prefix in u_cut.members:
                out.append((current_v, prefix))
                completed, active = completed + 1, False
            elif not active and prefix in v_cut.members:
                current_v, active = prefix, True
        return out


@dataclass(frozen=True)
class Transform:
    process: Process
    cuts: CutSystem
    window: tuple[Fraction, Fraction]


def _window(a, b) -> tuple[Fraction, Fraction]:
    a, b = _rational(a), _rational(b)
    if not 0 < a < b:
        raise BadWindow(f"need 0 < a < b, got a={a}, b={b}")
    return a, b


def _rational(x) -> Fraction:
    if isinstance(x, XR):
        if not x.is_finite:
            raise BadWindow("window parameters must be finite rationals")
        x = x.v
    return Fraction(x)


def _exact(v: XR) -> XR:
    """Losslessly lift finite floats to Fractions; infinities pass through."""
    if v.is_finite and not isinstance(v.v, (int, Fraction)):
        return XR(Fraction(v.v))
    return v


def _exact_tree(tree: TreeModel) -> TreeModel:
    """The same model with every PMF entry lifted to an exact rational."""

    def lift_model(model: CredalSet) -> CredalSet:
        return CredalSet(tuple(tuple(Fraction(mass) for mass in p)
                               for p in model.extreme_points))

    space = tree.space
    if tree.kind == "stationary":
        return TreeModel.stationary(space, lift_model(tree._assignment), tree.max_depth)
    if tree.kind == "by_depth":
        return TreeModel.by_depth(space, [lift_model(m) for m in tree._assignment],
                                  tree.max_depth)
    return TreeModel.table(space, {s: lift_model(m) for s, m in tree._assignment.items()},
                           tree.max_depth)


def doob_transform(tree: TreeModel, M: Process, t: Situation, a, b) -> Transform:
    """The additive upcrossing transform of a non-negative supermartingale.

    Off the subtree of t the output is pinned at M(t); below t it mirrors
    the base increments exactly while the path is inside an upcrossing
    window and freezes otherwise.  After k completed upcrossings the
    accumulated gain is the telescoping sum of the k window passages,
    each strictly wider than b - a.
    """
    a, b = _window(a, b)
    t = tuple(t)
    if tree.space.size != M.arity:
        raise SpaceMismatch("process and tree disagree on the state space")
    if M.horizon > tree.max_depth:
        raise HorizonMismatch("process extends beyond the tree's depth bound")
    if len(t) > M.horizon:
        raise ValueError("transform root lies beyond the process horizon")
    root_value = _exact(M.value_at(t))
    if root_value.is_pos_inf:
        raise NonFiniteRoot("the base process must be finite at the transform root")
    if M.min_value() < XR(0):
        raise ValueError("the base process must be non-negative")

    arity, horizon = M.arity, M.horizon
    base = [[_exact(v) for v in level] for level in M.levels]
    out = [[None] * (arity**d) for d in range(horizon + 1)]
    # Per-node crossing state below t: (completed, active).
    states = [[None] * (arity**d) for d in range(horizon + 1)]
    v_hits: dict[int, set] = {}
    u_hits: dict[int, set] = {}

    for depth in range(horizon + 1):
        for i in range(arity**depth):
            s = unrank(i, depth, arity)
            if not precedes_or_equal(t, s):
                out[depth][i] = root_value
                continue
            if s == t:
                value = root_value
                completed, active = 0, False
            else:
                parent = i // arity
                completed, active = states[depth - 1][parent]
                if active:
                    increment = add(base[depth][i], neg(base[depth - 1][parent]))
                    value = add(out[depth - 1][parent], increment)
                else:
                    value = out[depth - 1][parent]
            m_here = base[depth][i]
            if not active and m_here < a:
                v_hits.setdefault(completed + 1, set()).add(s)
                active = True
            elif active and m_here > b:
                u_hits.setdefault(completed + 1, set()).add(s)
                completed, active = completed + 1, False
            states[depth][i] = (completed, active)
            out[depth][i] = value

    process = Process(arity, horizon, tuple(tuple(level) for level in out),
                      terminal_cut=M.terminal_cut)
    top = max(v_hits, default=0)
    pairs = tuple((Cut(frozenset(v_hits.get(k, ()))), Cut(frozenset(u_hits.get(k, ()))))
                  for k in range(1, top + 1))
    return Transform(process, CutSystem(t, pairs), (a, b))


@dataclass(frozen=True)
class GainCheck:
    """One realized post-upcrossing situation of a Doob transform."""

    situation: Situation
    upcrossings: int
    gain: XR
    telescoped: XR
    identity_ok: bool
    terms_exceed_width: bool
    bound_ok: bool

    @property
    def passed(self) -> bool:
        return self.identity_ok and self.terms_exceed_width and self.bound_ok


def doob_gain_checks(M: Process, transform: Transform) -> list[GainCheck]:
    """Exact telescoping-identity and gain checks at every realized post-U node."""
    a, b = transform.window
    cuts = transform.cuts
    width = XR(b - a)
    root_value = _exact(M.value_at(cuts.root))
    checks = []
    for depth in range(M.horizon + 1):
        for i in range(M.arity**depth):
            s = unrank(i, depth, M.arity)
            state = cuts.chain_state(s)
            if state is None:
                continue
            completed, active = state
            if completed < 1 or active:
                continue
            hits = cuts.hits_along(s)
            telescoped = XR(0)
            terms_ok = True
            for v_node, u_node in hits:
                term = add(_exact(M.value_at(u_node)), neg(_exact(M.value_at(v_node))))
                if not term > width:
                    terms_ok = False
                telescoped = add(telescoped, term)
            gain = add(transform.process.value_at(s), neg(root_value))
            target = scale(completed, width)
            checks.append(GainCheck(
                s, completed, gain, telescoped,
                identity_ok=(gain == telescoped),
                terms_exceed_width=terms_ok,
                bound_ok=not (gain < target)))
    return checks


def upcrossings(M: Process, prefix: Situation, a, b, cuts: CutSystem) -> int:
    """Completed upcrossings of (a, b) on the chain of ``prefix``."""
    prefix = tuple(prefix)
    count = 0
    for k, (_v, u_cut) in enumerate(cuts.pairs, start=1):
        if any(precedes_or_equal(u, prefix) for u in u_cut):
            count = k
    return count


def doob_mixture(tree: TreeModel, M: Process, t: Situation, windows, weights) -> Process:
    """Convex mixture of per-window Doob transforms, normalized to 1 at t.

    The finite stand-in for the countable mixture over all rational
    windows: the result is a non-negative supermartingale with value one
    at t, a t-test certificate whose growth witnesses oscillation across
    any of the chosen windows.
    """
    windows = list(windows)
    weights = [_rational(w) for w in weights]
    if len(windows) != len(weights):
        raise ValueError("one weight per window required")
    if any(w <= 0 for w in weights):
        raise WeightSumMismatch("mixture weights must be positive")
    if sum(weights) != 1:
        raise WeightSumMismatch(f"weights sum to {sum(weights)}, not 1")
    transforms = [doob_transform(tree, M, t, a, b) for a, b in windows]
    combined = mix([tr.process for tr in transforms], weights)
    t = tuple(t)
    root_value = combined.value_at(t)
    if not root_value.is_finite or root_value == XR(0):
        raise ValueError("normalization needs a finite positive value at the root")
    factor = Fraction(1) / root_value.v if isinstance(root_value.v, (int, Fraction)) \
        else 1.0 / root_value.v
    return combined.map(lambda v: scale(factor, v))


def levy_transform(tree: TreeModel, f: FinitaryVariable, s_prime: Situation,
                   a, b, delta) -> Transform:
    """The multiplicative test supermartingale tracking a finitary gamble.

    The gamble is shifted by delta above its infimum so it is strictly
    positive; the canonical certificate below each V member is the
    conditional-value process of the shifted gamble, whose value at the
    member is below a and whose terminal values equal the gamble, so no
    near-optimal bookkeeping is needed.  The output starts at one, stays
    positive, multiplies by the certificate ratio inside each window
    passage, and after k completed upcrossings exceeds (b/a)^k.
    """
    a, b = _window(a, b)
    delta = _rational(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if any(not v.is_finite for v in f.values):
        raise ValueError("the tracked variable must be a finitary gamble")
    s_prime = tuple(s_prime)
    if len(s_prime) > f.depth:
        raise ValueError("the root situation must not be deeper than the variable")

    exact_f = f.map(_exact)
    low = min(v.v for v in exact_f.values)
    shifted = exact_f.map(lambda v: XR(v.v - low + delta))

    arity, horizon = f.arity, f.depth
    block = arity ** (horizon - len(s_prime))
    start = rank(s_prime, arity) * block
    reachable = shifted.values[start:start + block]
    lo = min(v.v for v in reachable)
    hi = max(v.v for v in reachable)
    if lo == hi:
        # Constant target: the conditional values never move, no window
        # can open, and the transform is identically one.
        trivial = Process(arity, horizon,
                          tuple((XR(1),) * arity**d for d in range(horizon + 1)),
                          terminal_cut=level_cut(arity, horizon))
        return Transform(trivial, CutSystem(s_prime, ()), (a, b))
    if a <= lo:
        raise WindowOutsideRange(
            f"no situation can have a conditional value below a={a}: "
            f"the shifted gamble never drops under {lo}")
    if b >= hi:
        raise WindowOutsideRange(
            f"the certificate can never exceed b={b}: the shifted gamble "
            f"tops out at {hi}")

    levels = backward_levels(_exact_tree(tree), shifted, down_to=0)
    out = [[None] * (arity**d) for d in range(horizon + 1)]
    states = [[None] * (arity**d) for d in range(horizon + 1)]
    v_hits: dict[int, set] = {}
    u_hits: dict[int, set] = {}

    for depth in range(horizon + 1):
        for i in range(arity**depth):
            s = unrank(i, depth, arity)
            if not precedes_or_equal(s_prime, s):
                out[depth][i] = XR(1)
                continue
            if s == s_prime:
                out[depth][i] = XR(1)
                states[depth][i] = (0, False)
                continue
            parent = i // arity
            completed, active = states[depth - 1][parent]
            if active:
                ratio = levels[depth][i].v / levels[depth - 1][parent].v
                value = XR(out[depth - 1][parent].v * ratio)
            else:
                value = out[depth - 1][parent]
            e_here = levels[depth][i]
            if not active and e_here < a:
                v_hits.setdefault(completed + 1, set()).add(s)
                active = True
            elif active and e_here > b:
                u_hits.setdefault(completed + 1, set()).add(s)
                completed, active = completed + 1, False
            states[depth][i] = (completed, active)
            out[depth][i] = value

    process = Process(arity, horizon, tuple(tuple(level) for level in out),
                      terminal_cut=level_cut(arity, horizon))
    top = max(v_hits, default=0)
    pairs = tuple((Cut(frozenset(v_hits.get(k, ()))), Cut(frozenset(u_hits.get(k, ()))))
                  for k in range(1, top + 1))
    return Transform(process, CutSystem(s_prime, pairs), (a, b))


@dataclass(frozen=True)
class GrowthCheck:
    """One realized post-upcrossing situation of a Levy transform."""

    situation: Situation
    upcrossings: int
    value: XR
    threshold: XR
    bound_ok: bool

    @property
    def passed(self) -> bool:
        return self.bound_ok


def levy_bound_checks(transform: Transform) -> list[GrowthCheck]:
    """Check T > (b/a)^k at every realized post-U situation."""
    a, b = transform.window
    cuts = transform.cuts
    process = transform.process
    checks = []
    for depth in range(process.horizon + 1):
        for i in range(process.arity**depth):
            s = unrank(i, depth, process.arity)
            state = cuts.chain_state(s)
            if state is None:
                continue
            completed, active = state
            if completed < 1 or active:
                continue
            threshold = XR((b / a) ** completed)
            value = process.levels[depth][i]
            checks.append(GrowthCheck(s, completed, value, threshold,
                                      bound_ok=value > threshold))
    return checks
