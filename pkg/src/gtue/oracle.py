"""Independent brute-force computation of the global upper expectation.

A precise tree compatible with the credal sets picks one extreme-point
PMF per situation.  For a fixed selection the value of a finitary
variable is the plain forward expectation under the induced product
measure (with the 0 * inf = 0 convention, so a zero-mass branch never
contributes whatever the payoff behind it).  The oracle value is the
maximum of that expectation over every selection.

Selections range over extreme points only: the expectation is linear in
each node's PMF once the others are fixed, so the maximum over each
node's whole credal polytope is attained at a vertex, and enumerating
vertices loses nothing.

No maximum is taken anywhere below the root.  The enumeration materializes
one expectation per selection, sharing partial sums across selections
that agree on a subtree (pure distributivity of the forward sum), and
maximizes once over the finished list.  That keeps the cost near
selection_count without ever touching the backward max recursion this
oracle exists to check.
"""

from __future__ import annotations

from .errors import CapExceeded, NotBoundedBelow
from .tree import FinitaryVariable, ROOT, Situation, unrank
from .xreal import XR, add, scale

DEFAULT_CAP = 10**7


def selection_count(tree, n: int) -> int:
    """Number of precise-tree selections for depth-n variables."""
    total = 1
    for depth in range(min(n, tree.max_depth)):
        for i in range(tree.space.size**depth):
            total *= len(tree.local_model_at(unrank(i, depth, tree.space.size)).extreme_points)
    return total


def brute_force_upper(tree, f: FinitaryVariable, s: Situation = ROOT,
                      cap: int = DEFAULT_CAP) -> XR:
    """Max over selections of the forward expectation of f from s."""
    if not f.bounded_below:
        raise NotBoundedBelow("the oracle needs a bounded-below variable")
    count = selection_count(tree, f.depth)
    if count > cap:
        raise CapExceeded(f"{count} selections exceed the cap {cap}")
    s = tuple(s)
    if len(s) > f.depth:
        raise ValueError("conditioning situation is deeper than the variable")
    values = _expectations(tree, f, s)
    return max(values)


def _expectations(tree, f: FinitaryVariable, s: Situation) -> list[XR]:
    """One forward expectation per selection of the subtree rooted at s."""
    if len(s) == f.depth:
        return [f.value_at(s)]
    child_tables = [_expectations(tree, f, s + (x,)) for x in range(f.arity)]
    model = tree.local_model_at(s)
    out: list[XR] = []
    for p in model.extreme_points:
        # Wide sub-selections: every combination of the children's tables.
        partial = [XR(0)]
        for mass, table in zip(p, child_tables):
            scaled = [scale(mass, v) for v in table]
            partial = [add(acc, sv) for acc in partial for sv in scaled]
        out.extend(partial)
    return out
