"""Seeded random instance generators used by the test suite and the scripts.

Rational generators draw small-denominator Fractions so that exact-mode
runs stay fast; float generators mirror them.  The supermartingale
generator works leaf-up: draw non-negative leaf values, then set every
internal value to its local upper expectation plus a uniform slack, which
guarantees strict feasibility and exercises non-tight nodes.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .credal import CredalSet, StateSpace, local_upper
from .evaluate import TreeModel
from .process import Process
from .tree import FinitaryVariable, level_cut, unrank
from .xreal import POS_INF, XR


def rand_fraction(rng: random.Random, low, high, denominator: int = 20) -> Fraction:
    return Fraction(rng.randint(int(low * denominator), int(high * denominator)), denominator)


def random_pmf(rng: random.Random, size: int, rational: bool = True,
               zero_state: int | None = None, grid: int = 20):
    """A random PMF on a grid; optionally forced to zero at one state."""
    while True:
        weights = [0 if i == zero_state else rng.randint(0, grid) for i in range(size)]
        total = sum(weights)
        if total > 0:
            break
    if rational:
        return tuple(Fraction(w, total) for w in weights)
    return tuple(w / total for w in weights)


def random_credal(rng: random.Random, size: int, points: int, rational: bool = True,
                  zero_state: int | None = None) -> CredalSet:
    return CredalSet(tuple(random_pmf(rng, size, rational, zero_state)
                           for _ in range(points)))


def random_tree(rng: random.Random, size: int, depth: int, max_points: int = 3,
                rational: bool = True, zero_state: int | None = None,
                kind: str | None = None) -> TreeModel:
    space = StateSpace(tuple(f"s{i}" for i in range(size)))
    kind = kind or rng.choice(("stationary", "by_depth", "table"))
    if kind == "stationary":
        return TreeModel.stationary(
            space, random_credal(rng, size, rng.randint(1, max_points), rational, zero_state),
            depth)
    if kind == "by_depth":
        return TreeModel.by_depth(
            space,
            [random_credal(rng, size, rng.randint(1, max_points), rational, zero_state)
             for _ in range(depth)],
            depth)
    table = {}
    for d in range(depth):
        for i in range(size**d):
            table[unrank(i, d, size)] = random_credal(
                rng, size, rng.randint(1, max_points), rational, zero_state)
    return TreeModel.table(space, table, depth)


def random_finitary(rng: random.Random, size: int, depth: int, low=-5, high=5,
                    inf_probability: float = 0.0, rational: bool = True) -> FinitaryVariable:
    values = []
    for _ in range(size**depth):
        if rng.random() < inf_probability:
            values.append(POS_INF)
        elif rational:
            values.append(XR(rand_fraction(rng, low, high)))
        else:
            values.append(XR(rng.uniform(low, high)))
    return FinitaryVariable(size, depth, tuple(values))


def random_gamble(rng: random.Random, size: int, depth: int, low=-5, high=5,
                  rational: bool = True) -> FinitaryVariable:
    return random_finitary(rng, size, depth, low, high, 0.0, rational)


def random_supermartingale(tree: TreeModel, rng: random.Random, horizon: int,
                           leaf_high=4, slack_high=1, rational: bool = True,
                           terminal: bool = True) -> Process:
    """Leaf values >= 0, internal value = local upper expectation + slack."""
    size = tree.space.size
    levels: list[tuple] = [None] * (horizon + 1)
    if rational:
        leaves = tuple(XR(rand_fraction(rng, 0, leaf_high)) for _ in range(size**horizon))
    else:
        leaves = tuple(XR(rng.uniform(0, leaf_high)) for _ in range(size**horizon))
    levels[horizon] = leaves
    for depth in range(horizon - 1, -1, -1):
        row = []
        for i in range(size**depth):
            s = unrank(i, depth, size)
            children = levels[depth + 1][i * size:(i + 1) * size]
            from .credal import LocalVariable

            q = local_upper(tree.local_model_at(s), LocalVariable(children))
            slack = XR(rand_fraction(rng, 0, slack_high)) if rational \
                else XR(rng.uniform(0, slack_high))
            row.append(XR(q.v + slack.v))
        levels[depth] = tuple(row)
    cut = level_cut(size, horizon) if terminal else None
    return Process(size, horizon, tuple(levels), cut)


def float_tree(tree: TreeModel) -> TreeModel:
    """The same tree with every PMF entry converted to float."""

    def to_float(model: CredalSet) -> CredalSet:
        return CredalSet(tuple(tuple(float(m) for m in p) for p in model.extreme_points))

    if tree.kind == "stationary":
        return TreeModel.stationary(tree.space, to_float(tree._assignment), tree.max_depth)
    if tree.kind == "by_depth":
        return TreeModel.by_depth(tree.space, [to_float(m) for m in tree._assignment],
                                  tree.max_depth)
    return TreeModel.table(tree.space,
                           {s: to_float(m) for s, m in tree._assignment.items()},
                           tree.max_depth)


def float_variable(f: FinitaryVariable) -> FinitaryVariable:
    return f.map(lambda v: v if not v.is_finite else XR(float(v.v)))
