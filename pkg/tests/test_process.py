from fractions import Fraction

import pytest

from gtue import (
    POS_INF,
    Process,
    XR,
    check_supermartingale,
    constant_process,
    from_values,
    indicator,
    eval_process,
    level_cut,
    min_tail,
    mix,
    path_liminf,
    shift,
    truncate,
)
from gtue.errors import (
    HorizonMismatch,
    NegativeWeight,
    NotTerminal,
)
from gtue.testing import random_supermartingale, random_tree
from tests.conftest import seeded


def leafy(values, horizon=2, cut=True):
    table = dict(values)
    return Process(2, horizon,
                   tuple(tuple(table[s] for s in _level(d)) for d in range(horizon + 1)),
                   level_cut(2, horizon) if cut else None)


def _level(depth):
    from gtue.tree import situations_at

    return situations_at(depth, 2)


class TestCheck:
    def test_constant_is_supermartingale(self, tree_a):
        verdict = check_supermartingale(tree_a, constant_process(2, 3, 5), 0)
        assert verdict.is_supermartingale
        assert verdict.worst_violation is None

    def test_gap_fixture(self, tree_a):
        M = from_values(2, 1, lambda s: XR(1) if s == () else XR(2))
        verdict = check_supermartingale(tree_a, M, 0)
        assert not verdict.is_supermartingale
        assert verdict.worst_violation == ((), XR(1))

    def test_eval_process_is_supermartingale(self, tree_a):
        M = eval_process(tree_a, indicator(2, 2, [(1, 1)]))
        assert check_supermartingale(tree_a, M, 0).is_supermartingale

    def test_horizon_mismatch(self, tree_a):
        deep = constant_process(2, 5, 1)
        with pytest.raises(HorizonMismatch):
            check_supermartingale(tree_a, deep, 0)

    def test_shallower_horizon_is_fine(self, tree_a):
        verdict = check_supermartingale(tree_a, constant_process(2, 2, 1), 0)
        assert verdict.is_supermartingale

    def test_infinite_plateau_verifies(self, tree_a):
        always_inf = constant_process(2, 2, POS_INF)
        assert check_supermartingale(tree_a, always_inf, 0).is_supermartingale


class TestTruncate:
    def test_min_with_bound(self):
        M = constant_process(2, 2, POS_INF)
        assert truncate(M, 5).value_at((0, 1)) == XR(5)

    def test_inactive_clamp(self, tree_a):
        rng = seeded(3)
        M = random_supermartingale(tree_a, rng, 3)
        top = max(v for level in M.levels for v in level)
        assert truncate(M, top.v + 1).levels == M.levels

    def test_truncation_preserves_supermartingale(self):
        rng = seeded(17)
        for _ in range(100):
            tree = random_tree(rng, 2, 3)
            M = random_supermartingale(tree, rng, 3)
            bound = Fraction(rng.randint(0, 60), 10)
            verdict = check_supermartingale(tree, truncate(M, bound), 0)
            assert verdict.is_supermartingale

    def test_output_is_real_valued(self):
        M = constant_process(2, 1, POS_INF)
        out = truncate(M, 2)
        assert all(v.is_finite for level in out.levels for v in level)


class TestMix:
    def test_identity(self, tree_a):
        M = random_supermartingale(tree_a, seeded(1), 2)
        assert mix([M], [1]).levels == M.levels

    def test_affine_combination(self):
        out = mix([constant_process(2, 2, 1), constant_process(2, 2, 3)],
                  [Fraction(1, 4), Fraction(3, 4)])
        assert out.value_at(()) == XR(Fraction(5, 2))

    def test_mixture_of_supermartingales_verifies(self):
        rng = seeded(23)
        for _ in range(30):
            tree = random_tree(rng, 2, 3)
            a = random_supermartingale(tree, rng, 3)
            b = random_supermartingale(tree, rng, 3)
            out = mix([a, b], [Fraction(1, 2), Fraction(1, 2)])
            assert check_supermartingale(tree, out, 0).is_supermartingale

    def test_negative_weight_rejected(self):
        M = constant_process(2, 1, 1)
        with pytest.raises(NegativeWeight):
            mix([M], [-1])

    def test_nonnegativity_preserved(self, tree_a):
        rng = seeded(4)
        a = random_supermartingale(tree_a, rng, 2)
        b = random_supermartingale(tree_a, rng, 2)
        out = mix([a, b], [Fraction(1, 3), Fraction(2, 3)])
        assert out.min_value() >= XR(0)


class TestPathLiminf:
    def test_constant_tail(self):
        M = leafy({(): XR(1), (0,): XR(4), (1,): XR(2),
                   (0, 0): XR(4), (0, 1): XR(4), (1, 0): XR(2), (1, 1): XR(2)},
                  horizon=2)
        cut = M.terminal_cut
        assert cut is not None
        assert path_liminf(M, (0, 0)) == XR(4)

    def test_constant_process_everywhere(self):
        M = constant_process(2, 2, 7, level_cut(2, 2))
        for leaf in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            assert path_liminf(M, leaf) == XR(7)

    def test_refuses_without_terminal_cut(self):
        M = constant_process(2, 2, 7)
        with pytest.raises(NotTerminal):
            path_liminf(M, (0, 0))

    def test_min_liminf_switch_exact(self):
        rng = seeded(31)
        for _ in range(50):
            tree = random_tree(rng, 2, 3)
            M = random_supermartingale(tree, rng, 3)
            bound = Fraction(rng.randint(-10, 40), 10)
            truncated = truncate(M, bound)
            for leaf in _level(3):
                lhs = min(XR(bound), path_liminf(M, leaf))
                rhs = path_liminf(truncated, leaf)
                assert lhs == rhs


class TestInfimaOfSupermartingales:
    def test_value_dominates_min_tail(self):
        rng = seeded(37)
        for _ in range(100):
            tree = random_tree(rng, 2, 3)
            M = random_supermartingale(tree, rng, 3)
            for depth in range(3):
                for s in _level(depth):
                    assert M.value_at(s) >= min_tail(M, s)


class TestShift:
    def test_shift_adds_constant(self, tree_a):
        M = eval_process(tree_a, indicator(2, 2, [(1, 1)]))
        out = shift(M, Fraction(1, 10))
        assert out.value_at(()) == XR(Fraction(49, 100) + Fraction(1, 10))
        assert check_supermartingale(tree_a, out, 0).is_supermartingale


class TestProcessValidation:
    def test_rejects_minus_infinity(self):
        with pytest.raises(ValueError):
            from_values(2, 1, lambda s: XR(float("-inf")) if s == (0,) else XR(0))

    def test_terminal_cut_must_be_complete(self):
        from gtue import Cut

        with pytest.raises(ValueError):
            Process(2, 1, ((XR(0),), (XR(0), XR(0))), Cut(frozenset({(0,)})))

    def test_terminal_constancy_enforced(self):
        from gtue import Cut

        with pytest.raises(ValueError):
            Process(2, 2,
                    ((XR(0),), (XR(0), XR(0)), (XR(0), XR(1), XR(0), XR(0))),
                    Cut(frozenset({(0,), (1,)})))
