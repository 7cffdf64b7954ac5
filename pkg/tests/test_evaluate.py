from fractions import Fraction

import pytest

from gtue import (
    CredalSet,
    FinitaryVariable,
    LocalVariable,
    Monotonicity,
    POS_INF,
    StateSpace,
    TreeModel,
    XR,
    add,
    certificate_bound,
    check_supermartingale,
    clamp_above_sequence,
    clamp_below_sequence,
    compare_models,
    constant,
    eval_finitary,
    eval_limit,
    eval_lower_finitary,
    eval_process,
    explicit_sequence,
    indicator,
    level_cut,
    lift,
    local_upper,
    scale,
    shift,
    vacuous,
)
from gtue.errors import (
    DepthExceeded,
    DominanceFailed,
    MonotonicityViolated,
    NotASupermartingale,
    NotBoundedAbove,
    NotBoundedBelow,
    SpaceMismatch,
)
from gtue.testing import random_finitary, random_gamble, random_tree
from tests.conftest import seeded

F = Fraction


class TestEvalFinitary:
    def test_two_step_indicator(self, tree_a):
        assert eval_finitary(tree_a, indicator(2, 2, [(1, 1)])) == XR(F(49, 100))

    def test_conditioning(self, tree_a):
        f = indicator(2, 2, [(1, 1)])
        assert eval_finitary(tree_a, f, (1,)) == XR(F(7, 10))
        assert eval_finitary(tree_a, f, (0,)) == XR(0)
        assert eval_finitary(tree_a, f, (1, 1)) == XR(1)

    def test_constants_skip_the_models(self, tree_a):
        for depth in range(4):
            assert eval_finitary(tree_a, constant(2, F(5, 2), depth)) == XR(F(5, 2))

    def test_zero_mass_infinity(self, tree_b):
        f = FinitaryVariable(2, 1, (XR(0), POS_INF))
        assert eval_finitary(tree_b, f) == XR(0)

    def test_depth_cap(self, tree_a):
        with pytest.raises(DepthExceeded):
            eval_finitary(tree_a, constant(2, 1, depth=5))

    def test_bounded_below_required(self, tree_a):
        bad = FinitaryVariable(2, 1, (XR(0), XR(float("-inf"))))
        with pytest.raises(NotBoundedBelow):
            eval_finitary(tree_a, bad)

    def test_space_mismatch(self, tree_a):
        with pytest.raises(SpaceMismatch):
            eval_finitary(tree_a, constant(3, 1, depth=1))

    def test_lift_invariance(self):
        rng = seeded(41)
        for _ in range(30):
            tree = random_tree(rng, 2, 4)
            f = random_finitary(rng, 2, rng.randint(0, 2), inf_probability=0.1)
            deeper = lift(f, f.depth + rng.randint(1, 2))
            assert eval_finitary(tree, f) == eval_finitary(tree, deeper)


class TestEvalProcess:
    def test_recursion_trace(self, tree_a):
        M = eval_process(tree_a, indicator(2, 2, [(1, 1)]))
        assert M.value_at(()) == XR(F(49, 100))
        assert M.value_at((1,)) == XR(F(7, 10))
        assert M.value_at((0,)) == XR(0)
        assert M.value_at((1, 1)) == XR(1)
        assert M.terminal_cut == level_cut(2, 2)

    def test_constant_gives_constant_process(self, tree_a):
        M = eval_process(tree_a, constant(2, 3, depth=2))
        assert all(v == XR(3) for level in M.levels for v in level)

    def test_is_supermartingale(self):
        rng = seeded(43)
        for _ in range(30):
            tree = random_tree(rng, rng.choice((2, 3)), 3)
            f = random_finitary(rng, tree.space.size, rng.randint(1, 3),
                                inf_probability=0.15)
            M = eval_process(tree, f)
            assert check_supermartingale(tree, M, 0).is_supermartingale


class TestEvalLower:
    def test_depth_one(self, tree_a):
        assert eval_lower_finitary(tree_a, indicator(2, 1, [(1,)])) == XR(F(3, 10))

    def test_two_step(self, tree_a):
        assert eval_lower_finitary(tree_a, indicator(2, 2, [(1, 1)])) == XR(F(9, 100))

    def test_constant(self, tree_a):
        assert eval_lower_finitary(tree_a, constant(2, F(5, 2), 1)) == XR(F(5, 2))

    def test_bounded_above_required(self, tree_a):
        bad = FinitaryVariable(2, 1, (XR(0), POS_INF))
        with pytest.raises(NotBoundedAbove):
            eval_lower_finitary(tree_a, bad)

    def test_sandwich(self, tree_a):
        rng = seeded(47)
        for _ in range(100):
            f = random_gamble(rng, 2, 2)
            assert eval_lower_finitary(tree_a, f) <= eval_finitary(tree_a, f)


class TestGlobalProperties:
    """Sup bound, sub-additivity, homogeneity, monotonicity, constant shift."""

    def test_sup_bound_over_cylinder(self):
        rng = seeded(53)
        for _ in range(100):
            tree = random_tree(rng, 2, 3)
            f = random_finitary(rng, 2, 2, inf_probability=0.1)
            s = (rng.randint(0, 1),)
            block = [f.value_at(s + (x,)) for x in (0, 1)]
            assert eval_finitary(tree, f, s) <= max(block)

    def test_subadditivity(self):
        rng = seeded(59)
        for _ in range(100):
            tree = random_tree(rng, 2, 3)
            f = random_finitary(rng, 2, 2, inf_probability=0.1)
            g = random_finitary(rng, 2, 2, inf_probability=0.1)
            lhs = eval_finitary(tree, f.combine(g, add))
            rhs = add(eval_finitary(tree, f), eval_finitary(tree, g))
            assert lhs <= rhs

    def test_homogeneity(self):
        rng = seeded(61)
        for _ in range(100):
            tree = random_tree(rng, 2, 3)
            f = random_finitary(rng, 2, 2)
            for lam in (F(0), F(1, 2), F(2)):
                lhs = eval_finitary(tree, f.map(lambda v: scale(lam, v)))
                assert lhs == scale(lam, eval_finitary(tree, f))

    def test_monotonicity(self):
        rng = seeded(67)
        for _ in range(100):
            tree = random_tree(rng, 2, 3)
            f = random_finitary(rng, 2, 2)
            bump = random_finitary(rng, 2, 2, low=0, high=3, inf_probability=0.05)
            g = f.combine(bump, add)
            assert eval_finitary(tree, f) <= eval_finitary(tree, g)

    def test_constant_additivity(self):
        rng = seeded(71)
        for _ in range(100):
            tree = random_tree(rng, 2, 3)
            f = random_finitary(rng, 2, 2)
            mu = F(rng.randint(-50, 50), 10)
            lhs = eval_finitary(tree, f.map(lambda v: add(v, XR(mu))))
            assert lhs == add(eval_finitary(tree, f), XR(mu))


class TestIteratedLaw:
    def test_exact_iteration(self):
        rng = seeded(73)
        for _ in range(50):
            tree = random_tree(rng, 2, 4)
            f = random_finitary(rng, 2, rng.randint(1, 4), inf_probability=0.1)
            for depth in range(f.depth):
                for i in range(2**depth):
                    s = tuple(int(b) for b in format(i, f"0{depth}b")) if depth else ()
                    children = LocalVariable(tuple(
                        eval_finitary(tree, f, s + (x,)) for x in (0, 1)))
                    outer = local_upper(tree.local_model_at(s), children)
                    assert outer == eval_finitary(tree, f, s)

    def test_local_compatibility(self):
        rng = seeded(79)
        for _ in range(50):
            tree = random_tree(rng, 2, 4)
            depth = rng.randint(1, 4)
            f = random_finitary(rng, 2, depth, inf_probability=0.1)
            s = tuple(rng.randint(0, 1) for _ in range(depth - 1))
            children = LocalVariable(tuple(f.value_at(s + (x,)) for x in (0, 1)))
            assert eval_finitary(tree, f, s) == local_upper(tree.local_model_at(s), children)


class TestEvalLimit:
    def test_zero_mass_clamp_converges_to_zero(self, tree_b):
        seq = clamp_above_sequence(FinitaryVariable(2, 1, (XR(0), POS_INF)))
        out = eval_limit(tree_b, seq)
        assert out.status == "converged"
        assert out.value == XR(0)

    def test_positive_mass_clamp_diverges(self, tree_a):
        seq = clamp_above_sequence(FinitaryVariable(2, 1, (XR(0), POS_INF)))
        out = eval_limit(tree_a, seq)
        assert out.status == "converged"
        assert out.value == POS_INF
        assert out.iterations <= 64

    def test_stationary_sequence(self, tree_a):
        f = indicator(2, 2, [(1, 1)])
        seq = explicit_sequence([f], Monotonicity.NON_DECREASING)
        out = eval_limit(tree_a, seq)
        assert out.status == "converged"
        assert out.iterations == 2
        assert out.value == XR(F(49, 100))

    def test_monotonicity_declaration_required(self, tree_a):
        seq = explicit_sequence([constant(2, 1)], Monotonicity.NONE)
        with pytest.raises(MonotonicityViolated):
            eval_limit(tree_a, seq)

    def test_budget_exhaustion_reports_bound_direction(self, tree_a):
        f = indicator(2, 1, [(1,)])
        slow = explicit_sequence(
            [f.map(lambda v: add(v, XR(F(-1, n + 1)))) for n in range(200)],
            Monotonicity.NON_DECREASING)
        out = eval_limit(tree_a, slow, tol=0, budget=16)
        assert out.status == "budget_exhausted"
        assert out.bound_direction == "lower"
        assert out.iterations == 16

    def test_lying_generator_caught_mid_run(self, tree_a):
        items = [constant(2, n) for n in range(20)] + [constant(2, 0)]
        seq = explicit_sequence(items, Monotonicity.NON_DECREASING)
        with pytest.raises(MonotonicityViolated):
            eval_limit(tree_a, seq, tol=0, budget=40, spot_k=4)

    def test_up_down_consistency(self):
        rng = seeded(83)
        tol = 1e-9
        for _ in range(20):
            tree = random_tree(rng, 2, 3)
            g = random_gamble(rng, 2, 2)
            up = explicit_sequence(
                [g.map(lambda v: add(v, XR(-F(1, 2**n)))) for n in range(40)],
                Monotonicity.NON_DECREASING)
            down = explicit_sequence(
                [g.map(lambda v: add(v, XR(F(1, 2**n)))) for n in range(40)],
                Monotonicity.NON_INCREASING)
            lo = eval_limit(tree, up, tol=tol)
            hi = eval_limit(tree, down, tol=tol)
            assert lo.status == hi.status == "converged"
            assert abs(lo.value.v - hi.value.v) <= 2 * tol


class TestLowerCuts:
    def test_sweep_constant_below_min(self):
        rng = seeded(89)
        for _ in range(100):
            tree = random_tree(rng, 2, 3)
            f = random_gamble(rng, 2, 2)
            base = eval_finitary(tree, f)
            for alpha in (f.inf(), add(f.inf(), XR(-1)), add(f.inf(), XR(-100))):
                clamped = f.map(lambda v: v if v > alpha else alpha)
                assert eval_finitary(tree, clamped) == base

    def test_clamp_below_sequence_converges(self, tree_a):
        f = FinitaryVariable(2, 2, (XR(-40), XR(3), XR(-7), XR(5)))
        out = eval_limit(tree_a, clamp_below_sequence(f), tol=0)
        assert out.status == "converged"
        assert out.value == eval_finitary(tree_a, f)


class TestFatouFinitary:
    def test_eventually_constant_sequences(self):
        rng = seeded(97)
        for _ in range(100):
            tree = random_tree(rng, 2, 3)
            g = random_gamble(rng, 2, 2)
            cutoff = rng.randint(1, 4)
            noise = [random_gamble(rng, 2, 2, low=-2, high=2) for _ in range(cutoff)]
            items = [g.combine(n, add) for n in noise] + [g]
            # The tail is constant, so both the pointwise liminf (= g) and
            # the liminf of the values are exactly computable.
            liminf_evals = eval_finitary(tree, items[-1])
            assert eval_finitary(tree, g) <= liminf_evals

    def test_periodic_tail_gives_strict_content(self):
        rng = seeded(98)
        for _ in range(100):
            tree = random_tree(rng, 2, 3)
            g1 = random_gamble(rng, 2, 2)
            g2 = random_gamble(rng, 2, 2)
            pointwise_liminf = g1.combine(g2, min)
            liminf_evals = min(eval_finitary(tree, g1), eval_finitary(tree, g2))
            assert eval_finitary(tree, pointwise_liminf) <= liminf_evals


class TestHomogeneityAtInfinity:
    def test_clamp_ladder_matches_scaled_value(self):
        rng = seeded(101)
        for _ in range(50):
            zero_state = 1 if rng.random() < 0.4 else None
            tree = random_tree(rng, 2, 3, zero_state=zero_state)
            depth = rng.randint(1, 2)
            cells = [i for i in range(2**depth) if rng.random() < 0.45]
            f = indicator(2, depth, cells)
            target = scale(POS_INF, eval_finitary(tree, f))
            blown = f.map(lambda v: scale(POS_INF, v))
            out = eval_limit(tree, clamp_above_sequence(blown))
            assert out.status == "converged"
            assert out.value == target


class TestCertificates:
    def test_tight_certificate(self, tree_a):
        f = indicator(2, 2, [(1, 1)])
        M = eval_process(tree_a, f)
        assert certificate_bound(tree_a, M, f) == eval_finitary(tree_a, f)

    def test_constant_sup_certificate(self, tree_a):
        f = indicator(2, 2, [(1, 1)])
        from gtue import constant_process

        M = constant_process(2, 2, 1, level_cut(2, 2))
        assert certificate_bound(tree_a, M, f) == XR(1)

    def test_shifted_certificate(self, tree_a):
        f = indicator(2, 2, [(1, 1)])
        base = eval_finitary(tree_a, f)
        for c in (F(1, 10), F(1)):
            M = shift(eval_process(tree_a, f), c)
            assert certificate_bound(tree_a, M, f) == add(base, XR(c))

    def test_dominance_failure_reports_witness(self, tree_a):
        f = indicator(2, 2, [(1, 1)])
        from gtue import constant_process

        M = constant_process(2, 2, F(1, 2), level_cut(2, 2))
        with pytest.raises(DominanceFailed) as err:
            certificate_bound(tree_a, M, f)
        assert err.value.witness == (1, 1)

    def test_non_supermartingale_rejected(self, tree_a):
        f = indicator(2, 1, [(1,)])
        from gtue import from_values

        M = from_values(2, 1, lambda s: XR(1) if len(s) else XR(0),
                        level_cut(2, 1))
        with pytest.raises(NotASupermartingale):
            certificate_bound(tree_a, M, f)


class TestCompareModels:
    def test_subset_of_extremes_dominated(self, space2, model_a):
        rng = seeded(103)
        sub = CredalSet([model_a.extreme_points[0]])
        tree_small = TreeModel.stationary(space2, sub, 4)
        tree_big = TreeModel.stationary(space2, model_a, 4)
        for _ in range(100):
            f = random_finitary(rng, 2, 2, inf_probability=0.1)
            evidence = compare_models(tree_small, tree_big, f)
            assert evidence.local_dominance_held
            assert evidence.value_a <= evidence.value_b

    def test_equal_models(self, tree_a):
        f = indicator(2, 2, [(1, 1)])
        evidence = compare_models(tree_a, tree_a, f)
        assert evidence.value_a == evidence.value_b

    def test_precise_below_vacuous(self, space2):
        rng = seeded(107)
        precise = TreeModel.stationary(space2, CredalSet([(F(1, 2), F(1, 2))]), 3)
        top = TreeModel.stationary(space2, vacuous(2), 3)
        for _ in range(30):
            f = random_gamble(rng, 2, 2)
            evidence = compare_models(precise, top, f)
            assert evidence.local_dominance_held
            assert evidence.value_b == f.sup()
            assert evidence.value_a <= evidence.value_b

    def test_space_mismatch(self, tree_a):
        other = TreeModel.stationary(StateSpace(("x", "y")), vacuous(2), 4)
        with pytest.raises(SpaceMismatch):
            compare_models(tree_a, other, indicator(2, 1, [(1,)]))
