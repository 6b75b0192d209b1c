import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from coopeq.core.errors import DimensionError, GameError
from coopeq.core.game import (
    decompose,
    expected_utilities,
    msw,
    msw_profile,
    pareto_relation,
    weakly_pareto_dominates,
)
from coopeq.core.models import Game, MixedStrategy, ParetoRelation, StrategyProfile, normalize_probs

payoffs = st.integers(1, 5).flatmap(
    lambda n: st.integers(1, 5).flatmap(
        lambda m: st.tuples(
            arrays(np.float64, (n, m), elements=st.floats(-100, 100)),
            arrays(np.float64, (n, m), elements=st.floats(-100, 100)),
        )
    )
)


def test_pure_utilities(pd):
    u = expected_utilities(pd, StrategyProfile.pure(0, 0, 2, 2))
    assert u.as_tuple() == (3.0, 3.0)
    u = expected_utilities(pd, StrategyProfile.pure(1, 0, 2, 2))
    assert u.as_tuple() == (5.0, 0.0)


def test_mixed_utilities(pd):
    s = StrategyProfile(MixedStrategy([0.5, 0.5]), MixedStrategy.pure(0, 2))
    u = expected_utilities(pd, s)
    assert u.v1 == pytest.approx(4.0)
    assert u.v2 == pytest.approx(1.5)


def test_utilities_reject_wrong_size(pd):
    s = StrategyProfile(MixedStrategy([1.0, 0.0, 0.0]), MixedStrategy.pure(0, 2))
    with pytest.raises(DimensionError):
        expected_utilities(pd, s)


def test_msw(xam1, pd):
    assert msw(xam1) == 5.0
    assert msw_profile(xam1) == (5.0, (0, 0))
    assert msw(pd) == 6.0


def test_msw_ties_pick_lowest_row_major():
    g = Game(np.zeros((2, 3)), np.zeros((2, 3)))
    assert msw_profile(g) == (0.0, (0, 0))
    g = Game([[0, 1], [1, 0]], [[0, 0], [0, 0]])
    assert msw_profile(g)[1] == (0, 1)


@given(payoffs)
@settings(max_examples=100)
def test_decomposition_recombines(ab):
    a, b = ab
    g = Game(a, b)
    parts = decompose(g)
    assert np.allclose(parts.team + parts.zerosum, g.payoff1)
    assert np.allclose(parts.team - parts.zerosum, g.payoff2)
    assert np.array_equal(parts.team_game().payoff1, parts.team_game().payoff2)
    assert np.array_equal(parts.zerosum_game().payoff2, -parts.zerosum)


@given(payoffs)
@settings(max_examples=100)
def test_swapped_exchanges_roles(ab):
    a, b = ab
    g = Game(a, b)
    h = g.swapped()
    assert h.shape == (g.m, g.n)
    assert np.array_equal(h.payoff1, b.T)
    assert h.swapped() == g


def test_pareto_relation_labels(pd):
    cc = StrategyProfile.pure(0, 0, 2, 2)
    dd = StrategyProfile.pure(1, 1, 2, 2)
    cd = StrategyProfile.pure(0, 1, 2, 2)
    half = StrategyProfile(MixedStrategy([0.5, 0.5]), MixedStrategy.pure(0, 2))

    assert pareto_relation(pd, cc, dd) is ParetoRelation.STRONGLY_DOMINATES
    assert pareto_relation(pd, dd, cc) is ParetoRelation.STRONGLY_DOMINATED
    assert pareto_relation(pd, cc, cc) is ParetoRelation.EQUAL
    assert pareto_relation(pd, cd, dd) is ParetoRelation.INCOMPARABLE
    # (4, 1.5) against (1, 1)
    assert pareto_relation(pd, half, dd) is ParetoRelation.STRONGLY_DOMINATES
    assert weakly_pareto_dominates(pd, cc, cc)
    assert not weakly_pareto_dominates(pd, dd, cc)


def test_pareto_relation_one_sided():
    g = Game([[1, 2]], [[5, 5]])
    s = StrategyProfile.pure(0, 1, 1, 2)
    t = StrategyProfile.pure(0, 0, 1, 2)
    assert pareto_relation(g, s, t) is ParetoRelation.DOMINATES
    assert pareto_relation(g, t, s) is ParetoRelation.DOMINATED


class TestGameValidation:
    def test_shape_mismatch(self):
        with pytest.raises(GameError, match="differ in shape"):
            Game([[1, 2]], [[1], [2]])

    def test_non_finite(self):
        with pytest.raises(GameError, match="finite"):
            Game([[np.inf]], [[0]])

    def test_label_count(self):
        with pytest.raises(GameError, match="Label counts"):
            Game([[1, 2]], [[1, 2]], (("a",), ("x",)))

    def test_default_labels(self):
        g = Game(np.zeros((2, 3)), np.zeros((2, 3)))
        assert g.labels(1) == ("0", "1")
        assert g.label(2, 2) == "2"

    def test_payoffs_read_only(self, pd):
        with pytest.raises(ValueError):
            pd.payoff1[0, 0] = 7.0


class TestStrategies:
    def test_tiny_negatives_clamped(self):
        probs = normalize_probs([1.0 + 1e-12, -1e-12])
        assert probs[1] == 0.0
        assert probs.sum() == pytest.approx(1.0)

    def test_negative_rejected(self):
        with pytest.raises(GameError, match="negative"):
            MixedStrategy([1.5, -0.5])

    def test_sum_rejected(self):
        with pytest.raises(GameError, match="sum"):
            MixedStrategy([0.5, 0.4])

    def test_support(self):
        s = MixedStrategy([0.3, 0.0, 0.7])
        assert s.support() == [0, 2]
        assert len(s) == 3

    def test_pure_out_of_range(self):
        with pytest.raises(DimensionError):
            MixedStrategy.pure(2, 2)
