import numpy as np
import pytest

from coopeq.core.equilibria import alpha_of, best_utilities, best_utility, find_mpce
from coopeq.core.game import expected_utilities
from coopeq.core.generators import centipede
from coopeq.core.models import Game, GridSpec
from coopeq.core.oracle import (
    grid_search_bu,
    grid_search_mpce,
    grid_strategies,
    oracle_bu,
    oracle_mpce_alpha,
)


def _spread(g: Game) -> float:
    both = np.concatenate([g.payoff1.ravel(), g.payoff2.ravel()])
    return float(both.max() - both.min())


class TestGridStrategies:
    def test_pure_only(self):
        S = grid_strategies(3, GridSpec(10, max_support=1))
        assert np.array_equal(S, np.eye(3))

    def test_pairs(self):
        S = grid_strategies(3, GridSpec(4))
        # 3 pure + 3 pairs * 3 interior weights
        assert S.shape == (12, 3)
        assert np.allclose(S.sum(axis=1), 1.0)
        assert ((S > 0).sum(axis=1) <= 2).all()

    def test_single_action(self):
        assert grid_strategies(1, GridSpec(10)).shape == (1, 1)

    def test_bad_spec(self):
        with pytest.raises(ValueError):
            GridSpec(0)
        with pytest.raises(ValueError):
            GridSpec(5, max_support=3)


def test_prisoners_best_utility(pd):
    assert oracle_bu(pd, 1, GridSpec(10)) == pytest.approx(1.0)
    assert oracle_bu(pd, 2, GridSpec(10)) == pytest.approx(1.0)


def test_one_by_one():
    g = Game([[4.0]], [[-2.0]])
    assert oracle_bu(g, 1, GridSpec(5)) == 4.0
    assert oracle_bu(g, 2, GridSpec(5)) == -2.0
    assert oracle_mpce_alpha(g, GridSpec(5)) == pytest.approx(0.0, abs=1e-9)


def test_centipede_short_horizon():
    g = centipede(4)
    assert best_utility(g, 1) == pytest.approx(116 / 13)
    assert oracle_bu(g, 1, GridSpec(400)) == pytest.approx(116 / 13, abs=1e-2)
    assert oracle_bu(g, 1, GridSpec(400)) <= best_utility(g, 1) + 1e-9


def test_prisoners_mpce(pd):
    assert oracle_mpce_alpha(pd, GridSpec(10)) == pytest.approx(2.0)


def test_bargaining_mpce(bargaining_coarse):
    assert oracle_mpce_alpha(bargaining_coarse, GridSpec(4)) == pytest.approx(-50.0)


def test_player_checked(pd):
    with pytest.raises(ValueError):
        grid_search_bu(pd, 3, GridSpec(5))


def test_witnesses_attain_values(random_games):
    for g in random_games(seed=41, count=30, max_size=4):
        bu = best_utilities(g)
        result = grid_search_mpce(g, GridSpec(12), bu)
        assert alpha_of(g, result.witness, bu=bu) == pytest.approx(result.value, abs=1e-9)

        for player in (1, 2):
            found = grid_search_bu(g, player, GridSpec(12))
            u = expected_utilities(g, found.witness).as_tuple()[player - 1]
            assert u == pytest.approx(found.value, abs=1e-9)


def test_solvers_against_grid(random_games):
    k = 60
    for g in random_games(seed=42, count=40, min_size=3, max_size=3):
        bu = best_utilities(g)
        exact = find_mpce(g, bu=bu).alpha
        grid = oracle_mpce_alpha(g, GridSpec(k), bu)
        assert grid <= exact + 1e-7
        assert exact - grid <= _spread(g) * 2.0 / k + 1e-9

        for player in (1, 2):
            assert oracle_bu(g, player, GridSpec(k)) <= bu.as_tuple()[player - 1] + 1e-7


def test_finer_grid_never_worse(random_games):
    for g in random_games(seed=43, count=30, max_size=4):
        bu = best_utilities(g)
        coarse = oracle_mpce_alpha(g, GridSpec(10), bu)
        fine = oracle_mpce_alpha(g, GridSpec(20), bu)
        assert fine >= coarse - 1e-12
