import itertools

import numpy as np
import pytest

from oligopoly.normal_form import NormalFormGame, table2_game


@pytest.fixture
def table2():
    return table2_game()


def make_game(payoffs):
    payoffs = np.asarray(payoffs, dtype=float)
    n = payoffs.shape[-1]
    players = tuple(f"p{k}" for k in range(n))
    strategies = tuple(tuple(f"s{k}" for k in range(m)) for m in payoffs.shape[:-1])
    return NormalFormGame(players, strategies, payoffs)


def brute_force_nash(game):
    """Exhaustive unilateral-deviation check, independent of the solver."""
    found = []
    for profile in itertools.product(*(range(n) for n in game.shape)):
        stable = True
        for p in range(game.player_count):
            current = game.payoffs[profile][p]
            for s in range(game.shape[p]):
                alt = list(profile)
                alt[p] = s
                if game.payoffs[tuple(alt)][p] > current:
                    stable = False
        if stable:
            found.append(profile)
    return found


def random_game(rng, players=None, strategies=None):
    n = players or int(rng.integers(2, 4))
    shape = tuple(strategies or rng.integers(2, 5, size=n))
    return make_game(rng.integers(-9, 10, size=shape + (n,)))
