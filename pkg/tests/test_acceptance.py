"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line (visible with ``-s``).
Run ``python tests/test_acceptance.py`` for the same lines without pytest.
"""

import itertools
import time

import numpy as np
import pytest

from oligopoly.kinked_demand import arc_elasticity, build_kinked, mr_gap, optimal_price
from oligopoly.market_models import (
    LinearMarket,
    bertrand_homogeneous,
    bertrand_undercut_dynamics,
    competitive_limit,
    cournot_closed_form,
    cournot_iterative,
    profit_comparison,
)
from oligopoly.metrics import concentration_ratio
from oligopoly.normal_form import (
    NormalFormGame,
    is_prisoners_dilemma,
    iterated_elimination,
    load_game,
    pure_nash,
    table2_path,
)
from oligopoly.repeated_play import PersistencePolicy, simulate


def report(number, title, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}" + (f": {detail}" if detail else ""))
    return ok


def random_linear_markets(rng, count, firms=2):
    out = []
    for _ in range(count):
        b = rng.uniform(0.1, 10)
        c = rng.uniform(0, 50)
        a = c * b + rng.uniform(1, 500)
        out.append(LinearMarket(a, b, c, firms))
    return out


def exhaustive_nash(game):
    found = []
    for profile in itertools.product(*(range(n) for n in game.shape)):
        ok = True
        for p in range(game.player_count):
            for s in range(game.shape[p]):
                alt = list(profile)
                alt[p] = s
                if game.payoffs[tuple(alt)][p] > game.payoffs[profile][p]:
                    ok = False
        if ok:
            found.append(profile)
    return found


def criterion_1():
    start = time.perf_counter()
    game = load_game(table2_path())
    nash = pure_nash(game)
    verdict = is_prisoners_dilemma(game)
    reduced, _ = iterated_elimination(game)
    elapsed = time.perf_counter() - start
    ok = (
        [game.names(q) for q in nash] == [("TPE_A", "TPE_A")]
        and game.payoff(nash[0]) == (13, 13)
        and verdict.is_dilemma
        and game.names(verdict.superior_profile) == ("TPE_P", "TPE_P")
        and verdict.superior_payoffs == (20, 20)
        and reduced.shape == (1, 1)
        and elapsed < 1.0
    )
    return report(1, "Table 2 reproduction", ok, f"{elapsed * 1000:.1f} ms")


def criterion_2():
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    worst_formula = worst_iter = 0.0
    for m in random_linear_markets(rng, 1000):
        closed = cournot_closed_form(m)
        worst_formula = max(worst_formula, abs(closed.quantity - (m.a - m.c * m.b) / 3))
        it, _ = cournot_iterative(m.as_general(), tolerance=1e-10)
        worst_iter = max(worst_iter, abs(it.quantity - closed.quantity))
    elapsed = time.perf_counter() - start
    ok = worst_formula <= 1e-12 and worst_iter <= 1e-6 and elapsed < 10
    return report(
        2,
        "Cournot closed form vs (a-cb)/3 and iterative",
        ok,
        f"max |q-(a-cb)/3| = {worst_formula:.2e}, max iterative gap = {worst_iter:.2e}, {elapsed:.2f} s",
    )


def criterion_3():
    m = LinearMarket(100, 2, 10, 1)
    rows = competitive_limit(m, range(1, 201))
    prices = [p for _, p in rows]
    decreasing = all(b < a for a, b in zip(prices, prices[1:]))
    exact = max(abs((p - m.c) - (m.a - m.c * m.b) / (m.b * (n + 1))) for n, p in rows)
    tail = prices[-1] - m.c
    ok = decreasing and tail <= 0.2 and exact <= 1e-9
    return report(3, "competitive limit", ok, f"p(200) - c = {tail:.6f}, closed-form error {exact:.1e}")


def criterion_4():
    rng = np.random.default_rng(77)
    tick = 0.01
    worst = 0.0
    exact = True
    for _ in range(100):
        c = rng.uniform(0.5, 30)
        b = rng.uniform(0.2, 5)
        m = LinearMarket(c * b + rng.uniform(5, 300), b, c, 2)
        exact &= bertrand_homogeneous(m, tick).price == m.c
        start = rng.uniform(c, 3 * c, size=2)
        final = bertrand_undercut_dynamics(m, start, tick).final
        worst = max(worst, max(abs(p - c) for p in final))
    ok = exact and worst <= tick + 1e-9
    return report(4, "Bertrand p = c and undercutting", ok, f"max |p_final - c| = {worst:.6f}")


def criterion_5():
    rng = np.random.default_rng(5)
    worst = max(
        abs(profit_comparison(m).ratio - 4 / 9) for m in random_linear_markets(rng, 2000)
    )
    below = profit_comparison(LinearMarket(100, 2, 10)).below_half
    ok = worst <= 1e-12 and below
    return report(5, "Cournot/monopoly profit ratio 4/9", ok, f"max deviation {worst:.1e}")


def grid_price(k, mc, step=1e-3):
    prices = np.arange(0.01, 2 * k.kink_price + step / 2, step)
    q = np.where(
        prices >= k.kink_price,
        k.upper_intercept - k.upper_slope * prices,
        k.lower_intercept - k.lower_slope * prices,
    )
    return prices[int(np.argmax((prices - mc) * np.clip(q, 0, None)))]


def criterion_6():
    k = build_kinked(5, 20000, -6.0, -0.625)
    gap = mr_gap(k)
    costs = np.arange(np.ceil(gap.mr_lower * 10) / 10, gap.mr_upper, 0.1)
    rigid = all(optimal_price(k, mc).price == 5 for mc in costs)
    moved = optimal_price(k, 4.5).price
    grid_gap = max(abs(optimal_price(k, mc).price - grid_price(k, mc)) for mc in [*costs, 4.5])
    ok = (
        rigid
        and moved != 5
        and grid_gap <= 1e-3 + 1e-9
        and gap.mr_lower == pytest.approx(-3.0)
        and gap.mr_upper == pytest.approx(4.1667, abs=5e-5)
    )
    return report(
        6,
        "kinked-demand rigidity",
        ok,
        f"{len(costs)} costs in [{gap.mr_lower:.4f}, {gap.mr_upper:.4f}] -> 5; mc=4.5 -> {moved:.4f}; grid gap {grid_gap:.1e}",
    )


def criterion_7():
    wool = arc_elasticity(6, 10000, 5, 20000)
    coles = arc_elasticity(5, 20000, 3, 25000)
    ok = (
        f"{wool.price_change * 100:.2f}" == "-16.67"
        and abs(wool.elasticity + 6.0) <= 1e-12
        and abs(coles.elasticity + 0.625) <= 1e-12
        and wool.elastic
        and not coles.elastic
    )
    return report(
        7,
        "elasticity arithmetic",
        ok,
        f"price change {wool.price_change * 100:.2f}%, e = {wool.elasticity:.4f}; Coles e = {coles.elasticity:.4f}",
    )


def criterion_8():
    rng = np.random.default_rng(8)
    mismatches = 0
    for _ in range(500):
        n = int(rng.integers(2, 4))
        shape = tuple(int(s) for s in rng.integers(2, 5, size=n))
        payoffs = rng.integers(-9, 10, size=shape + (n,))
        game = NormalFormGame(
            tuple(f"p{k}" for k in range(n)),
            tuple(tuple(f"s{j}" for j in range(s)) for s in shape),
            payoffs,
        )
        mismatches += pure_nash(game) != exhaustive_nash(game)
    return report(8, "pure Nash vs exhaustive deviation check", mismatches == 0, f"{mismatches} mismatches / 500")


def criterion_9():
    game = load_game(table2_path())
    passive = simulate(game, [PersistencePolicy("TPE_P", 1.0)] * 2, 10, seed=0)
    frozen = passive.rounds[-1].cumulative == (200, 200)
    sticky = simulate(game, [PersistencePolicy("TPE_P", 0.9)] * 2, 10_000, seed=2024)
    rates = [sticky.persistence_rate(p) for p in (0, 1)]
    within = all(abs(r - 0.9) <= 0.01 for r in rates)
    again = simulate(game, [PersistencePolicy("TPE_P", 0.9)] * 2, 10_000, seed=2024)
    same_bytes = sticky.to_csv().encode() == again.to_csv().encode()
    ok = frozen and within and same_bytes
    return report(
        9,
        "simulation determinism and persistence",
        ok,
        f"cumulative {passive.rounds[-1].cumulative}, rates {rates[0]:.4f}/{rates[1]:.4f}",
    )


def criterion_10():
    airline = concentration_ratio([0.5, 0.4, 0.06, 0.04], 2)
    grocery = concentration_ratio([0.42, 0.38, 0.2], 2)
    ok = f"{airline:.6f}" == "0.900000" and f"{grocery:.6f}" == "0.800000"
    return report(10, "concentration ratios", ok, f"CR_2 = {airline:.6f} and {grocery:.6f}")


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 11)])
def test_acceptance(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    raise SystemExit(0 if all(results) else 1)
