"""Cournot, Bertrand, monopoly, and competitive equilibria on a linear market.

Demand is written in direct form, ``Q(p) = a - b*p``, so the inverse demand
is ``P(Q) = (a - Q)/b`` with slope ``-1/b``. Under this orientation the
symmetric duopoly quantity is ``(a - c*b)/3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize

from .errors import ConvergenceError, DomainError

DEFAULT_DAMPING = 0.5


@dataclass(frozen=True)
class LinearMarket:
    """Homogeneous-good market with linear demand and constant marginal cost.

    Attributes:
        a: Demand intercept (quantity at a zero price).
        b: Units of demand lost per unit of price; must be positive.
        c: Marginal cost shared by all firms.
        firms: Number of symmetric firms.
    """

    a: float
    b: float
    c: float
    firms: int = 2

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.b <= 0:
            raise DomainError(f"b must be > 0 (got {self.b})")
        if self.c < 0:
            raise DomainError(f"c must be >= 0 (got {self.c})")
        if int(self.firms) != self.firms or self.firms < 1:
            raise DomainError(f"firms must be an integer >= 1 (got {self.firms})")
        if self.a - self.c * self.b <= 0:
            raise DomainError(
                f"a - c*b must be > 0 for positive output (got {self.a - self.c * self.b})"
            )

    def demand(self, price: float) -> float:
        return self.a - self.b * price

    def inverse_demand(self, quantity: float) -> float:
        return (self.a - quantity) / self.b

    @property
    def choke_quantity(self) -> float:
        return self.a

    def with_firms(self, firms: int) -> LinearMarket:
        return LinearMarket(self.a, self.b, self.c, firms)

    def as_general(self) -> GeneralMarket:
        b, c = self.b, self.c
        return GeneralMarket(
            inverse_demand=self.inverse_demand,
            marginal_cost=lambda q: c,
            firms=self.firms,
            q_max=self.a,
            inverse_demand_slope=lambda Q: -1.0 / b,
        )

    @classmethod
    def from_dict(cls, data: dict) -> LinearMarket:
        missing = [k for k in ("a", "b", "c") if k not in data]
        if missing:
            raise DomainError(f"market file is missing field {missing[0]!r}")
        return cls(float(data["a"]), float(data["b"]), float(data["c"]), int(data.get("firms", 2)))


@dataclass(frozen=True)
class MarketEquilibrium:
    regime: str
    firms: int
    quantity: float
    total_quantity: float
    price: float
    profit: float
    method: str = "closed_form"
    quantities: tuple[float, ...] | None = None


def cournot_closed_form(m: LinearMarket) -> MarketEquilibrium:
    """Symmetric Cournot-Nash outcome; labelled ``monopoly`` when ``firms == 1``."""
    n = m.firms
    margin = m.a - m.c * m.b
    q = margin / (n + 1)
    price = (m.a + n * m.c * m.b) / (m.b * (n + 1))
    profit = margin**2 / (m.b * (n + 1) ** 2)
    return MarketEquilibrium(
        regime="monopoly" if n == 1 else "cournot",
        firms=n,
        quantity=q,
        total_quantity=n * q,
        price=price,
        profit=profit,
    )


def monopoly(m: LinearMarket) -> MarketEquilibrium:
    return cournot_closed_form(m.with_firms(1))


def competitive(m: LinearMarket) -> MarketEquilibrium:
    """Price at marginal cost, output split equally across ``m.firms``."""
    total = m.demand(m.c)
    return MarketEquilibrium("competitive", m.firms, total / m.firms, total, m.c, 0.0)


def cournot_foc_residual(m: LinearMarket, quantities: Sequence[float], firm: int) -> float:
    """``P(Q) + P'(Q) q_i - c`` for one firm."""
    total = float(sum(quantities))
    return m.inverse_demand(total) - quantities[firm] / m.b - m.c


@dataclass(frozen=True)
class GeneralMarket:
    """Symmetric-cost market given by callables.

    ``inverse_demand_slope`` is optional; when omitted it is estimated by a
    central difference with step ``1e-6 * max(1, Q)``.
    """

    inverse_demand: Callable[[float], float]
    marginal_cost: Callable[[float], float]
    firms: int
    q_max: float
    inverse_demand_slope: Callable[[float], float] | None = None
    lattice_points: int = 1001

    def __post_init__(self) -> None:
        if int(self.firms) != self.firms or self.firms < 1:
            raise DomainError(f"firms must be an integer >= 1 (got {self.firms})")
        if not (self.q_max > 0 and math.isfinite(self.q_max)):
            raise DomainError("q_max must be a positive finite quantity")

    def slope(self, total: float) -> float:
        if self.inverse_demand_slope is not None:
            return float(self.inverse_demand_slope(total))
        h = 1e-6 * max(1.0, abs(total))
        return (self.inverse_demand(total + h) - self.inverse_demand(total - h)) / (2 * h)

    def check_decreasing(self) -> None:
        grid = np.linspace(0.0, self.q_max, self.lattice_points)
        prices = np.array([self.inverse_demand(float(q)) for q in grid])
        positive = prices[:-1] > 0
        if np.any(positive & (np.diff(prices) >= 0)):
            k = int(np.flatnonzero(positive & (np.diff(prices) >= 0))[0])
            raise DomainError(
                f"inverse demand is not strictly decreasing near Q={grid[k]:.6g}"
            )

    def foc(self, own: float, rivals_total: float) -> float:
        total = own + rivals_total
        return (
            self.inverse_demand(total)
            + self.slope(total) * own
            - self.marginal_cost(own)
        )

    def best_response(self, rivals_total: float) -> float:
        """Root of the firm's first-order condition on ``[0, q_max]``."""
        if self.foc(0.0, rivals_total) <= 0:
            return 0.0
        if self.foc(self.q_max, rivals_total) >= 0:
            return self.q_max
        return float(
            optimize.bisect(
                self.foc, 0.0, self.q_max, args=(rivals_total,), xtol=1e-13, maxiter=500
            )
        )

    def profit(self, own: float, rivals_total: float) -> float:
        revenue = own * self.inverse_demand(own + rivals_total)
        cost, _ = integrate.quad(self.marginal_cost, 0.0, own)
        return revenue - cost


def default_damping(firms: int) -> float:
    return min(DEFAULT_DAMPING, 2.0 / (firms + 1))


def cournot_iterative(
    m: GeneralMarket,
    initial: Sequence[float] | None = None,
    tolerance: float = 1e-10,
    max_iterations: int = 10_000,
    damping: float | None = None,
) -> tuple[MarketEquilibrium, list[tuple[float, ...]]]:
    """Damped simultaneous best-response iteration.

    Each step moves every firm a fraction ``damping`` of the way toward its
    best response to the others' current quantities, and stops once no
    quantity moves by more than ``tolerance``. The default damping is
    ``min(0.5, 2/(N+1))``: with linear demand the symmetric mode of the
    update has factor ``1 - d(N+1)/2``, so a flat 0.5 diverges from N=7 on.

    Returns:
        The equilibrium and the per-iteration quantity log (first entry is
        the starting point).

    Raises:
        DomainError: bad tolerance/damping, or inverse demand that is not
            strictly decreasing on the sampled lattice.
        ConvergenceError: ``max_iterations`` reached; the log is attached.
    """
    if not tolerance > 0:
        raise DomainError("tolerance must be > 0")
    if damping is None:
        damping = default_damping(m.firms)
    if not 0 < damping <= 1:
        raise DomainError("damping must lie in (0, 1]")
    m.check_decreasing()
    n = m.firms
    q = np.zeros(n) if initial is None else np.array(initial, dtype=float)
    if q.shape != (n,) or np.any(q < 0):
        raise DomainError(f"initial quantities must be {n} non-negative values")

    log = [tuple(float(v) for v in q)]
    for _ in range(max_iterations):
        total = q.sum()
        target = np.array([m.best_response(total - q[i]) for i in range(n)])
        updated = (1 - damping) * q + damping * target
        change = float(np.abs(updated - q).max())
        q = updated
        log.append(tuple(float(v) for v in q))
        if change <= tolerance:
            break
    else:
        raise ConvergenceError(
            f"best-response iteration did not converge in {max_iterations} iterations", log
        )

    total = float(q.sum())
    mean_q = total / n
    profits = [m.profit(float(q[i]), total - float(q[i])) for i in range(n)]
    eq = MarketEquilibrium(
        regime="monopoly" if n == 1 else "cournot",
        firms=n,
        quantity=mean_q,
        total_quantity=total,
        price=float(m.inverse_demand(total)),
        profit=float(np.mean(profits)),
        method="iterative",
        quantities=tuple(float(v) for v in q),
    )
    return eq, log


def bertrand_profits(m: LinearMarket, prices: Sequence[float], tol: float = 1e-9) -> list[float]:
    """Winner-takes-all profits; firms tied at the lowest price split demand equally."""
    low = min(prices)
    winners = [i for i, p in enumerate(prices) if p <= low + tol]
    demand = max(m.demand(low), 0.0)
    share = demand / len(winners)
    return [(p - m.c) * share if i in winners else 0.0 for i, p in enumerate(prices)]


def bertrand_homogeneous(m: LinearMarket, tick: float = 0.01) -> MarketEquilibrium:
    """Price equals marginal cost; demand is split equally between the firms."""
    if m.firms < 2:
        raise DomainError("Bertrand requires >= 2 firms")
    if not tick > 0:
        raise DomainError("tick must be > 0")
    total = m.demand(m.c)
    return MarketEquilibrium("bertrand", m.firms, total / m.firms, total, m.c, 0.0)


@dataclass(frozen=True)
class DeviationCheck:
    price: float
    undercut_price: float
    undercut_profit: float
    raise_price: float
    raise_profit: float
    current_profit: float

    @property
    def profitable(self) -> bool:
        return max(self.undercut_profit, self.raise_profit) > self.current_profit

    @property
    def note(self) -> str:
        if self.undercut_profit < 0:
            return "undercutting by one tick prices below cost: profit would be negative"
        if self.undercut_profit > self.current_profit:
            return "undercutting by one tick captures the whole market profitably"
        return "no profitable one-tick deviation"


def bertrand_deviation_check(
    m: LinearMarket, tick: float, price: float | None = None
) -> DeviationCheck:
    """One firm moves a tick away from a common price while the others hold."""
    if m.firms < 2:
        raise DomainError("Bertrand requires >= 2 firms")
    if not tick > 0:
        raise DomainError("tick must be > 0")
    p = m.c if price is None else price
    held = [p] * (m.firms - 1)
    return DeviationCheck(
        price=p,
        undercut_price=p - tick,
        undercut_profit=bertrand_profits(m, [p - tick, *held])[0],
        raise_price=p + tick,
        raise_profit=bertrand_profits(m, [p + tick, *held])[0],
        current_profit=bertrand_profits(m, [p, *held])[0],
    )


@dataclass(frozen=True)
class UndercutTrajectory:
    """Prices after each move that changed something; ``prices[0]`` is the start."""

    prices: list[tuple[float, ...]]
    responses: int

    @property
    def final(self) -> tuple[float, ...]:
        return self.prices[-1]


def _grid_best_response(
    m: LinearMarket, own: float, rivals: Sequence[float], tick: float
) -> float:
    """Best grid price ``c + k*tick`` against fixed rival prices.

    Profit ``(p - c)(a - b p)`` is concave, so among grid prices strictly
    below the lowest rival only the ones next to the monopoly price, and the
    highest one, need checking. Matching is possible only on-grid.
    """
    eps = tick * 1e-6
    low = min(rivals)
    options: set[int] = set()
    top = math.floor((low - m.c) / tick + 1e-6)  # highest grid index <= low
    if top >= 0:
        if abs(m.c + top * tick - low) <= eps:
            options.add(top)  # match
            below = top - 1
        else:
            below = top
        if below >= 0:
            options.add(below)
            peak = (m.a / m.b + m.c) / 2
            k = (peak - m.c) / tick
            for cand in (math.floor(k), math.ceil(k)):
                if 0 <= cand <= below:
                    options.add(cand)

    def payoff(p: float) -> float:
        return bertrand_profits(m, [p, *rivals], tol=eps)[0]

    best_price, best_profit = own, payoff(own)
    for k in sorted(options):
        p = m.c + k * tick
        value = payoff(p)
        if value > best_profit + 1e-12 * max(1.0, abs(best_profit)):
            best_price, best_profit = p, value
    return best_price


def bertrand_undercut_dynamics(
    m: LinearMarket,
    start: Sequence[float],
    tick: float = 0.01,
    max_rounds: int = 1_000_000,
) -> UndercutTrajectory:
    """Alternating best responses on the price grid anchored at marginal cost.

    Firms take turns in index order. A firm keeps its price unless some grid
    price earns strictly more. The run ends once every firm in turn has kept
    its price.

    Raises:
        DomainError: start prices below cost, wrong count, or bad tick.
        ConvergenceError: ``max_rounds`` responses without settling.
    """
    if not tick > 0:
        raise DomainError("tick must be > 0")
    prices = [float(p) for p in start]
    if len(prices) < 2:
        raise DomainError("Bertrand requires >= 2 firms")
    if any(p < m.c for p in prices):
        raise DomainError(f"start prices must be >= marginal cost {m.c}")

    history = [tuple(prices)]
    n = len(prices)
    unchanged = 0
    responses = 0
    while unchanged < n:
        if responses >= max_rounds:
            raise ConvergenceError(f"undercutting did not settle in {max_rounds} rounds", history)
        firm = responses % n
        rivals = prices[:firm] + prices[firm + 1 :]
        new = _grid_best_response(m, prices[firm], rivals, tick)
        responses += 1
        if new != prices[firm]:
            prices[firm] = new
            history.append(tuple(prices))
            unchanged = 0
        else:
            unchanged += 1
    return UndercutTrajectory(history, responses)


def competitive_limit(m: LinearMarket, firm_counts: Sequence[int]) -> list[tuple[int, float]]:
    """Cournot price for each firm count, sorted by firm count."""
    out = []
    for n in sorted(set(int(k) for k in firm_counts)):
        out.append((n, cournot_closed_form(m.with_firms(n)).price))
    return out


@dataclass(frozen=True)
class ProfitComparison:
    monopoly_profit: float
    cournot_profit: float
    ratio: float

    @property
    def below_half(self) -> bool:
        return self.ratio < 0.5


def profit_comparison(m: LinearMarket) -> ProfitComparison:
    """Duopoly per-firm profit against monopoly profit (4/9 for linear demand)."""
    mono = cournot_closed_form(m.with_firms(1)).profit
    duo = cournot_closed_form(m.with_firms(2)).profit
    return ProfitComparison(mono, duo, duo / mono)
