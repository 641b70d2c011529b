"""Two-segment kinked demand, its marginal-revenue gap, and arc elasticity.

Above the kink price the firm faces the flatter (more price-responsive)
segment ``Q = a1 - b1*p``; below it the steeper segment ``Q = a2 - b2*p``
with ``b1 > b2``. Marginal revenue therefore drops discontinuously at the
kink quantity, and any marginal cost inside that drop leaves the optimal
price at the kink.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class KinkedDemand:
    kink_price: float
    kink_quantity: float
    upper_slope: float
    lower_slope: float

    def __post_init__(self) -> None:
        if not (self.kink_price > 0 and self.kink_quantity > 0):
            raise DomainError("kink price and quantity must be > 0")
        if not self.lower_slope > 0:
            raise DomainError("lower segment slope must be > 0")
        if not self.upper_slope > self.lower_slope:
            raise DomainError("upper segment must be more price-responsive than the lower one")

    @property
    def upper_intercept(self) -> float:
        return self.kink_quantity + self.upper_slope * self.kink_price

    @property
    def lower_intercept(self) -> float:
        return self.kink_quantity + self.lower_slope * self.kink_price

    def quantity(self, price: float) -> float:
        """Quantity demanded at ``price``, floored at zero."""
        if price >= self.kink_price:
            q = self.upper_intercept - self.upper_slope * price
        else:
            q = self.lower_intercept - self.lower_slope * price
        return max(q, 0.0)

    def price(self, quantity: float) -> float:
        if quantity <= self.kink_quantity:
            return (self.upper_intercept - quantity) / self.upper_slope
        return (self.lower_intercept - quantity) / self.lower_slope

    def elasticity_at_kink(self) -> tuple[float, float]:
        scale = self.kink_price / self.kink_quantity
        return -self.upper_slope * scale, -self.lower_slope * scale

    @classmethod
    def from_dict(cls, data: dict) -> KinkedDemand:
        try:
            kink = data["kink"]
            return build_kinked(
                float(kink["p"]),
                float(kink["q"]),
                float(data["upper_elasticity"]),
                float(data["lower_elasticity"]),
            )
        except KeyError as exc:
            raise DomainError(f"kinked-demand file is missing field {exc.args[0]!r}") from None


def build_kinked(
    kink_price: float, kink_quantity: float, elasticity_upper: float, elasticity_lower: float
) -> KinkedDemand:
    """Kinked demand whose point elasticities at the kink match the inputs.

    Each segment gets slope ``|e| * q_k / p_k`` and passes through the kink,
    so continuity holds by construction. Elasticities may be given with
    either sign.
    """
    if not (kink_price > 0 and kink_quantity > 0):
        raise DomainError("kink price and quantity must be > 0")
    upper, lower = abs(elasticity_upper), abs(elasticity_lower)
    if not upper > 1:
        raise DomainError(f"upper segment must be elastic (|e| > 1, got {elasticity_upper})")
    if not 0 < lower < 1:
        raise DomainError(
            f"lower segment must be inelastic (0 < |e| < 1, got {elasticity_lower})"
        )
    scale = kink_quantity / kink_price
    return KinkedDemand(kink_price, kink_quantity, upper * scale, lower * scale)


@dataclass(frozen=True)
class MarginalRevenueGap:
    mr_lower: float
    mr_upper: float

    def contains(self, marginal_cost: float) -> bool:
        return self.mr_lower <= marginal_cost <= self.mr_upper

    @property
    def width(self) -> float:
        return self.mr_upper - self.mr_lower


def mr_gap(k: KinkedDemand) -> MarginalRevenueGap:
    """Marginal revenue ``p_k - q_k/b`` of each segment, evaluated at the kink."""
    return MarginalRevenueGap(
        mr_lower=k.kink_price - k.kink_quantity / k.lower_slope,
        mr_upper=k.kink_price - k.kink_quantity / k.upper_slope,
    )


@dataclass(frozen=True)
class PriceDecision:
    price: float
    quantity: float
    segment: str  # "kink", "upper" or "lower"
    rigid: bool
    shutdown: bool = False

    def profit(self, marginal_cost: float) -> float:
        return (self.price - marginal_cost) * self.quantity


def optimal_price(k: KinkedDemand, marginal_cost: float) -> PriceDecision:
    """Profit-maximising price under constant marginal cost.

    Marginal cost anywhere in the closed MR gap keeps the price at the kink;
    negative values (a per-unit subsidy) are accepted.
    Above the gap the answer solves MR = MC on the upper segment; if that
    quantity is not positive the firm shuts down at the choke price.
    """
    if not math.isfinite(marginal_cost):
        raise DomainError("marginal cost must be finite")
    gap = mr_gap(k)
    if gap.contains(marginal_cost):
        return PriceDecision(k.kink_price, k.kink_quantity, "kink", True)
    if marginal_cost > gap.mr_upper:
        a, b = k.upper_intercept, k.upper_slope
        q = (a - b * marginal_cost) / 2
        if q <= 0:
            return PriceDecision(a / b, 0.0, "upper", False, shutdown=True)
        return PriceDecision((a - q) / b, q, "upper", False)
    a, b = k.lower_intercept, k.lower_slope
    q = (a - b * marginal_cost) / 2
    return PriceDecision((a - q) / b, q, "lower", False)


@dataclass(frozen=True)
class ArcElasticity:
    price_change: float
    quantity_change: float
    elasticity: float
    midpoint: bool = False

    @property
    def elastic(self) -> bool:
        return abs(self.elasticity) > 1


def arc_elasticity(
    p0: float, q0: float, p1: float, q1: float, midpoint: bool = False
) -> ArcElasticity:
    """Percentage-change elasticity between two price/quantity observations.

    By default changes are relative to the starting point, so a cut from 6
    to 5 is a -16.7% price change. With ``midpoint=True`` the base is the
    average of both observations.
    """
    if min(p0, q0, p1, q1) <= 0:
        raise DomainError("prices and quantities must be > 0")
    if p0 == p1:
        raise DomainError("elasticity is undefined when the price does not change")
    if midpoint:
        dp = (p1 - p0) / ((p0 + p1) / 2)
        dq = (q1 - q0) / ((q0 + q1) / 2)
    else:
        dp = (p1 - p0) / p0
        dq = (q1 - q0) / q0
    return ArcElasticity(dp, dq, dq / dp, midpoint)
