"""Concentration statistics over firm market shares (fractions, not percent)."""

from __future__ import annotations

import math
from typing import Sequence

from .errors import DomainError

SUM_TOL = 1e-9


def validate_shares(shares: Sequence[float]) -> list[float]:
    values = [float(s) for s in shares]
    if not values:
        raise DomainError("at least one share is required")
    for s in values:
        if not math.isfinite(s) or s < 0 or s > 1:
            raise DomainError(f"share {s} is outside [0, 1]")
    if sum(values) > 1 + SUM_TOL:
        raise DomainError(f"shares sum to {sum(values)}, more than 1")
    return values


def parse_shares(text: str) -> list[float]:
    """Parse ``"0.5,0.4"`` or ``"50%,40%"`` into fractions."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            out.append(float(part[:-1]) / 100 if part.endswith("%") else float(part))
        except ValueError:
            raise DomainError(f"cannot parse share {part!r}") from None
    return validate_shares(out)


def concentration_ratio(shares: Sequence[float], k: int) -> float:
    """Combined share of the ``k`` largest firms (all firms if ``k`` exceeds the count)."""
    if int(k) != k or k < 1:
        raise DomainError(f"k must be an integer >= 1 (got {k})")
    values = sorted(validate_shares(shares), reverse=True)
    return math.fsum(values[: int(k)])


def herfindahl(shares: Sequence[float]) -> float:
    return math.fsum(s * s for s in validate_shares(shares))
