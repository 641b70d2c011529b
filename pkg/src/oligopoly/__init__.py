"""Equilibrium tools for oligopoly models: normal-form games, Cournot and
Bertrand markets, kinked demand, repeated play, and concentration metrics."""

from .errors import ConvergenceError, DomainError, SizeError
from .kinked_demand import (
    KinkedDemand,
    MarginalRevenueGap,
    arc_elasticity,
    build_kinked,
    mr_gap,
    optimal_price,
)
from .market_models import (
    GeneralMarket,
    LinearMarket,
    MarketEquilibrium,
    bertrand_homogeneous,
    bertrand_undercut_dynamics,
    competitive_limit,
    cournot_closed_form,
    cournot_iterative,
    profit_comparison,
)
from .metrics import concentration_ratio, herfindahl
from .normal_form import (
    NormalFormGame,
    best_responses,
    is_prisoners_dilemma,
    iterated_elimination,
    load_game,
    mixed_nash_2p,
    pure_nash,
    strictly_dominated,
    table2_game,
)
from .repeated_play import PersistencePolicy, PlayTrace, compare_outcomes, simulate

__version__ = "0.1.0"
