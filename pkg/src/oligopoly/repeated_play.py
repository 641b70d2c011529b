"""Repeated weekly play of a two-player stage game with persistence policies.

Each week both players move simultaneously. A player repeats last week's
posture with probability ``persistence``; otherwise it plays whatever its
response map prescribes for the rival's posture last week. Draws come from
one seeded generator, consumed in player order, and only when the
persistence probability is strictly between 0 and 1.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ._format import compact
from .errors import DomainError
from .normal_form import NormalFormGame, is_prisoners_dilemma, pure_nash

DEFAULT_PERSISTENCE = 0.9

CSV_HEADER = ("round", "posture_i", "posture_j", "payoff_i", "payoff_j", "cum_i", "cum_j")


@dataclass(frozen=True)
class PersistencePolicy:
    """How one player picks its posture each week.

    ``response_map`` maps the rival's previous posture to the posture played
    when not persisting. ``None`` means mirror the rival.
    """

    initial: str
    persistence: float = DEFAULT_PERSISTENCE
    response_map: Mapping[str, str] | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.persistence <= 1.0:
            raise DomainError(f"persistence must lie in [0, 1] (got {self.persistence})")
        if self.response_map is not None:
            object.__setattr__(self, "response_map", dict(self.response_map))

    def respond(self, rival_posture: str) -> str:
        if self.response_map is None:
            return rival_posture
        return self.response_map[rival_posture]


@dataclass(frozen=True)
class RoundRecord:
    round: int
    postures: tuple[str, str]
    payoffs: tuple[float, float]
    cumulative: tuple[float, float]
    persisted: tuple[bool, bool]


@dataclass(frozen=True)
class PlayTrace:
    rounds: tuple[RoundRecord, ...]
    seed: int | None
    players: tuple[str, str] = ("i", "j")

    def __len__(self) -> int:
        return len(self.rounds)

    def persistence_rate(self, player: int) -> float:
        """Share of weeks after the first in which ``player`` chose to persist."""
        later = self.rounds[1:]
        if not later:
            return float("nan")
        return sum(r.persisted[player] for r in later) / len(later)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rounds:
            writer.writerow(
                [r.round, *r.postures, *(compact(v) for v in (*r.payoffs, *r.cumulative))]
            )
        return buf.getvalue()


def _validate(game: NormalFormGame, policies: Sequence[PersistencePolicy]) -> None:
    if game.player_count != 2:
        raise DomainError("repeated play supports two-player games only")
    if len(policies) != 2:
        raise DomainError("expected one policy per player")
    for p, policy in enumerate(policies):
        own = game.strategies[p]
        rival = game.strategies[1 - p]
        who = game.players[p]
        if policy.initial not in own:
            raise DomainError(
                f"unknown posture {policy.initial!r} for player {who!r}; valid: {', '.join(own)}"
            )
        if policy.response_map is None:
            missing = [s for s in rival if s not in own]
            if missing:
                raise DomainError(
                    f"player {who!r} cannot mirror rival posture {missing[0]!r}; "
                    f"valid: {', '.join(own)}"
                )
            continue
        for posture in rival:
            if posture not in policy.response_map:
                raise DomainError(f"response map of player {who!r} has no entry for {posture!r}")
        for key, target in policy.response_map.items():
            if key not in rival:
                raise DomainError(
                    f"unknown rival posture {key!r} in response map of {who!r}; "
                    f"valid: {', '.join(rival)}"
                )
            if target not in own:
                raise DomainError(
                    f"unknown posture {target!r} for player {who!r}; valid: {', '.join(own)}"
                )


def simulate(
    game: NormalFormGame,
    policies: Sequence[PersistencePolicy],
    weeks: int,
    seed: int | None = 0,
    rng: random.Random | None = None,
) -> PlayTrace:
    """Play ``weeks`` rounds and record every posture and payoff.

    Pass ``rng`` to supply the generator directly; otherwise a
    ``random.Random(seed)`` is used.
    """
    if int(weeks) != weeks or weeks < 1:
        raise DomainError(f"weeks must be an integer >= 1 (got {weeks})")
    _validate(game, policies)
    rng = random.Random(seed) if rng is None else rng

    postures = [policies[0].initial, policies[1].initial]
    persisted = (False, False)
    cum = [0.0, 0.0]
    records = []
    for week in range(1, int(weeks) + 1):
        if week > 1:
            nxt, flags = [], []
            for p, policy in enumerate(policies):
                rho = policy.persistence
                if rho >= 1.0:
                    stay = True
                elif rho <= 0.0:
                    stay = False
                else:
                    stay = rng.random() < rho
                flags.append(stay)
                nxt.append(postures[p] if stay else policy.respond(postures[1 - p]))
            postures = nxt
            persisted = (flags[0], flags[1])
        profile = game.profile_index(postures)
        pay = game.payoff(profile)
        cum = [cum[0] + pay[0], cum[1] + pay[1]]
        records.append(
            RoundRecord(week, (postures[0], postures[1]), (pay[0], pay[1]), (cum[0], cum[1]), persisted)
        )
    return PlayTrace(tuple(records), seed, (game.players[0], game.players[1]))


@dataclass(frozen=True)
class OutcomeReport:
    average_payoffs: tuple[float, float]
    nash_fraction: float
    pareto_fraction: float
    pareto_profile: tuple[str, ...] | None = field(default=None)


def compare_outcomes(trace: PlayTrace, game: NormalFormGame) -> OutcomeReport:
    """Average payoffs and how often play sat at a pure Nash or the Pareto-superior profile.

    The Pareto-superior profile is the witness of the prisoner's-dilemma
    check; when the game is not a dilemma that fraction is 0.
    """
    if not trace.rounds:
        raise DomainError("trace is empty")
    if game.player_count != 2:
        raise DomainError("trace and game disagree on the number of players")
    nash = set(pure_nash(game))
    verdict = is_prisoners_dilemma(game)
    superior = verdict.superior_profile
    n = len(trace.rounds)
    at_nash = at_superior = 0
    totals = [0.0, 0.0]
    for r in trace.rounds:
        profile = game.profile_index(r.postures)
        if game.payoff(profile) != r.payoffs:
            raise DomainError(f"round {r.round}: recorded payoffs do not match the game")
        at_nash += profile in nash
        at_superior += superior is not None and profile == superior
        totals[0] += r.payoffs[0]
        totals[1] += r.payoffs[1]
    return OutcomeReport(
        (totals[0] / n, totals[1] / n),
        at_nash / n,
        at_superior / n,
        game.names(superior) if superior is not None else None,
    )
