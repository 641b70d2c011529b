"""Finite normal-form games: best responses, dominance, and Nash equilibria.

A game stores its payoffs as a dense array of shape ``(*strategy_counts,
player_count)`` so that ``payoffs[profile]`` gives one payoff per player.
Strategy profiles are plain tuples of strategy indices in player order.

Dominance and pure-equilibrium checks compare raw payoffs with strict
inequality and no epsilon. Only the mixed-equilibrium search uses numeric
tolerances.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator, Mapping, Sequence

import numpy as np

from .errors import DomainError, SizeError

Profile = tuple[int, ...]

#: Largest strategy set accepted by :func:`mixed_nash_2p`.
MAX_SUPPORT_STRATEGIES = 6

PROBABILITY_TOL = 1e-9
DEVIATION_TOL = 1e-9
DUPLICATE_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class NormalFormGame:
    """A finite game in strategic form.

    Attributes:
        players: Player labels, in the order used by profiles.
        strategies: Per-player tuple of unique strategy labels.
        payoffs: Read-only float array of shape ``(*counts, len(players))``.
    """

    players: tuple[str, ...]
    strategies: tuple[tuple[str, ...], ...]
    payoffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        players = tuple(str(p) for p in self.players)
        strategies = tuple(tuple(str(s) for s in names) for names in self.strategies)
        if len(players) < 2:
            raise DomainError("a game needs at least 2 players")
        if len(set(players)) != len(players):
            raise DomainError(f"duplicate player labels: {list(players)}")
        if len(strategies) != len(players):
            raise DomainError(
                f"got strategy lists for {len(strategies)} players, expected {len(players)}"
            )
        for player, names in zip(players, strategies):
            if not names:
                raise DomainError(f"player {player!r} has no strategies")
            if any(not name for name in names):
                raise DomainError(f"player {player!r} has an empty strategy label")
            if len(set(names)) != len(names):
                raise DomainError(f"player {player!r} has duplicate strategy labels")

        payoffs = np.array(self.payoffs, dtype=float)
        expected = tuple(len(names) for names in strategies) + (len(players),)
        if payoffs.shape != expected:
            raise DomainError(f"payoff array has shape {payoffs.shape}, expected {expected}")
        if not np.all(np.isfinite(payoffs)):
            raise DomainError("payoffs must be finite")
        payoffs.flags.writeable = False

        object.__setattr__(self, "players", players)
        object.__setattr__(self, "strategies", strategies)
        object.__setattr__(self, "payoffs", payoffs)

    @property
    def player_count(self) -> int:
        return len(self.players)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.payoffs.shape[:-1]

    def profiles(self) -> Iterator[Profile]:
        """Yield every pure profile in lexicographic index order."""
        return itertools.product(*(range(n) for n in self.shape))

    def payoff(self, profile: Sequence[int]) -> tuple[float, ...]:
        self._check_profile(profile)
        return tuple(float(v) for v in self.payoffs[tuple(profile)])

    def names(self, profile: Sequence[int]) -> tuple[str, ...]:
        self._check_profile(profile)
        return tuple(self.strategies[p][s] for p, s in enumerate(profile))

    def strategy_index(self, player: int, name: str) -> int:
        self._check_player(player)
        try:
            return self.strategies[player].index(name)
        except ValueError:
            valid = ", ".join(self.strategies[player])
            raise DomainError(
                f"unknown strategy {name!r} for player {self.players[player]!r}; "
                f"valid: {valid}"
            ) from None

    def profile_index(self, names: Sequence[str]) -> Profile:
        if len(names) != self.player_count:
            raise DomainError(f"profile {list(names)} does not name one strategy per player")
        return tuple(self.strategy_index(p, n) for p, n in enumerate(names))

    def _check_player(self, player: int) -> None:
        if not 0 <= player < self.player_count:
            raise DomainError(f"player index {player} out of range 0..{self.player_count - 1}")

    def _check_profile(self, profile: Sequence[int]) -> None:
        if len(profile) != self.player_count:
            raise DomainError(f"profile {tuple(profile)} has wrong length")
        for p, s in enumerate(profile):
            if not 0 <= s < self.shape[p]:
                raise DomainError(
                    f"strategy index {s} out of range for player {self.players[p]!r}"
                )

    @classmethod
    def from_bimatrix(
        cls,
        row: Any,
        col: Any,
        players: Sequence[str] = ("i", "j"),
        strategies: Sequence[Sequence[str]] | None = None,
    ) -> NormalFormGame:
        """Build a two-player game from row and column payoff matrices."""
        row = np.asarray(row, dtype=float)
        col = np.asarray(col, dtype=float)
        if row.shape != col.shape or row.ndim != 2:
            raise DomainError("bimatrix payoffs must be two matrices of equal shape")
        if strategies is None:
            strategies = (
                [f"r{k}" for k in range(row.shape[0])],
                [f"c{k}" for k in range(row.shape[1])],
            )
        return cls(tuple(players), tuple(map(tuple, strategies)), np.stack([row, col], axis=-1))

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> NormalFormGame:
        """Parse the JSON game layout.

        ``payoffs`` maps comma-joined strategy names (player order) to one
        payoff per player. Every profile must appear exactly once.
        """
        for key in ("players", "strategies", "payoffs"):
            if key not in data:
                raise DomainError(f"game file is missing field {key!r}")
        players = tuple(data["players"])
        strategies = tuple(tuple(s) for s in data["strategies"])
        if len(strategies) != len(players):
            raise DomainError("'strategies' must hold one list per player")
        for player, names in zip(players, strategies):
            if len(set(names)) != len(names):
                raise DomainError(f"player {player!r} has duplicate strategy labels")
            for name in names:
                if "," in str(name):
                    raise DomainError(f"strategy label {name!r} may not contain a comma")

        raw = data["payoffs"]
        if isinstance(raw, list):
            raise DomainError("'payoffs' must be an object keyed by profile")
        seen: dict[str, Any] = {}
        for key, value in raw.items():
            norm = ",".join(part.strip() for part in key.split(","))
            if norm in seen:
                raise DomainError(f"duplicate payoff profile {key!r}")
            seen[norm] = value

        counts = [len(names) for names in strategies]
        table = np.zeros(tuple(counts) + (len(players),))
        for profile in itertools.product(*(range(n) for n in counts)):
            key = ",".join(strategies[p][s] for p, s in enumerate(profile))
            if key not in seen:
                raise DomainError(f"missing payoff profile {key!r}")
            values = seen.pop(key)
            if not isinstance(values, (list, tuple)) or len(values) != len(players):
                raise DomainError(f"profile {key!r} must list {len(players)} payoffs")
            try:
                table[profile] = [float(v) for v in values]
            except (TypeError, ValueError):
                raise DomainError(f"profile {key!r} has a non-numeric payoff") from None
        if seen:
            raise DomainError(f"unknown payoff profile {next(iter(seen))!r}")
        return cls(players, strategies, table)

    def to_dict(self) -> dict[str, Any]:
        payoffs = {}
        for profile in self.profiles():
            payoffs[",".join(self.names(profile))] = [_plain(v) for v in self.payoffs[profile]]
        return {
            "players": list(self.players),
            "strategies": [list(s) for s in self.strategies],
            "payoffs": payoffs,
        }

    def restrict(self, keep: Sequence[Sequence[int]]) -> NormalFormGame:
        """Subgame keeping only the listed strategy indices for each player."""
        keep = [sorted(k) for k in keep]
        index = np.ix_(*keep, range(self.player_count))
        return NormalFormGame(
            self.players,
            tuple(tuple(self.strategies[p][s] for s in k) for p, k in enumerate(keep)),
            self.payoffs[index],
        )


def _plain(value: float) -> float | int:
    return int(value) if float(value).is_integer() else float(value)


def load_game(path: str | Path) -> NormalFormGame:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc})") from None
    return NormalFormGame.from_dict(data)


def table2_path() -> Path:
    return Path(__file__).parent / "data" / "table2.game.json"


def table2_game() -> NormalFormGame:
    """The 3x3 aggressive/moderate/passive posture game bundled with the package."""
    return load_game(table2_path())


def _own_axis_first(game: NormalFormGame, player: int) -> np.ndarray:
    """Player's payoffs with their own strategy as axis 0, rivals flattened."""
    own = np.moveaxis(game.payoffs[..., player], player, 0)
    return own.reshape(own.shape[0], -1)


def best_responses(
    game: NormalFormGame, player: int, others: Sequence[int | None]
) -> set[int]:
    """All strategies of ``player`` that maximise their payoff against ``others``.

    ``others`` is either a full-length profile (the entry at ``player`` is
    ignored) or the rivals' choices alone, in player order.
    """
    game._check_player(player)
    others = list(others)
    if len(others) == game.player_count - 1:
        others.insert(player, None)
    if len(others) != game.player_count:
        raise DomainError("partial profile must fix every player except the responder")
    for p, s in enumerate(others):
        if p == player:
            continue
        if s is None or not 0 <= s < game.shape[p]:
            raise DomainError(f"strategy index {s} out of range for player {game.players[p]!r}")
    index = tuple(slice(None) if p == player else s for p, s in enumerate(others))
    column = game.payoffs[index + (player,)]
    best = column.max()
    return {int(s) for s in np.flatnonzero(column == best)}


def pure_nash(game: NormalFormGame) -> list[Profile]:
    """Every pure profile at which no player has a strictly better deviation."""
    stable = np.ones(game.shape, dtype=bool)
    for p in range(game.player_count):
        own = game.payoffs[..., p]
        stable &= own == own.max(axis=p, keepdims=True)
    return [tuple(int(i) for i in idx) for idx in np.argwhere(stable)]


def strictly_dominated(game: NormalFormGame, player: int) -> set[int]:
    """Strategies of ``player`` beaten by another pure strategy against every rival profile."""
    game._check_player(player)
    own = _own_axis_first(game, player)
    dominated = set()
    for s in range(own.shape[0]):
        for t in range(own.shape[0]):
            if t != s and np.all(own[t] > own[s]):
                dominated.add(s)
                break
    return dominated


@dataclass(frozen=True)
class Elimination:
    round: int
    player: int
    strategy: str


def iterated_elimination(game: NormalFormGame) -> tuple[NormalFormGame, list[Elimination]]:
    """Remove strictly dominated strategies until none remain.

    Each round computes the dominated set of every player on the current
    subgame and removes them together. The log lists removals by round,
    then player index, then strategy index.
    """
    keep = [list(range(n)) for n in game.shape]
    current = game
    log: list[Elimination] = []
    round_no = 0
    while True:
        dropped = [sorted(strictly_dominated(current, p)) for p in range(game.player_count)]
        if not any(dropped):
            return current, log
        round_no += 1
        for p, local in enumerate(dropped):
            for s in local:
                log.append(Elimination(round_no, p, current.strategies[p][s]))
            keep[p] = [orig for k, orig in enumerate(keep[p]) if k not in local]
        current = game.restrict(keep)


@dataclass(frozen=True)
class DilemmaVerdict:
    """Outcome of the prisoner's-dilemma test.

    ``superior_profile`` is the Pareto-superior profile with the highest
    payoff total (lexicographically first among ties); every such profile is
    listed in ``pareto_superior``.
    """

    is_dilemma: bool
    dominant_profile: Profile | None = None
    dominant_payoffs: tuple[float, ...] | None = None
    superior_profile: Profile | None = None
    superior_payoffs: tuple[float, ...] | None = None
    pareto_superior: tuple[Profile, ...] = ()


def dominant_strategy(game: NormalFormGame, player: int) -> int | None:
    """The strategy that strictly dominates all others, if one exists."""
    n = game.shape[player]
    if n == 1:
        return 0
    dominated = strictly_dominated(game, player)
    if len(dominated) != n - 1:
        return None
    (candidate,) = set(range(n)) - dominated
    own = _own_axis_first(game, player)
    others = [t for t in range(n) if t != candidate]
    if all(np.all(own[candidate] > own[t]) for t in others):
        return candidate
    return None


def is_prisoners_dilemma(game: NormalFormGame) -> DilemmaVerdict:
    """Dominant-strategy equilibrium that some other profile beats for everyone."""
    dominant = [dominant_strategy(game, p) for p in range(game.player_count)]
    if any(d is None for d in dominant):
        return DilemmaVerdict(False)
    profile: Profile = tuple(int(d) for d in dominant)
    base = game.payoffs[profile]
    better = [q for q in game.profiles() if np.all(game.payoffs[q] > base)]
    if not better:
        return DilemmaVerdict(False, profile, game.payoff(profile))
    witness = max(better, key=lambda q: (float(game.payoffs[q].sum()), [-i for i in q]))
    return DilemmaVerdict(
        True,
        profile,
        game.payoff(profile),
        witness,
        game.payoff(witness),
        tuple(better),
    )


def _indifference(matrix: np.ndarray) -> np.ndarray | None:
    """Probability vector over columns making every row of ``matrix`` pay the same.

    Returns None when the system has no solution within tolerance or the
    solution leaves the simplex.
    """
    rows, cols = matrix.shape
    system = np.zeros((rows + 1, cols + 1))
    system[:rows, :cols] = matrix
    system[:rows, cols] = -1.0
    system[rows, :cols] = 1.0
    rhs = np.zeros(rows + 1)
    rhs[rows] = 1.0
    solution, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    scale = max(1.0, float(np.abs(matrix).max()))
    if np.abs(system @ solution - rhs).max() > PROBABILITY_TOL * scale:
        return None
    probs = solution[:cols]
    if probs.min() < -PROBABILITY_TOL:
        return None
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def mixed_nash_2p(
    game: NormalFormGame, max_support: int | None = None
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Enumerate equilibria of a two-player game by support enumeration.

    Every pair of supports (up to ``max_support`` strategies each) is tried:
    the indifference system is solved for both players and the candidate is
    kept when both vectors are valid distributions and no pure deviation
    gains more than 1e-9. Pure equilibria show up as one-hot vectors.
    Candidates within 1e-7 of an earlier one (max-norm) are dropped.

    Raises:
        DomainError: the game does not have exactly two players.
        SizeError: a strategy set exceeds ``MAX_SUPPORT_STRATEGIES``.
    """
    if game.player_count != 2:
        raise DomainError("mixed equilibrium search supports exactly 2 players")
    m, n = game.shape
    if max(m, n) > MAX_SUPPORT_STRATEGIES:
        raise SizeError(
            f"support enumeration is limited to {MAX_SUPPORT_STRATEGIES} strategies per "
            f"player; got {m}x{n}"
        )
    limit = max(m, n) if max_support is None else max_support
    A = game.payoffs[..., 0]
    B = game.payoffs[..., 1]
    scale = max(1.0, float(np.abs(game.payoffs).max()))

    found: list[tuple[np.ndarray, np.ndarray]] = []
    for k1 in range(1, min(m, limit) + 1):
        for k2 in range(1, min(n, limit) + 1):
            for rows in itertools.combinations(range(m), k1):
                for cols in itertools.combinations(range(n), k2):
                    y_sub = _indifference(A[np.ix_(rows, cols)])
                    x_sub = _indifference(B[np.ix_(rows, cols)].T)
                    if x_sub is None or y_sub is None:
                        continue
                    x = np.zeros(m)
                    y = np.zeros(n)
                    x[list(rows)] = x_sub
                    y[list(cols)] = y_sub
                    if not _no_profitable_deviation(A, B, x, y, DEVIATION_TOL * scale):
                        continue
                    candidate = np.concatenate([x, y])
                    if any(
                        np.abs(candidate - np.concatenate(prev)).max() <= DUPLICATE_TOL
                        for prev in found
                    ):
                        continue
                    found.append((x, y))
    return found


def _no_profitable_deviation(
    A: np.ndarray, B: np.ndarray, x: np.ndarray, y: np.ndarray, tol: float
) -> bool:
    row_values = A @ y
    col_values = x @ B
    return bool(row_values.max() <= x @ row_values + tol and col_values.max() <= col_values @ y + tol)


def expected_payoffs(game: NormalFormGame, x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    A = game.payoffs[..., 0]
    B = game.payoffs[..., 1]
    return float(x @ A @ y), float(x @ B @ y)
