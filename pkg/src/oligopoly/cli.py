"""Command-line front end.

Exit status is 0 on success, 2 for bad input (usage errors included) and 3
when an iterative solver fails to converge. Numbers are printed with six
fractional digits so output is byte-stable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import kinked_demand as kd
from . import market_models as mm
from . import metrics
from . import normal_form as nf
from . import repeated_play as rp
from ._format import compact, fixed
from .errors import ConvergenceError, DomainError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONVERGENCE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _positive(name: str):
    def parse(text: str) -> float:
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number (got {text!r})") from None
        if not value > 0:
            raise argparse.ArgumentTypeError(f"{name} must be > 0 (got {text})")
        return value

    return parse


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("--firms-list must be comma-separated integers") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("--firms-list entries must be integers >= 1")
    return values


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("--start must be comma-separated prices") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oligopoly", description="Equilibria of oligopoly models.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="pure/mixed Nash, dominance and dilemma report for a game file")
    p.add_argument("game", type=Path)
    p.add_argument("--mixed", action="store_true", help="also enumerate mixed equilibria (2 players)")

    def market_flags(p: argparse.ArgumentParser, firms: bool = True) -> None:
        p.add_argument("--market", type=Path, help="JSON market file; flags override its fields")
        p.add_argument("--a", type=float)
        p.add_argument("--b", type=float)
        p.add_argument("--c", type=float)
        if firms:
            p.add_argument("--firms", type=int)

    p = sub.add_parser("cournot", help="Cournot equilibrium on a linear market")
    market_flags(p)
    p.add_argument("--iterative", action="store_true", help="also run damped best-response iteration")
    p.add_argument("--tolerance", type=_positive("--tolerance"), default=1e-10)
    p.add_argument("--max-iterations", type=int, default=10_000)
    p.add_argument("--damping", type=_positive("--damping"))

    p = sub.add_parser("bertrand", help="homogeneous Bertrand equilibrium and undercutting")
    market_flags(p)
    p.add_argument("--tick", type=_positive("--tick"), default=0.01)
    p.add_argument("--start", type=_float_list, help="start prices for undercut dynamics, e.g. 30,30")
    p.add_argument("--max-rounds", type=int, default=1_000_000)

    p = sub.add_parser("limit", help="Cournot price as the number of firms grows")
    market_flags(p, firms=False)
    p.add_argument("--firms-list", type=_int_list, required=True)

    p = sub.add_parser("kinked", help="MR gap and optimal price on a kinked demand curve")
    p.add_argument("file", type=Path)
    p.add_argument("--mc", type=float, required=True)

    p = sub.add_parser("simulate", help="repeated play with persistence policies")
    p.add_argument("game", type=Path)
    p.add_argument("--rho", type=float, default=rp.DEFAULT_PERSISTENCE)
    p.add_argument("--weeks", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--initial", help="comma-separated initial postures (default: first of each)")
    p.add_argument("--csv", type=Path, help="write the trace as CSV to this path")

    p = sub.add_parser("metrics", help="concentration ratio and Herfindahl index")
    p.add_argument("--shares", required=True, help="comma-separated shares, fractions or percentages")
    p.add_argument("--k", type=int, default=2)
    return parser


def _market(args: argparse.Namespace, firms_default: int = 2) -> mm.LinearMarket:
    data: dict[str, Any] = {}
    if args.market is not None:
        data = _read_json(args.market)
    for key in ("a", "b", "c"):
        if getattr(args, key) is not None:
            data[key] = getattr(args, key)
        if key not in data:
            raise DomainError(f"--{key} is required")
    firms = getattr(args, "firms", None)
    if firms is not None:
        data["firms"] = firms
    data.setdefault("firms", firms_default)
    return mm.LinearMarket.from_dict(data)


def _read_json(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: invalid JSON ({exc})") from None


def _load_game(path: Path) -> nf.NormalFormGame:
    return nf.NormalFormGame.from_dict(_read_json(path))


def _tuple(values: Sequence[Any]) -> str:
    return "(" + ",".join(str(v) for v in values) + ")"


def _equilibrium_dict(eq: mm.MarketEquilibrium) -> dict[str, Any]:
    return {
        "regime": eq.regime,
        "firms": eq.firms,
        "method": eq.method,
        "quantity_per_firm": eq.quantity,
        "total_quantity": eq.total_quantity,
        "price": eq.price,
        "profit_per_firm": eq.profit,
    }


def _equilibrium_lines(eq: mm.MarketEquilibrium) -> list[str]:
    return [
        f"regime: {eq.regime} ({eq.method}, {eq.firms} firms)",
        f"q_i = {fixed(eq.quantity)}",
        f"Q = {fixed(eq.total_quantity)}",
        f"p = {fixed(eq.price)}",
        f"profit = {fixed(eq.profit)}",
    ]


def cmd_solve(args: argparse.Namespace) -> tuple[dict, list[str]]:
    game = _load_game(args.game)
    nash = nf.pure_nash(game)
    dominated = {
        game.players[p]: [game.strategies[p][s] for s in sorted(nf.strictly_dominated(game, p))]
        for p in range(game.player_count)
    }
    reduced, log = nf.iterated_elimination(game)
    verdict = nf.is_prisoners_dilemma(game)

    report: dict[str, Any] = {
        "players": list(game.players),
        "pure_nash": [
            {"profile": list(game.names(q)), "payoffs": list(game.payoff(q))} for q in nash
        ],
        "strictly_dominated": dominated,
        "iterated_elimination": {
            "remaining": [list(s) for s in reduced.strategies],
            "log": [
                {"round": e.round, "player": game.players[e.player], "strategy": e.strategy}
                for e in log
            ],
        },
        "prisoners_dilemma": {
            "verdict": verdict.is_dilemma,
            "dominant_profile": list(game.names(verdict.dominant_profile))
            if verdict.dominant_profile is not None
            else None,
            "superior_profile": list(game.names(verdict.superior_profile))
            if verdict.superior_profile is not None
            else None,
            "superior_payoffs": list(verdict.superior_payoffs)
            if verdict.superior_payoffs is not None
            else None,
        },
    }

    lines = [f"players: {', '.join(game.players)}", f"pure nash equilibria: {len(nash)}"]
    for q in nash:
        lines.append(f"  {_tuple(game.names(q))} payoffs {_tuple(compact(v) for v in game.payoff(q))}")
    lines.append("strictly dominated:")
    for player, names in dominated.items():
        lines.append(f"  {player}: {', '.join(names) if names else '-'}")
    lines.append(
        "iterated elimination: "
        + " x ".join(str(len(s)) for s in reduced.strategies)
        + " remaining"
    )
    for e in log:
        lines.append(f"  round {e.round}: {game.players[e.player]} drops {e.strategy}")
    if verdict.is_dilemma:
        assert verdict.superior_profile is not None and verdict.superior_payoffs is not None
        lines.append(
            "prisoners-dilemma: yes, Pareto-superior profile "
            f"{_tuple(game.names(verdict.superior_profile))} "
            f"{_tuple(compact(v) for v in verdict.superior_payoffs)}"
        )
    else:
        lines.append("prisoners-dilemma: no")

    if args.mixed:
        mixed = nf.mixed_nash_2p(game)
        report["mixed_nash"] = [
            {
                "strategies": [x.tolist(), y.tolist()],
                "payoffs": list(nf.expected_payoffs(game, x, y)),
            }
            for x, y in mixed
        ]
        lines.append(f"mixed equilibria: {len(mixed)}")
        for x, y in mixed:
            u = nf.expected_payoffs(game, x, y)
            lines.append(
                f"  {game.players[0]} {_tuple(fixed(v) for v in x)} "
                f"{game.players[1]} {_tuple(fixed(v) for v in y)} "
                f"payoffs {_tuple(fixed(v) for v in u)}"
            )
    return report, lines


def cmd_cournot(args: argparse.Namespace) -> tuple[dict, list[str]]:
    market = _market(args)
    if args.max_iterations < 1:
        raise DomainError("--max-iterations must be >= 1")
    eq = mm.cournot_closed_form(market)
    report: dict[str, Any] = {"closed_form": _equilibrium_dict(eq)}
    lines = _equilibrium_lines(eq)
    if args.iterative:
        it, log = mm.cournot_iterative(
            market.as_general(),
            tolerance=args.tolerance,
            max_iterations=args.max_iterations,
            damping=args.damping,
        )
        report["iterative"] = _equilibrium_dict(it) | {"iterations": len(log) - 1}
        lines += ["", f"iterations: {len(log) - 1}", *_equilibrium_lines(it)]
    return report, lines


def cmd_bertrand(args: argparse.Namespace) -> tuple[dict, list[str]]:
    market = _market(args)
    if args.max_rounds < 1:
        raise DomainError("--max-rounds must be >= 1")
    if args.start is not None and len(args.start) != market.firms:
        raise DomainError(f"--start needs {market.firms} prices")
    eq = mm.bertrand_homogeneous(market, args.tick)
    check = mm.bertrand_deviation_check(market, args.tick)
    report: dict[str, Any] = {
        "equilibrium": _equilibrium_dict(eq),
        "deviation_check": {
            "undercut_price": check.undercut_price,
            "undercut_profit": check.undercut_profit,
            "raise_price": check.raise_price,
            "raise_profit": check.raise_profit,
            "profitable": check.profitable,
            "note": check.note,
        },
    }
    lines = _equilibrium_lines(eq) + [
        f"undercut to {fixed(check.undercut_price)}: profit {fixed(check.undercut_profit)}",
        f"raise to {fixed(check.raise_price)}: profit {fixed(check.raise_profit)}",
        f"verdict: {check.note}",
    ]
    if args.start is not None:
        traj = mm.bertrand_undercut_dynamics(market, args.start, args.tick, args.max_rounds)
        report["undercut_dynamics"] = {
            "responses": traj.responses,
            "moves": len(traj.prices) - 1,
            "final_prices": list(traj.final),
        }
        lines += [
            f"undercut dynamics: {len(traj.prices) - 1} price changes over {traj.responses} responses",
            f"final prices: {_tuple(fixed(v) for v in traj.final)}",
        ]
    return report, lines


def cmd_limit(args: argparse.Namespace) -> tuple[dict, list[str]]:
    market = _market(args, firms_default=1)
    rows = mm.competitive_limit(market, args.firms_list)
    report = {
        "marginal_cost": market.c,
        "prices": [{"firms": n, "price": p, "markup": p - market.c} for n, p in rows],
    }
    lines = ["firms,price,markup"] + [f"{n},{fixed(p)},{fixed(p - market.c)}" for n, p in rows]
    return report, lines


def cmd_kinked(args: argparse.Namespace) -> tuple[dict, list[str]]:
    curve = kd.KinkedDemand.from_dict(_read_json(args.file))
    gap = kd.mr_gap(curve)
    decision = kd.optimal_price(curve, args.mc)
    report = {
        "kink": {"p": curve.kink_price, "q": curve.kink_quantity},
        "mr_gap": [gap.mr_lower, gap.mr_upper],
        "mc": args.mc,
        "price": decision.price,
        "quantity": decision.quantity,
        "segment": decision.segment,
        "rigid": decision.rigid,
        "shutdown": decision.shutdown,
    }
    lines = [
        f"kink: p = {fixed(curve.kink_price)}, q = {fixed(curve.kink_quantity)}",
        f"MR gap: [{fixed(gap.mr_lower)}, {fixed(gap.mr_upper)}]",
        f"mc = {fixed(args.mc)}",
        f"price = {fixed(decision.price)} ({decision.segment})",
        f"quantity = {fixed(decision.quantity)}",
        f"rigid: {'yes' if decision.rigid else 'no'}",
    ]
    if decision.shutdown:
        lines.append("no positive output is profitable at this cost")
    return report, lines


def cmd_simulate(args: argparse.Namespace) -> tuple[dict, list[str]]:
    if not 0 <= args.rho <= 1:
        raise DomainError(f"--rho must lie in [0, 1] (got {args.rho})")
    if args.weeks < 1:
        raise DomainError(f"--weeks must be >= 1 (got {args.weeks})")
    game = _load_game(args.game)
    if game.player_count != 2:
        raise DomainError("simulate needs a two-player game")
    if args.initial:
        initial = [s.strip() for s in args.initial.split(",")]
        if len(initial) != 2:
            raise DomainError("--initial needs two postures")
    else:
        initial = [game.strategies[0][0], game.strategies[1][0]]
    policies = [rp.PersistencePolicy(initial[p], args.rho) for p in range(2)]
    trace = rp.simulate(game, policies, args.weeks, args.seed)
    outcome = rp.compare_outcomes(trace, game)
    if args.csv is not None:
        try:
            args.csv.write_text(trace.to_csv(), encoding="utf-8")
        except OSError as exc:
            raise DomainError(f"cannot write --csv {args.csv}: {exc.strerror}") from None
    last = trace.rounds[-1]
    report = {
        "weeks": args.weeks,
        "seed": args.seed,
        "rho": args.rho,
        "cumulative": list(last.cumulative),
        "average_payoffs": list(outcome.average_payoffs),
        "nash_fraction": outcome.nash_fraction,
        "pareto_fraction": outcome.pareto_fraction,
        "persistence_rate": [trace.persistence_rate(0), trace.persistence_rate(1)]
        if args.weeks > 1
        else None,
    }
    lines = [
        f"weeks: {args.weeks} (seed {args.seed}, rho {fixed(args.rho)})",
        f"cumulative: {_tuple(fixed(v) for v in last.cumulative)}",
        f"average payoffs: {_tuple(fixed(v) for v in outcome.average_payoffs)}",
        f"rounds at pure nash: {fixed(outcome.nash_fraction)}",
        f"rounds at pareto-superior profile: {fixed(outcome.pareto_fraction)}",
    ]
    if args.weeks > 1:
        rates = (trace.persistence_rate(0), trace.persistence_rate(1))
        lines.append(f"persistence rate: {_tuple(fixed(v) for v in rates)}")
    return report, lines


def cmd_metrics(args: argparse.Namespace) -> tuple[dict, list[str]]:
    if args.k < 1:
        raise DomainError(f"--k must be >= 1 (got {args.k})")
    shares = metrics.parse_shares(args.shares)
    cr = metrics.concentration_ratio(shares, args.k)
    hhi = metrics.herfindahl(shares)
    return {"k": args.k, "concentration_ratio": cr, "herfindahl": hhi}, [
        f"CR_{args.k} = {fixed(cr)}",
        f"HHI = {fixed(hhi)}",
    ]


COMMANDS = {
    "solve": cmd_solve,
    "cournot": cmd_cournot,
    "bertrand": cmd_bertrand,
    "limit": cmd_limit,
    "kinked": cmd_kinked,
    "simulate": cmd_simulate,
    "metrics": cmd_metrics,
}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        old_err, sys.stderr = sys.stderr, stderr
        try:
            args = parser.parse_args(argv)
        finally:
            sys.stderr = old_err
    except _UsageError as exc:
        print(exc, file=stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    try:
        report, lines = COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONVERGENCE

    if args.format == "json":
        stdout.write(json.dumps(report, indent=2, sort_keys=False) + "\n")
    else:
        stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
