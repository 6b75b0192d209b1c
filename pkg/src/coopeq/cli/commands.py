"""Argument parsing and command handlers."""

import argparse
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, TextIO

from ..core.cooperative import (
    coco_deal_profile,
    coco_value,
    sidepay_mpce_alpha,
    sidepay_mpce_profile,
    sidepay_mpce_value,
    sidepay_mpce_value_with_default,
)
from ..core.equilibria import (
    alpha_of,
    best_utilities,
    best_utility_witness,
    ce_falsify,
    find_mpce,
    find_pareto_optimal_mpce,
    find_pce,
    is_pce,
    minimax_values,
)
from ..core.errors import DimensionError, GameError
from ..core.game import decompose, expected_utilities, msw_profile
from ..core.gamefile import load_game, parse_number, serialize_game
from ..core.generators import GENERATORS, generate
from ..core.models import AlphaResult, Game, MixedStrategy, StrategyProfile
from ..core.settings import Settings
from .report import Report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3

# Hand-typed probabilities like 0.333,0.667 should still load.
PROFILE_SUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class Context:
    game: Game
    args: argparse.Namespace
    settings: Settings

    @property
    def tol(self) -> float:
        return self.settings.tolerance


Handler = Callable[[Context, Report], int]


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _key_value(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key.strip(), value.strip()


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group(required=True)
    source.add_argument("--game", type=Path, help="game document (JSON)")
    source.add_argument("--gen", choices=sorted(GENERATORS), help="built-in game generator")
    common.add_argument("--param", type=_key_value, action="append", metavar="K=V", help="generator parameter")
    common.add_argument("--tolerance", type=_positive_float, help="comparison tolerance (default 1e-9)")
    common.add_argument("--format", choices=("text", "json"), help="report format")
    common.add_argument(
        "--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR"), type=str.upper, help="stderr log level"
    )
    return common


def _add_profile(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--profile",
        required=True,
        help='"p1;p2": each side a probability list like 1/2,1/2 or a single action label',
    )


# --- Game and profile input ---

def load_input(args: argparse.Namespace) -> Game:
    if args.game is not None:
        return load_game(args.game)
    params = dict(args.param or [])
    logger.debug("Generating %s with %s", args.gen, params)
    return generate(args.gen, params)


def parse_strategy(text: str, game: Game, player: int) -> MixedStrategy:
    """One side of --profile: an action label or comma-separated probabilities."""
    text = text.strip()
    labels = game.labels(player)
    size = len(labels)
    if text in labels:
        return MixedStrategy.pure(labels.index(text), size)
    try:
        probs = [parse_number(part) for part in text.split(",")]
    except ValueError as e:
        raise GameError(f"player {player} strategy {text!r}: {e}") from e
    if len(probs) != size:
        raise DimensionError(f"player {player} strategy has {len(probs)} entries, game has {size} actions")
    return MixedStrategy.from_probs(probs, PROFILE_SUM_TOLERANCE)


def parse_profile(text: str, game: Game) -> StrategyProfile:
    sides = text.split(";")
    if len(sides) != 2:
        raise GameError(f'profile must look like "p1;p2", got {text!r}')
    return StrategyProfile(parse_strategy(sides[0], game, 1), parse_strategy(sides[1], game, 2))


def _default_payoffs(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise GameError(f"--default takes d1,d2, got {text!r}")
    try:
        return parse_number(parts[0]), parse_number(parts[1])
    except ValueError as e:
        raise GameError(f"--default: {e}") from e


# --- Handlers ---

def cmd_info(ctx: Context, report: Report) -> int:
    g = ctx.game
    labels = (g.labels(1), g.labels(2))
    report.text("shape", f"{g.n}x{g.m}")
    report.text("actions1", ", ".join(labels[0]))
    report.text("actions2", ", ".join(labels[1]))
    report.matrix("payoff1", g.payoff1, labels)
    report.matrix("payoff2", g.payoff2, labels)
    return EXIT_OK


def cmd_bu(ctx: Context, report: Report) -> int:
    g = ctx.game
    w1 = best_utility_witness(g, 1, ctx.tol)
    w2 = best_utility_witness(g, 2, ctx.tol)
    report.pair("bu", (w1.value, w2.value))
    report.strategy("strategy1", g, 1, w1.strategy)
    report.text("response1", g.label(2, w1.response))
    report.strategy("strategy2", g, 2, w2.strategy)
    report.text("response2", g.label(1, w2.response))
    return EXIT_OK


def cmd_minimax(ctx: Context, report: Report) -> int:
    report.pair("minimax", minimax_values(ctx.game, ctx.tol))
    return EXIT_OK


def cmd_msw(ctx: Context, report: Report) -> int:
    g = ctx.game
    value, (i, j) = msw_profile(g)
    profile = StrategyProfile.pure(i, j, g.n, g.m)
    report.number("msw", value)
    report.profile("profile", g, profile)
    report.pair("utilities", expected_utilities(g, profile))
    return EXIT_OK


def cmd_decompose(ctx: Context, report: Report) -> int:
    g = ctx.game
    parts = decompose(g)
    labels = (g.labels(1), g.labels(2))
    report.matrix("team", parts.team, labels)
    report.matrix("zerosum", parts.zerosum, labels)
    return EXIT_OK


def cmd_pce(ctx: Context, report: Report) -> int:
    g = ctx.game
    bu = best_utilities(g, ctx.tol)
    report.pair("bu", bu)
    profile = find_pce(g, ctx.tol, bu)
    if profile is None:
        report.text("result", "no PCE")
        return EXIT_NEGATIVE
    report.text("result", "PCE")
    report.profile("profile", g, profile)
    report.pair("utilities", expected_utilities(g, profile))
    return EXIT_OK


def cmd_check_pce(ctx: Context, report: Report) -> int:
    g = ctx.game
    profile = parse_profile(ctx.args.profile, g)
    bu = best_utilities(g, ctx.tol)
    ok = is_pce(g, profile, ctx.tol, bu)
    report.profile("profile", g, profile)
    report.pair("utilities", expected_utilities(g, profile))
    report.pair("bu", bu)
    report.number("alpha", alpha_of(g, profile, bu))
    report.flag("pce", ok)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_alpha(ctx: Context, report: Report) -> int:
    g = ctx.game
    profile = parse_profile(ctx.args.profile, g)
    bu = best_utilities(g, ctx.tol)
    report.profile("profile", g, profile)
    report.number("alpha", alpha_of(g, profile, bu))
    report.pair("utilities", expected_utilities(g, profile))
    report.pair("bu", bu)
    return EXIT_OK


def _alpha_report(ctx: Context, report: Report, result: AlphaResult) -> int:
    report.number("alpha", result.alpha)
    report.profile("profile", ctx.game, result.profile)
    report.pair("utilities", result.utilities)
    return EXIT_OK


def cmd_mpce(ctx: Context, report: Report) -> int:
    return _alpha_report(ctx, report, find_mpce(ctx.game, ctx.tol))


def cmd_po_mpce(ctx: Context, report: Report) -> int:
    return _alpha_report(ctx, report, find_pareto_optimal_mpce(ctx.game, ctx.tol))


def cmd_coco(ctx: Context, report: Report) -> int:
    report.pair("coco", coco_value(ctx.game, ctx.tol))
    return EXIT_OK


def cmd_sidepay_mpce(ctx: Context, report: Report) -> int:
    g = ctx.game
    if ctx.args.default is not None:
        d1, d2 = _default_payoffs(ctx.args.default)
        report.pair("default", (d1, d2))
        report.pair("value", sidepay_mpce_value_with_default(g, d1, d2))
        return EXIT_OK
    report.pair("value", sidepay_mpce_value(g, ctx.tol))
    report.number("alpha", sidepay_mpce_alpha(g, ctx.tol))
    return EXIT_OK


def cmd_sidepay_profile(ctx: Context, report: Report) -> int:
    g = ctx.game
    deal = coco_deal_profile(g, ctx.tol) if ctx.args.coco else sidepay_mpce_profile(g, ctx.tol)
    report.deal("deal", g, deal)
    report.number("transfer", deal.transfer)
    report.pair("outcome", deal.outcome(g))
    return EXIT_OK


def cmd_check_ce(ctx: Context, report: Report) -> int:
    g = ctx.game
    profile = parse_profile(ctx.args.profile, g)
    grid = ctx.settings.grid
    report.profile("profile", g, profile)
    report.number("grid", grid)
    violation = ce_falsify(g, profile, grid, ctx.tol)
    if violation is None:
        report.text("violation", "none found")
        return EXIT_OK
    report.text("violation", f"player {violation.player}")
    report.strategy("deviation", g, violation.player, violation.deviation)
    report.number("deviator_value", violation.deviator_value)
    report.number("current_value", violation.current_value)
    report.number("opponent_best", violation.opponent_best)
    report.number("opponent_current", violation.opponent_current)
    report.number("punishment", violation.punishment)
    return EXIT_NEGATIVE


@dataclass(frozen=True)
class Command:
    handler: Handler
    help: str
    configure: Optional[Callable[[argparse.ArgumentParser], None]] = None


def _configure_sidepay_mpce(p: argparse.ArgumentParser) -> None:
    p.add_argument("--default", metavar="D1,D2", help="default payoffs for unmatched deal actions")


def _configure_sidepay_profile(p: argparse.ArgumentParser) -> None:
    p.add_argument("--coco", action="store_true", help="deal paying out the coco value instead")


def _configure_check_ce(p: argparse.ArgumentParser) -> None:
    _add_profile(p)
    p.add_argument("--grid", type=_positive_int, help="deviation grid subdivisions (default 20)")


COMMANDS: dict[str, Command] = {
    "info": Command(cmd_info, "show actions and payoff matrices"),
    "bu": Command(cmd_bu, "best utilities with witnesses"),
    "minimax": Command(cmd_minimax, "minimax values"),
    "msw": Command(cmd_msw, "maximum social welfare"),
    "decompose": Command(cmd_decompose, "team and zero-sum parts"),
    "pce": Command(cmd_pce, "find a PCE (exit 1 when none exists)"),
    "check-pce": Command(cmd_check_pce, "test a profile for PCE", _add_profile),
    "alpha": Command(cmd_alpha, "largest alpha of a profile", _add_profile),
    "mpce": Command(cmd_mpce, "maximum-alpha PCE"),
    "po-mpce": Command(cmd_po_mpce, "Pareto-optimal M-PCE"),
    "coco": Command(cmd_coco, "coco value"),
    "sidepay-mpce": Command(cmd_sidepay_mpce, "M-PCE value with side payments", _configure_sidepay_mpce),
    "sidepay-profile": Command(cmd_sidepay_profile, "deal profile attaining the side-payment value", _configure_sidepay_profile),
    "check-ce": Command(cmd_check_ce, "search grid deviations against a profile", _configure_check_ce),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coopeq", description="Cooperative equilibria of two-player games")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = _common_parser()
    for name, command in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=command.help)
        if command.configure:
            command.configure(p)
    gen = sub.add_parser("gen", parents=[common], help="write a game document")
    gen.add_argument("--output", type=Path, help="file to write (default stdout)")
    return parser


def settings_overrides(args: argparse.Namespace) -> dict:
    return {
        "tolerance": args.tolerance,
        "grid": getattr(args, "grid", None),
        "output_format": args.format,
        "log_level": args.log_level,
    }


def run(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    """Run a parsed command. GameError and SolverError propagate to the caller."""
    game = load_input(args)
    logger.info("Running %s on a %dx%d game", args.command, game.n, game.m)

    if args.command == "gen":
        text = serialize_game(game)
        if args.output is None:
            out.write(text)
        else:
            args.output.write_text(text, encoding="utf-8")
            logger.info("Wrote %s", args.output)
        return EXIT_OK

    report = Report(args.command)
    code = COMMANDS[args.command].handler(Context(game, args, settings), report)
    out.write(report.render(settings.output_format) + "\n")
    return code
