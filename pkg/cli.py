"""
Command-line front end

    python cli.py bt --depth 3 "(\\x. x x) (\\x. x x)"
    python cli.py alpha-eq "\\x. x" "\\y. y"
    python cli.py dist --alpha --depth 10 "\\x. x y" "\\x. x x"
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from backend.infinite import (ClassChain, InfTerm, alpha_eq_at, dist, dist_alpha, fv_exact,
                              represent_limit, truncate)
from backend.lambda_calculus import reduce, subst
from backend.signature import alpha_eq, canonical_term, dist_alpha_raw, dist_raw, fv
from backend.trees import tree, unknown_positions
from config import Config, raise_recursion_limit, validate_settings
from models.atoms import AtomTable
from models.errors import (FuelNeeded, Inconclusive, NominalError, ParseError, SignatureError,
                           SupportViolation)
from models.results import Exact
from utils.constants import Command, ExitCode
from utils.formatters import (DistanceFormatter, JsonFormatter, OutcomeFormatter, TermFormatter,
                              atom_names, format_atoms)
from utils.parser import TermParser, make_parser, parse_definitions, parse_signature
from utils.validators import ValidationError, require_valid_flags

logger = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as ValidationError instead of exiting"""

    def error(self, message):
        raise ValidationError(message)


def create_argument_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=Config.DEFAULT_DEPTH,
                        help="observation depth (default %(default)s)")
    common.add_argument("--fuel", type=int, default=Config.DEFAULT_FUEL,
                        help="reduction steps per node (default %(default)s)")
    common.add_argument("--assume-bot", action="store_true",
                        help="render unresolved nodes as bottom")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--defs", help="file of `name = term` definitions")
    common.add_argument("--sig", help="binding signature file for generic terms")
    common.add_argument("--unicode", action="store_true", default=Config.UNICODE_OUTPUT,
                        help="print λ and ⊥")
    common.add_argument("--no-prelude", action="store_true",
                        help="do not predefine fix, Y, Omega, I, K")
    common.add_argument("--verbose", action="store_true", help="debug logging")

    argument_parser = _ArgumentParser(
        prog="cli.py",
        description="Nominal terms, infinitary lambda calculus and their trees")
    subparsers = argument_parser.add_subparsers(dest="command", required=True)

    for command in (Command.PARSE, Command.CANON, Command.FV, Command.TRUNCATE):
        sub = subparsers.add_parser(command.value, parents=[common])
        sub.add_argument("term")

    sub_subst = subparsers.add_parser(Command.SUBST.value, parents=[common],
                                      help="capture-avoiding m[x := n]")
    sub_subst.add_argument("term")
    sub_subst.add_argument("variable")
    sub_subst.add_argument("replacement")

    sub_reduce = subparsers.add_parser(Command.REDUCE.value, parents=[common])
    sub_reduce.add_argument("term")
    sub_reduce.add_argument("--strategy", default="head", help="head, whead or top")

    for command in (Command.BT, Command.LLT, Command.BET):
        sub = subparsers.add_parser(command.value, parents=[common])
        sub.add_argument("term")

    sub_alpha = subparsers.add_parser(Command.ALPHA_EQ.value, parents=[common])
    sub_alpha.add_argument("left")
    sub_alpha.add_argument("right")

    sub_dist = subparsers.add_parser(Command.DIST.value, parents=[common])
    sub_dist.add_argument("left")
    sub_dist.add_argument("right")
    sub_dist.add_argument("--alpha", action="store_true", help="distance between alpha classes")

    sub_limit = subparsers.add_parser(Command.LIMIT_REP.value, parents=[common])
    sub_limit.add_argument("term")
    sub_limit.add_argument("--probe", type=int, default=None,
                           help=f"support probe depth (default {Config.LIMIT_PROBE_DEPTH})")

    return argument_parser


class CommandRunner:
    """Evaluates one parsed command line and renders its result"""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.table = AtomTable()
        signature = None
        if args.sig:
            signature = parse_signature(Path(args.sig).read_text(encoding="utf-8"),
                                        name=Path(args.sig).stem)
        self.parser: TermParser = make_parser(signature, self.table, prelude=not args.no_prelude)
        if args.defs:
            parse_definitions(Path(args.defs).read_text(encoding="utf-8"), self.parser)
        self.formatter = TermFormatter(self.table, unicode=args.unicode,
                                       assume_bot=args.assume_bot, generic=self.parser.generic)

    def run(self) -> List[str]:
        handler = getattr(self, "_cmd_" + self.args.command.replace("-", "_"))
        return handler()

    # Rendering

    def _observe(self, t):
        return truncate(t, self.args.depth) if isinstance(t, InfTerm) else t

    def _render(self, kind: str, t, value=None, text: Optional[str] = None) -> List[str]:
        trunc = self._observe(t) if t is not None else None
        positions = unknown_positions(trunc) if trunc is not None else []
        if self.args.json:
            result = JsonFormatter.result(kind, trunc, value, [list(p) for p in positions],
                                          self.table, self.args.assume_bot)
            return [JsonFormatter.dump(result)]
        if text is not None:
            return [text]
        return [self.formatter.format(trunc)]

    def _term(self, src: str):
        return self.parser.parse(src)

    # Commands

    def _cmd_parse(self) -> List[str]:
        t = self._term(self.args.term)
        text = None
        if isinstance(t, InfTerm) and not self.args.json:
            text = self.formatter.format(t)
        return self._render("parse", t, text=text)

    def _cmd_canon(self) -> List[str]:
        t = self._term(self.args.term)
        return self._render("canon", canonical_term(self._observe(t)))

    def _cmd_fv(self) -> List[str]:
        t = self._term(self.args.term)
        free = fv_exact(t) if isinstance(t, InfTerm) else fv(t)
        if self.args.json:
            return self._render("fv", None, value=atom_names(free, self.table))
        return [format_atoms(free, self.table)]

    def _cmd_truncate(self) -> List[str]:
        t = self._term(self.args.term)
        return self._render("truncate", truncate(t, self.args.depth))

    def _cmd_subst(self) -> List[str]:
        m = self._term(self.args.term)
        n = self._term(self.args.replacement)
        x = self.table.intern(self.args.variable)
        return self._render("subst", subst(m, x, n))

    def _cmd_reduce(self) -> List[str]:
        t = self._term(self.args.term)
        outcome = reduce(t, self.args.strategy, self.args.fuel)
        label = OutcomeFormatter.label(outcome)
        if self.args.json:
            return self._render("reduce", outcome.term,
                                value={"outcome": label, "steps": outcome.steps})
        rendered = self.formatter.format(self._observe(outcome.term))
        return [OutcomeFormatter.format_outcome(outcome, rendered)]

    def _tree(self) -> List[str]:
        t = self._term(self.args.term)
        result = tree(self.args.command, t, self.args.fuel)
        return self._render(self.args.command, result)

    _cmd_bt = _tree
    _cmd_llt = _tree
    _cmd_bet = _tree

    def _cmd_alpha_eq(self) -> List[str]:
        left, right = self._term(self.args.left), self._term(self.args.right)
        if isinstance(left, InfTerm) or isinstance(right, InfTerm):
            equal = alpha_eq_at(left, right, self.args.depth)
        else:
            equal = alpha_eq(left, right)
        if self.args.json:
            return self._render("alpha-eq", None, value=equal)
        return ["true" if equal else "false"]

    def _cmd_dist(self) -> List[str]:
        left, right = self._term(self.args.left), self._term(self.args.right)
        if isinstance(left, InfTerm) or isinstance(right, InfTerm):
            measure = dist_alpha if self.args.alpha else dist
            bound = measure(left, right, max(1, self.args.depth))
        else:
            measure = dist_alpha_raw if self.args.alpha else dist_raw
            bound = Exact(measure(left, right))
        if self.args.json:
            return self._render("dist", None, value=DistanceFormatter.to_json(bound))
        return [DistanceFormatter.format_bound(bound)]

    def _cmd_limit_rep(self) -> List[str]:
        t = self._term(self.args.term)
        chain = ClassChain.from_infterm(t)
        return self._render("limit-rep", represent_limit(chain, self.args.depth, self.args.probe))


def exit_code_for(error: Exception) -> ExitCode:
    if isinstance(error, (ParseError, SignatureError, ValidationError)):
        return ExitCode.INPUT_ERROR
    if isinstance(error, SupportViolation):
        return ExitCode.SUPPORT_VIOLATION
    if isinstance(error, (Inconclusive, FuelNeeded)):
        return ExitCode.INCONCLUSIVE
    return ExitCode.DOMAIN_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns the process exit code"""
    raise_recursion_limit()
    try:
        args = create_argument_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else Config.LOG_LEVEL)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        validate_settings()
        require_valid_flags(args.command, vars(args))
        lines = CommandRunner(args).run()
    except NominalError as e:
        code = exit_code_for(e)
        logger.error(f"Command failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return int(code)

    for line in lines:
        print(line)
    return int(ExitCode.SUCCESS)


if __name__ == "__main__":
    sys.exit(main())
