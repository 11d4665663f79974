"""
Command-line surface: `reebstrip <command> [options]`.

Exit codes: 0 when the command's verdict holds, 2 when it fails, 1 on usage or domain errors.
"""
import argparse
import os
import sys
from typing import List, Optional, Sequence

import yaml

from src.components.constructions import THEOREMS
from src.components.graph_export import EXPORT_FORMATS
from src.constants import TOOL_NAME, TOOL_VERSION
from src.entity.config_entity import RunConfig, Tolerances
from src.exception import ReebStripError, ReebStripException
from src.logger import logging
from src.pipline.analysis_pipeline import AnalysisPipeline

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERDICT_FAILED = 2


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_functions(parser: argparse.ArgumentParser, pair: bool = True) -> None:
    names = ("c1", "c2") if pair else ("c1",)
    for name in names:
        parser.add_argument(f"--{name}", help=f"expression in x for {name}")
        parser.add_argument(f"--{name}-spec", dest=f"{name}_spec", help=f"JSON file describing {name}")
    parser.add_argument("--window", nargs=2, type=float, metavar=("S_MIN", "S_MAX"))


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="YAML tolerance profile")
    parser.add_argument("--out", help="write the output document here instead of stdout")
    parser.add_argument("--artifact-dir", dest="artifact_dir", help="directory for run artifacts")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog=TOOL_NAME, description="Reeb graphs of the height on the strip between two graphs")
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    evaluate = commands.add_parser("eval", help="value and first two derivatives of an expression")
    evaluate.add_argument("--expr", required=True)
    evaluate.add_argument("--points", nargs="+", type=float, required=True)

    critical = commands.add_parser("critical", help="critical set of c1 on the window")
    _add_functions(critical, pair=False)

    reeb = commands.add_parser("reeb", help="Reeb digraph of the strip")
    _add_functions(reeb)
    reeb.add_argument("--heights", nargs=2, type=float, metavar=("H_MIN", "H_MAX"))
    reeb.add_argument("--event-gap", dest="event_gap", type=float)
    reeb.add_argument("--format", choices=EXPORT_FORMATS, default="json")

    predict = commands.add_parser("predict", help="predicted vertices for the pair (c1, c1 + a)")
    _add_functions(predict, pair=False)
    predict.add_argument("--a", type=float, required=True)

    check_cw = commands.add_parser("check-cw", help="hypotheses under which the Reeb space is a CW complex")
    _add_functions(check_cw)
    check_cw.add_argument("--zf", nargs="*", type=float, default=[], help="exceptional heights")

    construct = commands.add_parser("construct", help="named functions, numbered pairs and rotations")
    _add_functions(construct, pair=False)
    target = construct.add_mutually_exclusive_group(required=True)
    target.add_argument("--theorem", choices=THEOREMS)
    target.add_argument("--name", help="catalogue entry, or 'rotate' to rotate the graph of --c1")
    construct.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    construct.add_argument("--count", type=int, default=5, help="witnesses per sign and side")

    stability = commands.add_parser("stability", help="Morse and stability verdicts")
    _add_functions(stability)

    manifold = commands.add_parser("manifold-check", help="sample and certify the defining hypersurface")
    _add_functions(manifold)
    manifold.add_argument("--m", type=int, default=2)
    manifold.add_argument("--n", type=int, default=1000)
    manifold.add_argument("--seed", type=int, default=0)

    oracle = commands.add_parser("oracle-compare", help="sweep against the brute-force grid quotient")
    _add_functions(oracle)
    oracle.add_argument("--heights", nargs=2, type=float, metavar=("H_MIN", "H_MAX"))
    oracle.add_argument("--n-t", dest="n_t", type=int, default=RunConfig.n_t)
    oracle.add_argument("--n-s", dest="n_s", type=int, default=RunConfig.n_s)

    for sub in commands.choices.values():
        _add_common(sub)
    return parser


def _parse_params(items: Sequence[str]) -> tuple:
    params = []
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
        params.append((key.strip(), yaml.safe_load(value)))
    return tuple(params)


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    tolerances = Tolerances.from_yaml(args.config) if getattr(args, "config", None) else Tolerances()
    values = {"command": args.command, "tolerances": tolerances}
    for name in ("c1", "c2", "c1_spec", "c2_spec", "expr", "a", "theorem", "name", "m", "n", "seed", "n_t", "n_s",
                 "format", "out", "artifact_dir", "count", "event_gap"):
        value = getattr(args, name, None)
        if value is not None:
            values[name] = value
    for name in ("window", "heights"):
        value = getattr(args, name, None)
        if value is not None:
            values[name] = tuple(value)
    if getattr(args, "points", None):
        values["points"] = tuple(args.points)
    if getattr(args, "zf", None):
        values["zf"] = tuple(args.zf)
    if getattr(args, "param", None):
        values["params"] = _parse_params(args.param)
    return RunConfig(**values)


def _write(document: bytes, out: Optional[str]) -> None:
    if out:
        os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
        with open(out, "wb") as file:
            file.write(document)
    else:
        sys.stdout.buffer.write(document)
        sys.stdout.flush()


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        run_config = run_config_from_args(args)
        outcome = AnalysisPipeline(run_config).run_pipeline()
        _write(outcome.document, run_config.out)
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)
    except UsageError as e:
        print(f"{TOOL_NAME}: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (ReebStripError, ReebStripException, ValueError, OSError) as e:
        logging.info(f"{type(e).__name__}: {e}")
        print(f"{TOOL_NAME}: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK if outcome.success else EXIT_VERDICT_FAILED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
