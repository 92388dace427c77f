"""
homgrow command line.

    homgrow homology --example circle --levels 3
    homgrow tower --example torus2 --levels 1,2,4,8 --moduli-pattern i,i --primes 2,3
    homgrow verify --suite rho-identity --count 500
    homgrow export --example torus3 --out torus3.json

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from pydantic import ValidationError as PydanticValidationError

from ..application.use_cases import cmd_export, cmd_homology, cmd_tower, cmd_verify
from ..config.settings import load_settings
from ..domain.enums import Command, OutputFormat, Suite
from ..domain.errors import DomainError, HypothesisViolated, ParseError, ValidationError, VerificationError
from ..infrastructure.examples import ExampleLibrary
from ..infrastructure.report_writer import PandasReportWriter
from ..infrastructure.schemas import ExperimentConfig, parse_model
from ..utils.logging_utils import configure_logging, get_logger

logger = get_logger("cli")

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _common(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--input", dest="input_path", help="JSON chain-complex document.")
    source.add_argument("--example", help="Builtin example name or mapping_torus:[[a,b],[c,d]].")
    parser.add_argument("--levels", type=_int_list, default=[], help="Tower indices, e.g. 1,2,4,8.")
    parser.add_argument("--moduli-pattern", dest="moduli_pattern", help="Moduli per index, e.g. i,i or i,1.")
    parser.add_argument("--primes", type=_int_list, default=[], help="Primes for mod-p Betti numbers.")
    parser.add_argument("--max-degree", dest="max_degree", type=int)


def _output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.CSV.value)
    parser.add_argument("--out", help="Output path; stdout when omitted.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homgrow",
        description="Homological growth invariants along towers of finite quotients.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    homology = sub.add_parser(Command.HOMOLOGY.value, help="Homology and torsion data of one level.")
    _common(homology)
    _output(homology)

    tower = sub.add_parser(Command.TOWER.value, help="Normalized invariants along a tower.")
    _common(tower)
    _output(tower)
    tower.add_argument("--jobs", type=int, help="Levels computed in parallel.")
    tower.add_argument("--torsion-tolerance", dest="torsion_tolerance", type=float)

    verify = sub.add_parser(Command.VERIFY.value, help="Seeded verification suites.")
    _output(verify)
    verify.add_argument("--suite", choices=[s.value for s in Suite])
    verify.add_argument("--count", type=int, help="Cases per randomized suite.")
    verify.add_argument("--seed", type=int)
    verify.add_argument("--threshold-alpha", dest="threshold_alpha", type=float)
    verify.add_argument("--torsion-tolerance", dest="torsion_tolerance", type=float)

    export = sub.add_parser(Command.EXPORT.value, help="Write a complex as a JSON document.")
    source = export.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", dest="input_path")
    source.add_argument("--example")
    export.add_argument("--out", help="Output path; stdout when omitted.")
    return parser


def _config(args: argparse.Namespace) -> ExperimentConfig:
    data = {k: v for k, v in vars(args).items() if v is not None}
    return parse_model(ExperimentConfig, data)


def _run(config: ExperimentConfig) -> int:
    source = ExampleLibrary()
    sink = PandasReportWriter()
    command = Command(config.command)
    if command is Command.HOMOLOGY:
        text = cmd_homology(config, source, sink).text
    elif command is Command.TOWER:
        text = cmd_tower(config, source, sink).text
    elif command is Command.EXPORT:
        text = cmd_export(config, source, sink).text
    else:
        result = cmd_verify(config, sink)
        if not config.out:
            sys.stdout.write(result.text)
        return EXIT_OK if result.ok else EXIT_VERIFICATION
    if not config.out:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = load_settings()
    configure_logging(settings.log_level, settings.log_file)
    args = build_parser().parse_args(argv)
    try:
        return _run(_config(args))
    except PydanticValidationError as exc:
        logger.error("invalid options: %s", exc)
        return EXIT_INPUT
    except (ParseError, ValidationError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INPUT
    except (VerificationError, HypothesisViolated) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_VERIFICATION
    except DomainError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
