"""
Command-line front end.

Subcommands: fourier, conv, opnorm, pego, aa, paper-check. Reports go to
--output (or stdout) as JSON or CSV. Exit codes: 0 success / verdict pass,
2 bad input, 3 verdict fail, 4 inconsistent covering-number cross-check.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Literal

import polars as pl
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError

sys.path.insert(0, str(Path(__file__).parent.parent))

from lca_pego.compactness import aa_check, oracle_cross_check, pego_check  # noqa: E402
from lca_pego.config import DEFAULT_DUAL_GRID, DEFAULT_EPS_SCHEDULE, DEFAULT_SEED, Thresholds  # noqa: E402
from lca_pego.errors import InvalidSpec, LcaPegoError  # noqa: E402
from lca_pego.families import DEFAULT_COUNTS, build_family  # noqa: E402
from lca_pego.groups import GroupModel, ZWindow, make_group  # noqa: E402
from lca_pego.operator import norm_report  # noqa: E402
from lca_pego.reporting import (  # noqa: E402
    dual_frame,
    error_json,
    function_frame,
    load_json,
    parse_family,
    parse_function,
    to_json,
    write_output,
)
from lca_pego.transform import Norm, character_at_maximum, convolve, fourier, norm, truncation_loss  # noqa: E402
from scripts.paper_check import print_summary, run_paper_check  # noqa: E402

logger = logging.getLogger("lca_pego.cli")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAIL = 3
EXIT_INCONSISTENT = 4


class RunConfig(BaseModel):
    """Validated subcommand parameters."""

    model_config = ConfigDict(frozen=True)

    command: str
    group: dict[str, Any] | None = None
    dual_grid: PositiveInt | None = None
    inputs: list[Path] = Field(default_factory=list)
    builtin: str | None = None
    count: PositiveInt | None = None
    dim: PositiveInt = 3
    eps: tuple[PositiveFloat, ...] = DEFAULT_EPS_SCHEDULE
    thresholds: Thresholds = Thresholds()
    iterations: PositiveInt = 500
    seed: int = DEFAULT_SEED
    output: Path | None = None
    format: Literal["json", "csv"] = "json"


class StructuredErrorParser(argparse.ArgumentParser):
    """Argument errors leave as the same JSON error object as every other bad input."""

    def error(self, message: str):
        sys.stderr.write(error_json("ArgumentError", message) + "\n")
        sys.exit(EXIT_INVALID)


def _eps_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None
    if not values or any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("eps values must be positive")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = StructuredErrorParser(prog="lca-pego", description="Harmonic analysis and compactness diagnostics")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--output", "-o", type=Path, help="Output file (default: stdout)")
        sub.add_argument("--format", choices=["json", "csv"], default="json", help="Report format (default: json)")
        sub.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"Random seed (default: {DEFAULT_SEED})")
        sub.add_argument("--verbose", "-v", action="store_true", help="Log progress to stderr")

    def grouped(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--group", help="Group spec as inline JSON or a path to a JSON file")
        sub.add_argument("--dual-grid", type=int, help=f"Dual grid size M (default: {DEFAULT_DUAL_GRID} on ZWindow)")

    fourier_parser = subparsers.add_parser("fourier", help="Fourier transform of one function")
    grouped(fourier_parser)
    fourier_parser.add_argument("--input", nargs=1, required=True, type=Path, help="Function JSON")
    common(fourier_parser)

    conv_parser = subparsers.add_parser("conv", help="Convolution of two functions")
    grouped(conv_parser)
    conv_parser.add_argument("--input", nargs=2, required=True, type=Path, help="Two function JSON files")
    common(conv_parser)

    opnorm_parser = subparsers.add_parser("opnorm", help="Operator norm of a convolution operator")
    grouped(opnorm_parser)
    opnorm_parser.add_argument("--input", nargs=1, required=True, type=Path, help="Kernel JSON")
    opnorm_parser.add_argument("--iterations", type=int, default=500, help="Power-iteration budget (default: 500)")
    common(opnorm_parser)

    for name, label in (("pego", "Pego criteria P1-P3"), ("aa", "Arzela-Ascoli criteria AA1-AA3")):
        sub = subparsers.add_parser(name, help=f"{label} on a family")
        grouped(sub)
        source = sub.add_mutually_exclusive_group(required=True)
        source.add_argument("--input", nargs=1, type=Path, help="Family JSON")
        source.add_argument("--builtin", help="Builtin family tag")
        sub.add_argument("--count", type=int, help="Members of the builtin family")
        sub.add_argument("--dim", type=int, default=3, help="Span dimension for span_random (default: 3)")
        sub.add_argument("--eps", type=_eps_list, default=DEFAULT_EPS_SCHEDULE, help="Comma-separated eps schedule")
        sub.add_argument("--thresholds", help="Threshold overrides as JSON")
        common(sub)

    check_parser = subparsers.add_parser("paper-check", help="Run the pinned claim suite")
    common(check_parser)
    return parser


def _group_document(text: str) -> dict[str, Any]:
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as e:
            raise InvalidSpec(f"malformed group JSON: {e}") from e
    document = load_json(stripped)
    if not isinstance(document, dict):
        raise InvalidSpec("a group spec is a JSON object")
    return document


def _config(args: argparse.Namespace) -> RunConfig:
    thresholds = getattr(args, "thresholds", None)
    values = {
        "command": args.command,
        "group": _group_document(args.group) if getattr(args, "group", None) else None,
        "dual_grid": getattr(args, "dual_grid", None),
        "inputs": getattr(args, "input", None) or [],
        "builtin": getattr(args, "builtin", None),
        "count": getattr(args, "count", None),
        "dim": getattr(args, "dim", 3),
        "eps": getattr(args, "eps", DEFAULT_EPS_SCHEDULE),
        "thresholds": Thresholds.model_validate_json(thresholds) if thresholds else Thresholds(),
        "iterations": getattr(args, "iterations", 500),
        "seed": args.seed,
        "output": args.output,
        "format": args.format,
    }
    return RunConfig(**values)


def _require_group(config: RunConfig) -> GroupModel:
    if config.group is None:
        raise InvalidSpec(f"{config.command} needs --group")
    return make_group(config.group)


def _dual_grid(config: RunConfig, group: GroupModel) -> int | None:
    if config.dual_grid is None and isinstance(group.kind, ZWindow):
        return DEFAULT_DUAL_GRID
    return config.dual_grid


def _emit(config: RunConfig, payload: dict[str, Any], frame: pl.DataFrame) -> None:
    body = frame if config.format == "csv" else to_json(payload)
    text = write_output(body, config.output)
    if text is not None:
        sys.stdout.write(text)


def cmd_fourier(config: RunConfig) -> int:
    group = _require_group(config)
    f = parse_function(load_json(config.inputs[0]), group)
    F = fourier(f, _dual_grid(config, group))
    index, peak = character_at_maximum(F)
    payload = {
        "command": "fourier",
        "group": group.describe(),
        "dual": F.dual.describe(),
        "name": f.name,
        "norms": {p.value: norm(F, p) for p in Norm},
        "source_norms": {p.value: norm(f, p) for p in Norm},
        "argmax": {"index": list(index), "value": peak},
        "values": F.values.ravel(),
    }
    _emit(config, payload, dual_frame(F))
    return EXIT_OK


def cmd_conv(config: RunConfig) -> int:
    group = _require_group(config)
    f = parse_function(load_json(config.inputs[0]), group)
    g = parse_function(load_json(config.inputs[1]), group)
    result = convolve(f, g)
    loss = truncation_loss(f, g)
    if loss > 0:
        logger.warning("convolution lost %.6g of L1 mass outside the window", loss)
    payload = {
        "command": "conv",
        "group": group.describe(),
        "name": result.name,
        "truncation_loss": loss,
        "norms": {p.value: norm(result, p) for p in Norm},
        "values": result.values.ravel(),
    }
    _emit(config, payload, function_frame(result))
    return EXIT_OK


def cmd_opnorm(config: RunConfig) -> int:
    group = _require_group(config)
    f = parse_function(load_json(config.inputs[0]), group)
    report = norm_report(f, config.iterations, config.seed, _dual_grid(config, group))
    row = report.model_dump(exclude={"group"})
    _emit(config, {"command": "opnorm", **report.model_dump()}, pl.DataFrame([row]))
    return EXIT_OK


def _family(config: RunConfig):
    if config.builtin is not None:
        params = {"dim": config.dim, "seed": config.seed} if config.builtin == "span_random" else {}
        return build_family(config.builtin, config.count or DEFAULT_COUNTS.get(config.builtin), **params)
    group = _require_group(config)
    return parse_family(load_json(config.inputs[0]), group)


def _criteria_command(config: RunConfig) -> int:
    family = _family(config)
    criteria = config.command
    grid_size = config.dual_grid
    payload: dict[str, Any] = {"command": criteria}
    cross = None
    if family.generator is not None:
        cross = oracle_cross_check(family, config.thresholds, config.eps, criteria, True, grid_size)
        report = cross.prefix
        payload["report"] = report
        payload["cross_check"] = cross.model_dump(exclude={"prefix"})
    else:
        if criteria == "pego":
            report = pego_check(family, config.thresholds, config.eps, grid_size)
        else:
            report = aa_check(family, config.thresholds, config.eps)
        payload["report"] = report
    _emit(config, payload, report.to_frame())

    if cross is not None and not cross.consistent:
        return EXIT_INCONSISTENT
    passed = cross.criteria_passed if cross is not None else report.passed
    return EXIT_OK if passed else EXIT_FAIL


def cmd_pego(config: RunConfig) -> int:
    return _criteria_command(config)


def cmd_aa(config: RunConfig) -> int:
    return _criteria_command(config)


def cmd_paper_check(config: RunConfig) -> int:
    result = run_paper_check()
    print_summary(result, sys.stderr)
    frame = pl.DataFrame([c.model_dump() for c in result.claims])
    _emit(config, {"command": "paper-check", **result.model_dump()}, frame)
    return EXIT_OK if result.passed else EXIT_FAIL


COMMANDS = {
    "fourier": cmd_fourier,
    "conv": cmd_conv,
    "opnorm": cmd_opnorm,
    "pego": cmd_pego,
    "aa": cmd_aa,
    "paper-check": cmd_paper_check,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = _config(args)
        return COMMANDS[config.command](config)
    except LcaPegoError as e:
        sys.stderr.write(error_json(e.kind, str(e)) + "\n")
    except ValidationError as e:
        sys.stderr.write(error_json("InvalidSpec", str(e)) + "\n")
    except json.JSONDecodeError as e:
        sys.stderr.write(error_json("InvalidSpec", f"malformed JSON: {e}") + "\n")
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
