"""Argument parser, input validators and the resolved run configuration."""

import argparse
from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple

from projlab import __version__
from projlab.errors import ParseError
from projlab.lab.indexsets import MultiIndex

COMMANDS = ("compute", "sweep", "verify", "table")
FORMATS = ("json", "csv", "text")
SUITES = ("core", "full")
TABLES = ("boolean-limits", "grunbaum", "lebesgue", "harper")
GRID_KEYS = ("n", "m", "d", "k", "x", "theta")


def validate_int(value: Any, name: str, minimum: Optional[int] = None) -> Tuple[bool, Any]:
    """
    Validate an integer flag, optionally bounded below.
    """
    if value is None:
        return True, None
    try:
        value = int(value)
    except (ValueError, TypeError):
        return False, f"--{name} must be an integer"
    if minimum is not None and value < minimum:
        return False, f"--{name} must be >= {minimum}, got {value}"
    return True, value


def validate_float(value: Any, name: str, positive: bool = False) -> Tuple[bool, Any]:
    if value is None:
        return True, None
    try:
        value = float(value)
    except (ValueError, TypeError):
        return False, f"--{name} must be a number"
    if positive and not value > 0:
        return False, f"--{name} must be positive, got {value}"
    return True, value


def validate_format(fmt: Optional[str]) -> Tuple[bool, Any]:
    if fmt is None:
        return True, None
    fmt = fmt.strip().lower()
    if fmt not in FORMATS:
        return False, f"--format must be one of {', '.join(FORMATS)}"
    return True, fmt


def validate_degrees(text: Optional[str]) -> Tuple[bool, Any]:
    """
    Validate a comma-separated list of nonnegative integers ("0,1,2" or "[0, 1, 2]").
    """
    if text is None:
        return True, None
    cleaned = text.strip().strip("[]")
    if not cleaned:
        return False, "--degrees cannot be empty"
    try:
        degrees = [int(t) for t in cleaned.split(",") if t.strip()]
    except ValueError:
        return False, f"--degrees must be integers, got {text!r}"
    if any(d < 0 for d in degrees):
        return False, "--degrees must be nonnegative"
    return True, degrees


def validate_alpha(text: Optional[str]) -> Tuple[bool, Any]:
    if text is None:
        return True, None
    ok, entries = validate_degrees(text)
    if not ok:
        return False, entries.replace("--degrees", "--alpha")
    return True, MultiIndex(tuple(entries))


def validate_grid(specs: Optional[List[str]]) -> Tuple[bool, Any]:
    """
    Validate --grid name=v1,v2,... entries; returns [(name, [values])].
    """
    if not specs:
        return True, []
    grid = []
    for spec in specs:
        name, sep, values = spec.partition("=")
        name = name.strip()
        if not sep or name not in GRID_KEYS:
            return False, f"--grid must look like name=v1,v2 with name in {', '.join(GRID_KEYS)}"
        try:
            cast = float if name in ("x", "theta") else int
            parsed = [cast(v) for v in values.split(",") if v.strip()]
        except ValueError:
            return False, f"--grid values for {name} must be numbers"
        if not parsed:
            return False, f"--grid {name} has no values"
        grid.append((name, parsed))
    return True, grid


def require(result: Tuple[bool, Any]) -> Any:
    """Unwrap a validator result, raising ParseError on failure."""
    ok, value = result
    if not ok:
        raise ParseError(value)
    return value


@dataclass
class RunConfig:
    """Everything one CLI invocation needs, after defaults, file, env and flags."""
    command: str
    quantity: Optional[str] = None
    space: Optional[str] = None
    index_set: Optional[str] = None
    n: Optional[int] = None
    m: Optional[int] = None
    d: Optional[int] = None
    k: Optional[int] = None
    x: Optional[float] = None
    alpha: Optional[MultiIndex] = None
    degrees: Optional[List[int]] = None
    number_field: str = "complex"
    analytic: bool = False
    theta: Optional[float] = None
    cap: Optional[int] = None
    samples: int = 200000
    seed: int = 20240601
    workers: int = 1
    tol: float = 1e-9
    format: str = "json"
    out: Optional[str] = None
    grid: List[tuple] = field(default_factory=list)
    suite: str = "core"
    table: Optional[str] = None
    config: dict = field(default_factory=dict)

    def with_params(self, **params) -> "RunConfig":
        values = dict(self.__dict__)
        values.update(params)
        return RunConfig(**values)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file")
    common.add_argument("--samples", help="Monte Carlo sample count")
    common.add_argument("--seed", help="random seed (default from config)")
    common.add_argument("--workers", help="worker threads (default PROJLAB_WORKERS or config)")
    common.add_argument("--tol", help="verification tolerance")
    common.add_argument("--format", help="output format: json, csv or text")
    common.add_argument("--out", help="write data to this file instead of stdout")
    common.add_argument("--log-file", dest="log_file", help="also append log lines to this file")
    common.add_argument("--show-config", dest="show_config", action="store_true",
                        help="print the merged configuration to stderr")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--quantity", help="quantity id (see README)")
    params.add_argument("--space", help='lattice descriptor, e.g. "lr:2", "lorentz:2,1", "linf"')
    params.add_argument("--index-set", dest="index_set",
                        help='index set, e.g. "full:2", "tetra:3", "prime:30" or JSON')
    for name in ("n", "m", "d", "k"):
        params.add_argument(f"--{name}")
    params.add_argument("--x")
    params.add_argument("--alpha", help="multi-index, e.g. 1,2,0")
    params.add_argument("--degrees", help="degree set, e.g. 0,1,2")
    params.add_argument("--field", choices=("real", "complex"), default="complex")
    params.add_argument("--analytic", action="store_true", help="analytic Lebesgue constants")
    params.add_argument("--theta", help="interpolation parameter in (0, 1)")
    params.add_argument("--cap", help="enumeration cap for index sets (default from config)")

    parser = argparse.ArgumentParser(prog="projlab",
                                     description="Projection constants of polynomial spaces")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("compute", parents=[common, params], help="compute one quantity")
    sweep = sub.add_parser("sweep", parents=[common, params], help="compute over a parameter grid")
    sweep.add_argument("--grid", action="append", help="name=v1,v2,... (repeatable)")
    verify = sub.add_parser("verify", parents=[common], help="run the verification suite")
    verify.add_argument("--suite", choices=SUITES, default="core")
    table = sub.add_parser("table", parents=[common], help="reproduce a numeric table")
    table.add_argument("--table", choices=TABLES, required=True)
    return parser


def build_run_config(args: argparse.Namespace, config: dict) -> RunConfig:
    """Merge validated flags over the loaded config (flags win)."""
    run = config["run"]
    get = lambda name: getattr(args, name, None)
    fmt = require(validate_format(get("format")))
    if fmt is None:
        fmt = "csv" if args.command == "sweep" else run["format"]

    def pick(value, default):
        return default if value is None else value

    rc = RunConfig(
        command=args.command,
        quantity=get("quantity"),
        space=get("space"),
        index_set=get("index_set"),
        n=require(validate_int(get("n"), "n", 0)),
        m=require(validate_int(get("m"), "m", 0)),
        d=require(validate_int(get("d"), "d", 0)),
        k=require(validate_int(get("k"), "k", 0)),
        x=require(validate_float(get("x"), "x", positive=True)),
        alpha=require(validate_alpha(get("alpha"))),
        degrees=require(validate_degrees(get("degrees"))),
        number_field=get("field") or "complex",
        analytic=bool(get("analytic")),
        theta=require(validate_float(get("theta"), "theta")),
        cap=require(validate_int(get("cap"), "cap", 1)),
        samples=pick(require(validate_int(get("samples"), "samples", 1)), run["samples"]),
        seed=pick(require(validate_int(get("seed"), "seed", 0)), run["seed"]),
        workers=pick(require(validate_int(get("workers"), "workers", 1)), run["workers"]),
        tol=pick(require(validate_float(get("tol"), "tol", positive=True)), run["tol"]),
        format=fmt,
        out=get("out"),
        grid=require(validate_grid(get("grid"))),
        suite=get("suite") or "core",
        table=get("table"),
        config=config,
    )
    if rc.command in ("compute", "sweep") and not rc.quantity:
        raise ParseError(f"{rc.command} needs --quantity")
    if rc.command == "sweep" and not rc.grid:
        raise ParseError("sweep needs at least one --grid name=v1,v2")
    return rc


def config_overrides(rc: RunConfig) -> dict:
    """The flag values that also belong in the config dict."""
    return {"seed": rc.seed, "samples": rc.samples, "workers": rc.workers,
            "format": rc.format, "tol": rc.tol, "enumeration.cap": rc.cap}

