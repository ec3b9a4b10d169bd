"""Command-line front end: ``madcap classify|capacity|sweep|figure``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import capacity as cap
from . import channel as ch
from . import sweep as sw
from .degradability import classify

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with default values; flags win")
    p.add_argument("--tol", type=float, default=None, help="numerical tolerance")


def _rates(p: argparse.ArgumentParser) -> None:
    for k in ("g1", "g2", "g3"):
        p.add_argument(f"--{k}", type=float, default=None, help=f"rate {k} (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="madcap", description="Multi-level amplitude damping channel tools.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="degradability report as JSON")
    _rates(p)
    _common(p)

    p = sub.add_parser("capacity", help="capacity value or bounds as JSON")
    _rates(p)
    p.add_argument("-q", "--q", dest="q", choices=("q", "cp", "qe"), default=None)
    _common(p)

    p = sub.add_parser("sweep", help="grid sweep over a plane, CSV output")
    p.add_argument("--plane", default=None, help="g2=0, g1=1, g1=0, g3=0, g2+g3=1, ...")
    p.add_argument("--step", type=float, default=None, help="grid step (default 0.01)")
    p.add_argument("-q", "--q", dest="q", default=None,
                   help="comma list from q,cp,qe,classify (default q)")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    _common(p)

    p = sub.add_parser("figure", help="write the CSV data behind a figure")
    p.add_argument("id", type=int, help=f"figure id, one of {sorted(sw.FIGURES)}")
    p.add_argument("--out", default=None, help="output directory (default .)")
    p.add_argument("--step", type=float, default=None, help="surface grid step (default 0.05)")
    _common(p)
    return parser


def _merge(args: argparse.Namespace) -> dict:
    """Config-file values overlaid by explicitly given flags."""
    conf: dict = {}
    if args.config:
        try:
            conf = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise OSError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {args.config} is not valid JSON: {exc}") from exc
        if not isinstance(conf, dict):
            raise UsageError("config must be a JSON object")
    flags = {k: v for k, v in vars(args).items() if v is not None and k not in ("config", "command")}
    return {**conf, **flags}


def _gamma(opts: dict) -> tuple[float, float, float]:
    if "rates" in opts:
        rv = ch.as_rate_vector(ch.rates_from_json(opts))
        g = (rv.g1, rv.g2, rv.g3)
    else:
        g = tuple(opts.get(k, 0.0) for k in ("g1", "g2", "g3"))
    try:
        return tuple(float(x) for x in g)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"rates must be decimals: {exc}") from exc


def _invalid(g) -> int | None:
    problems = ch.validate_rates(g)
    if problems:
        print(f"non-CPTP rates {list(g)}: " + "; ".join(problems), file=sys.stderr)
        return EXIT_INVALID
    return None


def cmd_classify(opts: dict) -> int:
    g = _gamma(opts)
    if (code := _invalid(g)) is not None:
        return code
    report = classify(g, float(opts.get("tol", 1e-9))).to_json()
    print(json.dumps(report, indent=2, default=str))
    return EXIT_OK


def cmd_capacity(opts: dict) -> int:
    g = _gamma(opts)
    quantity = str(opts.get("q", "q")).lower()
    if quantity not in ("q", "cp", "qe"):
        raise UsageError(f"unknown quantity {quantity!r}")
    if (code := _invalid(g)) is not None:
        return code
    est = cap.capacity(g, quantity)
    print(json.dumps({"g": list(g), "quantity": quantity, **est.to_json()}, indent=2))
    return EXIT_OK


def _quantities(q) -> tuple[str, ...]:
    if q is None:
        return ("q",)
    items = q if isinstance(q, list) else str(q).split(",")
    return tuple(s.strip().lower() for s in items if s.strip())


def cmd_sweep(opts: dict) -> int:
    if "plane" not in opts:
        raise UsageError("sweep needs --plane")
    try:
        config = sw.SweepConfig(plane=str(opts["plane"]), step=float(opts.get("step", 0.01)),
                                quantities=_quantities(opts.get("q")), out=opts.get("out"),
                                tol=float(opts.get("tol", 1e-9)))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if config.out:
        Path(config.out).open("a").close()
    text = sw.sweep_csv(config)
    if not config.out:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_figure(opts: dict) -> int:
    fig = int(opts["id"])
    if fig not in sw.FIGURES:
        raise UsageError(f"unknown figure {fig}; available: {sorted(sw.FIGURES)}")
    step = float(opts.get("step", 0.05))
    if not 0.0 < step <= 0.5:
        raise UsageError(f"step must lie in (0, 0.5], got {step}")
    for path in sw.figure(fig, opts.get("out", "."), step=step):
        print(path)
    return EXIT_OK


COMMANDS = {"classify": cmd_classify, "capacity": cmd_capacity,
            "sweep": cmd_sweep, "figure": cmd_figure}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](_merge(args))
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"madcap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ch.InvalidRatesError as exc:
        print(f"non-CPTP rates: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"madcap: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
