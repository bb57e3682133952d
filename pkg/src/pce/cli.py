"""Command-line front end.

    pce <static|dynamic|heatmap|dip|oracle-check> [--config FILE] [--out PATH]
        [--workers N] [--log-base {2,e}] [--interaction NAME] [--json]

Exit codes: 0 success, 2 invalid configuration, 3 failed oracle gate.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .checks import run_oracle_check
from .physics import INTERACTIONS
from .sweeps import ConfigError, render_csv, render_jsonl, run, spec_from_config

EXIT_OK, EXIT_CONFIG, EXIT_GATE = 0, 2, 3
SUBCOMMANDS = {"static": "static", "dynamic": "dynamic", "heatmap": "heatmap", "dip": "dip",
               "oracle-check": "oracle"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pce", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="JSON sweep specification")
        p.add_argument("--out", help="output path; stdout when omitted")
        p.add_argument("--workers", type=int, help="worker processes (default: $PCE_WORKERS or 1)")
        p.add_argument("--log-base", dest="log_base", choices=["2", "e"])
        p.add_argument("--interaction", choices=INTERACTIONS)
        p.add_argument("--json", action="store_true",
                       help="also write a JSON-lines mirror (PATH.jsonl), or JSON lines on stdout")
    return parser


def _load_config(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    return data


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, newline="")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    mode = SUBCOMMANDS[args.command]
    try:
        overrides = {"out": args.out, "workers": args.workers, "log_base": args.log_base,
                     "interaction": args.interaction}
        spec = spec_from_config(_load_config(args.config), mode, overrides)
    except ConfigError as exc:
        print(f"pce: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if mode == "oracle":
        report = run_oracle_check(spec)
        _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", spec.out)
        if not report["passed"]:
            print(f"pce: failed gates: {', '.join(report['failed_gates'])}", file=sys.stderr)
            return EXIT_GATE
        return EXIT_OK

    table = run(spec)
    if args.json and spec.out is None:
        _emit(render_jsonl(table), None)
        return EXIT_OK
    _emit(render_csv(table), spec.out)
    if args.json:
        Path(spec.out).with_suffix(".jsonl").write_text(render_jsonl(table))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
