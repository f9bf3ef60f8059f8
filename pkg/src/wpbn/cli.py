"""Command-line entry point: ``wpbn {analyze,simulate,sweep,validate} SPEC``.

SPEC is a TOML spec file or the name of a bundled figure spec (fig3a ...
fig8). Exit codes: 0 success, 1 spec or configuration error, 2 numerical
failure in at least one cell, 3 I/O error.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .errors import ConfigurationError
from .experiment import BUNDLED, load_spec, resolve_spec, run, with_overrides, write_csv

EXIT_OK, EXIT_SPEC, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wpbn", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "analyze": "evaluate the analytic methods of a spec",
        "simulate": "run the simulation models of a spec",
        "sweep": "run both analytic methods and simulation models",
        "validate": "load and validate a spec without running it",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("spec", help=f"spec file or bundled name ({', '.join(BUNDLED)})")
        p.add_argument("--seed", type=int, help="override the spec's master seed")
        p.add_argument("--trials", type=int, help="override simulation trials for every series")
        p.add_argument("--out", type=Path, help="override the output directory")
        if name != "validate":
            p.add_argument("--workers", type=int, default=1, help="processes for independent cells")
            p.add_argument("--timing", action="store_true",
                           help="fill the wall_time_s column (makes the CSV run-dependent)")
            p.add_argument("--no-plot", action="store_true", help="skip the SVG")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(resolve_spec(args.spec))
        spec = with_overrides(spec, args.seed, args.trials, args.out)
        if args.command == "analyze":
            spec = dataclasses.replace(spec, models=())
        elif args.command == "simulate":
            spec = dataclasses.replace(spec, methods=())
        if not (spec.methods or spec.models):
            print(f"error: spec {spec.name!r} has nothing to {args.command}", file=sys.stderr)
            return EXIT_SPEC
        if args.command == "validate":
            n = len(spec.all_series()) * len(spec.sweep_values) * (len(spec.methods) + len(spec.models))
            print(f"{spec.name}: ok ({n} cells, sweep {spec.sweep_parameter} over {len(spec.sweep_values)} values)")
            return EXIT_OK
        result = run(spec, workers=args.workers, write=False)
        out_dir = Path(spec.output_dir)
        csv_path = write_csv(result, out_dir / f"{spec.name}.csv", timing=args.timing)
        print(f"wrote {csv_path}")
        if not args.no_plot:
            from .experiment import emit_plot

            print(f"wrote {emit_plot(result, out_dir / f'{spec.name}.svg')}")
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if result.failed:
        for r in result.rows:
            if r.status != "ok":
                print(f"cell {result.swept_param}={r.value!r} {r.method}: {r.status}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
