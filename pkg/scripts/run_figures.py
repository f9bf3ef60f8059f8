"""Run the bundled figure specs and write CSV + SVG for each.

Usage:
    python scripts/run_figures.py [--out DIR] [--workers N] [--golden] [NAME ...]

With ``--golden`` the CSVs are written next to the bundled specs, replacing
the reference outputs that the reproducibility test compares against.
"""
import argparse
import dataclasses
import time
from pathlib import Path

from wpbn.experiment import BUNDLED, bundled_spec_path, emit_plot, golden_csv_path, load_spec, run, write_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("names", nargs="*", default=list(BUNDLED))
    parser.add_argument("--out", type=Path, default=Path("figures"))
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--golden", action="store_true", help="also refresh the bundled golden CSVs")
    args = parser.parse_args()
    for name in args.names:
        spec = dataclasses.replace(load_spec(bundled_spec_path(name)), output_dir=args.out)
        t0 = time.perf_counter()
        result = run(spec, workers=args.workers, write=False)
        write_csv(result, args.out / f"{name}.csv")
        emit_plot(result, args.out / f"{name}.svg")
        if args.golden:
            write_csv(result, golden_csv_path(name))
        status = "some cells failed" if result.failed else "ok"
        print(f"{name}: {status}, {time.perf_counter() - t0:.0f} s", flush=True)


if __name__ == "__main__":
    main()
