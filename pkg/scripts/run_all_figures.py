#!/usr/bin/env python3
"""Run every figure preset, write CSV/SVG output, and print observed orders.

    python3 scripts/run_all_figures.py --out results/
    python3 scripts/run_all_figures.py --out results/ --only fig4 fig9
"""

import argparse
import logging
import time
from dataclasses import replace
from pathlib import Path

from quickfv.harness import NORMS, presets, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawTextHelpFormatter)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--only", nargs="*", help="subset of preset names")
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING)

    table = presets()
    names = args.only or list(table)
    unknown = set(names) - set(table)
    if unknown:
        ap.error(f"unknown presets: {', '.join(sorted(unknown))}")

    for name in names:
        t0 = time.perf_counter()
        result = run_experiment(replace(table[name], output_dir=args.out / name))
        print(f"== {name} ({time.perf_counter() - t0:.1f} s)")
        steady = result.spec.experiment.steady
        for run in result.runs:
            parts = []
            for norm in NORMS:
                t = run.table(norm, steady)
                if any(e is not None for e in t.errors) and len(t.hs) > 1:
                    # steady studies use the finest pair, unsteady the last-three-grid fit
                    order = t.finest_order if steady else t.fitted_order(3)
                    parts.append(f"{norm} {order:5.2f}")
            print(f"   {run.scheme.legend(steady):24s} " + "  ".join(parts))


if __name__ == "__main__":
    main()
