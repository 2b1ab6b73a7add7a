#!/usr/bin/env python3
"""Reproduce the real-data reference imputation numbers.

Needs the converted benchmark datasets (see scripts/convert_dataset.py and the
README) in the directory given by --data-dir or $LRTC_DATA_DIR. Runs the two
reference configurations and checks the scores against their target bands:

  Guangzhou, 20% RM, theta 0.30  ->  MAPE 6.70 +- 0.35, RMSE 2.88 +- 0.15
  Seattle,   40% NM, theta 0.05  ->  MAPE 7.59 +- 0.40

Exits nonzero if a run lands outside its tolerance band.
"""

import argparse
import os
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from lrtc import MissingScenario, SolverConfig, load_tensor, run_experiment  # noqa: E402

TARGETS = [
    # file, pattern, rate, theta, target mape, mape tol, target rmse, rmse tol
    ("guangzhou.txt", "rm", 0.2, 0.30, 6.70, 0.35, 2.88, 0.15),
    ("seattle.txt", "nm", 0.4, 0.05, 7.59, 0.40, None, None),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--data-dir",
        default=os.environ.get("LRTC_DATA_DIR", "data"),
        help="directory holding the converted datasets",
    )
    parser.add_argument("--seed", type=int, default=2020, help="scenario mask seed")
    args = parser.parse_args()

    data_dir = Path(args.data_dir)
    failures = 0
    for name, pattern, rate, theta, mape_target, mape_tol, rmse_target, rmse_tol in TARGETS:
        path = data_dir / name
        if not path.exists():
            print(f"skipping {name}: not found in {data_dir} (see README for conversion)")
            continue
        print(f"{name}: {int(rate * 100)}% {pattern.upper()}, theta={theta} ...", flush=True)
        data, native = load_tensor(path)
        start = time.perf_counter()
        report = run_experiment(
            data,
            native,
            MissingScenario(pattern, rate, args.seed),
            SolverConfig(theta=theta),
        )
        elapsed = time.perf_counter() - start
        line = (
            f"  mape={report.mape:.2f} (target {mape_target:.2f} +- {mape_tol:.2f})  "
            f"rmse={report.rmse:.2f}"
        )
        if rmse_target is not None:
            line += f" (target {rmse_target:.2f} +- {rmse_tol:.2f})"
        line += f"  iterations={report.iterations}  {elapsed:.0f}s"
        print(line)
        ok = abs(report.mape - mape_target) <= mape_tol
        if rmse_target is not None:
            ok = ok and abs(report.rmse - rmse_target) <= rmse_tol
        print("  within tolerance" if ok else "  OUT OF TOLERANCE")
        failures += 0 if ok else 1
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
