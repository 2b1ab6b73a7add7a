#!/usr/bin/env python3
"""One-time conversion of distributed array files into the dense text format.

The public traffic datasets ship as MATLAB or NumPy array files holding either
the (location, day, interval) tensor directly or the stacked
location x (day * interval) matrix. This script dumps them into the package's
dense format (header line plus whitespace-separated values, ``nan`` marking
missing entries) so the toolkit never needs a binary-format parser.

Examples
--------
A 3-d tensor stored in a .mat file under the variable name "tensor":

    python scripts/convert_dataset.py tensor.mat data/guangzhou.txt --key tensor

A year-long speed matrix (locations x 365*288), keeping January's 28 days:

    python scripts/convert_dataset.py speed.npz data/seattle.txt \
        --key speed_matrix_2015 --dims 365 288 --days-limit 28

NaN entries are written as ``nan``; pass --zero-as-missing for datasets that
encode missing readings as exact zeros.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from lrtc import save_tensor  # noqa: E402


def load_array(path, key=None):
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".npy":
        return np.load(path)
    if suffix == ".npz":
        bundle = np.load(path)
        if key is not None:
            return bundle[key]
        candidates = [k for k in bundle.files if np.asarray(bundle[k]).ndim in (2, 3)]
        if len(candidates) != 1:
            raise SystemExit(
                f"{path}: pick one of {bundle.files} with --key (found {candidates})"
            )
        return bundle[candidates[0]]
    if suffix == ".mat":
        try:
            from scipy.io import loadmat
        except ImportError:
            raise SystemExit("converting .mat files needs scipy (pip install scipy)")
        bundle = loadmat(path)
        if key is not None:
            return np.asarray(bundle[key])
        candidates = {
            k: np.asarray(v)
            for k, v in bundle.items()
            if not k.startswith("__") and np.asarray(v).ndim in (2, 3)
        }
        if len(candidates) != 1:
            raise SystemExit(
                f"{path}: pick one of {sorted(candidates)} with --key"
            )
        return next(iter(candidates.values()))
    raise SystemExit(f"{path}: unsupported file type {suffix!r} (expected .mat/.npy/.npz)")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("input", help=".mat/.npy/.npz array file")
    parser.add_argument("output", help="dense-format destination")
    parser.add_argument("--key", default=None, help="variable name inside the file")
    parser.add_argument(
        "--dims",
        nargs=2,
        type=int,
        metavar=("DAYS", "INTERVALS"),
        default=None,
        help="day/interval split when the source is a 2-d matrix",
    )
    parser.add_argument(
        "--days-limit", type=int, default=None, help="keep only the first N days"
    )
    parser.add_argument(
        "--transpose", action="store_true", help="transpose a 2-d source first"
    )
    parser.add_argument(
        "--zero-as-missing",
        action="store_true",
        help="treat exact zeros as missing entries",
    )
    args = parser.parse_args()

    array = np.asarray(load_array(args.input, args.key), dtype=float)
    if array.ndim == 2:
        if args.transpose:
            array = array.T
        if args.dims is None:
            raise SystemExit("a 2-d source needs --dims DAYS INTERVALS")
        days, intervals = args.dims
        if array.shape[1] != days * intervals:
            raise SystemExit(
                f"matrix has {array.shape[1]} columns, but days*intervals = {days * intervals}"
            )
        array = array.reshape(array.shape[0], days, intervals)
    elif array.ndim != 3:
        raise SystemExit(f"expected a 2-d or 3-d array, got shape {array.shape}")

    if args.days_limit is not None:
        array = array[:, : args.days_limit, :]

    mask = np.isfinite(array)
    if args.zero_as_missing:
        mask &= array != 0.0
    tensor = np.where(mask, array, 0.0)
    save_tensor(args.output, tensor, mask=mask)
    observed = mask.mean()
    print(
        f"wrote {args.output}: dims {tensor.shape}, "
        f"{100 * (1 - observed):.2f}% natively missing"
    )


if __name__ == "__main__":
    main()
