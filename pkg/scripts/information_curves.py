#!/usr/bin/env python3
"""Emit the receiver/attacker information curves over a fidelity grid as
CSV, the data behind the crossing-point picture.

Usage:
    python scripts/information_curves.py --preset 3deb --points 151 \
        --output curves.csv
"""

import argparse
import csv
import sys

from qkdlab.security import information_sweep, resolve_preset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="3deb")
    ap.add_argument("--start", type=float, default=0.70)
    ap.add_argument("--stop", type=float, default=0.85)
    ap.add_argument("--points", type=int, default=151)
    ap.add_argument("--base", default="2", choices=["2", "3", "e"])
    ap.add_argument("--output", default=None, help="CSV path (default stdout)")
    args = ap.parse_args()

    preset = resolve_preset(args.preset)
    base = args.base if args.base == "e" else int(args.base)
    rows = information_sweep(preset, args.start, args.stop, args.points, base=base)

    fh = open(args.output, "w", newline="") if args.output else sys.stdout
    writer = csv.writer(fh)
    writer.writerow(["f_a", "f_b", "i_ab", "i_ae", "r_bound"]
                    + list(preset.free_params))
    for row in rows:
        writer.writerow(
            [f"{row['f_a']:.10g}",
             "" if row["f_b"] is None else f"{row['f_b']:.10g}",
             f"{row['i_ab']:.10g}", f"{row['i_ae']:.10g}", f"{row['r_bound']:.10g}"]
            + [f"{row['params'][p]:.10g}" for p in preset.free_params])
    if args.output:
        fh.close()
        print(f"wrote {len(rows)} rows to {args.output}", file=sys.stderr)


if __name__ == "__main__":
    main()
