"""Compare the numba and numpy kernels on render, sweep and micro workloads.

    python3 benchmarks/bench_backends.py [--scene PATH] [--frames N] [--csv OUT]

Both backends produce identical images; this only measures their speed.
"""

import argparse
import csv
import sys
from collections import defaultdict

from raybench.bench import backend_comparison


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--scene", help="scene for the render task (default: bundled simple.scene)")
    p.add_argument("--frames", type=int, default=3, help="frames averaged for render and sweep tasks")
    p.add_argument("--spheres", type=int, default=20_000)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--csv", help="also write raw rows here")
    args = p.parse_args(argv)

    rows = backend_comparison(args.scene, frames=args.frames, sweep_frames=args.frames,
                              micro=(args.spheres, args.repeats))
    table = defaultdict(dict)
    for r in rows:
        table[r["task"]][r["backend"]] = r["cpu_millis"]

    print(f"{'task':<22}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for task, cols in table.items():
        nb, npy = cols.get("numba"), cols.get("numpy")
        speedup = f"{npy / nb:.1f}x" if nb and npy else "-"
        print(f"{task:<22}{nb if nb is not None else float('nan'):>12.2f}{npy:>12.2f}{speedup:>10}")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["task", "backend", "cpu_millis"])
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
