#!/usr/bin/env python3
"""Enumerate small Steinberg groups and cut out the kernel of phi.

Usage: python scripts/compute_k2.py [SYSTEM RING]...

With no arguments runs the stock desk instances.  The z/4 instance is the
interesting one: the kernel is the order-2 group generated by the class of
the symbol {-1,-1}, and the run confirms its centrality exhaustively.

    python scripts/compute_k2.py A2 f2 A3 f2 A2 z/4
"""

import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from steinberg.fp import k2_compute
from steinberg.rings import make_ring
from steinberg.roots import build_system


def main():
    args = sys.argv[1:]
    pairs = list(zip(args[::2], args[1::2])) or [("A2", "f2"), ("A3", "f2"), ("A2", "z/4")]
    for sysname, ringspec in pairs:
        datum = build_system(sysname)
        ring = make_ring(ringspec)
        cross = ringspec == "f2"  # the packed BFS cross-check is cheap over f2
        t0 = time.perf_counter()
        rep = k2_compute(datum, ring, cross_check=cross)
        dt = time.perf_counter() - t0
        line = (
            f"{sysname} over {ringspec}: |St| = {rep.st_order} = "
            f"{rep.kernel_order} x {rep.image_order}"
        )
        if rep.bfs_image_order is not None:
            line += f" (image confirmed by BFS: {rep.bfs_image_order})"
        line += f", kernel central: {rep.central}  [{dt:.1f}s]"
        print(line)
        if rep.witnesses:
            print("  NON-CENTRAL WITNESSES:", rep.witnesses[:5])
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
