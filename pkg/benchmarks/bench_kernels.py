"""Compiled vs pure-Python state-sum kernels (and the reference sum).

    python3 benchmarks/bench_kernels.py [--repeat 3]

Prints one line per (algebra, link) with the best time of each backend and
checks that all three agree exactly.
"""

import argparse
import os
import time
from fractions import Fraction

from spininv import diagram as dg
from spininv import hennings as hn
from spininv import hopf as hp
from spininv import kernels

CASES = [
    ("D(Z2)", lambda: hp.group_algebra(2), [dg.torus_link_2(6), dg.trefoil_even()]),
    ("D(Z3)", lambda: hp.group_algebra(3), [dg.torus_link_2(6), dg.trefoil_even()]),
    ("D(Sweedler)", hp.sweedler, [dg.torus_link_2(4), dg.torus_link_2(6)]),
]


def label(D):
    basis = hp.quantum_characters(D)
    return [sum((k * f[i] for k, f in zip(range(1, 9), basis)), Fraction(0)) for i in range(D.n)]


def best(fn, repeat):
    out, t = None, float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        t = min(t, time.perf_counter() - t0)
    return out, t


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--reference", action="store_true", help="also time the Cyclotomic-free reference sum")
    args = ap.parse_args()
    print(f"compiled extension available: {kernels._compiled is not None}")
    print(f"{'algebra':12} {'link':10} {'states':>7} {'compiled':>10} {'python':>10} {'reference':>10} speedup")
    for name, make, links in CASES:
        D, Q, _ = hp.drinfeld_double(make())
        eng = hn.Engine.build(D, Q)
        f = label(D)
        for d in links:
            d = hn.prepare(d)
            walks = hn.component_walks(d)
            cross = [k for k, s in enumerate(d.slices) if s[0] in dg.CROSSINGS]
            plan = kernels.plan_state_sum(eng, d, walks, [f] * d.n_components, cross)
            vc, tc = best(lambda: kernels.run_plan(plan, "compiled")[0], args.repeat) \
                if kernels._compiled else (None, float("nan"))
            vp, tp = best(lambda: kernels.run_plan(plan, "python")[0], args.repeat)
            if args.reference:
                vr, tr = best(lambda: hn._reference_sum(eng, walks, [f] * d.n_components, cross), 1)
            else:
                vr, tr = vp, float("nan")
            agree = (vc is None or vc == vp) and vr == vp
            print(f"{name:12} {d.name:10} {eng.rho ** len(cross):7d} {tc:10.4f} {tp:10.4f} {tr:10.4f} "
                  f"{tp / tc if tc == tc else float('nan'):6.1f}x {'ok' if agree else 'MISMATCH'}")


if __name__ == "__main__":
    os.environ.pop("SPININV_KERNEL", None)
    main()
