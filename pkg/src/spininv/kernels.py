"""Backend selection and integer scaling for the state-sum fast path.

The compiled extension is used when it imports; ``SPININV_KERNEL=python``
forces the pure-Python twin.  Either way the data are scaled to integers and
the exact rational value is recovered afterwards, so both backends return
identical Fractions.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels_py
from .cyclotomic import Cyclotomic

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

INT64_SAFE = 2 ** 62


def backend() -> str:
    choice = os.environ.get("SPININV_KERNEL", "auto")
    if choice == "python" or _compiled is None:
        return "python"
    return "compiled"


def _rational(x):
    if isinstance(x, Cyclotomic):
        return x.c[0] if x.is_rational() else None
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return None


def _lcm_den(values) -> int:
    d = 1
    for v in values:
        d = d * v.denominator // math.gcd(d, v.denominator)
    return d


@dataclass
class Plan:
    n: int
    rho: int
    ncross: int
    mult_off: np.ndarray
    mult_k: np.ndarray
    mult_c: np.ndarray
    V: np.ndarray
    slot_cross: np.ndarray
    comp_start: np.ndarray
    L: np.ndarray
    denominator: int
    constant: Fraction  # product of values of slot-free components
    bound: int


def plan_state_sum(eng, d, walks, labels, cross):
    """Integer data for the kernel, or None when some datum is irrational."""
    from .hennings import _label_vector

    H = eng.H
    n, rho = H.n, eng.rho
    pos = {s: i for i, s in enumerate(cross)}
    mult = {}
    for (i, j), t in H.mult.items():
        row = {}
        for k, c in t.items():
            q = _rational(c)
            if q is None:
                return None
            row[k] = q
        mult[(i, j)] = row
    dm = _lcm_den(q for row in mult.values() for q in row.values())
    slots, constant, lab_rows = [], Fraction(1), []
    comp_start = [0]
    for w, f in zip(walks, labels):
        vec = [_rational(x) for x in _label_vector(eng, f, w.agrees)]
        if any(v is None for v in vec):
            return None
        if not w.slots:
            constant *= sum((vec[i] * c for i, c in H.one().items()), Fraction(0))
            continue
        for sl in w.slots:
            per_k = []
            for k in range(rho):
                x = eng.factor(sl.factor, k, sl.rotation)
                row = [Fraction(0)] * n
                for i, c in x.items():
                    q = _rational(c)
                    if q is None:
                        return None
                    row[i] = q
                per_k.append(row)
            slots.append((pos[sl.slice], per_k))
        comp_start.append(len(slots))
        lab_rows.append(vec)
    ds = _lcm_den(q for _, per_k in slots for row in per_k for q in row)
    dl = _lcm_den(q for row in lab_rows for q in row)
    # integer arrays
    off, ks, cs = [0], [], []
    for i in range(n):
        for j in range(n):
            for k, q in sorted(mult.get((i, j), {}).items()):
                ks.append(k)
                cs.append(int(q * dm))
            off.append(len(ks))
    V = [int(q * ds) for _, per_k in slots for row in per_k for q in row]
    L = [int(q * dl) for row in lab_rows for q in row]
    # a priori bound on every intermediate integer
    vmax = max((abs(x) for x in V), default=1) or 1
    cm = 0
    col = [0] * n
    for c, k in zip(cs, ks):
        col[k] += abs(c)
    cm = max(col + [1])
    bound = 1
    denominator = 1
    for c in range(len(comp_start) - 1):
        t = comp_start[c + 1] - comp_start[c]
        lmax = sum(abs(x) for x in L[c * n:(c + 1) * n]) or 1
        bound *= vmax ** t * cm ** (t - 1) * lmax
        denominator *= dl * ds ** t * dm ** (t - 1)
    bound *= rho ** len(cross)
    a = lambda xs: np.asarray(xs if xs else [0], dtype=np.int64)  # noqa: E731
    return Plan(n, rho, len(cross), a(off), a(ks), a(cs), a(V), a([s for s, _ in slots]),
                np.asarray(comp_start, dtype=np.int64), a(L), denominator, constant, bound)


def run_plan(plan: Plan, force: str | None = None):
    """Exact value and the backend that produced it."""
    which = force or backend()
    if which == "compiled" and plan.bound >= INT64_SAFE:
        which = "python"  # int64 could overflow
    fn = _compiled.state_sum if which == "compiled" else _kernels_py.state_sum
    if len(plan.comp_start) == 1:
        raw, denom = 1, 1
    else:
        raw = fn(plan.n, plan.rho, plan.ncross, plan.mult_off, plan.mult_k, plan.mult_c,
                 plan.V, plan.slot_cross, plan.comp_start, plan.L)
        denom = plan.denominator
    return Fraction(raw, denom) * plan.constant, which
