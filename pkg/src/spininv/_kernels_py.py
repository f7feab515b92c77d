"""Pure-Python twin of the compiled state-sum kernel (same signature).

Python integers never overflow, so this path has no size bound.
"""

import itertools


def state_sum(n, rho, ncross, mult_off, mult_k, mult_c, V, slot_cross, comp_start, L):
    mult_off = [int(x) for x in mult_off]
    table = {}
    for ij in range(n * n):
        lo, hi = mult_off[ij], mult_off[ij + 1]
        if hi > lo:
            table[divmod(ij, n)] = [(int(mult_k[p]), int(mult_c[p])) for p in range(lo, hi)]
    V = [int(x) for x in V]
    nslots = len(slot_cross)
    vecs = [[[(i, V[(s * rho + k) * n + i]) for i in range(n) if V[(s * rho + k) * n + i]]
             for k in range(rho)] for s in range(nslots)]
    slot_cross = [int(x) for x in slot_cross]
    comp_start = [int(x) for x in comp_start]
    labels = [[int(L[c * n + i]) for i in range(n)] for c in range(len(comp_start) - 1)]
    total = 0
    for state in itertools.product(range(rho), repeat=ncross):
        # the compiled kernel counts with the first crossing fastest
        state = state[::-1]
        term = 1
        for c in range(len(comp_start) - 1):
            lo, hi = comp_start[c], comp_start[c + 1]
            word = dict(vecs[lo][state[slot_cross[lo]]])
            for s in range(lo + 1, hi):
                out = {}
                for j, vj in vecs[s][state[slot_cross[s]]]:
                    for i, wi in word.items():
                        t = table.get((i, j))
                        if t:
                            pr = wi * vj
                            for k, ck in t:
                                out[k] = out.get(k, 0) + pr * ck
                word = out
            lab = labels[c]
            term *= sum(lab[i] * w for i, w in word.items())
            if term == 0:
                break
        total += term
    return total
