"""Acceptance suite: one check per criterion, each printing a single PASS/FAIL line.

Run under pytest or directly with ``python3 tests/test_acceptance.py``.
"""

import functools
import random
import time
from fractions import Fraction as F

import pytest
import sympy

from spininv import abelian as ab
from spininv import cli
from spininv import diagram as dg
from spininv import hennings as hn
from spininv import hopf as hp
from spininv import surgery as sm
from spininv.cyclotomic import root_of_unity
from spininv.hopf import HopfAlgebra
from spininv.surgery import SurgeryMatrix

M = SurgeryMatrix.of
BASES = {
    "k[Z/2]": lambda: hp.group_algebra(2),
    "k[Z/3]": lambda: hp.group_algebra(3),
    "k[Z/4]": lambda: hp.group_algebra(4),
    "sweedler": hp.sweedler,
}


@functools.lru_cache(maxsize=None)
def double(name):
    D, Q, _ = hp.drinfeld_double(BASES[name]())
    return D, Q


@functools.lru_cache(maxsize=None)
def engine(name):
    D, Q = double(name)
    return hn.Engine.build(D, Q)


def random_even(rng, n):
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 2 * rng.randint(-2, 2)
        for j in range(i):
            rows[i][j] = rows[j][i] = rng.randint(-2, 2)
    return M(rows)


# -- criteria ---------------------------------------------------------------------------


def criterion_1():
    bad = []
    for name in BASES:
        t0 = time.perf_counter()
        D, Q = double(name)
        hopf = hp.verify_hopf_axioms(D, first_only=False)
        qt = hp.verify_quasitriangular(D, Q, first_only=False)
        if not (hopf.ok and qt.ok and not qt.derived_violations):
            bad.append(f"{name}: verification failed")
        # corrupted antipode and a dropped R term must both be caught, with witnesses
        S = dict(D.antipode)
        S[1] = {0: F(1)}
        broken = HopfAlgebra(D.n, D.mult, D.unit, D.comult, D.counit, S, D.names)
        rep = hp.verify_hopf_axioms(broken)
        if rep.ok or not rep.violations:
            bad.append(f"{name}: corrupted antipode accepted")
        R = dict(Q.R)
        R.pop(next(iter(R)))
        rep = hp.verify_quasitriangular(D, R)
        if rep.ok or not rep.violations:
            bad.append(f"{name}: corrupted R accepted")
        dt = time.perf_counter() - t0
        if dt >= 10:
            bad.append(f"{name}: {dt:.1f} s")
    return not bad, "; ".join(bad) or "4 doubles verified, controls rejected"


def criterion_2():
    bad = []
    for name in BASES:
        t0 = time.perf_counter()
        D, Q = double(name)
        ints = hp.integrals(D)
        lam = ints.two_sided
        if lam is None:
            bad.append(f"{name}: no two-sided integral in the dual")
        else:
            basis = [D.basis(i) for i in range(D.n)]
            if any(hp.evaluate(lam, D.Spow(x, 1)) != hp.evaluate(lam, x) for x in basis):
                bad.append(f"{name}: lambda o S != lambda")
            if any(hp.evaluate(lam, D.mul(a, b)) != hp.evaluate(lam, D.mul(b, D.Spow(a, 2)))
                   for a in basis for b in basis):
                bad.append(f"{name}: lambda(ab) != lambda(b S^2 a)")
        fac, rank = hp.is_factorizable(Q)
        if rank != D.n:
            bad.append(f"{name}: Drinfeld map rank {rank} < {D.n}")
        dt = time.perf_counter() - t0
        if dt >= 10:
            bad.append(f"{name}: {dt:.1f} s")
    return not bad, "; ".join(bad) or "two-sided integrals found, Drinfeld map bijective"


def criterion_3():
    eng = engine("k[Z/2]")
    D = eng.H
    rng = random.Random(20240)
    basis = hp.quantum_characters(D)
    pool = [d for d in dg.link_pool() if d.n_crossings <= 6]
    if len(pool) < 5:
        return False, f"pool has {len(pool)} links"
    failures = 0
    for trial in range(200):
        d = pool[trial % len(pool)]
        labels = [[sum((rng.randint(-3, 3) * b[i] for b in basis), F(0)) for i in range(D.n)]
                  for _ in range(d.n_components)]
        base = hn.evaluate_K(d, eng, labels).value
        e = hn.prepare(d)
        for _ in range(rng.randint(1, 8)):
            mv = dg.random_regular_move(e, rng, max_slices=len(e.slices) + 6)
            if mv is None:
                break
            e = dg.apply_move(e, *mv)
        c = rng.randrange(e.n_components)
        e = dg.set_basepoint(e, c, dg.random_basepoint(e, c, rng))
        if hn.evaluate_K(e, eng, labels, normalize=False).value != base:
            failures += 1
    return failures == 0, f"{len(pool)} links, 200 perturbations, {failures} mismatches"


def criterion_4():
    bad = []
    for name in ("k[Z/2]", "k[Z/3]", "k[Z/4]"):
        eng = engine(name)
        N = hp.normalized_integral(eng.Q)
        K, expected = hn.hopf_anchor(eng, hp.integrals(eng.H).two_sided)
        if K != expected:
            bad.append(f"{name}: Hopf link {K} != lambda(D(lambda)) {expected}")
        slid = dg.hopf_slid()
        if sorted(map(sorted, dg.linking_matrix(slid).as_lists())) != [[0, 1], [1, 2]]:
            bad.append("slid diagram has the wrong linking matrix")
        for d in (dg.SlicedDiagram(()), dg.hopf_link(0, 0), slid):
            v = hn.framed_invariant(d, eng, N).value
            if v != 1:
                bad.append(f"{name}: {d.name or 'empty'} gives {v}")
        for d in dg.link_pool():
            if hn.framed_invariant(dg.move_ii(d), eng, N).value != hn.framed_invariant(d, eng, N).value:
                bad.append(f"{name}: move II changes {d.name}")
    return not bad, "; ".join(bad) or "anchors hold, S^3 presentations give 1, move II invariant"


def criterion_5():
    bad = []
    for name in ("k[Z/2]", "k[Z/3]"):
        eng = engine(name)
        lam = hp.normalized_integral(eng.Q).lam
        for n in (1, 2, 3):
            ok, detail = hn.fenn_rourke_tensor_check(eng, lam, n)
            if not ok:
                bad.append(f"{name} n={n}: {detail}")
    return not bad, "; ".join(bad) or "fragment tensors equal for n = 1, 2, 3"


def criterion_6():
    rng = random.Random(6)
    bad = []
    for N in (1, 3, 5):
        T = ab.AbelianTheory.cyclic(2 * N, F(1, 2 * N))
        for _ in range(8):
            A = random_even(rng, rng.randint(1, 4))
            if ab.surgery_invariant_I(T, A) != ab.moo_invariant(N, 1, A):
                bad.append(f"N={N}: I != MOO on {A.as_lists()}")
        code, text = cli.run(["fuzz", "--engine", "moo", "--N", str(N), "--sequences", "100", "--seed", str(N)])
        if code != 0:
            bad.append(f"N={N}: fuzz failures")
    return not bad, "; ".join(bad) or "I = MOO for N = 1, 3, 5; 3 x 100 fuzz sequences clean"


def criterion_7():
    bad = []
    rng = random.Random(7)
    for N in (1, 3):
        model = ab.CyclicModel(N)
        for start in (M([[1]]), M([[2]]), sm.HOPF, M([[2, 1], [1, 0]])):
            A = start
            c = rng.choice(sm.characteristic_sublinks(A))
            base = ab.kirby_melvin(model, A, c).J_prime
            for _ in range(25):  # 4 starts x 25 = 100 moves per model
                kind = rng.choice(["slide", "blowup", "stabilize_hopf"])
                if kind == "slide" and A.n > 1:
                    i, j = rng.sample(range(A.n), 2)
                    A, c = sm.matrix_move(A, "slide", i, j, rng.choice((1, -1)), sublink=c)
                elif A.n < 4 and kind == "blowup":
                    A, c = sm.matrix_move(A, "blowup", rng.choice((1, -1)),
                                          [rng.randint(-1, 1) for _ in range(A.n)], sublink=c)
                elif A.n < 3:
                    A, c = sm.matrix_move(A, "stabilize_hopf", sublink=c)
                elif A.n > 1:
                    i, j = rng.sample(range(A.n), 2)
                    A, c = sm.matrix_move(A, "slide", i, j, 1, sublink=c)
                if ab.kirby_melvin(model, A, c).J_prime != base:
                    bad.append(f"N={N}: J' changed from {start.as_lists()}")
                    break
        for A in (M([[2]]), sm.HOPF, M([[2, 1], [1, 4]]), M([[0, 1], [1, 2]])):
            if ab.kirby_melvin(model, A, (0,) * A.n).J != ab.surgery_invariant_I(model.gamma_z, A):
                bad.append(f"N={N}: J(C=empty) != I on {A.as_lists()}")
        for rows in ([[0, 1], [1, 0]], [[2]], [[1]], [[2, 1], [1, 2]], [[0, 1], [1, 1]], [[4]]):
            if not ab.spin_sum_check(model, M(rows)).ok:
                bad.append(f"N={N}: spin sum fails on {rows}")
    # N = 1 phase law as stated: J' = exp(-3 pi i mu / 8)
    model = ab.CyclicModel(1)
    for A in (sm.HOPF, M([[2]]), M([[2, 1], [1, 2]]), sm.e8_matrix(), sm.e8_matrix(-1), M([[0, 1], [1, 2]])):
        mu = sm.signature(A) % 16
        got = ab.kirby_melvin(model, A, (0,) * A.n).J_prime
        if got != root_of_unity(F(-3 * mu, 16)):
            bad.append(f"N=1: J' != exp(-3 pi i mu/8) at mu={mu}")
    return not bad, "; ".join(bad) or "J' invariant, J anchors, spin sums, N=1 phase law"


def _sign_change_signature(A):
    x = sympy.symbols("x")
    coeffs = sympy.Matrix(A.as_lists()).charpoly(x).all_coeffs()
    n = len(coeffs) - 1
    k = 0
    while k < n and coeffs[n - k] == 0:
        k += 1
    pos = [c for c in coeffs[: n + 1 - k] if c != 0]
    neg = [c * (-1) ** (n - i) for i, c in enumerate(coeffs[: n + 1 - k]) if c != 0]
    changes = lambda cs: sum(1 for a, b in zip(cs, cs[1:]) if a * b < 0)
    return changes(pos) - changes(neg)


def criterion_8():
    bad = []
    K = sm.kummer_matrix()
    for A, want in ((sm.e8_matrix(), 8), (K, -16)):
        if not sm.signature(A) == want == _sign_change_signature(A):
            bad.append(f"signature of {A.n}x{A.n} form")
    rng = random.Random(8)
    for _ in range(20):
        A = random_even(rng, rng.randint(1, 4))
        mu = sm.rohlin_mu(A).mu
        B = A
        for _ in range(5):
            if B.n > 1 and rng.random() < 0.7:
                i, j = rng.sample(range(B.n), 2)
                B = sm.slide(B, i, j, rng.choice((1, -1)))
            else:
                B = sm.stabilize_hopf(B)
        if sm.rohlin_mu(B).mu != mu or sm.rohlin_mu(A.direct_sum(K)).mu != mu:
            bad.append(f"mu moved on {A.as_lists()}")
    return not bad, "; ".join(bad) or "sigma(E8) = 8, sigma(Kummer) = -16, mu stable"


def criterion_9():
    z3, z5 = ab.AbelianTheory.cyclic(3, F(1, 3)), ab.AbelianTheory.cyclic(5, F(1, 5))
    z3b = ab.AbelianTheory.cyclic(3, F(2, 3))
    mats = [M([[2]]), sm.HOPF, M([[2, 1], [1, 2]]), M([[4, 1], [1, -2]]), M([[-2]]), M([[6]])]
    bad = [A.as_lists() for A in mats
           if not (ab.product_decomposition_check(z3, z5, A).ok and ab.product_decomposition_check(z3, z3b, A).ok)]
    return not bad, f"failures on {bad}" if bad else f"Z3+Z5 and Z3+Z3 factor on {len(mats)} matrices"


def criterion_10():
    eng = engine("k[Z/2]")
    d = dg.torus_link_2(6)
    t0 = time.perf_counter()
    K = hn.evaluate_K(d, eng, hp.normalized_integral(eng.Q).lam)
    dt = time.perf_counter() - t0
    ok = d.n_crossings == 6 and eng.H.n == 4 and K.states == eng.rho ** K.crossings and dt < 60
    return ok, f"{K.crossings} crossings, {K.states} states = {eng.rho}^{K.crossings}, {dt:.2f} s"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def report(k):
    ok, detail = CRITERIA[k - 1]()
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    return ok, line


@pytest.mark.parametrize("k", range(1, 11))
def test_criterion(k, capsys):
    ok, line = report(k)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [report(k) for k in range(1, 11)]
    for _, line in results:
        print(line)
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
