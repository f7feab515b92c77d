import cmath
import itertools
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from spininv import abelian as ab
from spininv.cyclotomic import numeric, root_of_unity, sqrt_in_field, zeta
from spininv.formats import FormatError
from spininv.surgery import (
    NotEven,
    SurgeryMatrix,
    characteristic_sublinks,
    kummer_matrix,
    matrix_move,
    signature,
)

F = Fraction
M = SurgeryMatrix.of
HOPF = M([[0, 1], [1, 0]])

THEORIES = {
    "z2_quarter": ab.AbelianTheory.cyclic(2, F(1, 4)),
    "z3": ab.AbelianTheory.cyclic(3, F(1, 3)),
    "z5": ab.AbelianTheory.cyclic(5, F(2, 5)),
    "z6_spin": ab.AbelianTheory.cyclic(6, F(1, 6)),
    "z10_spin": ab.AbelianTheory.cyclic(10, F(3, 10)),
    "z2z2_mixed": ab.AbelianTheory((2, 2), (F(0), F(0)), (((0, 1), F(1, 2)),)),
}


def brute_I(T, A):
    """Sum over all of G with plain Fractions, then divide out the even kernel."""
    rep = ab.analyze(T)
    els = T.elements()
    total = 0j
    with mpmath.workdps(30):
        for labels in itertools.product(els, repeat=A.n):
            v = F(0)
            for i in range(A.n):
                v += T.q(labels[i]) * A[i, i]
                for j in range(i + 1, A.n):
                    v += T.b(labels[i], labels[j]) * A[i, j]
            total += complex(mpmath.expjpi(2 * mpmath.mpf(v.numerator) / v.denominator))
    E = len(rep.even)
    Gp = T.size // E
    c = 2 * Gp if rep.odd else Gp
    return total / (E ** A.n * math.sqrt(c) ** A.n)


@st.composite
def small_matrix(draw, even=True, max_n=3):
    n = draw(st.integers(1, max_n))
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = draw(st.integers(-3, 3))
            rows[i][j] = rows[j][i] = 2 * v if (i == j and even) else v
    return M(rows)


# -- analysis ----------------------------------------------------------------


def test_classification_examples():
    r = ab.analyze(ab.AbelianTheory.cyclic(2, F(1, 4)))
    assert r.classification == "modular" and len(r.radical) == 1
    r = ab.analyze(ab.AbelianTheory.cyclic(2, F(1, 2)))
    assert r.classification == "spin-modular" and r.mu == (1,)
    r = ab.analyze(ab.AbelianTheory.cyclic(2, F(0)))
    assert r.classification == "neither"
    assert r.quotient.size == 1 and r.quotient.classification == "modular"


def test_spin_modular_mu_is_order_two():
    for N in (1, 3, 5, 7):
        T = ab.AbelianTheory.cyclic(2 * N, F(1, 2 * N))
        r = ab.analyze(T)
        assert r.classification == "spin-modular"
        assert r.mu == (N,)
        assert T.add(r.mu, r.mu) == T.zero()
        assert T.twist(r.mu) == -1


def test_invalid_forms():
    with pytest.raises(ab.InvalidForm):
        ab.AbelianTheory.cyclic(3, F(1, 2))
    with pytest.raises(ab.InvalidForm):
        ab.AbelianTheory.cyclic(6, F(1, 24))
    with pytest.raises(ab.InvalidForm):
        ab.AbelianTheory((2, 3), (F(0), F(1, 3)), (((0, 1), F(1, 2)),))
    # l^2/12 is well defined on Z6 (and nondegenerate)
    assert ab.analyze(ab.AbelianTheory.cyclic(6, F(1, 12))).classification == "modular"


@pytest.mark.parametrize("name", sorted(THEORIES))
def test_character_orthogonality(name):
    # sum over G of exp(2 pi i b(x, a)) is |G| on the radical and 0 elsewhere
    T = THEORIES[name]
    rad = set(ab.analyze(T).radical)
    for x in T.elements():
        s = sum((root_of_unity(T.b(x, a)) for a in T.elements()), zeta(1) * 0)
        assert s == (T.size if x in rad else 0)


@pytest.mark.parametrize("N", [1, 3, 5])
def test_twists_in_cyclic_model(N):
    T = ab.AbelianTheory.cyclic(2 * N, F(1, 2 * N))
    r = zeta(2 * N)
    for a in range(2 * N):
        assert T.twist((a,)) == r ** (a * a)
        for n in range(-3, 4):
            assert T.q(T.scale(n, (a,))) == (n * n * T.q((a,))) % 1


# -- link values and I ----------------------------------------------------------


def test_link_value_examples():
    T = THEORIES["z6_spin"]
    A = M([[2, 1], [1, 4]])
    assert ab.link_value(T, A, [0, 0]) == 1
    r = zeta(6)
    for l in itertools.product(range(6), repeat=2):
        quad = 2 * l[0] ** 2 + 2 * l[0] * l[1] + 4 * l[1] ** 2
        assert ab.link_value(T, A, l) == r ** quad
    D = M([[2, 0], [0, -4]])
    assert ab.link_value(T, D, [1, 2]) == T.twist((1,)) ** 2 * T.twist((2,)) ** -4


def test_I_examples():
    for T in THEORIES.values():
        assert ab.surgery_invariant_I(T, M([])) == 1
        assert ab.surgery_invariant_I(T, HOPF) == 1
    expected = (1 + 2 * zeta(3)) / sqrt_in_field(3)
    assert ab.surgery_invariant_I(THEORIES["z6_spin"], M([[2]])) == expected


def test_I_needs_even_matrix_when_spin():
    with pytest.raises(NotEven):
        ab.surgery_invariant_I(THEORIES["z6_spin"], M([[1]]))
    ab.surgery_invariant_I(THEORIES["z3"], M([[1]]))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(THEORIES)), small_matrix())
def test_I_matches_enumeration(name, A):
    T = THEORIES[name]
    assert abs(numeric(ab.surgery_invariant_I(T, A), 25) - brute_I(T, A)) < 1e-9


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(THEORIES)), small_matrix(), st.data())
def test_I_invariant_under_moves(name, A, data):
    T = THEORIES[name]
    base = ab.surgery_invariant_I(T, A)
    if A.n > 1:
        i, j = data.draw(st.permutations(range(A.n)))[:2]
        B, _ = matrix_move(A, "slide", i, j, data.draw(st.sampled_from([1, -1])))
        assert ab.surgery_invariant_I(T, B) == base
    B, _ = matrix_move(A, "stabilize_hopf")
    assert ab.surgery_invariant_I(T, B) == base


def test_block_factorization():
    T = THEORIES["z10_spin"]
    A, B = M([[2, 1], [1, 4]]), M([[-2]])
    assert ab.surgery_invariant_I(T, A.direct_sum(B)) == ab.surgery_invariant_I(T, A) * ab.surgery_invariant_I(T, B)


def test_kummer_value_through_blocks():
    # 22 components, only possible blockwise
    T = THEORIES["z6_spin"]
    IK = ab.surgery_invariant_I(T, kummer_matrix())
    IE = ab.surgery_invariant_I(T, ab_e8(-1))
    assert IK == IE ** 2
    assert IK * IK.conjugate() == 1


def test_size_limit():
    big = ab.AbelianTheory.cyclic(64, F(1, 128))
    A = M([[2, 1, 1, 1, 1], [1, 2, 1, 1, 1], [1, 1, 2, 1, 1], [1, 1, 1, 2, 1], [1, 1, 1, 1, 2]])
    with pytest.raises(ab.SizeLimit):
        ab.surgery_invariant_I(big, A)


# -- MOO ---------------------------------------------------------------------------


def test_moo_examples():
    for A in (M([[2]]), HOPF, M([[4, 1], [1, -2]])):
        assert ab.moo_invariant(1, 1, A) == 1
    assert ab.moo_invariant(3, 1, M([[2]])) == (1 + 2 * zeta(3)) / sqrt_in_field(3)
    A, B = M([[2]]), M([[4, 1], [1, 2]])
    assert ab.moo_invariant(5, 3, A.direct_sum(B)) == ab.moo_invariant(5, 3, A) * ab.moo_invariant(5, 3, B)
    with pytest.raises(NotEven):
        ab.moo_invariant(3, 1, M([[1]]))
    with pytest.raises(ValueError):
        ab.moo_invariant(3, 3, M([[2]]))
    with pytest.raises(ValueError):
        ab.moo_invariant(4, 1, M([[2]]))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([1, 3, 5]), st.sampled_from([1, 3, 7]), small_matrix(max_n=4))
def test_moo_equals_I_on_cyclic_model(N, s, A):
    if math.gcd(s, 2 * N) != 1:
        return
    T = ab.AbelianTheory.cyclic(2 * N, F(s, 2 * N))
    assert ab.moo_invariant(N, s, A) == ab.surgery_invariant_I(T, A)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5]), small_matrix())
def test_spin_modular_invariant_factors_through_modular_part(N, A):
    # Z_{2N} = Z_2 + Z_N; the theta = -1 factor contributes 1 on even matrices
    T = ab.AbelianTheory.cyclic(2 * N, F(1, 2 * N))
    U = ab.AbelianTheory.cyclic(N, F(2, N))
    assert ab.analyze(U).classification == "modular"
    assert ab.surgery_invariant_I(T, A) == ab.surgery_invariant_I(U, A)


# -- spin normalization ----------------------------------------------------------------


def test_spin_normalize():
    T = THEORIES["z6_spin"]
    v = (1 + 2 * zeta(3)) / sqrt_in_field(3)
    IK = ab.surgery_invariant_I(T, kummer_matrix())
    assert ab.spin_normalize(T, v, 0).value == v
    assert ab.spin_normalize(T, v, 16).value == v / IK
    assert ab.spin_normalize(T, v, -16).value == v * IK
    r = ab.spin_normalize(T, v, 8)
    assert not r.normalized and r.residue == 8 and r.value == v


# -- Kirby-Melvin -------------------------------------------------------------------------


@pytest.mark.parametrize("N", [1, 3, 5])
def test_km_units(N):
    up, um = ab.km_units(ab.CyclicModel(N))
    assert um == up.conjugate()
    assert up * um == 4 * N


@pytest.mark.parametrize("N", [1, 3, 5])
def test_km_anchors(N):
    model = ab.CyclicModel(N)
    assert ab.kirby_melvin(model, M([[1]]), (1,)).J_prime == 1
    assert ab.kirby_melvin(model, M([[-1]]), (1,)).J_prime == 1
    for A in (M([[2]]), HOPF, M([[2, 1], [1, 4]]), M([[0, 1], [1, 2]])):
        assert ab.kirby_melvin(model, A, (0,) * A.n).J == ab.surgery_invariant_I(model.gamma_z, A)
    with pytest.raises(ab.NotCharacteristic):
        ab.kirby_melvin(model, M([[1]]), (0,))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([1, 3]), small_matrix(even=False), st.data())
def test_J_prime_invariant_under_km_moves(N, A, data):
    model = ab.CyclicModel(N)
    c = data.draw(st.sampled_from(characteristic_sublinks(A)))
    base = ab.kirby_melvin(model, A, c).J_prime
    for _ in range(3):
        kind = data.draw(st.sampled_from(["slide", "blowup", "stabilize_hopf"]))
        if kind == "slide" and A.n > 1:
            i, j = data.draw(st.permutations(range(A.n)))[:2]
            A, c = matrix_move(A, "slide", i, j, data.draw(st.sampled_from([1, -1])), sublink=c)
        elif kind == "blowup" and A.n < 4:
            v = data.draw(st.lists(st.integers(-1, 1), min_size=A.n, max_size=A.n))
            A, c = matrix_move(A, "blowup", data.draw(st.sampled_from([1, -1])), v, sublink=c)
        elif A.n < 3:
            A, c = matrix_move(A, "stabilize_hopf", sublink=c)
        assert ab.kirby_melvin(model, A, c).J_prime == base


@pytest.mark.parametrize("rows", [[[0, 1], [1, 0]], [[2]], [[1]], [[2, 1], [1, 2]], [[0, 1], [1, 1]], [[4]]])
@pytest.mark.parametrize("N", [1, 3])
def test_spin_sum(rows, N):
    r = ab.spin_sum_check(ab.CyclicModel(N), M(rows))
    assert r.ok, (r.lhs, r.rhs)


def test_spin_sum_swapped_split_fails():
    assert not ab.spin_sum_check(ab.CyclicModel(3), HOPF, swap=True).ok


def test_even_phase_law_in_smallest_model():
    # N = 1: Gamma_Z is trivial after the quotient, so J' is the pure phase
    model = ab.CyclicModel(1)
    for A in (M([[2]]), HOPF, M([[2, 1], [1, 2]]), ab_e8()):
        s = signature(A)
        assert ab.kirby_melvin(model, A, (0,) * A.n).J_prime == root_of_unity(F(-s, 8))


def ab_e8(sign=1):
    from spininv.surgery import e8_matrix

    return e8_matrix(sign)


# -- products and files ---------------------------------------------------------------------


@pytest.mark.parametrize("rows", [[[2]], [[0, 1], [1, 0]], [[2, 1], [1, 2]], [[4, 1], [1, -2]], [[-2]], [[6]]])
def test_product_decomposition(rows):
    A = M(rows)
    z3, z5 = ab.AbelianTheory.cyclic(3, F(1, 3)), ab.AbelianTheory.cyclic(5, F(1, 5))
    z3b = ab.AbelianTheory.cyclic(3, F(2, 3))
    assert ab.product_decomposition_check(z3, z5, A).ok
    assert ab.product_decomposition_check(z3, z3b, A).ok
    triv = ab.AbelianTheory.cyclic(1, F(0))
    r = ab.product_decomposition_check(z3, triv, A)
    assert r.ok and r.second == 1


def test_product_rejects_coupled_sum():
    z3 = ab.AbelianTheory.cyclic(3, F(1, 3))
    coupled = ab.AbelianTheory((3, 3), (F(1, 3), F(1, 3)), (((0, 1), F(1, 3)),))
    with pytest.raises(ab.NotOrthogonal):
        ab.product_decomposition_check(z3, z3, HOPF, coupled)


def test_theory_file():
    T = ab.parse_theory("abelian G=2,2 ; q: gen_0 -> 0, gen_1 -> 0 ; mixed: (0,1) -> 1/2")
    assert T.orders == (2, 2) and T.mixed == (((0, 1), F(1, 2)),)
    T6 = ab.parse_theory("abelian G=6\nq: 0 -> 1/6\n")
    assert (T6.orders, T6.q_gen, T6.mixed) == ((6,), (F(1, 6),), ())
    for bad in ("q: 0 -> 1/3", "abelian G=3 ; q: (0,1) -> 1/3", "abelian G=3 ; nonsense"):
        with pytest.raises(FormatError):
            ab.parse_theory(bad)
