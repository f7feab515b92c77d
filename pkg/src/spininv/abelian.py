"""Abelian premodular data (G, q) and the invariants computed from linking matrices.

Simple objects are the elements of a finite abelian group G, all of quantum
dimension one; the twist is exp(2 pi i q(a)) and the double braiding is
exp(2 pi i b(a, c)).  Everything here depends on the linking matrix alone.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cyclotomic import Cyclotomic, conjugate, root_of_unity, sqrt_in_field
from .formats import FormatError
from .surgery import (
    NotEven,
    SurgeryMatrix,
    blocks,
    characteristic_sublinks,
    is_characteristic,
    kummer_matrix,
    signature,
    submatrix,
)

MAX_GROUP = 10 ** 4
MAX_TERMS = 10 ** 7


class InvalidForm(ValueError):
    pass


class NotSpinModular(ValueError):
    pass


class SizeLimit(ValueError):
    pass


class NotOrthogonal(ValueError):
    pass


class NotCharacteristic(ValueError):
    pass


def _mod1(x) -> Fraction:
    return Fraction(x) % 1


def _lcm(*xs) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


@dataclass(frozen=True)
class AbelianTheory:
    """G = Z_{m_1} x ... x Z_{m_t} with q(x) = sum q_i x_i^2 + sum_{i<j} b_ij x_i x_j.

    ``mixed[(i, j)]`` is b(g_i, g_j) for i < j.
    """

    orders: tuple[int, ...]
    q_gen: tuple[Fraction, ...]
    mixed: tuple = ()
    name: str = ""
    _tables: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        orders = tuple(int(m) for m in self.orders)
        if any(m < 1 for m in orders):
            raise InvalidForm("cyclic orders must be positive")
        if len(self.q_gen) != len(orders):
            raise InvalidForm("need one q value per generator")
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "q_gen", tuple(_mod1(x) for x in self.q_gen))
        mixed = dict(self.mixed)
        clean = {}
        for (i, j), v in mixed.items():
            if not (0 <= i < len(orders) and 0 <= j < len(orders)) or i == j:
                raise InvalidForm(f"bad mixed index ({i}, {j})")
            key = (min(i, j), max(i, j))
            clean[key] = _mod1(clean.get(key, 0) + Fraction(v))
        object.__setattr__(self, "mixed", tuple(sorted((k, v) for k, v in clean.items() if v)))
        if self.size > MAX_GROUP:
            raise SizeLimit(f"|G| = {self.size} exceeds {MAX_GROUP}")
        self._validate()

    # -- structure -------------------------------------------------------------

    @classmethod
    def cyclic(cls, m: int, q1, name: str = "") -> "AbelianTheory":
        return cls((m,), (Fraction(q1),), (), name or f"Z{m}")

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(m) for m in self.orders)))

    def add(self, x, y) -> tuple[int, ...]:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.orders))

    def scale(self, n: int, x) -> tuple[int, ...]:
        return tuple((n * a) % m for a, m in zip(x, self.orders))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    @property
    def level(self) -> int:
        """Common denominator of all values of q and b."""
        dens = [x.denominator for x in self.q_gen]
        dens += [(2 * x).denominator for x in self.q_gen]
        dens += [v.denominator for _, v in self.mixed]
        return _lcm(*dens)

    def q(self, x) -> Fraction:
        v = sum((qi * a * a for qi, a in zip(self.q_gen, x)), Fraction(0))
        for (i, j), bij in self.mixed:
            v += bij * x[i] * x[j]
        return v % 1

    def b(self, x, y) -> Fraction:
        v = sum((2 * qi * a * c for qi, a, c in zip(self.q_gen, x, y)), Fraction(0))
        for (i, j), bij in self.mixed:
            v += bij * (x[i] * y[j] + x[j] * y[i])
        return v % 1

    def twist(self, x) -> Cyclotomic:
        return root_of_unity(self.q(x))

    def _validate(self):
        """q must be well defined on G and satisfy q(nx) = n^2 q(x); exhaustive."""
        for i, m in enumerate(self.orders):
            if (m * m * self.q_gen[i]).denominator != 1 or (2 * m * self.q_gen[i]).denominator != 1:
                raise InvalidForm(f"q(g_{i}) = {self.q_gen[i]} is not defined on Z_{m}")
        for (i, j), v in self.mixed:
            if (self.orders[i] * v).denominator != 1 or (self.orders[j] * v).denominator != 1:
                raise InvalidForm(f"mixed term ({i}, {j}) = {v} is not defined on the group")
        M = self.level
        coords = self.coords()
        Q = self.q_table()
        expo = _lcm(*self.orders) if self.orders else 1
        index = self._index_of
        for n in range(2, expo + 1):
            idx = index((coords * n) % np.array(self.orders, dtype=np.int64))
            if np.any(Q[idx] % M != (n * n * Q) % M):
                raise InvalidForm(f"q(nx) != n^2 q(x) for n = {n}")

    # -- integer tables (values times the level) -------------------------------

    def coords(self) -> np.ndarray:
        if "coords" not in self._tables:
            els = self.elements()
            self._tables["coords"] = np.array(els, dtype=np.int64).reshape(len(els), self.rank)
        return self._tables["coords"]

    def _index_of(self, coords: np.ndarray) -> np.ndarray:
        idx = np.zeros(len(coords), dtype=np.int64)
        for k, m in enumerate(self.orders):
            idx = idx * m + coords[:, k]
        return idx

    def index(self, x) -> int:
        i = 0
        for a, m in zip(x, self.orders):
            i = i * m + a % m
        return i

    def q_table(self) -> np.ndarray:
        if "Q" not in self._tables:
            M = self.level
            X = self.coords()
            Q = np.zeros(len(X), dtype=np.int64)
            for i, qi in enumerate(self.q_gen):
                Q += int(qi * M) * X[:, i] * X[:, i]
            for (i, j), v in self.mixed:
                Q += int(v * M) * X[:, i] * X[:, j]
            self._tables["Q"] = Q % M
        return self._tables["Q"]

    def b_table(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """b(x, y) * level for x in rows, y in cols (element indices)."""
        M = self.level
        X = self.coords()
        R, C = X[rows], X[cols]
        B = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for i, qi in enumerate(self.q_gen):
            B += int(2 * qi * M) % M * np.outer(R[:, i], C[:, i])
        for (i, j), v in self.mixed:
            c = int(v * M) % M
            B += c * (np.outer(R[:, i], C[:, j]) + np.outer(R[:, j], C[:, i]))
        return B % M

    def direct_sum(self, other: "AbelianTheory") -> "AbelianTheory":
        t = self.rank
        mixed = list(self.mixed) + [((i + t, j + t), v) for (i, j), v in other.mixed]
        return AbelianTheory(self.orders + other.orders, self.q_gen + other.q_gen, tuple(mixed),
                             f"{self.name}+{other.name}")

    def __str__(self):
        parts = [f"G=" + ",".join(map(str, self.orders))]
        parts.append("q: " + ", ".join(f"{i} -> {v}" for i, v in enumerate(self.q_gen)))
        if self.mixed:
            parts.append("mixed: " + ", ".join(f"({i},{j}) -> {v}" for (i, j), v in self.mixed))
        return "abelian " + " ; ".join(parts)


# -- degeneracy -------------------------------------------------------------------


@dataclass
class QuadraticModule:
    """Coset representatives of G modulo the even degenerate subgroup."""

    theory: AbelianTheory
    reps: np.ndarray  # element indices
    classification: str
    mu: tuple | None

    @property
    def size(self) -> int:
        return len(self.reps)


@dataclass
class DegeneracyReport:
    radical: list
    even: list
    odd: list
    classification: str  # "modular", "spin-modular" or "neither"
    mu: tuple | None
    quotient: QuadraticModule

    def lines(self) -> list[str]:
        q = self.quotient
        return [
            f"radical: {len(self.radical)}",
            f"even_degenerate: {len(self.even)}",
            f"odd_degenerate: {len(self.odd)}",
            f"classification: {self.classification}",
            f"mu: {'none' if self.mu is None else ','.join(map(str, self.mu))}",
            f"quotient_size: {q.size}",
            f"quotient_classification: {q.classification}",
        ]


def analyze(T: AbelianTheory) -> DegeneracyReport:
    els = T.elements()
    gens = [tuple(int(i == k) for i in range(T.rank)) for k in range(T.rank)]
    radical = [x for x in els if all(T.b(x, g) == 0 for g in gens)]
    even = [x for x in radical if T.q(x) == 0]
    odd = [x for x in radical if T.q(x) == Fraction(1, 2)]
    if len(radical) == 1:
        cls = "modular"
    elif len(radical) == 2 and len(odd) == 1:
        cls = "spin-modular"
    else:
        cls = "neither"
    mu = odd[0] if cls == "spin-modular" else None
    # quotient by the even part
    seen = np.zeros(T.size, dtype=bool)
    reps = []
    for x in els:
        i = T.index(x)
        if seen[i]:
            continue
        reps.append(i)
        for e in even:
            seen[T.index(T.add(x, e))] = True
    qcls = "modular" if not odd else "spin-modular"
    qmu = min(odd) if odd else None
    return DegeneracyReport(radical, even, odd, cls, mu,
                            QuadraticModule(T, np.array(reps, dtype=np.int64), qcls, qmu))


# -- Gauss sums -------------------------------------------------------------------


def _exponent_counts(Q, Bfull, labelsets, A, M) -> np.ndarray:
    """Histogram over labelings of sum_i Q[l_i] A_ii + sum_{i<j} B[l_i, l_j] A_ij mod M.

    ``labelsets[k]`` lists the allowed table indices for component k.
    """
    n = len(A)
    exps = np.zeros(1, dtype=np.int64)
    labs: list[np.ndarray] = []
    for k in range(n):
        S = labelsets[k]
        K = len(S)
        new = exps[:, None] + ((Q[S] * (A[k][k] % M)) % M)[None, :]
        for j in range(k):
            a = A[j][k] % M
            if a:
                new = new + (Bfull[labs[j]][:, S] * a) % M
        new %= M
        labs = [np.repeat(l, K) for l in labs] + [np.tile(S, len(exps))]
        exps = new.ravel()
    return np.bincount(exps, minlength=M)


def _counts_value(counts, M) -> Cyclotomic:
    return Cyclotomic.from_powers(M, [int(c) for c in counts])


def _check_size(K: int, n: int):
    if n and K ** n > MAX_TERMS:
        raise SizeLimit(f"{K}^{n} labelings exceed {MAX_TERMS}; block factorization did not help")


def link_value(T: AbelianTheory, A: SurgeryMatrix, labels) -> Cyclotomic:
    """exp(2 pi i (sum q(l_i) A_ii + sum_{i<j} b(l_i, l_j) A_ij))."""
    labels = [tuple(x) if isinstance(x, (tuple, list)) else (x,) for x in labels]
    if len(labels) != A.n:
        raise ValueError("one label per component")
    v = Fraction(0)
    for i in range(A.n):
        v += T.q(labels[i]) * A[i, i]
        for j in range(i + 1, A.n):
            v += T.b(labels[i], labels[j]) * A[i, j]
    return root_of_unity(v)


def _gauss(T: AbelianTheory, reps: np.ndarray, A: SurgeryMatrix) -> Cyclotomic:
    if A.n == 0:
        return Cyclotomic.rational(1)
    _check_size(len(reps), A.n)
    M = T.level
    Q = T.q_table()[reps]
    B = T.b_table(reps, reps) if A.n > 1 else None
    S = np.arange(len(reps), dtype=np.int64)
    counts = _exponent_counts(Q, B, [S] * A.n, A.as_lists(), M)
    return _counts_value(counts, M)


def _blockwise(A: SurgeryMatrix, f):
    out = Cyclotomic.rational(1)
    for idx in blocks(A):
        out = out * f(submatrix(A, idx))
    return out


def surgery_invariant_I(T: AbelianTheory, A: SurgeryMatrix, report: DegeneracyReport | None = None) -> Cyclotomic:
    """Normalized Gauss sum over the quotient G' by the even degenerates.

    spin-modular: (2|G'|)^{-n/2} sum, needs an even matrix;
    modular:      |G'|^{-n/2} sum.
    """
    rep = report or analyze(T)
    mod = rep.quotient
    if mod.classification == "spin-modular":
        if not A.is_even():
            raise NotEven("spin-modular data need an even linking matrix")
        c = 2 * mod.size
    else:
        c = mod.size
    s = sqrt_in_field(c)

    def one_block(B):
        return _gauss(T, mod.reps, B) / s ** B.n

    return _blockwise(A, one_block)


def moo_invariant(N: int, r_exp: int, A: SurgeryMatrix) -> Cyclotomic:
    """(sqrt N)^{-n} sum over l in (Z_N)^n of (-r)^{l^T A l}, r = zeta_{2N}^{r_exp}."""
    if N < 1 or N % 2 == 0:
        raise ValueError("N must be a positive odd integer")
    if math.gcd(r_exp, 2 * N) != 1:
        raise ValueError(f"zeta_{2 * N}^{r_exp} is not a primitive {2 * N}-th root of unity")
    if not A.is_even():
        raise NotEven("the invariant needs an even linking matrix")
    M = 2 * N
    k = (r_exp + N) % M  # -r = zeta_{2N}^{r_exp + N}
    a = np.arange(N, dtype=np.int64)
    Q = (k * a * a) % M
    B = (2 * k * np.outer(a, a)) % M
    s = sqrt_in_field(N)

    def one_block(Bm):
        _check_size(N, Bm.n)
        counts = _exponent_counts(Q, B, [a] * Bm.n, Bm.as_lists(), M)
        return _counts_value(counts, M) / s ** Bm.n

    return _blockwise(A, one_block)


# -- spin normalization -------------------------------------------------------------


@dataclass
class SpinValue:
    value: Cyclotomic
    sigma: int
    normalized: bool  # False when 16 does not divide sigma

    @property
    def residue(self) -> int:
        return self.sigma % 16


def spin_normalize(T: AbelianTheory, value, sigma: int) -> SpinValue:
    """value * I(Kummer)^{-sigma/16}, applied only when 16 divides sigma."""
    if sigma % 16:
        return SpinValue(value, sigma, False)
    if sigma == 0:
        return SpinValue(value, 0, True)
    IK = surgery_invariant_I(T, kummer_matrix())
    k = -sigma // 16
    return SpinValue(value * IK ** k if k >= 0 else value / IK ** (-k), sigma, True)


# -- cyclic Kirby-Melvin model --------------------------------------------------------


@dataclass
class CyclicModel:
    """Gamma = Z_{4N} with q(l) = s l^2 / (8N); Gamma_Z = even residues.

    Gamma_Z is the spin-modular Z_{2N} theory q(m) = s m^2 / (2N), whose
    degenerate odd object is m = N; Gamma itself is modular.
    """

    N: int
    s: int = 1

    def __post_init__(self):
        if self.N < 1 or self.N % 2 == 0:
            raise ValueError("N must be a positive odd integer")
        if self.s % 2 == 0:
            raise ValueError("s must be odd")

    @property
    def gamma(self) -> AbelianTheory:
        return AbelianTheory.cyclic(4 * self.N, Fraction(self.s, 8 * self.N), f"Z{4 * self.N}")

    @property
    def gamma_z(self) -> AbelianTheory:
        return AbelianTheory.cyclic(2 * self.N, Fraction(self.s, 2 * self.N), f"Z{2 * self.N}")

    @property
    def r(self) -> Cyclotomic:
        return Cyclotomic.zeta(2 * self.N, self.s)


def _F(model: CyclicModel, A: SurgeryMatrix, c, swap: bool = False) -> Cyclotomic:
    """Components in C over odd residues of Z_{4N}, the rest over even ones."""
    if A.n == 0:
        return Cyclotomic.rational(1)
    m = 4 * model.N
    M = 8 * model.N
    labels = np.arange(m, dtype=np.int64)
    odd, even = labels[1::2], labels[0::2]
    Q = (model.s * labels * labels) % M
    B = (2 * model.s * np.outer(labels, labels)) % M
    sets = [(odd if (ci ^ swap) else even) for ci in c]
    _check_size(m // 2, A.n)
    return _counts_value(_exponent_counts(Q, B, sets, A.as_lists(), M), M)


def km_units(model: CyclicModel):
    """U_+ and U_-: the +-1 framed unknot labeled by the odd half."""
    up = _F(model, SurgeryMatrix.of([[1]]), (1,))
    um = _F(model, SurgeryMatrix.of([[-1]]), (1,))
    if um != conjugate(up):
        raise AssertionError("U_- is not the conjugate of U_+")
    prod = up * um
    if not prod.is_rational() or prod.to_fraction() <= 0:
        raise AssertionError("U_+ U_- is not a positive rational")
    return up, um


@dataclass
class KMResult:
    J: Cyclotomic
    J_prime: Cyclotomic
    F: Cyclotomic
    U_plus: Cyclotomic
    U_minus: Cyclotomic
    sigma: int


def kirby_melvin(model: CyclicModel, A: SurgeryMatrix, c) -> KMResult:
    """J = F / (U_+ U_-)^{n/2} and J' = (U_-/U_+)^{sigma/2} J.

    Half powers are taken through the positive root of U_+ U_-:
    (U_-/U_+)^{sigma/2} = (U_- / sqrt(U_+ U_-))^sigma.
    """
    c = tuple(int(x) & 1 for x in c)
    if len(c) != A.n:
        raise ValueError("sublink indicator length must match the matrix")
    if not is_characteristic(A, c):
        raise NotCharacteristic(f"{c} is not a characteristic sublink")
    up, um = km_units(model)
    root = sqrt_in_field(up * um)
    F = _F(model, A, c)
    J = F / root ** A.n
    sigma = signature(A)
    phase = um / root
    Jp = J * phase ** sigma if sigma >= 0 else J / phase ** (-sigma)
    return KMResult(J, Jp, F, up, um, sigma)


@dataclass
class SpinSumResult:
    ok: bool
    lhs: Cyclotomic
    rhs: Cyclotomic
    sublinks: int


def spin_sum_check(model: CyclicModel, A: SurgeryMatrix, swap: bool = False) -> SpinSumResult:
    """Sum of F(L, C)/|Gamma|^{n/2} over all characteristic C against I_Gamma.

    In the honest split |Gamma| = U_+ U_-, so the left side is the sum of J.
    ``swap`` exchanges the odd and even halves (negative control).
    """
    G = model.gamma
    s = sqrt_in_field(G.size)
    subs = characteristic_sublinks(A)
    lhs = Cyclotomic.rational(0)
    for c in subs:
        lhs = lhs + _F(model, A, c, swap)
    lhs = lhs / s ** A.n
    rhs = surgery_invariant_I(G, A)
    return SpinSumResult(lhs == rhs, lhs, rhs, len(subs))


# -- product decomposition -------------------------------------------------------------


@dataclass
class ProductResult:
    ok: bool
    whole: Cyclotomic
    first: Cyclotomic
    second: Cyclotomic


def product_decomposition_check(T1: AbelianTheory, T2: AbelianTheory, A: SurgeryMatrix,
                                T: AbelianTheory | None = None) -> ProductResult:
    """I_T(A) = I_T1(A) I_T2(A) for the orthogonal sum T = T1 + T2."""
    if T is None:
        T = T1.direct_sum(T2)
    else:
        t = T1.rank
        if T.orders != T1.orders + T2.orders or T.q_gen != T1.q_gen + T2.q_gen:
            raise NotOrthogonal("T is not built from T1 and T2")
        for (i, j), _ in T.mixed:
            if (i < t) != (j < t):
                raise NotOrthogonal(f"mixed term ({i}, {j}) couples the summands")
        inner = [((i, j), v) for (i, j), v in T.mixed if i < t]
        outer = [((i - t, j - t), v) for (i, j), v in T.mixed if i >= t]
        if tuple(inner) != T1.mixed or tuple(outer) != T2.mixed:
            raise NotOrthogonal("mixed terms differ from the summands")
    whole = surgery_invariant_I(T, A)
    a, b = surgery_invariant_I(T1, A), surgery_invariant_I(T2, A)
    return ProductResult(whole == a * b, whole, a, b)


# -- theory files -------------------------------------------------------------------


_ARROW = re.compile(r"\(?\s*(?:gen_?|g)?(\d+)\s*(?:,\s*(?:gen_?|g)?(\d+)\s*)?\)?\s*->\s*(-?\d+(?:/\d+)?)")


def parse_theory(text: str) -> AbelianTheory:
    """``abelian G=m1,m2 ; q: 0 -> p/q, 1 -> p/q ; mixed: (0,1) -> p/q``.

    Sections may be split by ';' or newlines; '#' starts a comment.
    """
    body = " ; ".join(line.split("#", 1)[0] for line in text.splitlines())
    parts = [p.strip() for p in body.split(";") if p.strip()]
    orders, q, mixed = None, {}, {}
    section = None
    for p in parts:
        m = re.match(r"(?:abelian\s+)?G\s*=\s*([\d,\s]+)$", p)
        if m:
            orders = tuple(int(x) for x in m.group(1).replace(" ", "").split(",") if x)
            continue
        m = re.match(r"(q|mixed)\s*:\s*(.*)$", p)
        if m:
            section, p = m.group(1), m.group(2)
        if section is None:
            raise FormatError(f"unexpected theory line: {p!r}")
        for g in _ARROW.finditer(p):
            i, j, v = g.group(1), g.group(2), Fraction(g.group(3))
            if section == "q":
                if j is not None:
                    raise FormatError("q takes a single generator")
                q[int(i)] = v
            else:
                if j is None:
                    raise FormatError("mixed terms need two generators")
                mixed[(int(i), int(j))] = v
    if orders is None:
        raise FormatError("missing G=... in theory file")
    try:
        return AbelianTheory(orders, tuple(q.get(i, Fraction(0)) for i in range(len(orders))),
                             tuple(mixed.items()))
    except IndexError as e:
        raise FormatError(str(e)) from e
