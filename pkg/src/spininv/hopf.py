"""Finite-dimensional Hopf algebras from structure constants.

Elements are sparse dicts ``{basis index: scalar}`` and tensors are dicts
keyed by index tuples.  Scalars are ``Fraction`` or ``Cyclotomic``; nothing
is ever rounded, so every verifier below is a proof for the given constants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .cyclotomic import Cyclotomic, format_scalar, parse_scalar, sqrt_in_field


def _acc(d: dict, k, c):
    v = d.get(k)
    d[k] = c if v is None else v + c


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v != 0}


def _scale(x: dict, c) -> dict:
    return {k: v * c for k, v in x.items()} if c != 0 else {}


def _add(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, v in y.items():
        _acc(out, k, v)
    return _clean(out)


def _sub(x: dict, y: dict) -> dict:
    return _add(x, _scale(y, -1))


def _simplify(c):
    """Rational-valued cyclotomics become Fractions."""
    if isinstance(c, Cyclotomic) and c.is_rational():
        return c.c[0]
    return c


class HopfAlgebra:
    """Hopf algebra given by structure constants on a basis e_0..e_{n-1}.

    mult[(i, j)] = {k: c}        e_i e_j = sum c e_k
    comult[i] = {(j, k): c}      Delta e_i = sum c e_j (x) e_k
    antipode[i] = {j: c}         S e_i = sum c e_j
    """

    def __init__(self, n, mult, unit, comult, counit, antipode, names=None, order=1, name=""):
        self.n = n
        self.mult = {k: _clean(v) for k, v in mult.items() if _clean(v)}
        self.unit = _clean(dict(unit))
        self.comult = {i: _clean(v) for i, v in comult.items()}
        self.counit = [counit[i] if i < len(counit) else 0 for i in range(n)] if isinstance(counit, (list, tuple)) \
            else [counit.get(i, 0) for i in range(n)]
        self.antipode = {i: _clean(v) for i, v in antipode.items()}
        self.names = list(names) if names else [f"e{i}" for i in range(n)]
        self.order = order
        self.name = name
        self._sinv = None
        self._spow = {}

    # -- element operations --------------------------------------------------

    def basis(self, i) -> dict:
        return {i: Fraction(1)}

    def one(self) -> dict:
        return dict(self.unit)

    def mul(self, x: dict, y: dict) -> dict:
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                t = self.mult.get((i, j))
                if t:
                    ab = a * b
                    for k, c in t.items():
                        _acc(out, k, ab * c)
        return _clean(out)

    def prod(self, xs) -> dict:
        out = self.one()
        for x in xs:
            out = self.mul(out, x)
        return out

    def cop(self, x: dict) -> dict:
        out = {}
        for i, a in x.items():
            for jk, c in self.comult.get(i, {}).items():
                _acc(out, jk, a * c)
        return _clean(out)

    def eps(self, x: dict):
        return sum((a * self.counit[i] for i, a in x.items()), Fraction(0))

    def S(self, x: dict) -> dict:
        return self._apply(self.antipode, x)

    def _apply(self, table, x):
        out = {}
        for i, a in x.items():
            for j, c in table.get(i, {}).items():
                _acc(out, j, a * c)
        return _clean(out)

    def antipode_inverse(self) -> dict:
        if self._sinv is None:
            n = self.n
            # columns of S; solve S X = I
            M = [[self.antipode.get(j, {}).get(i, 0) for j in range(n)] for i in range(n)]
            aug = [M[i] + [1 if i == j else 0 for j in range(n)] for i in range(n)]
            red, piv = linalg.rref(aug, n)
            if piv[:n] != list(range(n)):
                raise ValueError("antipode is not invertible")
            self._sinv = {j: _clean({i: _simplify(red[i][n + j]) for i in range(n)}) for j in range(n)}
        return self._sinv

    def Sinv(self, x: dict) -> dict:
        return self._apply(self.antipode_inverse(), x)

    def Spow(self, x: dict, k: int) -> dict:
        return self._apply(self.spow_table(k), x)

    def spow_table(self, k: int) -> dict:
        """S^k as a sparse table (k may be negative)."""
        if k not in self._spow:
            if k == 0:
                t = {i: {i: Fraction(1)} for i in range(self.n)}
            elif k == 1:
                t = self.antipode
            elif k == -1:
                t = self.antipode_inverse()
            else:
                step = 1 if k > 0 else -1
                prev = self.spow_table(k - step)
                t = {i: (self.S(prev[i]) if step > 0 else self.Sinv(prev[i])) for i in range(self.n)}
            self._spow[k] = t
        return self._spow[k]

    # -- tensors ------------------------------------------------------------

    def tmul(self, T: dict, U: dict) -> dict:
        """Factorwise product of two tensors of the same arity."""
        out = {}
        for kt, ct in T.items():
            for ku, cu in U.items():
                parts = []
                for a, b in zip(kt, ku):
                    p = self.mult.get((a, b))
                    if not p:
                        break
                    parts.append(list(p.items()))
                else:
                    c0 = ct * cu
                    for combo in itertools.product(*parts):
                        c = c0
                        for _, v in combo:
                            c = c * v
                        _acc(out, tuple(k for k, _ in combo), c)
        return _clean(out)

    def tensor(self, *xs) -> dict:
        out = {(): Fraction(1)}
        for x in xs:
            out = {k + (i,): c * a for k, c in out.items() for i, a in x.items()}
        return _clean(out)

    def apply_at(self, T: dict, pos: int, f) -> dict:
        """Apply a linear map H -> H^(x m) to tensor factor ``pos``."""
        out = {}
        for k, c in T.items():
            img = f({k[pos]: Fraction(1)})
            for kk, v in img.items():
                kk = kk if isinstance(kk, tuple) else (kk,)
                _acc(out, k[:pos] + kk + k[pos + 1:], c * v)
        return _clean(out)

    def is_cocommutative(self) -> bool:
        return all(self.cop(self.basis(i)) == {(b, a): c for (a, b), c in self.cop(self.basis(i)).items()}
                   for i in range(self.n))

    def element_str(self, x: dict) -> str:
        if not x:
            return "0"
        return " + ".join(f"({c})*{self.names[i]}" for i, c in sorted(x.items()))


# -- reports ----------------------------------------------------------------


@dataclass
class Report:
    checked: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    derived_violations: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.derived_violations

    def fail(self, name, witness, derived=False):
        (self.derived_violations if derived else self.violations).append((name, witness))

    def lines(self) -> list[str]:
        out = [f"checked: {', '.join(self.checked)}"]
        for name, w in self.violations:
            out.append(f"violation: {name} at {w}")
        for name, w in self.derived_violations:
            out.append(f"derived violation (arithmetic bug): {name} at {w}")
        out.append("result: " + ("ok" if self.ok else "FAILED"))
        return out


def verify_hopf_axioms(H: HopfAlgebra, first_only: bool = True) -> Report:
    """Check every axiom on basis elements (complete by multilinearity)."""
    rep = Report()
    n = H.n
    e = [H.basis(i) for i in range(n)]
    one = H.one()

    def check(name, pairs):
        rep.checked.append(name)
        for w, lhs, rhs in pairs:
            if lhs != rhs:
                rep.fail(name, w)
                if first_only:
                    return

    prods = {(i, j): H.mul(e[i], e[j]) for i in range(n) for j in range(n)}
    check("associativity", (((i, j, k), H.mul(prods[i, j], e[k]), H.mul(e[i], prods[j, k]))
                            for i in range(n) for j in range(n) for k in range(n)))
    check("unit", ((i, H.mul(one, e[i]), e[i]) for i in range(n)))
    check("unit", ((i, H.mul(e[i], one), e[i]) for i in range(n)))

    def cop_l(x):
        return H.cop(x)

    check("coassociativity", ((i, H.apply_at(H.cop(e[i]), 0, cop_l), H.apply_at(H.cop(e[i]), 1, cop_l))
                              for i in range(n)))

    def eps_l(x):
        return {(): H.eps(x)} if H.eps(x) != 0 else {}

    check("counit", ((i, _flat(H.apply_at(H.cop(e[i]), 0, eps_l)), e[i]) for i in range(n)))
    check("counit", ((i, _flat(H.apply_at(H.cop(e[i]), 1, eps_l)), e[i]) for i in range(n)))
    check("comultiplication is multiplicative",
          (((i, j), H.cop(prods[i, j]), H.tmul(H.cop(e[i]), H.cop(e[j]))) for i in range(n) for j in range(n)))
    check("comultiplication is unital", (("1", H.cop(one), H.tensor(one, one)),))
    check("counit is multiplicative",
          (((i, j), H.eps(prods[i, j]), H.counit[i] * H.counit[j]) for i in range(n) for j in range(n)))
    check("counit is unital", (("1", H.eps(one), 1),))

    def antipode_rows():
        for i in range(n):
            left, right = {}, {}
            for (a, b), c in H.cop(e[i]).items():
                left = _add(left, _scale(H.mul(H.S(e[a]), e[b]), c))
                right = _add(right, _scale(H.mul(e[a], H.S(e[b])), c))
            target = _scale(one, H.counit[i])
            yield (i, "S(x1)x2"), left, target
            yield (i, "x1S(x2)"), right, target

    check("antipode", antipode_rows())
    return rep


def _flat(T: dict) -> dict:
    """Drop empty index positions left by applying a counit."""
    out = {}
    for k, c in T.items():
        kk = tuple(x for x in k if x != ())
        _acc(out, kk[0] if len(kk) == 1 else kk, c)
    return _clean(out)


# -- quasitriangular structures ---------------------------------------------


class Quasitriangular:
    """R in H (x) H with a cached minimal-rank factorization R = sum a_k (x) b_k."""

    def __init__(self, H: HopfAlgebra, R: dict):
        self.H = H
        self.R = _clean(dict(R))
        self._fact = None
        self._u = None

    def factors(self):
        if self._fact is None:
            n = self.H.n
            M = [[self.R.get((i, j), 0) for j in range(n)] for i in range(n)]
            red, piv = linalg.rref(M, n)
            a = [_clean({i: M[i][p] for i in range(n)}) for p in piv]
            b = [_clean({j: _simplify(red[r][j]) for j in range(n)}) for r in range(len(piv))]
            self._fact = (a, b)
        return self._fact

    @property
    def rank(self) -> int:
        return len(self.factors()[0])

    def u(self) -> dict:
        """Drinfeld element sum S(b_i) a_i."""
        if self._u is None:
            H = self.H
            a, b = self.factors()
            out = {}
            for ai, bi in zip(a, b):
                out = _add(out, H.mul(H.S(bi), ai))
            self._u = out
        return self._u

    def R_tensor(self, pos=(0, 1), arity=2) -> dict:
        """R placed in factors ``pos`` of an ``arity``-fold tensor, 1 elsewhere."""
        H = self.H
        one = H.one()
        out = {}
        for (i, j), c in self.R.items():
            slots = [one] * arity
            slots[pos[0]] = {i: Fraction(1)}
            slots[pos[1]] = {j: Fraction(1)}
            for k, v in H.tensor(*slots).items():
                _acc(out, k, c * v)
        return _clean(out)


def verify_quasitriangular(H: HopfAlgebra, R, first_only: bool = True) -> Report:
    Q = R if isinstance(R, Quasitriangular) else Quasitriangular(H, R)
    rep = Report()
    rep.notes["rank"] = Q.rank
    n = H.n
    RR = Q.R

    def check(name, rows, derived=False):
        rep.checked.append(name)
        for w, lhs, rhs in rows:
            if lhs != rhs:
                rep.fail(name, w, derived)
                if first_only:
                    return

    def cop_op(x):
        return {(b, a): c for (a, b), c in H.cop(x).items()}

    check("Delta^op(x) R = R Delta(x)",
          ((i, H.tmul(cop_op(H.basis(i)), RR), H.tmul(RR, H.cop(H.basis(i)))) for i in range(n)))
    R12, R13, R23 = Q.R_tensor((0, 1), 3), Q.R_tensor((0, 2), 3), Q.R_tensor((1, 2), 3)
    check("(Delta x id)R = R13 R23", (("R", H.apply_at(RR, 0, H.cop), H.tmul(R13, R23)),))
    check("(id x Delta)R = R13 R12", (("R", H.apply_at(RR, 1, H.cop), H.tmul(R13, R12)),))
    if rep.violations:
        return rep
    # consequences; a failure here means an arithmetic bug
    check("Yang-Baxter", (("R", H.tmul(H.tmul(R12, R13), R23), H.tmul(H.tmul(R23, R13), R12)),), True)
    a, b = Q.factors()
    one = H.one()
    e_b = {}
    e_a = {}
    for ai, bi in zip(a, b):
        e_b = _add(e_b, _scale(bi, H.eps(ai)))
        e_a = _add(e_a, _scale(ai, H.eps(bi)))
    check("(eps x id)R = 1 = (id x eps)R", (("eps_left", e_b, one), ("eps_right", e_a, one)), True)
    SR = H.apply_at(RR, 0, H.S)
    RSinv = H.apply_at(RR, 1, H.Sinv)
    unit2 = H.tensor(one, one)
    check("(S x id)R = R^-1 = (id x S^-1)R",
          (("R S1(R)", H.tmul(RR, SR), unit2), ("S1(R) R", H.tmul(SR, RR), unit2), ("S1(R) vs S2inv(R)", SR, RSinv)),
          True)
    check("(S x S)R = R", (("R", H.apply_at(SR, 1, H.S), RR),), True)
    return rep


# -- dual functionals ----------------------------------------------------------


def evaluate(f, x: dict):
    """f given as a list of values on the basis."""
    return sum((f[i] * c for i, c in x.items()), Fraction(0))


def _as_rows(equations, n):
    return [[eq.get(p, 0) for p in range(n)] for eq in equations]


def _integral_equations(H: HopfAlgebra, side: str):
    """Linear conditions on lambda: sum x1 lambda(x2) = lambda(x) 1 (left)."""
    eqs = []
    one = H.one()
    for a in range(H.n):
        rows = {}
        for (j, k), c in H.cop(H.basis(a)).items():
            out_idx, lam_idx = (j, k) if side == "left" else (k, j)
            rows.setdefault(out_idx, {})
            _acc(rows[out_idx], lam_idx, c)
        for t in range(H.n):
            eq = dict(rows.get(t, {}))
            u = one.get(t, 0)
            if u:
                _acc(eq, a, -u)
            eq = _clean(eq)
            if eq:
                eqs.append(eq)
    return eqs


def _solution_space(eqs, n):
    if not eqs:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    return [[_simplify(x) for x in v] for v in linalg.nullspace(_as_rows(eqs, n), n)]


@dataclass
class Integrals:
    left_dual: list
    right_dual: list
    two_sided: list | None
    left_in_H: list
    right_in_H: list
    unimodular: bool  # a two-sided integral exists in the dual
    two_sided_in_H: list
    report: Report

    @property
    def unimodular_algebra(self) -> bool:
        return bool(self.two_sided_in_H)


def integrals(H: HopfAlgebra) -> Integrals:
    n = H.n
    left = _solution_space(_integral_equations(H, "left"), n)
    right = _solution_space(_integral_equations(H, "right"), n)
    both = _solution_space(_integral_equations(H, "left") + _integral_equations(H, "right"), n)
    # integrals in H: x L = eps(x) L (left), L x = eps(x) L (right)
    eqL, eqR = [], []
    for x in range(H.n):
        for t in range(H.n):
            l, r = {}, {}
            for p in range(H.n):
                for k, c in H.mul(H.basis(x), H.basis(p)).items():
                    if k == t:
                        _acc(l, p, c)
                for k, c in H.mul(H.basis(p), H.basis(x)).items():
                    if k == t:
                        _acc(r, p, c)
            _acc(l, t, -H.counit[x])
            _acc(r, t, -H.counit[x])
            if _clean(l):
                eqL.append(_clean(l))
            if _clean(r):
                eqR.append(_clean(r))
    LH = _solution_space(eqL, n)
    RH = _solution_space(eqR, n)
    BH = _solution_space(eqL + eqR, n)
    rep = Report()
    lam = both[0] if both else None
    if lam is not None:
        rep.checked.append("lambda o S = lambda")
        for i in range(n):
            if evaluate(lam, H.S(H.basis(i))) != lam[i]:
                rep.fail("lambda o S = lambda", i)
                break
        rep.checked.append("lambda(ab) = lambda(b S^2(a))")
        for i in range(n):
            s2 = H.Spow(H.basis(i), 2)
            for j in range(n):
                if evaluate(lam, H.mul(H.basis(i), H.basis(j))) != evaluate(lam, H.mul(H.basis(j), s2)):
                    rep.fail("lambda(ab) = lambda(b S^2(a))", (i, j))
                    break
        # normalize the left integral in H so that lambda(Lambda) = 1
        for k, vec in enumerate(LH):
            val = evaluate(lam, dict(enumerate(vec)))
            if val != 0:
                LH = [[_simplify(x / val) for x in vec]] + LH[:k] + LH[k + 1:]
                break
    return Integrals(left, right, lam, LH, RH, lam is not None, BH, rep)


def is_quantum_character(H: HopfAlgebra, f) -> bool:
    """Both definitions, cross-checked; a disagreement is an internal error."""
    n = H.n
    e = [H.basis(i) for i in range(n)]
    ad_ok = True
    for x in range(n):
        cx = H.cop(e[x])
        for y in range(n):
            val = Fraction(0)
            for (a, b), c in cx.items():
                val += c * evaluate(f, H.mul(H.mul(e[a], e[y]), H.S(e[b])))
            if val != H.counit[x] * f[y]:
                ad_ok = False
                break
        if not ad_ok:
            break
    trace_ok = True
    for x in range(n):
        s2 = H.Spow(e[x], 2)
        for y in range(n):
            if evaluate(f, H.mul(e[x], e[y])) != evaluate(f, H.mul(e[y], s2)):
                trace_ok = False
                break
        if not trace_ok:
            break
    if ad_ok != trace_ok:
        raise AssertionError("quantum character tests disagree: internal arithmetic error")
    return ad_ok


def counit_functional(H: HopfAlgebra) -> list:
    return list(H.counit)


def convolve(H: HopfAlgebra, f, g) -> list:
    """(fg)(x) = f(x1) g(x2)."""
    out = []
    for i in range(H.n):
        out.append(sum((c * f[a] * g[b] for (a, b), c in H.cop(H.basis(i)).items()), Fraction(0)))
    return out


def drinfeld_map(Q: Quasitriangular, f) -> dict:
    """D(f) = sum_{i,j} f(a_i b_j) b_i a_j."""
    H = Q.H
    a, b = Q.factors()
    out = {}
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            c = evaluate(f, H.mul(ai, bj))
            if c != 0:
                out = _add(out, _scale(H.mul(b[i], a[j]), c))
    return out


def drinfeld_matrix(Q: Quasitriangular) -> list[list]:
    """Column p is D(e^p)."""
    n = Q.H.n
    cols = []
    for p in range(n):
        f = [Fraction(int(i == p)) for i in range(n)]
        d = drinfeld_map(Q, f)
        cols.append([d.get(i, 0) for i in range(n)])
    return [[cols[p][i] for p in range(n)] for i in range(n)]


def is_factorizable(Q: Quasitriangular):
    r = linalg.rank(drinfeld_matrix(Q))
    return r == Q.H.n, r


class NotFactorizable(ValueError):
    pass


@dataclass
class NormalizedIntegral:
    lam: list
    raw: list
    witness: object  # s with s^2 = raw(D(raw))
    raw_value: object


def normalized_integral(Q: Quasitriangular, raw=None) -> NormalizedIntegral:
    H = Q.H
    if raw is None:
        ints = integrals(H)
        if not ints.unimodular:
            raise NotFactorizable("no two-sided integral in the dual")
        raw = ints.two_sided
    fac, r = is_factorizable(Q)
    if not fac:
        raise NotFactorizable(f"Drinfeld map has rank {r} < {H.n}")
    v = evaluate(raw, drinfeld_map(Q, raw))
    if v == 0:
        raise NotFactorizable("lambda(D(lambda)) vanishes")
    s = _simplify(sqrt_in_field(v))
    lam = [_simplify(x / s) if not isinstance(x / s, Fraction) else x / s for x in raw]
    return NormalizedIntegral(lam, list(raw), s, v)


# -- Drinfeld double ------------------------------------------------------------


def _double_data(A: HopfAlgebra, variant: str):
    """Structure constants of the double on e^p (x) e_a, index p*n + a.

    variant "std":    (f x a)(g x b) = f g(S^-1(a3) . a1) x a2 b,  R = sum (eps x e_i) (x) (e^i x 1)
    variant "mirror": (f x a)(g x b) = f g(a3 . S^-1(a1)) x a2 b,  same R
    """
    n = A.n
    N = n * n
    e = [A.basis(i) for i in range(n)]
    one = A.one()
    cop2 = []
    for a in range(n):
        T = A.apply_at(A.cop(e[a]), 0, A.cop)
        cop2.append(T)
    # dual product: e^p e^x = sum_y Delta_y[(p, x)] e^y
    dual_prod = {}
    for y in range(n):
        for (p, x), c in A.cop(e[y]).items():
            dual_prod.setdefault((p, x), {})
            _acc(dual_prod[(p, x)], y, c)

    def idx(p, a):
        return p * n + a

    mult = {}
    for p in range(n):
        for a in range(n):
            for q in range(n):
                for b in range(n):
                    out = {}
                    for (a1, a2, a3), c in cop2[a].items():
                        # functional g'(x) = e^q(left . x . right)
                        if variant == "std":
                            left, right = A.Sinv(e[a3]), e[a1]
                        else:
                            left, right = e[a3], A.Sinv(e[a1])
                        a2b = A.mul(e[a2], e[b])
                        if not a2b:
                            continue
                        for x in range(n):
                            coef = A.mul(A.mul(left, e[x]), right).get(q, 0)
                            if coef == 0:
                                continue
                            for y, d in dual_prod.get((p, x), {}).items():
                                for k, v in a2b.items():
                                    _acc(out, idx(y, k), c * coef * d * v)
                    out = _clean(out)
                    if out:
                        mult[(idx(p, a), idx(q, b))] = out
    unit = _clean({idx(x, u): A.counit[x] * cu for x in range(n) for u, cu in one.items()})
    counit = [0] * N
    for p in range(n):
        for a in range(n):
            counit[idx(p, a)] = one.get(p, 0) * A.counit[a]
    # coproduct: Delta(e^p) = sum_{x,y} e^p(e_y e_x) e^x (x) e^y ; Delta(e_a) as in A
    comult = {}
    for p in range(n):
        dp = {}
        for x in range(n):
            for y in range(n):
                c = A.mult.get((y, x), {}).get(p, 0)
                if c:
                    dp[(x, y)] = c
        for a in range(n):
            out = {}
            for (x, y), c in dp.items():
                for (a1, a2), d in A.cop(e[a]).items():
                    _acc(out, (idx(x, a1), idx(y, a2)), c * d)
            comult[idx(p, a)] = _clean(out)
    partial = HopfAlgebra(N, mult, unit, comult, counit, {}, order=A.order)

    # antipode: S(f x a) = (eps x S(a)) (f o S^-1 x 1)
    eps_dual = {x: A.counit[x] for x in range(n) if A.counit[x] != 0}
    antipode = {}
    sinv = A.antipode_inverse()
    for p in range(n):
        # f o S^-1 = sum_x e^p(S^-1 e_x) e^x
        fS = {x: sinv.get(x, {}).get(p, 0) for x in range(n)}
        fS = _clean(fS)
        right = _clean({idx(x, u): c * cu for x, c in fS.items() for u, cu in one.items()})
        for a in range(n):
            Sa = A.S(e[a])
            left = _clean({idx(x, u): c * cu for x, c in eps_dual.items() for u, cu in Sa.items()})
            antipode[idx(p, a)] = partial.mul(left, right)
    names = [f"e^{A.names[p]}.{A.names[a]}" for p in range(n) for a in range(n)]
    D = HopfAlgebra(N, mult, unit, comult, counit, antipode, names=names, order=A.order,
                    name=f"D({A.name or 'A'})")
    R = {}
    for i in range(n):
        left = {idx(x, i): A.counit[x] for x in range(n) if A.counit[x] != 0}
        right = {idx(i, u): cu for u, cu in one.items()}
        for k1, c1 in left.items():
            for k2, c2 in right.items():
                _acc(R, (k1, k2), c1 * c2)
    return D, _clean(R)


DOUBLE_VARIANTS = ("std", "mirror")


def drinfeld_double(A: HopfAlgebra):
    """Double of A with its canonical R.

    Each convention variant is tried until the verifiers pass; the result is
    never trusted without verification.  Returns ``(D, Quasitriangular, variant)``.
    """
    if not verify_hopf_axioms(A).ok:
        raise ValueError("input is not a Hopf algebra")
    tried = []
    for v in DOUBLE_VARIANTS:
        D, R = _double_data(A, v)
        ra = verify_hopf_axioms(D)
        if not ra.ok:
            tried.append((v, ra.violations[:1]))
            continue
        rq = verify_quasitriangular(D, R)
        if rq.ok:
            return D, Quasitriangular(D, R), v
        tried.append((v, rq.violations[:1] + rq.derived_violations[:1]))
    raise RuntimeError(f"no double convention verified: {tried}")


# -- shipped algebras ---------------------------------------------------------


def group_algebra(m: int) -> HopfAlgebra:
    """k[Z/m] on the basis g^0..g^{m-1}."""
    one = Fraction(1)
    mult = {(i, j): {(i + j) % m: one} for i in range(m) for j in range(m)}
    comult = {i: {(i, i): one} for i in range(m)}
    antipode = {i: {(-i) % m: one} for i in range(m)}
    return HopfAlgebra(m, mult, {0: one}, comult, [one] * m, antipode,
                       names=[f"g{i}" for i in range(m)], name=f"k[Z/{m}]")


def sweedler() -> HopfAlgebra:
    """Sweedler's 4-dimensional algebra: basis 1, g, x, gx with g^2 = 1,
    x^2 = 0, xg = -gx, Delta x = x (x) 1 + g (x) x."""
    one = Fraction(1)
    # basis words as (g power, x power) -> index
    idx = {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3}
    words = {v: k for k, v in idx.items()}
    mult = {}
    for i in range(4):
        for j in range(4):
            g1, x1 = words[i]
            g2, x2 = words[j]
            if x1 and x2:
                continue
            # g^g1 x^x1 g^g2 x^x2 = (-1)^(x1 g2) g^(g1+g2) x^(x1+x2)
            sign = -one if (x1 and g2) else one
            mult[(i, j)] = {idx[((g1 + g2) % 2, x1 + x2)]: sign}
    comult = {
        0: {(0, 0): one},
        1: {(1, 1): one},
        2: {(2, 0): one, (1, 2): one},
        3: {(3, 1): one, (0, 3): one},
    }
    counit = [one, one, 0, 0]
    antipode = {0: {0: one}, 1: {1: one}, 2: {3: -one}, 3: {2: one}}
    return HopfAlgebra(4, mult, {0: one}, comult, counit, antipode,
                       names=["1", "g", "x", "gx"], name="Sweedler")


# -- file format ---------------------------------------------------------------


def _scalar(text):
    return _simplify(parse_scalar(text))


def parse_hopf(text: str):
    """Read ``hopf n m`` files; returns ``(H, R or None)``.

    Sections: ``mult`` (``i j k -> c``: e_i e_j has c on e_k), ``unit``
    (``i -> c``), ``comult`` (``i j k -> c``: Delta e_i has c on e_j (x) e_k),
    ``counit`` (``i -> c``), ``antipode`` (``i j -> c``: S e_i has c on e_j),
    ``R`` (``i j -> c``).  An optional ``names`` line lists basis names.
    """
    from .formats import FormatError

    n = order = None
    section = None
    data = {k: {} for k in ("mult", "unit", "comult", "counit", "antipode", "R")}
    names = None
    name = ""
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("hopf"):
                tok = line.split()
                n, order = int(tok[1]), int(tok[2]) if len(tok) > 2 else 1
                name = tok[3] if len(tok) > 3 else ""
                continue
            if line.startswith("names"):
                names = line.split()[1:]
                continue
            if line in data:
                section = line
                continue
            if section is None or "->" not in line:
                raise ValueError(f"unexpected line {line!r}")
            lhs, rhs = line.split("->", 1)
            ids = tuple(int(t) for t in lhs.split())
            c = _scalar(rhs)
            want = {"mult": 3, "comult": 3, "antipode": 2, "R": 2, "unit": 1, "counit": 1}[section]
            if len(ids) != want:
                raise ValueError(f"section {section} needs {want} indices")
            if any(not 0 <= i < n for i in ids):
                raise ValueError(f"index out of range in {ids}")
            data[section][ids] = c
        except (ValueError, TypeError, IndexError, ZeroDivisionError) as e:
            raise FormatError(f"line {ln}: {e}") from None
    if n is None:
        raise FormatError("missing 'hopf n m' header")
    mult, comult, antipode = {}, {}, {}
    for (i, j, k), c in data["mult"].items():
        mult.setdefault((i, j), {})[k] = c
    for (i, j, k), c in data["comult"].items():
        comult.setdefault(i, {})[(j, k)] = c
    for (i, j), c in data["antipode"].items():
        antipode.setdefault(i, {})[j] = c
    unit = {i: c for (i,), c in data["unit"].items()}
    counit = [data["counit"].get((i,), 0) for i in range(n)]
    H = HopfAlgebra(n, mult, unit, comult, counit, antipode, names=names, order=order, name=name)
    R = {(i, j): c for (i, j), c in data["R"].items()} or None
    return H, R


def format_hopf(H: HopfAlgebra, R: dict | None = None) -> str:
    lines = [f"hopf {H.n} {H.order}" + (f" {H.name}" if H.name and " " not in H.name else "")]
    lines.append("names " + " ".join(H.names))
    lines.append("mult")
    for (i, j), t in sorted(H.mult.items()):
        for k, c in sorted(t.items()):
            lines.append(f"{i} {j} {k} -> {format_scalar(c)}")
    lines.append("unit")
    for i, c in sorted(H.unit.items()):
        lines.append(f"{i} -> {format_scalar(c)}")
    lines.append("comult")
    for i, t in sorted(H.comult.items()):
        for (j, k), c in sorted(t.items()):
            lines.append(f"{i} {j} {k} -> {format_scalar(c)}")
    lines.append("counit")
    for i, c in enumerate(H.counit):
        if c != 0:
            lines.append(f"{i} -> {format_scalar(c)}")
    lines.append("antipode")
    for i, t in sorted(H.antipode.items()):
        for j, c in sorted(t.items()):
            lines.append(f"{i} {j} -> {format_scalar(c)}")
    if R:
        lines.append("R")
        for (i, j), c in sorted(R.items()):
            lines.append(f"{i} {j} -> {format_scalar(c)}")
    return "\n".join(lines) + "\n"


def parse_functional(text: str, n: int) -> list:
    """Character file: lines ``i -> scalar`` (missing entries are 0)."""
    from .formats import FormatError

    f = [Fraction(0)] * n
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("functional"):
            continue
        try:
            lhs, rhs = line.split("->", 1)
            i = int(lhs)
            if not 0 <= i < n:
                raise ValueError(f"index {i} out of range")
            f[i] = _scalar(rhs)
        except (ValueError, ZeroDivisionError) as e:
            raise FormatError(f"line {ln}: {e}") from None
    return f


def quantum_characters(H: HopfAlgebra) -> list:
    """Basis of {f : f(xy) = f(y S^2(x)) for all x, y}."""
    n = H.n
    eqs = []
    for x in range(n):
        s2 = H.Spow(H.basis(x), 2)
        for y in range(n):
            eq = {}
            for k, c in H.mul(H.basis(x), H.basis(y)).items():
                _acc(eq, k, c)
            for k, c in H.mul(H.basis(y), s2).items():
                _acc(eq, k, -c)
            eq = _clean(eq)
            if eq:
                eqs.append(eq)
    return _solution_space(eqs, n)
