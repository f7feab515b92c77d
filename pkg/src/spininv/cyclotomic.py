"""Exact arithmetic in cyclotomic fields Q(zeta_m).

A value is stored as its coefficient vector in the power basis
``1, z, ..., z^(phi(m)-1)`` of ``Q[z] / Phi_m(z)``.  Reduction modulo the
cyclotomic polynomial makes the representation canonical inside a fixed
order, so equality is coefficient equality.  Values of different orders are
compared and combined after promotion to the lcm of the orders.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "Cyclotomic",
    "NotASquare",
    "IncompatibleOrder",
    "zeta",
    "root_of_unity",
    "sqrt_in_field",
    "numeric",
    "conjugate",
    "cyc_arith",
    "parse_scalar",
    "format_scalar",
    "reduce_order",
]


class NotASquare(ValueError):
    pass


class IncompatibleOrder(ValueError):
    pass


# -- polynomial plumbing ---------------------------------------------------


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1] // den[-1]
        out[k] = c
        for j, d in enumerate(den):
            num[k + j] -= c * d
    assert not any(num), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _polydiv_exact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def totient(m: int) -> int:
    return len(cyclotomic_poly(m)) - 1


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds z^k reduced mod Phi_m, for 0 <= k < m."""
    phi = cyclotomic_poly(m)
    d = len(phi) - 1
    rows = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(cur))
        # multiply by z and reduce the overflowing top coefficient
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:-1])]
    return tuple(rows)


def _mobius(n: int) -> int:
    res, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


@lru_cache(maxsize=None)
def _ramanujan(m: int, k: int) -> int:
    g = math.gcd(m, k % m) if k % m else m
    q = m // g
    return _mobius(q) * totient(m) // totient(q)


# -- the value type --------------------------------------------------------


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Cyclotomic:
    """Immutable element of Q(zeta_m)."""

    __slots__ = ("m", "c")

    def __init__(self, m: int, coeffs) -> None:
        coeffs = tuple(_frac(x) for x in coeffs)
        if len(coeffs) != totient(m):
            raise ValueError(f"order {m} needs {totient(m)} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "c", coeffs)

    def __setattr__(self, *_):
        raise AttributeError("Cyclotomic is immutable")

    @classmethod
    def _raw(cls, m: int, coeffs: tuple) -> "Cyclotomic":
        obj = object.__new__(cls)
        object.__setattr__(obj, "m", m)
        object.__setattr__(obj, "c", coeffs)
        return obj

    # constructors
    @classmethod
    def rational(cls, q, m: int = 1) -> "Cyclotomic":
        d = totient(m)
        return cls._raw(m, (_frac(q),) + (Fraction(0),) * (d - 1))

    @classmethod
    def from_powers(cls, m: int, powers) -> "Cyclotomic":
        """Value of sum_k powers[k] * zeta_m^k for any number of terms."""
        table = _power_table(m)
        acc = [Fraction(0)] * totient(m)
        for k, a in enumerate(powers):
            if a:
                a = _frac(a)
                for i, t in enumerate(table[k % m]):
                    if t:
                        acc[i] += a * t
        return cls._raw(m, tuple(acc))

    # structural queries
    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def promote(self, m2: int) -> "Cyclotomic":
        if m2 == self.m:
            return self
        if m2 % self.m:
            raise IncompatibleOrder(f"cannot embed order {self.m} into order {m2}")
        step = m2 // self.m
        return Cyclotomic.from_powers(m2, _spread(self.c, step))

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.m == self.m:
                return self, other
            l = self.m * other.m // math.gcd(self.m, other.m)
            return self.promote(l), other.promote(l)
        if isinstance(other, (int, Rational)):
            return self, Cyclotomic.rational(other, self.m)
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Cyclotomic._raw(a.m, tuple(x + y for x, y in zip(a.c, b.c)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.m, tuple(-x for x in self.c))

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Cyclotomic._raw(a.m, tuple(x - y for x, y in zip(a.c, b.c)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Cyclotomic):
            q = _frac(other)
            return Cyclotomic._raw(self.m, tuple(x * q for x in self.c))
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if a.m <= 2:
            return Cyclotomic._raw(a.m, (a.c[0] * b.c[0],))
        m = a.m
        acc = [Fraction(0)] * m
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        acc[(i + j) % m] += x * y
        return Cyclotomic.from_powers(m, acc)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.is_rational():
            return Cyclotomic.rational(1 / self.c[0], self.m)
        from .linalg import solve

        d = len(self.c)
        cols = []
        z = Cyclotomic.zeta(self.m)
        cur = self
        for _ in range(d):
            cols.append(cur.c)
            cur = cur * z
        rows = [[cols[j][i] for j in range(d)] for i in range(d)]
        x = solve(rows, [1] + [0] * (d - 1))
        return Cyclotomic(self.m, x)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Cyclotomic):
            if other == 0:
                raise ZeroDivisionError("division by zero in cyclotomic field")
            return self * (1 / _frac(other))
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyclotomic.rational(other, self.m) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclotomic.rational(1, self.m)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison
    def __eq__(self, other):
        if isinstance(other, Cyclotomic) or isinstance(other, (int, Rational)):
            a, b = self._coerce(other)
            return a.c == b.c
        return NotImplemented

    def __hash__(self):
        tr = sum((x * _ramanujan(self.m, k) for k, x in enumerate(self.c)), Fraction(0))
        return hash(tr / totient(self.m))

    def __bool__(self):
        return not self.is_zero()

    def conjugate(self) -> "Cyclotomic":
        return Cyclotomic.from_powers(self.m, _conj_powers(self.c, self.m))

    def __complex__(self):
        return numeric(self)

    def __repr__(self):
        return f"Cyclotomic({format_scalar(self)!r})"

    def __str__(self):
        if self.is_rational():
            return str(self.c[0])
        terms = []
        for k, x in enumerate(self.c):
            if x:
                mon = "1" if k == 0 else (f"z{self.m}" if k == 1 else f"z{self.m}^{k}")
                terms.append(f"({x})*{mon}" if k else f"{x}")
        return " + ".join(terms)

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "Cyclotomic":
        return cls._raw(m, tuple(Fraction(t) for t in _power_table(m)[k % m]))


def _spread(coeffs, step: int) -> list:
    out = [0] * (step * (len(coeffs) - 1) + 1)
    for i, x in enumerate(coeffs):
        out[i * step] = x
    return out


def _conj_powers(coeffs, m: int) -> list:
    out = [0] * m
    for i, x in enumerate(coeffs):
        out[(-i) % m] += x
    return out


# -- public operations -----------------------------------------------------


def zeta(m: int, k: int = 1) -> Cyclotomic:
    return Cyclotomic.zeta(m, k)


def root_of_unity(q) -> Cyclotomic:
    """exp(2 pi i q) for a rational q, in the smallest cyclotomic order."""
    q = _frac(q) % 1
    return Cyclotomic.zeta(q.denominator, q.numerator)


def as_cyclotomic(x, m: int = 1) -> Cyclotomic:
    return x if isinstance(x, Cyclotomic) else Cyclotomic.rational(x, m)


def cyc_arith(a, b, op: str, auto_promote: bool = True) -> Cyclotomic:
    a, b = as_cyclotomic(a), as_cyclotomic(b)
    if not auto_promote and a.m != b.m:
        raise IncompatibleOrder(f"orders {a.m} and {b.m} differ")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def conjugate(a) -> Cyclotomic:
    return as_cyclotomic(a).conjugate()


def numeric(a, digits: int | None = None) -> complex:
    """Complex approximation under zeta_m -> exp(2 pi i / m).  Display only."""
    a = as_cyclotomic(a)
    if digits is None or digits <= 15:
        return sum(
            (float(x) * cmath.exp(2j * math.pi * k / a.m) for k, x in enumerate(a.c) if x),
            0j,
        )
    import mpmath

    with mpmath.workdps(digits + 5):
        val = mpmath.fsum(
            mpmath.mpf(x.numerator) / x.denominator * mpmath.expjpi(mpmath.mpf(2 * k) / a.m)
            for k, x in enumerate(a.c)
            if x
        )
        return complex(val)


def _upper_half(w: Cyclotomic) -> bool:
    # argument in [0, pi); exact ties are impossible except on the real axis
    z = numeric(w, 40)
    if abs(z.imag) > 1e-12 * max(1.0, abs(z)):
        return z.imag > 0
    return z.real > 0


def _pick_root(w: Cyclotomic) -> Cyclotomic:
    return w if _upper_half(w) else -w


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s^2 * t with t squarefree."""
    s, t, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            t *= p
        p += 1
    return s, t * n


def _primes(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _sqrt_squarefree(t: int) -> Cyclotomic:
    """sqrt(t) for squarefree t >= 1 via quadratic Gauss sums, minimal order."""
    if t == 1:
        return Cyclotomic.rational(1)
    odd = [p for p in _primes(t) if p != 2]
    t_odd = math.prod(odd)
    k = sum(1 for p in odd if p % 4 == 3)
    if t % 2 == 0:
        order = 8 * t_odd
    elif k % 2:
        order = 4 * t_odd
    else:
        order = t_odd
    val = Cyclotomic.rational(1, order)
    for p in odd:
        g = Cyclotomic.from_powers(p, [_legendre(a, p) for a in range(p)])
        val = val * g.promote(order)
    if k % 2:
        # product of Gauss sums is sqrt(-t_odd) up to sign
        val = val * Cyclotomic.zeta(order, 3 * order // 4)
    if t % 2 == 0:
        val = val * (Cyclotomic.zeta(order, order // 8) + Cyclotomic.zeta(order, -order // 8))
    return _pick_root(val)


def _root_of_unity_exponent(v: Cyclotomic):
    """k with v == zeta_{2m}^(2k mod 2m), i.e. v == zeta_{M}^j; returns (M, j)."""
    M = v.m if v.m % 2 == 0 else 2 * v.m
    vv = v.promote(M)
    for j in range(M):
        if Cyclotomic.zeta(M, j) == vv:
            return M, j
    return None


def _sqrt_root_of_unity(v: Cyclotomic) -> Cyclotomic | None:
    hit = _root_of_unity_exponent(v)
    if hit is None:
        return None
    M, j = hit
    return _pick_root(Cyclotomic.zeta(2 * M, j))


def sqrt_in_field(v) -> Cyclotomic:
    """Exact square root, promoting the order when needed.

    Strategies, in order: nonnegative (or negative) rationals through Gauss
    sums; roots of unity through zeta_{2m}; a rational multiple of a root of
    unity through both.  The returned root has argument in [0, pi).
    """
    v = as_cyclotomic(v)
    if v.is_zero():
        return v
    if v.is_rational():
        q = v.c[0]
        neg = q < 0
        q = abs(q)
        s_num, t_num = _squarefree_split(q.numerator * q.denominator)
        root = _sqrt_squarefree(t_num) * Fraction(s_num, q.denominator)
        if neg:
            root = root * Cyclotomic.zeta(4)
        l = v.m * root.m // math.gcd(v.m, root.m)
        return _pick_root(root.promote(l))
    r = _sqrt_root_of_unity(v)
    if r is not None:
        return r
    # rational multiple of a root of unity
    M = v.m if v.m % 2 == 0 else 2 * v.m
    vv = v.promote(M)
    for j in range(M):
        u = vv * Cyclotomic.zeta(M, -j)
        if u.is_rational():
            a = sqrt_in_field(u)
            b = Cyclotomic.zeta(2 * M, j)
            w = a * b
            if w * w == v:
                return _pick_root(w)
    raise NotASquare(f"no square root found for {format_scalar(v)}")


def reduce_order(a) -> Cyclotomic:
    """The same value written in the smallest order that contains it."""
    from .linalg import solve

    a = as_cyclotomic(a)
    if a.is_rational():
        return Cyclotomic.rational(a.c[0])
    for d in sorted(k for k in range(1, a.m) if a.m % k == 0):
        if d % 4 == 2:
            continue  # Q(zeta_d) = Q(zeta_{d/2})
        basis = [Cyclotomic.zeta(d, i).promote(a.m).c for i in range(totient(d))]
        x = solve([list(col) for col in zip(*basis)], list(a.c))
        if x is not None:
            return Cyclotomic._raw(d, tuple(Fraction(v) for v in x))
    return a


# -- textual encoding ------------------------------------------------------


def format_scalar(a) -> str:
    """``m; c0/d0, c1/d1, ...``"""
    a = as_cyclotomic(a)
    return f"{a.m}; " + ", ".join(f"{x.numerator}/{x.denominator}" for x in a.c)


def parse_scalar(text: str) -> Cyclotomic:
    text = text.strip()
    if ";" not in text:
        return Cyclotomic.rational(Fraction(text))
    head, body = text.split(";", 1)
    m = int(head)
    parts = [p.strip() for p in body.split(",") if p.strip()]
    return Cyclotomic(m, [Fraction(p) for p in parts])
