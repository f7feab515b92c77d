"""Integer linking matrices of surgery presentations.

Signature, Rohlin residue, characteristic sublinks over F_2 and the
matrix-level Kirby moves (handle slide, +-1 blow-up, Hopf stabilization).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction


class NotEven(ValueError):
    pass


class InconsistentSystem(ValueError):
    pass


@dataclass(frozen=True)
class SurgeryMatrix:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise ValueError("linking matrix must be square")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"linking matrix not symmetric at ({i}, {j})")

    @classmethod
    def of(cls, rows) -> "SurgeryMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def diagonal(self) -> list[int]:
        return [self.rows[i][i] for i in range(self.n)]

    def is_even(self) -> bool:
        return all(d % 2 == 0 for d in self.diagonal())

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def direct_sum(self, other: "SurgeryMatrix") -> "SurgeryMatrix":
        n, k = self.n, other.n
        rows = [list(r) + [0] * k for r in self.rows]
        rows += [[0] * n + list(r) for r in other.rows]
        return SurgeryMatrix.of(rows)

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in r) for r in self.rows)


def signature(A: SurgeryMatrix) -> int:
    """Signature by exact congruence diagonalization over Q.

    A nonzero diagonal pivot contributes its sign.  When the remaining
    diagonal vanishes, a hyperbolic 2x2 block [[0, b], [b, 0]] is split off
    and contributes 0.
    """
    M = [[Fraction(x) for x in r] for r in A.rows]
    idx = list(range(A.n))
    sig = 0
    while idx:
        k = next((i for i in idx if M[i][i] != 0), None)
        if k is not None:
            piv = M[k][k]
            sig += 1 if piv > 0 else -1
            rest = [i for i in idx if i != k]
            for i in rest:
                f = M[i][k] / piv
                if f:
                    for j in rest:
                        M[i][j] -= f * M[k][j]
            idx = rest
            continue
        pair = next(((i, j) for i in idx for j in idx if i < j and M[i][j] != 0), None)
        if pair is None:
            break  # remaining block is zero
        p, q = pair
        b = M[p][q]
        rest = [i for i in idx if i not in pair]
        # eliminate against the block [[0, b], [b, 0]]; its inverse is [[0, 1/b], [1/b, 0]]
        for i in rest:
            cp, cq = M[i][p], M[i][q]
            if not (cp or cq):
                continue
            for j in rest:
                M[i][j] -= (cp * M[q][j] + cq * M[p][j]) / b
        idx = rest
    return sig


@dataclass(frozen=True)
class RohlinResult:
    mu: int
    signature: int
    warnings: tuple[str, ...] = field(default=())


def rohlin_mu(A: SurgeryMatrix) -> RohlinResult:
    if not A.is_even():
        raise NotEven("Rohlin residue needs an even linking matrix")
    s = signature(A)
    warnings = ()
    if s % 2:
        warnings = ("mu must be even, diagram likely misoriented",)
    return RohlinResult(s % 16, s, warnings)


# -- F_2 linear algebra ----------------------------------------------------


def _solve_f2(rows: list[list[int]], rhs: list[int]):
    """Particular solution and kernel basis of rows @ x = rhs over F_2."""
    n = len(rows[0]) if rows else 0
    aug = [[x & 1 for x in r] + [b & 1] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(aug)) if aug[i][c]), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                aug[i] = [a ^ b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(aug)):
        if aug[i][n]:
            raise InconsistentSystem("A c = diag(A) has no solution mod 2")
    part = [0] * n
    for i, c in enumerate(pivots):
        part[c] = aug[i][n]
    kernel = []
    for f in (c for c in range(n) if c not in pivots):
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = aug[i][f]
        kernel.append(v)
    return part, kernel


def is_characteristic(A: SurgeryMatrix, c) -> bool:
    return all(
        (sum(A[i, j] * c[j] for j in range(A.n)) - A[i, i]) % 2 == 0 for i in range(A.n)
    )


def characteristic_sublinks(A: SurgeryMatrix) -> list[tuple[int, ...]]:
    """Every c in F_2^n with A c = diag(A) mod 2, sorted."""
    if A.n == 0:
        return [()]
    part, kernel = _solve_f2(A.as_lists(), A.diagonal())
    out = set()
    for bits in itertools.product((0, 1), repeat=len(kernel)):
        v = list(part)
        for b, k in zip(bits, kernel):
            if b:
                v = [x ^ y for x, y in zip(v, k)]
        out.add(tuple(v))
    return sorted(out)


# -- moves -----------------------------------------------------------------

HOPF = SurgeryMatrix.of([[0, 1], [1, 0]])


def slide(A: SurgeryMatrix, i: int, j: int, sign: int = 1) -> SurgeryMatrix:
    """Slide component i over component j: A -> E^T A E with E = I + sign e_j e_i^T."""
    n = A.n
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise IndexError(f"bad slide indices ({i}, {j}) for {n} components")
    if sign not in (1, -1):
        raise ValueError("slide sign must be +1 or -1")
    M = A.as_lists()
    # column i += sign * column j, then row i += sign * row j
    for r in range(n):
        M[r][i] += sign * M[r][j]
    for c in range(n):
        M[i][c] += sign * M[j][c]
    return SurgeryMatrix.of(M)


def slide_sublink(c, i: int, j: int, sign: int = 1) -> tuple[int, ...]:
    """Characteristic vector in the new basis: c' = E^{-1} c mod 2."""
    c = list(c)
    c[j] = (c[j] - sign * c[i]) % 2
    return tuple(c)


def blowup(A: SurgeryMatrix, eps: int, linking) -> SurgeryMatrix:
    """Add an eps-framed unknot with the given linking numbers, twisting the rest.

    New matrix: A + eps v v^T bordered by v and eps.  Congruent to A + [eps].
    """
    if eps not in (1, -1):
        raise ValueError("blow-up framing must be +1 or -1")
    v = list(linking)
    if len(v) != A.n:
        raise IndexError("linking vector length must match component count")
    n = A.n
    M = [[A[i, j] + eps * v[i] * v[j] for j in range(n)] + [v[i]] for i in range(n)]
    M.append(v + [eps])
    return SurgeryMatrix.of(M)


def blowup_sublink(c, linking) -> tuple[int, ...]:
    """The new unknot joins the sublink iff its linking with the sublink is even."""
    s = sum(ci * vi for ci, vi in zip(c, linking))
    return tuple(c) + ((1,) if s % 2 == 0 else (0,))


def stabilize_hopf(A: SurgeryMatrix) -> SurgeryMatrix:
    return A.direct_sum(HOPF)


def matrix_move(A: SurgeryMatrix, move: str, *args, sublink=None):
    """Dispatch a named move; returns ``(A', c')`` with ``c'`` None if no sublink given."""
    if move == "slide":
        i, j, *rest = args
        sign = rest[0] if rest else 1
        B = slide(A, i, j, sign)
        return B, (slide_sublink(sublink, i, j, sign) if sublink is not None else None)
    if move == "blowup":
        eps, v = args
        B = blowup(A, eps, v)
        return B, (blowup_sublink(sublink, v) if sublink is not None else None)
    if move == "stabilize_hopf":
        B = stabilize_hopf(A)
        return B, (tuple(sublink) + (0, 0) if sublink is not None else None)
    raise ValueError(f"unknown matrix move {move!r}")


# -- fixed matrices ---------------------------------------------------------

_E8_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]


def e8_matrix(sign: int = 1) -> SurgeryMatrix:
    """Positive definite even unimodular E8 form (sign=-1 gives -E8)."""
    M = [[0] * 8 for _ in range(8)]
    for i in range(8):
        M[i][i] = 2 * sign
    for a, b in _E8_EDGES:
        M[a][b] = M[b][a] = -sign
    return SurgeryMatrix.of(M)


def kummer_matrix() -> SurgeryMatrix:
    """2(-E8) + 3H: even, rank 22, signature -16."""
    K = e8_matrix(-1).direct_sum(e8_matrix(-1))
    for _ in range(3):
        K = K.direct_sum(HOPF)
    return K


def blocks(A: SurgeryMatrix) -> list[list[int]]:
    """Index sets of the connected blocks of A (off-diagonal adjacency)."""
    seen, out = set(), []
    for s in range(A.n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(A.n):
                if j not in seen and A[i, j]:
                    seen.add(j)
                    stack.append(j)
        out.append(sorted(comp))
    return out


def submatrix(A: SurgeryMatrix, idx) -> SurgeryMatrix:
    return SurgeryMatrix.of([[A[i, j] for j in idx] for i in idx])


# -- matrix files -----------------------------------------------------------


def parse_matrix(text: str) -> SurgeryMatrix:
    """``matrix n`` header, then n rows of integers ('#' starts a comment)."""
    from .formats import FormatError

    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("matrix"):
        raise FormatError("missing 'matrix n' header")
    try:
        n = int(lines[0].split()[1])
        rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    except (IndexError, ValueError) as e:
        raise FormatError(f"bad matrix file: {e}") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise FormatError(f"expected {n} rows of {n} integers")
    try:
        return SurgeryMatrix.of(rows)
    except ValueError as e:
        raise FormatError(str(e)) from None


def format_matrix(A: SurgeryMatrix) -> str:
    return f"matrix {A.n}\n" + "".join(" ".join(str(x) for x in r) + "\n" for r in A.rows)
