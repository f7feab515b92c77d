"""Decorated-projection state sum for even links labeled by quantum characters.

Convention (pinned by the tests):

* at an ``x+`` crossing the strand entering from the lower left (the over
  strand) carries ``a_k`` and the other strand ``b_k``;
* at an ``x-`` crossing the over strand (entering from the lower right)
  carries ``S(a_k)`` and the other ``b_k``, i.e. ``R^-1 = (S x id)R``;
* from the basepoint each component is walked in the basepoint direction,
  decorations are multiplied left to right in visiting order, each acted on
  by ``S`` to the rotation accumulated so far (plus one when the walk
  starts downward, since rotation is measured from the upward direction);
* the component value is ``lambda(word)`` when the walk follows the
  orientation and ``lambda(S(word))`` otherwise.

With these choices the Hopf link with both components labeled ``lambda``
evaluates to ``lambda(D(lambda))`` with ``D(f) = sum f(a_i b_j) b_i a_j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import diagram as dg
from .hopf import (
    HopfAlgebra,
    Quasitriangular,
    _add,
    _scale,
    _simplify,
    drinfeld_map,
    evaluate,
    is_quantum_character,
    normalized_integral,
    verify_hopf_axioms,
    verify_quasitriangular,
)


class NotEvenLink(ValueError):
    pass


class NotQuantumCharacter(ValueError):
    pass


class UnverifiedAlgebra(ValueError):
    pass


@dataclass(frozen=True)
class Slot:
    """One decoration met on a component walk."""

    slice: int
    factor: str  # "a", "Sa" or "b"
    rotation: int


@dataclass(frozen=True)
class ComponentWalk:
    slots: tuple
    agrees: bool
    total_rotation: int


def crossing_factor(kind: str, strand: str) -> str:
    if kind == "x+":
        return "a" if strand == "L" else "b"
    return "Sa" if strand == "R" else "b"


def component_walks(d: dg.SlicedDiagram) -> list[ComponentWalk]:
    """Decoration slots of every component from its basepoint."""
    dirs = d.directions()
    out = []
    for c in range(d.n_components):
        lev, wire, bdir = d.basepoint(c)
        steps = dg.walk(d.slices, d.widths, lev, wire, bdir)
        events = [ev for _, _, ev in steps[1:]] + [steps[0][2]]
        # rotation is measured from the upward direction, so a downward
        # start is already half a turn (counterclockwise) along
        offset = 1 if bdir < 0 else 0
        rot = 0
        slots = []
        for ev in events:
            if ev is None:
                continue
            if ev.kind == "crit":
                rot += ev.value
            else:
                slots.append(Slot(ev.slice, crossing_factor(d.slices[ev.slice][0], ev.strand), rot + offset))
        agrees = dirs[(lev, wire)] == bdir
        out.append(ComponentWalk(tuple(slots), agrees, rot))
    return out


@dataclass
class Engine:
    """A verified quasitriangular Hopf algebra ready for state sums."""

    H: HopfAlgebra
    Q: Quasitriangular
    _cache: dict = field(default_factory=dict)

    @classmethod
    def build(cls, H: HopfAlgebra, R, verify: bool = True) -> "Engine":
        Q = R if isinstance(R, Quasitriangular) else Quasitriangular(H, R)
        if verify:
            ra = verify_hopf_axioms(H)
            if not ra.ok:
                raise UnverifiedAlgebra("Hopf axioms fail: " + "; ".join(ra.lines()))
            rq = verify_quasitriangular(H, Q)
            if not rq.ok:
                raise UnverifiedAlgebra("quasitriangular axioms fail: " + "; ".join(rq.lines()))
        return cls(H, Q)

    @property
    def rho(self) -> int:
        return self.Q.rank

    def factor(self, name: str, k: int, rot: int) -> dict:
        key = (name, k, rot)
        if key not in self._cache:
            a, b = self.Q.factors()
            x = a[k] if name == "a" else b[k] if name == "b" else self.H.S(a[k])
            self._cache[key] = self.H.Spow(x, rot)
        return self._cache[key]


def prepare(d: dg.SlicedDiagram, normalize: bool = True) -> dg.SlicedDiagram:
    if not dg.is_even_link(d):
        raise NotEvenLink("every component must have even framing")
    if normalize:
        d = dg.normalize_winding(d)
    bad = [g.index for g in d.geometry() if g.winding != 1]
    if bad:
        raise NotEvenLink(f"components {bad} do not have winding number one")
    return d


def _check_labels(eng: Engine, labels, n):
    if len(labels) != n:
        raise ValueError(f"need {n} labels, got {len(labels)}")
    seen = {}
    for f in labels:
        key = id(f)
        if key not in seen:
            seen[key] = is_quantum_character(eng.H, f)
        if not seen[key]:
            raise NotQuantumCharacter("label is not a quantum character")


def _label_vector(eng: Engine, f, agrees: bool):
    """Functional applied to the word: f, or f o S."""
    if agrees:
        return list(f)
    H = eng.H
    return [evaluate(f, H.S(H.basis(i))) for i in range(H.n)]


@dataclass
class KResult:
    value: object
    states: int
    rho: int
    crossings: int
    path: str
    diagram: dg.SlicedDiagram


def evaluate_K(d: dg.SlicedDiagram, eng: Engine, labels, normalize: bool = True,
               check_labels: bool = True, fast: bool | None = None) -> KResult:
    """K(L) by the literal state sum.

    ``labels`` is one functional per component in tag order, or a single
    functional used for every component.  ``fast=None`` picks the integer
    kernel whenever the data are rational and the overflow bound allows it.
    """
    d = prepare(d, normalize)
    n = d.n_components
    if labels and not isinstance(labels[0], (list, tuple)):
        labels = [labels] * n
    else:
        by_tag = list(labels)
        labels = [by_tag[t] if t < len(by_tag) else by_tag[-1] for t in d.tags]
    if check_labels:
        _check_labels(eng, labels, n)
    walks = component_walks(d)
    for c, w in enumerate(walks):
        want = 2 if w.agrees else -2
        if w.total_rotation != want:
            raise AssertionError(f"component {c}: total rotation {w.total_rotation}, expected {want}")
    cross = [k for k, s in enumerate(d.slices) if s[0] in dg.CROSSINGS]
    rho = eng.rho
    if fast is not False:
        from . import kernels

        plan = kernels.plan_state_sum(eng, d, walks, labels, cross)
        if plan is not None:
            value, path = kernels.run_plan(plan)
            return KResult(value, rho ** len(cross), rho, len(cross), path, d)
        if fast:
            raise ValueError("fast path requested but the data are not rational")
    value = _reference_sum(eng, walks, labels, cross)
    return KResult(value, rho ** len(cross), rho, len(cross), "reference", d)


def _reference_sum(eng: Engine, walks, labels, cross):
    H = eng.H
    rho = eng.rho
    vecs = [_label_vector(eng, f, w.agrees) for f, w in zip(labels, walks)]
    pos = {s: i for i, s in enumerate(cross)}
    total = Fraction(0)
    for state in itertools.product(range(rho), repeat=len(cross)):
        term = Fraction(1)
        for w, f in zip(walks, vecs):
            word = H.one()
            for sl in w.slots:
                word = H.mul(word, eng.factor(sl.factor, state[pos[sl.slice]], sl.rotation))
                if not word:
                    break
            v = evaluate(f, word)
            term = term * v
            if term == 0:
                break
        total = total + term
    return _simplify(total)


def reference_K(d, eng, labels, normalize=True):
    return evaluate_K(d, eng, labels, normalize, fast=False).value


# -- three-manifold invariant ---------------------------------------------------


@dataclass
class FramedResult:
    value: object
    raw_value: object
    witness: object
    components: int
    K: KResult


def framed_invariant(d: dg.SlicedDiagram, eng: Engine, normalized=None, fast=None) -> FramedResult:
    """K with every component labeled by the normalized integral.

    Computed as K(raw lambda) / s^n; the direct evaluation with normalized
    lambda is the other side of the equality gate in the tests.
    """
    N = normalized if normalized is not None else normalized_integral(eng.Q)
    n = dg.SlicedDiagram(d.slices).n_components if d.slices else 0
    if n == 0:
        return FramedResult(Fraction(1), Fraction(1), N.witness, 0, None)
    K = evaluate_K(d, eng, N.raw, fast=fast)
    value = _simplify(K.value / (N.witness ** n)) if n else Fraction(1)
    return FramedResult(value, K.value, N.witness, n, K)


def hopf_anchor(eng: Engine, lam) -> tuple:
    """(K of the 0-framed Hopf link labeled lam, lam(D(lam)))."""
    K = evaluate_K(dg.hopf_link(0, 0), eng, lam).value
    return K, _simplify(evaluate(lam, drinfeld_map(eng.Q, lam)))


# -- cabling identities ----------------------------------------------------------


def _delta_power(H: HopfAlgebra, x: dict, n: int) -> dict:
    """Delta^{n-1}(x) as an n-fold tensor."""
    T = {(i,): c for i, c in x.items()}
    for _ in range(n - 1):
        T = H.apply_at(T, len(next(iter(T))) - 1 if T else 0, H.cop) if T else {}
    return T


def cabling_tensor(eng: Engine, n: int, variant: str = "standard") -> dict:
    """Closed form of a crossing of one strand with n parallel strands.

    standard         sum a_k (x) Delta^{n-1}(b_k)
    opposite-parity  sum S(b_k) (x) Delta^{n-1}(a_k)
    mirror           sum Delta^{n-1}(S(b_k)) (x) a_k
    mirror-opposite  sum Delta^{n-1}(a_k) (x) b_k
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    H = eng.H
    a, b = eng.Q.factors()
    out = {}
    for ak, bk in zip(a, b):
        if variant == "standard":
            T = _prefix(ak, _delta_power(H, bk, n))
        elif variant == "opposite-parity":
            T = _prefix(H.S(bk), _delta_power(H, ak, n))
        elif variant == "mirror":
            T = _suffix(_delta_power(H, H.S(bk), n), ak)
        elif variant == "mirror-opposite":
            T = _suffix(_delta_power(H, ak, n), bk)
        else:
            raise ValueError(f"unknown cabling variant {variant!r}")
        out = _add(out, T)
    return out


def _prefix(x: dict, T: dict) -> dict:
    out = {}
    for i, a in x.items():
        for k, c in T.items():
            out[(i,) + k] = out.get((i,) + k, 0) + a * c
    return {k: v for k, v in out.items() if v != 0}


def _suffix(T: dict, x: dict) -> dict:
    out = {}
    for k, c in T.items():
        for i, a in x.items():
            out[k + (i,)] = out.get(k + (i,), 0) + a * c
    return {k: v for k, v in out.items() if v != 0}


def fenn_rourke_tensor_check(eng: Engine, lam, n: int):
    """Both sides of the spin Fenn-Rourke fragment identity.

    left  = sum_{i,j,k} a_i (x) lam(a_j b_k) Delta^{n-1}(b_j a_k b_i)
    right = the same with a -> S(b), b -> a
    target = 1 (x) Delta^{n-1}(D(lam)).

    The circle labeled lam deposits lam(a_j b_k) b_j a_k on the cable, the
    index order that makes the Hopf link evaluate to lam(D(lam)).
    Returns ``(ok, report dict)``.
    """
    H = eng.H
    a, b = eng.Q.factors()
    Dl = drinfeld_map(eng.Q, lam)
    target = _prefix(H.one(), _delta_power(H, Dl, n))

    def side(A, B):
        inner = {}
        for j, aj in enumerate(A):
            for k, bk in enumerate(B):
                c = evaluate(lam, H.mul(aj, bk))
                if c != 0:
                    inner = _add(inner, _scale(H.mul(B[j], A[k]), c))
        out = {}
        for ai, bi in zip(A, B):
            out = _add(out, _prefix(ai, _delta_power(H, H.mul(inner, bi), n)))
        return out

    left = side(a, b)
    right = side([H.S(x) for x in b], a)
    ok = left == target and right == target
    return ok, {"left_matches": left == target, "right_matches": right == target}


# -- fragment oracle -----------------------------------------------------------------

# (moving strand goes leftward, moving strand walked down, cable walked down,
#  moving factor listed last) for each closed form; all crossings are x+.
FRAGMENTS = {
    "standard": (False, False, False, False),
    "opposite-parity": (True, True, False, False),
    "mirror": (False, False, True, True),
    "mirror-opposite": (True, False, False, True),
}


def fragment_tensor(eng: Engine, n: int, variant: str = "standard") -> dict:
    """State sum of one strand crossing n parallel strands, as a tensor.

    The fragment is the braid in which the moving strand passes over the
    cable through n positive crossings.  A strand walked downward carries the
    half-turn offset (one S), like a downward basepoint.  Cable strands are
    listed starting from the right-hand side of their direction of travel.
    """
    if variant not in FRAGMENTS:
        raise ValueError(f"unknown cabling variant {variant!r}")
    leftward, mdown, cdown, last = FRAGMENTS[variant]
    H, rho = eng.H, eng.rho
    pos = list(range(1, n + 1)) + [0] if leftward else [0] + list(range(1, n + 1))
    events = {s: [] for s in range(n + 1)}  # strand -> [(crossing, factor)] bottom to top
    for t in range(n):
        w = n - 1 - t if leftward else t
        lo, hi = pos[w], pos[w + 1]
        events[lo].append((t, crossing_factor("x+", "L")))
        events[hi].append((t, crossing_factor("x+", "R")))
        pos[w], pos[w + 1] = hi, lo
    cable = list(range(1, n + 1))
    if not cdown:
        cable.reverse()
    order = cable + [0] if last else [0] + cable
    out = {}
    for state in itertools.product(range(rho), repeat=n):
        T = {(): Fraction(1)}
        for s in order:
            down = mdown if s == 0 else cdown
            evs = events[s][::-1] if down else events[s]
            w = H.one()
            for t, f in evs:
                w = H.mul(w, eng.factor(f, state[t], 1 if down else 0))
            T = {k + (i,): c * d for k, c in T.items() for i, d in w.items()}
        out = _add(out, T)
    return out


# -- properties of K -------------------------------------------------------------------


@dataclass
class PropertyReport:
    checks: list = field(default_factory=list)  # (name, ok, detail)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def add(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    def lines(self) -> list[str]:
        return [f"{name}: {'ok' if ok else 'FAIL'}{' ' + detail if detail else ''}" for name, ok, detail in self.checks]


def properties_suite(eng: Engine, L1, L2, L, labels, comp: int = 0, moves: int = 20, seed: int = 0) -> PropertyReport:
    """Multiplicativity, orientation reversal vs f o S, basepoints and moves.

    ``labels`` is a single quantum character used for every component of
    L1 and L2, or one per component of L (indexed by tag).
    """
    import random

    rep = PropertyReport()
    H = eng.H
    f = labels if labels and not isinstance(labels[0], (list, tuple)) else labels[0]
    k1 = evaluate_K(L1, eng, f).value
    k2 = evaluate_K(L2, eng, f).value
    k12 = evaluate_K(dg.distant_union(L1, L2), eng, f).value
    rep.add("distant union", k12 == k1 * k2, f"{k12} vs {k1}*{k2}")

    per = list(labels) if labels and isinstance(labels[0], (list, tuple)) else [f] * L.n_components
    base = evaluate_K(L, eng, per).value
    fS = [evaluate(per[comp], H.S(H.basis(i))) for i in range(H.n)]
    swapped = list(per)
    swapped[L.tags[comp]] = fS
    rev = evaluate_K(dg.reverse_orientation(L, comp), eng, swapped).value
    rep.add("reversal vs f o S", rev == base, f"{rev} vs {base}")

    rng = random.Random(seed)
    d = prepare(L)
    bad = 0
    for _ in range(moves):
        c = rng.randrange(d.n_components)
        bp = dg.random_basepoint(d, c, rng)
        e = dg.set_basepoint(d, c, (bp[0], bp[1], rng.choice((1, -1))))
        if evaluate_K(e, eng, per, normalize=False).value != base:
            bad += 1
    rep.add("basepoints", bad == 0, f"{bad} of {moves} differ")
    bad, e = 0, d
    for _ in range(moves):
        m = dg.random_regular_move(e, rng, max_slices=len(d.slices) + 6)
        if m is None:
            break
        e = dg.apply_move(e, *m)
        if evaluate_K(e, eng, per).value != base:
            bad += 1
    rep.add("regular moves", bad == 0, f"{bad} of {moves} differ")
    return rep
