"""Sliced (Morse) presentations of framed links.

A diagram is a bottom-to-top list of slices::

    ("cup", i)   new wires at positions i, i+1
    ("cap", i)   wires i and i+1 are joined
    ("x+", i)    wires i and i+1 cross, the strand from lower left passes over
    ("x-", i)    wires i and i+1 cross, the strand from lower right passes over
    ("id",)      nothing happens

Level ``s`` is the set of vertical segments between slice ``s-1`` and slice
``s``; level 0 and the last level are empty.  A point of the diagram is a
segment ``(level, wire)``.

Rotation table (counterclockwise counts +1):

    cup entered from its left arm (going down)   +1
    cup entered from its right arm (going down)  -1
    cap entered from its right arm (going up)    +1
    cap entered from its left arm (going up)     -1

The winding number of a component is half the sum along its orientation.

Components are numbered by their lowest cup (ties broken left to right).
Orientation ``+1`` means the lowest cup is traversed left to right, so the
round unknot ``cup 0, cap 0`` with orientation ``+1`` has winding +1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

SLICE_KINDS = ("cup", "cap", "x+", "x-", "id")
CROSSINGS = ("x+", "x-")


class DiagramError(ValueError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class PatternMismatch(ValueError):
    pass


def _norm_slice(s) -> tuple:
    if isinstance(s, str):
        s = (s,)
    s = tuple(s)
    if s[0] == "id":
        return ("id",)
    return (s[0], int(s[1]))


def width_profile(slices) -> list[int]:
    """Wire count at every level, without validation."""
    w = [0]
    for s in slices:
        k = s[0]
        w.append(w[-1] + (2 if k == "cup" else -2 if k == "cap" else 0))
    return w


def check_slices(slices) -> list[str]:
    problems = []
    w = 0
    for n, s in enumerate(slices):
        if not s or s[0] not in SLICE_KINDS:
            problems.append(f"slice {n}: unknown generator {s!r}")
            continue
        k = s[0]
        if k == "id":
            continue
        i = s[1]
        if k == "cup":
            if not 0 <= i <= w:
                problems.append(f"slice {n}: cup position {i} out of range for width {w}")
            w += 2
        else:
            if not 0 <= i < w - 1:
                problems.append(f"slice {n}: {k} position {i} out of range for width {w}")
            if k == "cap":
                w -= 2
        if w < 0:
            problems.append(f"slice {n}: negative width")
            return problems
    if w != 0:
        problems.append(f"nonzero final width {w}")
    return problems


# -- traversal ---------------------------------------------------------------


@dataclass(frozen=True)
class Event:
    """Something met while walking along a component.

    ``kind`` is ``"crit"`` (``value`` is the rotation +-1) or ``"cross"``
    (``slice`` is the crossing slice, ``strand`` is ``"L"`` or ``"R"``,
    ``over`` tells whether this passage is the over strand).
    """

    kind: str
    value: int = 0
    slice: int = -1
    strand: str = ""
    over: bool = False


def _step(slices, widths, level, wire, d):
    """Leave segment (level, wire) in direction d (+1 up, -1 down).

    Returns ``(level, wire, d, event)`` of the next segment entered.
    """
    if d > 0:
        n = level
        s = slices[n]
        k = s[0]
        if k == "id":
            return level + 1, wire, 1, None
        i = s[1]
        if k == "cup":
            return level + 1, (wire if wire < i else wire + 2), 1, None
        if k == "cap":
            if wire == i:
                return level, i + 1, -1, Event("crit", -1)
            if wire == i + 1:
                return level, i, -1, Event("crit", 1)
            return level + 1, (wire if wire < i else wire - 2), 1, None
        if wire == i:
            return level + 1, i + 1, 1, Event("cross", slice=n, strand="L", over=(k == "x+"))
        if wire == i + 1:
            return level + 1, i, 1, Event("cross", slice=n, strand="R", over=(k == "x-"))
        return level + 1, wire, 1, None
    n = level - 1
    s = slices[n]
    k = s[0]
    if k == "id":
        return level - 1, wire, -1, None
    i = s[1]
    if k == "cup":
        if wire == i:
            return level, i + 1, 1, Event("crit", 1)
        if wire == i + 1:
            return level, i, 1, Event("crit", -1)
        return level - 1, (wire if wire < i else wire - 2), -1, None
    if k == "cap":
        return level - 1, (wire if wire < i else wire + 2), -1, None
    if wire == i + 1:
        return level - 1, i, -1, Event("cross", slice=n, strand="L", over=(k == "x+"))
    if wire == i:
        return level - 1, i + 1, -1, Event("cross", slice=n, strand="R", over=(k == "x-"))
    return level - 1, wire, -1, None


def walk(slices, widths, level, wire, d):
    """Full loop from a segment.

    Returns a list of ``(segment, direction, event_before)`` tuples, one per
    segment visited, starting with the given segment (whose event is None).
    """
    start = (level, wire)
    out = [((level, wire), d, None)]
    seen = {start}
    while True:
        level, wire, d, ev = _step(slices, widths, level, wire, d)
        if (level, wire) == start:
            out[0] = (start, out[0][1], ev)
            return out
        if (level, wire) in seen:
            raise DiagramError([f"traversal revisits segment {(level, wire)}"])
        seen.add((level, wire))
        out.append(((level, wire), d, ev))


@dataclass(frozen=True)
class ComponentGeometry:
    index: int
    tag: int
    writhe: int
    winding: int
    rotation: int


@dataclass(frozen=True)
class SlicedDiagram:
    """Immutable framed-link projection.

    ``orient[c]`` is +1 or -1.  ``basepoints[c]`` is None (default point) or
    ``(level, wire, dir)`` with ``dir`` +1 (up) or -1 (down).  ``tags`` are
    stable component identities carried through moves.
    """

    slices: tuple
    orient: tuple = ()
    basepoints: tuple = ()
    tags: tuple = ()
    name: str = ""
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        sl = tuple(_norm_slice(s) for s in self.slices)
        object.__setattr__(self, "slices", sl)
        probs = check_slices(sl)
        if probs:
            raise DiagramError(probs)
        k = len(self._first_cups())
        orient = tuple(self.orient) or (1,) * k
        bps = tuple(self.basepoints) or (None,) * k
        tags = tuple(self.tags) or tuple(range(k))
        if len(orient) != k or len(bps) != k or len(tags) != k:
            raise DiagramError([f"component table has wrong length (diagram has {k} components)"])
        if any(o not in (1, -1) for o in orient):
            raise DiagramError(["orientation flags must be +1 or -1"])
        object.__setattr__(self, "orient", orient)
        object.__setattr__(self, "basepoints", tuple(None if b is None else tuple(b) for b in bps))
        object.__setattr__(self, "tags", tags)
        errs = self._check_basepoints()
        if errs:
            raise DiagramError(errs)

    # -- structure -----------------------------------------------------------

    @property
    def widths(self) -> list[int]:
        if "w" not in self._cache:
            self._cache["w"] = width_profile(self.slices)
        return self._cache["w"]

    def _first_cups(self):
        """Lowest cup of every component, plus the segment -> component map."""
        if "cups" in self._cache:
            return self._cache["cups"]
        widths = width_profile(self.slices)
        owner = {}
        cups = []
        for n, s in enumerate(self.slices):
            if s[0] != "cup":
                continue
            seg = (n + 1, s[1])
            if seg in owner:
                continue
            c = len(cups)
            cups.append((n, s[1]))
            for (sg, _, _) in walk(self.slices, widths, n + 1, s[1], 1):
                owner[sg] = c
        total = sum(widths[1:-1]) if len(widths) > 2 else 0
        if len(owner) != total:
            raise DiagramError(["some strand does not close up"])
        self._cache["cups"] = cups
        self._cache["owner"] = owner
        return cups

    @property
    def n_components(self) -> int:
        return len(self.orient)

    def owner(self, level, wire) -> int:
        self._first_cups()
        return self._cache["owner"][(level, wire)]

    def default_basepoint(self, c: int):
        n, i = self._first_cups()[c]
        return (n + 1, i + 1 if self.orient[c] > 0 else i, 1)

    def basepoint(self, c: int):
        b = self.basepoints[c]
        return self.default_basepoint(c) if b is None else b

    def _check_basepoints(self):
        errs = []
        w = self.widths
        for c, b in enumerate(self.basepoints):
            if b is None:
                continue
            lev, wire, d = b
            if d not in (1, -1):
                errs.append(f"basepoint of component {c}: direction must be up or down")
            elif not (0 < lev < len(w) - 1 and 0 <= wire < w[lev]):
                errs.append(f"basepoint of component {c}: no segment at level {lev} wire {wire}")
            elif self.owner(lev, wire) != c:
                errs.append(f"basepoint of component {c}: segment belongs to component {self.owner(lev, wire)}")
        return errs

    def oriented_walk(self, c: int, start=None):
        """Walk component c along its orientation from ``start`` (default basepoint segment)."""
        n, i = self._first_cups()[c]
        ref = walk(self.slices, self.widths, n + 1, i + 1 if self.orient[c] > 0 else i, 1)
        if start is None:
            return ref
        pos = next(k for k, (sg, _, _) in enumerate(ref) if sg == start)
        return ref[pos:] + ref[:pos]

    def directions(self) -> dict:
        """Segment -> direction of travel along the orientation."""
        if "dirs" not in self._cache:
            dirs = {}
            for c in range(self.n_components):
                for sg, d, _ in self.oriented_walk(c):
                    dirs[sg] = d
            self._cache["dirs"] = dirs
        return self._cache["dirs"]

    def crossing_sign(self, n: int) -> int:
        kind, i = self.slices[n]
        dirs = self.directions()
        dl, dr = dirs[(n, i)], dirs[(n, i + 1)]
        vl = (1, 1) if dl > 0 else (-1, -1)
        vr = (-1, 1) if dr > 0 else (1, -1)
        over, under = (vl, vr) if kind == "x+" else (vr, vl)
        cr = over[0] * under[1] - over[1] * under[0]
        return 1 if cr > 0 else -1

    def crossings(self) -> list[tuple[int, int, int, int]]:
        """``(slice, sign, component of L strand, component of R strand)``."""
        out = []
        for n, s in enumerate(self.slices):
            if s[0] in CROSSINGS:
                i = s[1]
                out.append((n, self.crossing_sign(n), self.owner(n, i), self.owner(n, i + 1)))
        return out

    @property
    def n_crossings(self) -> int:
        return sum(1 for s in self.slices if s[0] in CROSSINGS)

    def rotation(self, c: int) -> int:
        return sum(ev.value for _, _, ev in self.oriented_walk(c) if ev is not None and ev.kind == "crit")

    def geometry(self) -> list[ComponentGeometry]:
        writhe = [0] * self.n_components
        for _, sg, a, b in self.crossings():
            if a == b:
                writhe[a] += sg
        out = []
        for c in range(self.n_components):
            rot = self.rotation(c)
            out.append(ComponentGeometry(c, self.tags[c], writhe[c], rot // 2, rot))
        return out

    def replace(self, **kw) -> "SlicedDiagram":
        return replace(self, _cache={}, **kw)


def validate(slices, orient=(), basepoints=()) -> list[str]:
    """Empty list when the data make a valid diagram, else the problems found."""
    try:
        sl = [_norm_slice(s) for s in slices]
    except (IndexError, ValueError, TypeError) as e:
        return [f"malformed slice: {e}"]
    probs = check_slices(sl)
    if probs:
        return probs
    try:
        SlicedDiagram(tuple(sl), tuple(orient), tuple(basepoints))
    except DiagramError as e:
        return e.problems
    return []


def linking_matrix(d: SlicedDiagram):
    from .surgery import SurgeryMatrix

    n = d.n_components
    twice = [[0] * n for _ in range(n)]
    for _, sg, a, b in d.crossings():
        if a == b:
            twice[a][a] += 2 * sg
        else:
            twice[a][b] += sg
            twice[b][a] += sg
    return SurgeryMatrix.of([[x // 2 for x in r] for r in twice])


def winding_numbers(d: SlicedDiagram) -> list[int]:
    return [g.winding for g in d.geometry()]


def writhes(d: SlicedDiagram) -> list[int]:
    return [g.writhe for g in d.geometry()]


def is_even_link(d: SlicedDiagram) -> bool:
    return linking_matrix(d).is_even()


# -- rewriting ----------------------------------------------------------------


def _rebuild(d: SlicedDiagram, new_slices, k: int, m_old: int, m_new: int,
             keep_basepoints: bool = True) -> SlicedDiagram:
    """Diagram with slices[k:k+m_old] replaced, orientation and tags carried over.

    Levels <= k are unchanged, levels >= k+m_old shift by m_new - m_old.
    Each old component is matched through a segment outside the rewritten
    band; its direction there fixes the new orientation.
    """
    shift = m_new - m_old

    def carry(seg):
        lev, w = seg
        if lev <= k:
            return seg
        if lev >= k + m_old:
            return (lev + shift, w)
        return None

    probs = check_slices(new_slices)
    if probs:
        raise PatternMismatch("; ".join(probs))
    bare = SlicedDiagram(tuple(new_slices))
    k_new = bare.n_components
    old_dirs = d.directions()
    orient = [1] * k_new
    tags = [None] * k_new
    bps = [None] * k_new
    fixed = [False] * k_new
    # orientation of each new component from its own reference walk
    ref_dirs = bare.directions()
    for c in range(d.n_components):
        for sg, dr, _ in d.oriented_walk(c):
            t = carry(sg)
            if t is None:
                continue
            nc = bare.owner(*t)
            if not fixed[nc]:
                orient[nc] = 1 if ref_dirs[t] == dr else -1
                tags[nc] = d.tags[c]
                fixed[nc] = True
                b = d.basepoints[c]
                if keep_basepoints and b is not None:
                    tb = carry((b[0], b[1]))
                    if tb is not None:
                        bps[nc] = (tb[0], tb[1], b[2])
            break
    nxt = max([t for t in tags if t is not None] + [-1]) + 1
    for c in range(k_new):
        if tags[c] is None:
            tags[c] = nxt
            nxt += 1
    return SlicedDiagram(tuple(new_slices), tuple(orient), tuple(bps), tuple(tags), d.name)


def _span(s):
    """(inputs, outputs) wire counts of a slice."""
    k = s[0]
    return {"cup": (0, 2), "cap": (2, 0), "x+": (2, 2), "x-": (2, 2)}[k]


def _flip(k):
    return "x-" if k == "x+" else "x+"


def r2_insert(d, k: int, i: int, first: str = "x+"):
    w = d.widths[k] if k < len(d.widths) else 0
    if first not in CROSSINGS or not 0 <= i < w - 1:
        raise PatternMismatch(f"no room for a Reidemeister II pair at level {k} wire {i}")
    sl = list(d.slices)
    sl[k:k] = [(first, i), (_flip(first), i)]
    return _rebuild(d, sl, k, 0, 2)


def r2_cancel(d, k: int):
    sl = list(d.slices)
    if k + 1 >= len(sl):
        raise PatternMismatch("Reidemeister II needs two slices")
    a, b = sl[k], sl[k + 1]
    if not (a[0] in CROSSINGS and b[0] == _flip(a[0]) and a[1] == b[1]):
        raise PatternMismatch(f"slices {k},{k + 1} are not an opposite crossing pair")
    del sl[k:k + 2]
    return _rebuild(d, sl, k, 2, 0)


def r3(d, k: int):
    sl = list(d.slices)
    if k + 2 >= len(sl):
        raise PatternMismatch("Reidemeister III needs three slices")
    a, b, c = sl[k:k + 3]
    if not all(x[0] in CROSSINGS for x in (a, b, c)):
        raise PatternMismatch(f"slices {k}..{k + 2} are not three crossings")
    i = a[1]
    if c[1] != i or abs(b[1] - i) != 1:
        raise PatternMismatch(f"slices {k}..{k + 2} do not form a braid triangle")
    if a[0] == c[0] != b[0]:
        raise PatternMismatch("crossing types e d e with d != e do not satisfy the braid relation")
    j = b[1]
    sl[k:k + 3] = [(c[0], j), (b[0], i), (a[0], j)]
    return _rebuild(d, sl, k, 3, 3)


def commute(d, k: int):
    """Height move: exchange two slices with disjoint supports."""
    sl = list(d.slices)
    if k + 1 >= len(sl):
        raise PatternMismatch("height move needs two slices")
    A, B = sl[k], sl[k + 1]
    if A[0] == "id" or B[0] == "id":
        sl[k], sl[k + 1] = B, A
        return _rebuild(d, sl, k, 2, 2)
    a, b = A[1], B[1]
    ina, outa = _span(A)
    inb, outb = _span(B)
    if b + inb <= a:
        newA, newB = (A[0], a + outb - inb), (B[0], b)
    elif b >= a + outa:
        newA, newB = (A[0], a), (B[0], b - outa + ina)
    else:
        raise PatternMismatch(f"slices {k},{k + 1} are not distant")
    sl[k], sl[k + 1] = newB, newA
    return _rebuild(d, sl, k, 2, 2)


def zigzag_insert(d, k: int, w: int, side: str = "right"):
    width = d.widths[k]
    if not 0 <= w < width:
        raise PatternMismatch(f"no strand at level {k} wire {w}")
    sl = list(d.slices)
    sl[k:k] = [("cup", w + 1), ("cap", w)] if side == "right" else [("cup", w), ("cap", w + 1)]
    return _rebuild(d, sl, k, 0, 2)


def zigzag_cancel(d, k: int):
    sl = list(d.slices)
    if k + 1 >= len(sl):
        raise PatternMismatch("zigzag needs two slices")
    a, b = sl[k], sl[k + 1]
    if not (a[0] == "cup" and b[0] == "cap" and abs(a[1] - b[1]) == 1):
        raise PatternMismatch(f"slices {k},{k + 1} are not a zigzag")
    del sl[k:k + 2]
    return _rebuild(d, sl, k, 2, 0)


def swing(d, k: int):
    """Move a crossing through the neighbouring extremum of the crossing strand."""
    sl = list(d.slices)
    if k + 1 >= len(sl):
        raise PatternMismatch("swing needs two slices")
    a, b = sl[k], sl[k + 1]
    if a[0] == "cup" and b[0] in CROSSINGS:
        i = a[1]
        if b[1] == i + 1:
            new = [("cup", i + 1), (_flip(b[0]), i)]
        elif b[1] == i - 1:
            new = [("cup", i - 1), (_flip(b[0]), i)]
        else:
            raise PatternMismatch(f"crossing at slice {k + 1} does not touch the cup")
    elif a[0] in CROSSINGS and b[0] == "cap":
        i = b[1]
        if a[1] == i + 1:
            new = [(_flip(a[0]), i), ("cap", i + 1)]
        elif a[1] == i - 1:
            new = [(_flip(a[0]), i), ("cap", i - 1)]
        else:
            raise PatternMismatch(f"crossing at slice {k} does not touch the cap")
    else:
        raise PatternMismatch(f"slices {k},{k + 1} are not an extremum next to a crossing")
    sl[k:k + 2] = new
    return _rebuild(d, sl, k, 2, 2)


def curl(w: int, side: str, kind: str) -> list[tuple]:
    """Slices of a kink on wire w.  Traversed upward a left kink adds +2
    rotation, a right kink -2; writhe is +1 for x+ and -1 for x-."""
    if side == "right":
        return [("cup", w + 1), (kind, w), ("cap", w + 1)]
    return [("cup", w), (kind, w + 1), ("cap", w)]


def double_twist(d, k: int, w: int, side: str = "left"):
    """Insert two same-side kinks of opposite crossing type: framing kept,
    winding shifted by 2 (sign depends on side and direction of travel)."""
    if not 0 <= w < d.widths[k]:
        raise PatternMismatch(f"no strand at level {k} wire {w}")
    sl = list(d.slices)
    sl[k:k] = curl(w, side, "x+") + curl(w, side, "x-")
    return _rebuild(d, sl, k, 0, 6)


def set_basepoint(d, c: int, point):
    bps = list(d.basepoints)
    bps[c] = None if point is None else tuple(point)
    return d.replace(basepoints=tuple(bps))


def reverse_orientation(d, c: int):
    if not 0 <= c < d.n_components:
        raise IndexError(f"unknown component {c}")
    orient = list(d.orient)
    orient[c] = -orient[c]
    bps = list(d.basepoints)
    if bps[c] is not None:
        lev, w, dr = bps[c]
        bps[c] = (lev, w, -dr)
    return d.replace(orient=tuple(orient), basepoints=tuple(bps))


def distant_union(d, e):
    """d drawn below e."""
    sl = list(d.slices) + list(e.slices)
    off = len(d.slices)
    bps = list(d.basepoints) + [None if b is None else (b[0] + off, b[1], b[2]) for b in e.basepoints]
    t0 = max(d.tags, default=-1) + 1
    tags = list(d.tags) + [t0 + t for t in e.tags]
    return SlicedDiagram(tuple(sl), d.orient + e.orient, tuple(bps), tuple(tags), d.name)


def move_ii(d):
    return distant_union(d, hopf_link())


MOVES = {
    "r2_insert": r2_insert,
    "r2_cancel": r2_cancel,
    "r3": r3,
    "commute": commute,
    "zigzag_insert": zigzag_insert,
    "zigzag_cancel": zigzag_cancel,
    "swing": swing,
    "double_twist": double_twist,
    "basepoint": set_basepoint,
    "reverse": reverse_orientation,
    "move_ii": move_ii,
}

# moves that keep the framed link and every winding number
REGULAR_MOVES = ("r2_insert", "r2_cancel", "r3", "commute", "zigzag_insert", "zigzag_cancel", "swing")


def apply_move(d: SlicedDiagram, move: str, *args) -> SlicedDiagram:
    try:
        fn = MOVES[move]
    except KeyError:
        raise ValueError(f"unknown move {move!r}") from None
    return fn(d, *args)


def applicable_moves(d: SlicedDiagram, kinds=REGULAR_MOVES) -> list[tuple]:
    """Every (move, args) of the given kinds that applies to d."""
    out = []
    sl = d.slices
    widths = d.widths
    for k in range(len(sl) - 1):
        for name, fn in (("r2_cancel", r2_cancel), ("r3", r3), ("commute", commute),
                         ("zigzag_cancel", zigzag_cancel), ("swing", swing)):
            if name not in kinds:
                continue
            if name == "r3" and k + 2 >= len(sl):
                continue
            try:
                _precheck(d, name, k)
            except PatternMismatch:
                continue
            out.append((name, k))
    for k in range(1, len(sl)):
        w = widths[k]
        if "r2_insert" in kinds:
            for i in range(w - 1):
                out += [("r2_insert", k, i, "x+"), ("r2_insert", k, i, "x-")]
        if "zigzag_insert" in kinds:
            for i in range(w):
                out += [("zigzag_insert", k, i, "right"), ("zigzag_insert", k, i, "left")]
    return out


def _precheck(d, name, k):
    sl = d.slices
    a, b = sl[k], sl[k + 1]
    if name == "r2_cancel":
        if not (a[0] in CROSSINGS and b[0] == _flip(a[0]) and a[1] == b[1]):
            raise PatternMismatch
    elif name == "r3":
        c = sl[k + 2]
        if not all(x[0] in CROSSINGS for x in (a, b, c)):
            raise PatternMismatch
        if c[1] != a[1] or abs(b[1] - a[1]) != 1 or a[0] == c[0] != b[0]:
            raise PatternMismatch
    elif name == "commute":
        if a[0] == "id" or b[0] == "id":
            return
        ina, outa = _span(a)
        inb, _ = _span(b)
        if not (b[1] + inb <= a[1] or b[1] >= a[1] + outa):
            raise PatternMismatch
    elif name == "zigzag_cancel":
        if not (a[0] == "cup" and b[0] == "cap" and abs(a[1] - b[1]) == 1):
            raise PatternMismatch
    elif name == "swing":
        if a[0] == "cup" and b[0] in CROSSINGS and abs(b[1] - a[1]) == 1:
            return
        if a[0] in CROSSINGS and b[0] == "cap" and abs(a[1] - b[1]) == 1:
            return
        raise PatternMismatch


def random_basepoint(d: SlicedDiagram, c: int, rng: random.Random):
    segs = [sg for sg, _, _ in d.oriented_walk(c)]
    lev, w = rng.choice(segs)
    return (lev, w, rng.choice((1, -1)))


def random_regular_move(d: SlicedDiagram, rng: random.Random, max_slices: int = 40,
                        kinds=REGULAR_MOVES):
    """A random applicable move that keeps the framed link and windings.

    Insertions are suppressed once the diagram has ``max_slices`` slices so
    random walks stay small.
    """
    cand = applicable_moves(d, kinds)
    if len(d.slices) >= max_slices:
        cand = [m for m in cand if not m[0].endswith("_insert")]
    shrink = [m for m in cand if not m[0].endswith("_insert")]
    grow = [m for m in cand if m[0].endswith("_insert")]
    # keep insertions rare so the walk explores rearrangements
    pool = shrink if shrink and (not grow or rng.random() < 0.8) else grow
    if not pool:
        return None
    return rng.choice(pool)


def normalize_winding(d: SlicedDiagram) -> SlicedDiagram:
    """Insert double twists until every component has winding number +1.

    Basepoints are reset to their defaults; framings are unchanged.
    """
    geo = d.geometry()
    for g in geo:
        if g.writhe % 2:
            raise ValueError(f"component {g.index} has odd framing {g.writhe}")
    out = d
    for c in range(d.n_components):
        w = out.geometry()[c].winding
        if w == 1:
            continue
        n_twists = abs(1 - w) // 2
        # along the default basepoint segment the orientation points up
        lev, wire, _ = out.default_basepoint(c)
        side = "left" if w < 1 else "right"
        for _ in range(n_twists):
            out = double_twist(out, lev, wire, side)
    if out is d:
        return d
    return out.replace(basepoints=(None,) * out.n_components)


# -- standard diagrams ------------------------------------------------------


def unknot(framing: int = 0, orient: int = 1) -> SlicedDiagram:
    """Round unknot with |framing| kinks; winding stays 1 for even framing."""
    kind = "x+" if framing >= 0 else "x-"
    body = []
    f = abs(framing)
    for n in range(f):
        body += curl(0, "left" if n % 2 == 0 else "right", kind)
    sl = [("cup", 0)] + [(s[0], s[1] + 1) if s[0] != "id" else s for s in body] + [("cap", 0)]
    return SlicedDiagram(tuple(sl), (orient,), name=f"unknot({framing})")


def hopf_link(f1: int = 0, f2: int = 0) -> SlicedDiagram:
    """Positive Hopf clasp as the closure of sigma_1^2; framings via kinks on
    the inner strand (component 1) and outer strand (component 0)."""
    sl = [("cup", 0), ("cup", 1), ("x+", 0), ("x+", 0)]
    for f, wire in ((f1, 0), (f2, 1)):
        kind = "x+" if f >= 0 else "x-"
        for n in range(abs(f)):
            sl += curl(wire, "left" if n % 2 == 0 else "right", kind)
    sl += [("cap", 1), ("cap", 0)]
    return SlicedDiagram(tuple(sl), name=f"hopf({f1},{f2})")


def hopf_slid() -> SlicedDiagram:
    """Hopf link (0,0) after sliding the outer component over the inner one.

    Drawn by hand: a parallel copy of the inner component is nested around
    it, the outer strand crosses the 2-cable (so each copy inherits the
    clasp), and a flat band (``cap 4, cup 4``) joins the copy to the outer
    component.  Linking matrix [[2, 1], [1, 0]].
    """
    sl = [("cup", 0), ("cup", 1), ("cup", 2), ("x-", 0), ("x-", 1), ("x-", 1), ("x-", 0),
          ("cap", 4), ("cup", 4), ("cap", 2), ("cap", 1), ("cap", 0)]
    return SlicedDiagram(tuple(sl), (1, -1), name="hopf-slid")


def torus_link_2(n: int) -> SlicedDiagram:
    """Closure of sigma_1^n on two strands (cups nested so both windings are +1)."""
    sl = [("cup", 0), ("cup", 1)] + [("x+", 0)] * n + [("cap", 1), ("cap", 0)]
    return SlicedDiagram(tuple(sl), name=f"T(2,{n})")


def trefoil_even() -> SlicedDiagram:
    """Right-handed trefoil with a negative kink: framing 2, winding 1."""
    sl = [("cup", 0), ("cup", 1), ("x+", 0), ("x+", 0), ("x+", 0)]
    sl += curl(0, "right", "x-")
    sl += [("cap", 1), ("cap", 0)]
    return SlicedDiagram(tuple(sl), name="trefoil(2)")


def link_pool() -> list[SlicedDiagram]:
    """Small even links used by the invariance suites (at most 6 crossings)."""
    return [
        unknot(0),
        unknot(2),
        unknot(-2),
        hopf_link(0, 0),
        hopf_link(0, 2),
        torus_link_2(4),
        trefoil_even(),
        torus_link_2(6),
    ]


def random_diagram(rng: random.Random, n_slices: int = 12, max_width: int = 6) -> SlicedDiagram:
    """Random valid diagram with random orientations (not necessarily even)."""
    sl = []
    w = 0
    for _ in range(n_slices):
        opts = []
        if w + 2 <= max_width:
            opts.append("cup")
        if w >= 2:
            opts += ["cap", "x+", "x-", "x+", "x-"]
        k = rng.choice(opts)
        if k == "cup":
            sl.append(("cup", rng.randint(0, w)))
            w += 2
        elif k == "cap":
            sl.append(("cap", rng.randint(0, w - 2)))
            w -= 2
        else:
            sl.append((k, rng.randint(0, w - 2)))
    while w:
        sl.append(("cap", rng.randint(0, w - 2)))
        w -= 2
    k = SlicedDiagram(tuple(sl)).n_components
    return SlicedDiagram(tuple(sl), tuple(rng.choice((1, -1)) for _ in range(k)))


# -- file format ------------------------------------------------------------


def parse_link(text: str) -> SlicedDiagram:
    """Read the line-oriented link format.

    ::

        link hopf components=2
        cup 0
        cup 1
        x+ 0
        x+ 0
        cap 1
        cap 0
        orient 0 +
        basepoint 1 3 1 up

    ``basepoint c level wire dir`` names the segment between slice
    ``level-1`` and slice ``level`` (0-based slices).
    """
    from .formats import FormatError

    name, ncomp = "", None
    slices, orients, bps = [], {}, {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0]
        try:
            if head == "link":
                name = tok[1] if len(tok) > 1 else ""
                for t in tok[2:]:
                    if t.startswith("components="):
                        ncomp = int(t.split("=", 1)[1])
            elif head in ("cup", "cap", "x+", "x-"):
                slices.append((head, int(tok[1])))
            elif head == "id":
                slices.append(("id",))
            elif head == "orient":
                if tok[2] not in "+-" or len(tok[2]) != 1:
                    raise ValueError("orientation must be + or -")
                orients[int(tok[1])] = 1 if tok[2] == "+" else -1
            elif head == "basepoint":
                if tok[4] not in ("up", "down"):
                    raise ValueError("direction must be up or down")
                bps[int(tok[1])] = (int(tok[2]), int(tok[3]), 1 if tok[4] == "up" else -1)
            else:
                raise ValueError(f"unknown keyword {head!r}")
        except (IndexError, ValueError) as e:
            raise FormatError(f"line {ln}: {e}") from None
    probs = check_slices(slices)
    if probs:
        raise DiagramError(probs)
    k = SlicedDiagram(tuple(slices)).n_components
    if ncomp is not None and ncomp != k:
        raise DiagramError([f"header says {ncomp} components, diagram has {k}"])
    for c in list(orients) + list(bps):
        if not 0 <= c < k:
            raise DiagramError([f"unknown component {c}"])
    return SlicedDiagram(
        tuple(slices),
        tuple(orients.get(c, 1) for c in range(k)),
        tuple(bps.get(c) for c in range(k)),
        name=name,
    )


def format_link(d: SlicedDiagram) -> str:
    lines = [f"link {d.name or 'L'} components={d.n_components}"]
    for s in d.slices:
        lines.append(s[0] if s[0] == "id" else f"{s[0]} {s[1]}")
    for c, o in enumerate(d.orient):
        lines.append(f"orient {c} {'+' if o > 0 else '-'}")
    for c, b in enumerate(d.basepoints):
        if b is not None:
            lines.append(f"basepoint {c} {b[0]} {b[1]} {'up' if b[2] > 0 else 'down'}")
    return "\n".join(lines) + "\n"
