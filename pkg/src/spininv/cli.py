"""Command-line entry point.

Every command prints ``key: value`` lines: the inputs (with digests), the
conventions in force, the exact result in the scalar encoding and a numeric
rendering.  Exit status is 0 on success, 1 on a domain error and 2 on a
malformed input.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import abelian as ab
from . import diagram as dg
from . import hennings as hn
from . import hopf as hp
from . import kernels
from . import surgery as sm
from .cyclotomic import NotASquare, format_scalar, numeric, reduce_order
from .formats import FormatError

CONVENTIONS = [
    ("convention.crossing", "x+: over strand (lower left) carries a_k, other b_k; x-: over strand (lower right) carries S(a_k), other b_k"),
    ("convention.rotation", "counterclockwise +1; cup from left arm +1, cap from right arm +1; downward start offset +1"),
    ("convention.word", "decorations multiplied in walk order from the basepoint, each under S^rotation; lambda o S when the walk opposes the orientation"),
    ("convention.sqrt", "square roots chosen with argument in [0, pi)"),
]

BUILTIN_LINKS = {
    "empty": lambda: dg.SlicedDiagram(()),
    "unknot0": lambda: dg.unknot(0),
    "unknot2": lambda: dg.unknot(2),
    "unknot-2": lambda: dg.unknot(-2),
    "hopf00": lambda: dg.hopf_link(0, 0),
    "hopf02": lambda: dg.hopf_link(0, 2),
    "hopf00_slid": dg.hopf_slid,
    "t24": lambda: dg.torus_link_2(4),
    "t26": lambda: dg.torus_link_2(6),
    "trefoil2": dg.trefoil_even,
}

BUILTIN_ALGEBRAS = {
    "z2": lambda: hp.group_algebra(2),
    "z3": lambda: hp.group_algebra(3),
    "z4": lambda: hp.group_algebra(4),
    "sweedler": hp.sweedler,
}

BUILTIN_MATRICES = {
    "kummer": sm.kummer_matrix,
    "e8": lambda: sm.e8_matrix(1),
    "-e8": lambda: sm.e8_matrix(-1),
    "hopf": lambda: sm.HOPF,
    "empty": lambda: sm.SurgeryMatrix.of([]),
}

BUILTIN_THEORIES = {
    "z3": lambda: ab.AbelianTheory.cyclic(3, Fraction(1, 3), "z3"),
    "z5": lambda: ab.AbelianTheory.cyclic(5, Fraction(2, 5), "z5"),
    "z6": lambda: ab.AbelianTheory.cyclic(6, Fraction(1, 6), "z6"),
    "z10": lambda: ab.AbelianTheory.cyclic(10, Fraction(3, 10), "z10"),
    "z2z2": lambda: ab.AbelianTheory((2, 2), (Fraction(0), Fraction(0)), (((0, 1), Fraction(1, 2)),), "z2z2"),
}

DOMAIN_ERRORS = (
    dg.DiagramError,
    dg.PatternMismatch,
    sm.NotEven,
    sm.InconsistentSystem,
    hp.NotFactorizable,
    hn.NotEvenLink,
    hn.NotQuantumCharacter,
    hn.UnverifiedAlgebra,
    ab.InvalidForm,
    ab.SizeLimit,
    ab.NotOrthogonal,
    ab.NotCharacteristic,
    NotASquare,
)


class DomainFailure(Exception):
    """A computation ran but its verdict is negative (exit status 1)."""


class Manifest:
    def __init__(self, command: str):
        self.items: list[tuple[str, str]] = [("command", command)]

    def add(self, key, value):
        self.items.append((key, str(value)))

    def scalar(self, key, value):
        v = reduce_order(value)
        self.add(key, format_scalar(v))
        z = numeric(v)
        re_, im_ = round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0
        self.add(key + ".numeric", f"{re_:.12g}{im_:+.12g}i")

    def text(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.items)


# -- input resolution -----------------------------------------------------------------


def _read(path: str) -> tuple[str, str]:
    p = Path(path)
    if not p.is_file():
        raise FormatError(f"no such file: {path}")
    data = p.read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise FormatError(f"{path} is not UTF-8: {e}") from None
    return text, "sha256:" + hashlib.sha256(data).hexdigest()


def load_link(spec: str):
    if spec in BUILTIN_LINKS:
        return BUILTIN_LINKS[spec](), f"builtin:{spec}"
    text, digest = _read(spec)
    return dg.parse_link(text), digest


def load_matrix(spec: str):
    if spec in BUILTIN_MATRICES:
        return BUILTIN_MATRICES[spec](), f"builtin:{spec}"
    text, digest = _read(spec)
    return sm.parse_matrix(text), digest


def load_algebra(spec: str):
    """Returns (H, R or None, digest); ``d_<name>`` is the double of a builtin."""
    if spec.startswith("d_") and spec[2:] in BUILTIN_ALGEBRAS:
        D, Q, _ = hp.drinfeld_double(BUILTIN_ALGEBRAS[spec[2:]]())
        return D, Q, f"builtin:{spec}"
    if spec in BUILTIN_ALGEBRAS:
        return BUILTIN_ALGEBRAS[spec](), None, f"builtin:{spec}"
    text, digest = _read(spec)
    H, R = hp.parse_hopf(text)
    return H, R, digest


def load_theory(spec: str):
    if spec in BUILTIN_THEORIES:
        return BUILTIN_THEORIES[spec](), f"builtin:{spec}"
    text, digest = _read(spec)
    return ab.parse_theory(text), digest


# -- commands ----------------------------------------------------------------------------


def cmd_link(args, out: Manifest):
    d, digest = load_link(args.link)
    out.add("input.link", digest)
    errors = dg.validate(d.slices, d.orient, d.basepoints)
    if errors:
        for e in errors:
            out.add("error", e)
        raise DomainFailure("invalid diagram")
    if args.action == "validate":
        out.add("components", d.n_components)
        out.add("crossings", d.n_crossings)
        for i, row in enumerate(dg.linking_matrix(d).rows):
            out.add(f"linking.{i}", " ".join(map(str, row)))
        out.add("windings", " ".join(map(str, dg.winding_numbers(d))))
        out.add("writhes", " ".join(map(str, dg.writhes(d))))
        out.add("even", dg.is_even_link(d))
        return
    rng = random.Random(args.seed)
    before = dg.linking_matrix(d).rows
    e = d
    for step in range(args.count):
        m = dg.random_regular_move(e, rng, max_slices=len(d.slices) + args.slack)
        if m is None:
            out.add(f"move.{step}", "none applicable")
            break
        e = dg.apply_move(e, *m)
        out.add(f"move.{step}", " ".join(map(str, m)))
    same = _by_tag(dg.linking_matrix(e).rows, e.tags) == _by_tag(before, d.tags)
    out.add("linking_matrix_preserved", same)
    out.add("diagram", "\n" + dg.format_link(e).rstrip("\n"))
    if not same:
        raise DomainFailure("linking matrix changed")


def _by_tag(M, tags):
    idx = sorted(range(len(tags)), key=lambda i: tags[i])
    return [[M[i][j] for j in idx] for i in idx]


def cmd_matrix(args, out: Manifest):
    A, digest = load_matrix(args.matrix)
    out.add("input.matrix", digest)
    out.add("size", A.n)
    if args.action == "sigma":
        out.add("signature", sm.signature(A))
    elif args.action == "mu":
        r = sm.rohlin_mu(A)
        out.add("signature", r.signature)
        out.add("mu", f"{r.mu} (mod 16)")
        for w in r.warnings:
            out.add("warning", w)
    else:
        subs = sm.characteristic_sublinks(A)
        out.add("count", len(subs))
        for c in subs:
            out.add("sublink", ",".join(map(str, c)))


def cmd_hopf(args, out: Manifest):
    H, R, digest = load_algebra(args.algebra)
    out.add("input.algebra", digest)
    out.add("dimension", H.n)
    rep = hp.verify_hopf_axioms(H)
    for line in rep.lines():
        out.add("hopf", line)
    if not rep.ok:
        raise DomainFailure("Hopf axioms fail")
    if args.action == "verify":
        if R is not None:
            rq = hp.verify_quasitriangular(H, R)
            for line in rq.lines():
                out.add("quasitriangular", line)
            if not rq.ok:
                raise DomainFailure("quasitriangular axioms fail")
        return
    if args.action == "double":
        D, Q, variant = hp.drinfeld_double(H)
        out.add("double.dimension", D.n)
        out.add("double.variant", variant)
        out.add("double.rank", Q.rank)
        rq = hp.verify_quasitriangular(D, Q)
        out.add("double.verified", rq.ok)
        R_sparse = {}
        a, b = Q.factors()
        for ak, bk in zip(a, b):
            for i, x in ak.items():
                for j, y in bk.items():
                    R_sparse[(i, j)] = R_sparse.get((i, j), 0) + x * y
        R_sparse = {k: v for k, v in R_sparse.items() if v != 0}
        text = hp.format_hopf(D, R_sparse)
        if args.output:
            Path(args.output).write_text(text)
            out.add("output", args.output)
        else:
            out.add("double", "\n" + text.rstrip("\n"))
        return
    ints = hp.integrals(H)
    out.add("left_dual_integrals", len(ints.left_dual))
    out.add("right_dual_integrals", len(ints.right_dual))
    out.add("two_sided_dual", ints.unimodular)
    out.add("two_sided_in_algebra", ints.unimodular_algebra)
    if ints.two_sided is not None:
        out.add("lambda", " ".join(format_scalar(x) for x in ints.two_sided))
    for line in ints.report.lines():
        out.add("integral", line)
    if R is not None:
        Q = R if isinstance(R, hp.Quasitriangular) else hp.Quasitriangular(H, R)
        fac, rank = hp.is_factorizable(Q)
        out.add("drinfeld_rank", rank)
        out.add("factorizable", fac)
        if ints.unimodular and fac:
            N = hp.normalized_integral(Q)
            out.scalar("raw_lambda_D_lambda", N.raw_value)
            out.scalar("sqrt_witness", N.witness)


def cmd_hennings(args, out: Manifest):
    H, R, adigest = load_algebra(args.algebra)
    if R is None:
        raise hn.UnverifiedAlgebra("the algebra file has no R section")
    d, ldigest = load_link(args.link)
    out.add("input.algebra", adigest)
    out.add("input.link", ldigest)
    for k, v in CONVENTIONS:
        out.add(k, v)
    eng = hn.Engine.build(H, R)
    out.add("rho", eng.rho)
    out.add("components", d.n_components)
    fast = None if args.kernel == "auto" else args.kernel != "reference"
    if args.kernel == "python":
        os.environ["SPININV_KERNEL"] = "python"
    if args.label:
        labels = _labels(args.label, H, d)
        K = hn.evaluate_K(d, eng, labels, fast=fast)
        _report_K(out, K)
        out.scalar("result", K.value)
        return
    if d.n_components == 0:
        out.add("states", 1)
        out.scalar("result", Fraction(1))
        return
    N = hp.normalized_integral(eng.Q)
    out.scalar("sqrt_witness", N.witness)
    if args.normalize == "raw":
        K = hn.evaluate_K(d, eng, N.raw, fast=fast)
        _report_K(out, K)
        out.scalar("result", K.value)
        return
    F = hn.framed_invariant(d, eng, N, fast=fast)
    _report_K(out, F.K)
    out.scalar("framed", F.value)
    if args.normalize == "spin":
        sigma = sm.signature(dg.linking_matrix(d))
        out.add("signature", sigma)
        if sigma == 0:
            out.scalar("result", F.value)
        elif args.kummer and sigma % 16 == 0:
            kd, kdig = load_link(args.kummer)
            out.add("input.kummer", kdig)
            IK = hn.framed_invariant(kd, eng, N, fast=fast).value
            k = -sigma // 16
            out.scalar("result", F.value * IK ** k if k >= 0 else F.value / IK ** (-k))
        else:
            out.add("result", f"unavailable (sigma = {sigma}; needs 16 | sigma and a Kummer diagram)")
        return
    out.scalar("result", F.value)


def _report_K(out, K):
    out.add("crossings", K.crossings)
    out.add("states", K.states)
    out.add("kernel", K.path)


def _labels(items, H, d):
    n = d.n_components
    per = [None] * n
    for it in items:
        if "=" not in it:
            raise FormatError(f"--label needs COMP=FILE, got {it!r}")
        c, path = it.split("=", 1)
        try:
            c = int(c)
        except ValueError:
            raise FormatError(f"bad component index {c!r}") from None
        if not 0 <= c < n:
            raise FormatError(f"component {c} out of range")
        text, _ = _read(path)
        per[c] = hp.parse_functional(text, H.n)
    missing = [i for i, f in enumerate(per) if f is None]
    if missing:
        raise FormatError(f"no label for components {missing}")
    return per


def cmd_rt(args, out: Manifest):
    A, digest = load_matrix(args.matrix)
    out.add("input.matrix", digest)
    out.add("convention.sqrt", CONVENTIONS[3][1])
    if args.engine == "abelian":
        T, tdig = load_theory(args.theory)
        out.add("input.theory", tdig)
        rep = ab.analyze(T)
        for line in rep.lines():
            k, v = line.split(": ", 1)
            out.add(k, v)
        value = ab.surgery_invariant_I(T, A, rep)
        out.scalar("framed", value)
        if args.spin:
            sigma = sm.signature(A)
            sv = ab.spin_normalize(T, value, sigma)
            out.add("signature", sigma)
            if sv.normalized:
                out.scalar("result", sv.value)
            else:
                out.add("result", f"unnormalized (sigma mod 16 = {sv.residue})")
                out.scalar("framed_value", sv.value)
        else:
            out.scalar("result", value)
    elif args.engine == "moo":
        out.add("N", args.N)
        out.add("r", f"zeta_{2 * args.N}^{args.r}")
        out.scalar("result", ab.moo_invariant(args.N, args.r, A))
    else:
        model = ab.CyclicModel(args.N, args.s)
        c = tuple(int(x) for x in args.sublink.split(",")) if args.sublink else (0,) * A.n
        res = ab.kirby_melvin(model, A, c)
        out.add("model", f"Gamma = Z{4 * args.N}, q(l) = {args.s} l^2 / {8 * args.N}")
        out.add("sublink", ",".join(map(str, c)))
        out.add("signature", res.sigma)
        out.scalar("U_plus", res.U_plus)
        out.scalar("J", res.J)
        out.scalar("result", res.J_prime)


def cmd_fuzz(args, out: Manifest):
    rng = random.Random(args.seed)
    out.add("engine", args.engine)
    out.add("seed", args.seed)
    out.add("sequences", args.sequences)
    failures = []
    if args.engine == "hennings":
        H, R, digest = load_algebra(args.algebra)
        out.add("input.algebra", digest)
        eng = hn.Engine.build(H, R)
        if args.label == "lambda":
            lam = hp.normalized_integral(eng.Q).raw
        else:
            basis = hp.quantum_characters(H)
            coef = [rng.randint(-3, 3) for _ in basis]
            lam = [sum((c * f[i] for c, f in zip(coef, basis)), Fraction(0)) for i in range(H.n)]
        out.add("label", args.label)
        pool = [dg.normalize_winding(p) for p in dg.link_pool() if p.n_crossings <= args.max_crossings]
        for s in range(args.sequences):
            d0 = pool[s % len(pool)]
            v0 = hn.evaluate_K(d0, eng, lam).value
            d, trace = d0, []
            for _ in range(args.length):
                m = dg.random_regular_move(d, rng, max_slices=len(d0.slices) + 6)
                if m is None:
                    break
                d = dg.apply_move(d, *m)
                trace.append(" ".join(map(str, m)))
            c = rng.randrange(d.n_components)
            bp = dg.random_basepoint(d, c, rng)
            d = dg.set_basepoint(d, c, (bp[0], bp[1], rng.choice((1, -1))))
            trace.append(f"basepoint {c} {bp[0]} {bp[1]}")
            if args.break_normalization:
                v = _broken_K(d, eng, lam)
            else:
                v = hn.evaluate_K(d, eng, lam).value
            if v != v0:
                failures.append((d0.name, v0, v, trace))
    else:
        T = None
        if args.engine == "abelian":
            T, tdig = load_theory(args.theory)
            out.add("input.theory", tdig)
            rep = ab.analyze(T)
            scale = 2 * rep.quotient.size if rep.quotient.classification == "spin-modular" else rep.quotient.size

            def inv(A):
                v = ab.surgery_invariant_I(T, A, rep)
                return v * ab.sqrt_in_field(scale) ** A.n if args.break_normalization else v
        else:
            def inv(A):
                return ab.moo_invariant(args.N, args.r, A)
        for s in range(args.sequences):
            A = _random_even(rng, rng.randint(1, 2))
            v0 = inv(A)
            trace = [f"start {A.rows}"]
            for _ in range(args.length):
                if A.n >= 2 and rng.random() < 0.6:
                    i, j = rng.sample(range(A.n), 2)
                    sg = rng.choice((1, -1))
                    A = sm.slide(A, i, j, sg)
                    trace.append(f"slide {i} {j} {sg}")
                elif A.n <= 3:
                    A = sm.stabilize_hopf(A)
                    trace.append("stabilize_hopf")
            if inv(A) != v0:
                failures.append((f"seq{s}", v0, inv(A), trace))
    out.add("failures", len(failures))
    for k, (name, v0, v, trace) in enumerate(failures[:20]):
        out.add(f"failure.{k}", f"{name}: {format_scalar(v0)} -> {format_scalar(v)}")
        out.add(f"failure.{k}.trace", " | ".join(trace))
    if failures:
        raise DomainFailure(f"{len(failures)} invariance failures")


def _broken_K(d, eng, lam):
    """K without the downward-start rotation offset (negative control)."""
    walks = hn.component_walks(d)
    fixed = []
    for c, w in enumerate(walks):
        if d.basepoint(c)[2] < 0:
            w = hn.ComponentWalk(tuple(hn.Slot(s.slice, s.factor, s.rotation - 1) for s in w.slots),
                                 w.agrees, w.total_rotation)
        fixed.append(w)
    cross = [k for k, s in enumerate(d.slices) if s[0] in dg.CROSSINGS]
    return hn._reference_sum(eng, fixed, [lam] * d.n_components, cross)


def _random_even(rng, n):
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        M[i][i] = 2 * rng.randint(-1, 1)
        for j in range(i):
            M[i][j] = M[j][i] = rng.randint(-1, 1)
    return sm.SurgeryMatrix.of(M)


# -- argument parsing ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spininv", description=__doc__.splitlines()[0])
    p.add_argument("--timing", action="store_true", help="append wall-clock time (breaks bit-stable output)")
    sub = p.add_subparsers(dest="command", required=True)

    lk = sub.add_parser("link", help="validate a sliced diagram or apply random moves")
    lk.add_argument("action", choices=["validate", "moves"])
    lk.add_argument("link", help="link file or builtin name (" + ", ".join(BUILTIN_LINKS) + ")")
    lk.add_argument("--seed", type=int, default=0)
    lk.add_argument("--count", type=int, default=10)
    lk.add_argument("--slack", type=int, default=6, help="extra slices random moves may add")
    lk.set_defaults(func=cmd_link)

    mx = sub.add_parser("matrix", help="signature, Rohlin residue, characteristic sublinks")
    mx.add_argument("action", choices=["sigma", "mu", "charsub"])
    mx.add_argument("--matrix", required=True, help="matrix file or builtin (" + ", ".join(BUILTIN_MATRICES) + ")")
    mx.set_defaults(func=cmd_matrix)

    hf = sub.add_parser("hopf", help="verify, double, integrals")
    hf.add_argument("action", choices=["verify", "double", "integrals"])
    hf.add_argument("algebra", help="Hopf file or builtin (z2, z3, z4, sweedler, d_<name>)")
    hf.add_argument("-o", "--output")
    hf.set_defaults(func=cmd_hopf)

    he = sub.add_parser("hennings", help="state-sum invariant of an even link")
    he.add_argument("--algebra", required=True)
    he.add_argument("--link", required=True)
    he.add_argument("--label", action="append", metavar="COMP=CHARFILE")
    he.add_argument("--normalize", choices=["spin", "framed", "raw"], default="framed")
    he.add_argument("--kummer", help="diagram of a Kummer presentation for spin normalization")
    he.add_argument("--kernel", choices=["auto", "compiled", "python", "reference"], default="auto")
    he.set_defaults(func=cmd_hennings)

    rt = sub.add_parser("rt", help="abelian surgery invariants")
    rt.add_argument("engine", choices=["abelian", "moo", "km"])
    rt.add_argument("--matrix", required=True)
    rt.add_argument("--theory", help="theory file or builtin (" + ", ".join(BUILTIN_THEORIES) + ")")
    grp = rt.add_mutually_exclusive_group()
    grp.add_argument("--spin", action="store_true")
    grp.add_argument("--framed", action="store_true")
    rt.add_argument("--N", type=int, default=1)
    rt.add_argument("--r", type=int, default=1, help="r = zeta_{2N}^r")
    rt.add_argument("--s", type=int, default=1, help="KM model q(l) = s l^2/(8N)")
    rt.add_argument("--sublink")
    rt.set_defaults(func=cmd_rt)

    fz = sub.add_parser("fuzz", help="random move sequences against exact invariance")
    fz.add_argument("--engine", choices=["hennings", "abelian", "moo"], default="hennings")
    fz.add_argument("--algebra", default="d_z2")
    fz.add_argument("--theory", help="theory file or builtin (" + ", ".join(BUILTIN_THEORIES) + ")")
    fz.add_argument("--N", type=int, default=3)
    fz.add_argument("--r", type=int, default=1)
    fz.add_argument("--label", choices=["generic", "lambda"], default="generic",
                    help="hennings label: seeded random quantum character or the integral")
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--sequences", type=int, default=100)
    fz.add_argument("--length", type=int, default=6)
    fz.add_argument("--max-crossings", type=int, default=6)
    fz.add_argument("--break-normalization", action="store_true", help="negative control")
    fz.set_defaults(func=cmd_fuzz)
    return p


def run(argv=None) -> tuple[int, str]:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "rt" and args.engine == "abelian" and not args.theory:
        parser.error("rt abelian needs --theory")
    if args.command == "fuzz" and args.engine == "abelian" and not args.theory:
        parser.error("fuzz --engine abelian needs --theory")
    out = Manifest(args.command + (" " + args.action if hasattr(args, "action") else "")
                   + (" " + args.engine if args.command == "rt" else ""))
    out.add("threads", os.environ.get("SPININV_THREADS", "1") + " (engines run single-threaded)")
    out.add("kernel_backend", kernels.backend())
    t0 = time.perf_counter()
    code = 0
    try:
        args.func(args, out)
        out.add("status", "ok")
    except DomainFailure as e:
        out.add("status", f"failed: {e}")
        code = 1
    except FormatError as e:
        out.add("status", f"input error: {e}")
        code = 2
    except DOMAIN_ERRORS as e:
        out.add("status", f"error: {type(e).__name__}: {e}")
        code = 1
    if args.timing:
        out.add("time_s", f"{time.perf_counter() - t0:.3f}")
    return code, out.text()


def main(argv=None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
