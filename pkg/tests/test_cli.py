import itertools
import subprocess
import sys
from fractions import Fraction

import pytest

from spininv import abelian as ab
from spininv import cli
from spininv import diagram as dg
from spininv import hopf as hp
from spininv import surgery as sm
from spininv.cyclotomic import format_scalar, reduce_order


def fields(text):
    out = {}
    for line in text.splitlines():
        if ": " in line:
            k, v = line.split(": ", 1)
            out.setdefault(k, v)
    return out


def run(*argv):
    return cli.run(list(argv))


def test_manifest_has_common_keys():
    code, text = run("matrix", "sigma", "--matrix", "e8")
    f = fields(text)
    assert code == 0
    assert f["command"] == "matrix sigma"
    assert f["signature"] == "8"
    assert f["status"] == "ok"
    assert "threads" in f and "kernel_backend" in f
    assert f["input.matrix"] == "builtin:e8"
    assert "time_s" not in f


def test_output_is_bit_stable():
    argv = ("hennings", "--algebra", "d_z3", "--link", "t24")
    assert run(*argv) == run(*argv)


def test_timing_is_opt_in():
    code, text = run("--timing", "matrix", "sigma", "--matrix", "hopf")
    assert code == 0 and "time_s" in fields(text)


def test_file_inputs_are_hashed(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("matrix 2\n0 1\n1 0\n")
    code, text = run("matrix", "charsub", "--matrix", str(p))
    f = fields(text)
    assert code == 0
    assert f["input.matrix"].startswith("sha256:")
    assert f["count"] == "1"


@pytest.mark.parametrize("link", ["empty", "hopf00", "hopf00_slid"])
def test_s3_presentations_give_one(link):
    code, text = run("hennings", "--algebra", "d_z2", "--link", link)
    assert code == 0
    assert fields(text)["result"] == "1; 1/1"


def test_hennings_state_count_and_kernel_choice():
    # over D(Z2) the normalized value counts solutions of A x = 0 mod 2
    A = dg.linking_matrix(dg.torus_link_2(6)).as_lists()
    sols = sum(all(sum(a * b for a, b in zip(row, x)) % 2 == 0 for row in A)
               for x in itertools.product(range(2), repeat=len(A)))
    for kernel in ("compiled", "python", "reference"):
        code, text = run("hennings", "--algebra", "d_z2", "--link", "t26", "--kernel", kernel)
        f = fields(text)
        assert code == 0
        assert int(f["states"]) == int(f["rho"]) ** int(f["crossings"])
        assert f["result"] == f"{sols}; 1/1"


def test_hennings_with_label_files(tmp_path):
    D, _, _ = hp.drinfeld_double(hp.group_algebra(2))
    eps = D.counit
    p = tmp_path / "eps.txt"
    p.write_text("".join(f"{i} -> {eps[i]}\n" for i in range(D.n)))
    code, text = run("hennings", "--algebra", "d_z2", "--link", "unknot0", "--label", f"0={p}")
    assert code == 0
    assert fields(text)["result"] == "1; 1/1"
    code, _ = run("hennings", "--algebra", "d_z2", "--link", "hopf00", "--label", f"0={p}")
    assert code == 2


def test_odd_link_is_a_domain_error(tmp_path):
    p = tmp_path / "odd.txt"
    p.write_text("link 1\ncup 0\nx+ 0\ncap 0\n")
    code, text = run("hennings", "--algebra", "d_z2", "--link", str(p))
    assert code == 1
    assert "NotEvenLink" in fields(text)["status"]


def test_missing_and_malformed_inputs_exit_2(tmp_path):
    assert run("matrix", "sigma", "--matrix", str(tmp_path / "nope"))[0] == 2
    p = tmp_path / "bad.txt"
    p.write_text("matrix 2\n0 1\n")
    assert run("matrix", "sigma", "--matrix", str(p))[0] == 2


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as e:
        run("rt", "abelian", "--matrix", "hopf")
    assert e.value.code == 2


def test_rt_abelian_builtin_theory(tmp_path):
    p = tmp_path / "rp3.txt"
    p.write_text("matrix 1\n2\n")
    code, text = run("rt", "abelian", "--theory", "z6", "--matrix", str(p))
    expected = ab.surgery_invariant_I(ab.AbelianTheory.cyclic(6, Fraction(1, 6)), sm.SurgeryMatrix.of([[2]]))
    assert code == 0
    assert fields(text)["result"] == format_scalar(reduce_order(expected))


def test_rt_moo_and_km():
    code, text = run("rt", "moo", "--matrix", "kummer", "--N", "3")
    assert code == 0 and fields(text)["result"] == "1; 1/1"
    code, text = run("rt", "km", "--N", "3", "--matrix", "hopf", "--sublink", "0,0")
    assert code == 0 and fields(text)["J"] == "1; 1/1"


def test_spin_normalization_reports_residue():
    code, text = run("rt", "abelian", "--theory", "z6", "--matrix", "e8", "--spin")
    f = fields(text)
    assert code == 0
    assert f["signature"] == "8"
    assert f["result"].startswith("unnormalized")


def test_hopf_double_roundtrip(tmp_path):
    out = tmp_path / "dz3.txt"
    code, text = run("hopf", "double", "z3", "-o", str(out))
    assert code == 0 and fields(text)["double.verified"] == "True"
    code, text = run("hopf", "verify", str(out))
    assert code == 0
    code, text = run("hopf", "integrals", str(out))
    f = fields(text)
    assert f["two_sided_dual"] == "True" and f["factorizable"] == "True"


def test_hopf_verify_rejects_corrupted_file(tmp_path):
    out = tmp_path / "z2.txt"
    run("hopf", "double", "z2", "-o", str(out))
    head, tail = out.read_text().split("antipode\n", 1)
    text = head + "antipode\n" + tail.replace("1 1 -> ", "1 0 -> ", 1)
    out.write_text(text)
    code, _ = run("hopf", "verify", str(out))
    assert code == 1


def test_link_moves_preserve_linking():
    code, text = run("link", "moves", "t24", "--seed", "4", "--count", "12")
    assert code == 0
    assert fields(text)["linking_matrix_preserved"] == "True"


@pytest.mark.parametrize("argv", [
    ("fuzz", "--algebra", "d_z3", "--sequences", "12"),
    ("fuzz", "--engine", "moo", "--N", "3", "--sequences", "20"),
    ("fuzz", "--engine", "abelian", "--theory", "z10", "--sequences", "15"),
])
def test_fuzz_passes_and_negative_control_fails(argv):
    code, text = run(*argv)
    assert code == 0 and fields(text)["failures"] == "0"
    if "moo" in argv:
        return
    code, text = run(*argv, "--break-normalization")
    f = fields(text)
    assert code == 1
    assert int(f["failures"]) > 0
    assert "failure.0.trace" in f


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "spininv.cli", "matrix", "mu", "--matrix", "kummer"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert "mu: 0 (mod 16)" in r.stdout
