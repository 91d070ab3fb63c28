"""Builds the extension with cargo and exercises it from Python.

    python3 python/smoke_test.py
"""

import os
import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def build_module():
    subprocess.run(["cargo", "build", "--release", "-p", "gossez-python"], cwd=ROOT, check=True)
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(ROOT, "target"))
    suffix = {"darwin": "libgossez.dylib", "win32": "gossez.dll"}.get(sys.platform, "libgossez.so")
    out = tempfile.mkdtemp(prefix="gossez-py-")
    ext = "gossez.pyd" if sys.platform == "win32" else "gossez.so"
    shutil.copy(os.path.join(target, "release", suffix), os.path.join(out, ext))
    sys.path.insert(0, out)


def main():
    build_module()
    import gossez as g

    e = g.EvConstSeq.ones()
    half = g.FinSeq({1: Fraction(1, 2)})

    cert = g.inverse_type_d_certificate(e, g.LimFunctional.limit(1))
    assert cert["beta"]["kind"] == "finite"
    assert Fraction(cert["beta"]["value"]) == Fraction(1, 4)
    assert cert["beta"]["witness"] == {"1": "1/2"}
    assert cert["pairing"] == "1"
    assert cert["verdict"] == "TypeDFails"

    assert g.apply_a(half) == half
    assert g.solve_a(g.FinSeq.delta(2)).to_dict() == {1: -2, 2: 1}
    x = g.FinSeq({1: 3, 4: "-1/2"})
    assert g.solve_a(g.apply_a(x)) == x
    gx = g.apply_g(x)
    assert gx.tail == -x.sum()
    assert g.pair(x, gx) == 0
    x_in_c = g.EvConstSeq([3, 0, 0, "-1/2"], 0)
    assert g.pair(g.apply_a(x), x_in_c) == x.sum() ** 2

    gap = g.type_d_gap(g.FinSeq(), e)
    assert gap["sup"]["value"] == "1/4" and gap["criterion_holds"]

    xss = g.EvConstSeq(list(g.apply_a(x).to_dict().get(k, 0) for k in range(1, 5)), 0)
    assert g.closure_membership(xss, x)["kind"] == "member"
    shifted = g.closure_membership(xss + Fraction(1, 3) * e, x)
    assert shifted["kind"] == "violation" and Fraction(shifted["value"]) < 0

    m = g.trunc_matrix(3)
    assert m == [[1, 2, 2], [0, 1, 2], [0, 0, 1]]

    assert g.eval_expr("Ainv(fin{2: 1})")["value"] == {"1": "-2", "2": "1"}
    try:
        g.eval_expr("pair(e, e)")
    except ValueError as err:
        assert str(err).startswith("E-SPACE")
    else:
        raise AssertionError("ill-spaced expression accepted")

    pipeline = g.counterexample_pipeline()
    assert pipeline["verdict"] == "TypeDFails"

    report = g.verify_paper(samples=50)
    assert report["passed"], [c["name"] for c in report["checks"] if not c["passed"]]
    assert report["certificate"]["beta"]["value"] == "1/4"
    try:
        g.random_check(samples=0)
    except ValueError:
        pass
    else:
        raise AssertionError("zero samples accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
