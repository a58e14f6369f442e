#!/usr/bin/env python3
"""Smoke test for the diagthue_py extension module.

Builds nothing itself: expects the cdylib at target/release/libdiagthue_py.so
(see README). Copies it next to a temp import dir under the right module name,
imports it, and exercises the main surface with exact expected values.
"""

import shutil
import sys
from fractions import Fraction
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
CDYLIB = REPO / "target" / "release" / "libdiagthue_py.so"
IMPORT_DIR = REPO / "python" / "_build"


def stage_module():
    if not CDYLIB.exists():
        sys.exit(
            f"missing {CDYLIB}\n"
            "build it first: cargo build --release -p diagthue-py --features extension-module"
        )
    IMPORT_DIR.mkdir(exist_ok=True)
    shutil.copy2(CDYLIB, IMPORT_DIR / "diagthue_py.so")
    sys.path.insert(0, str(IMPORT_DIR))


def main():
    stage_module()
    import diagthue_py as dt

    # Pure power difference x^7 - y^7: exact invariants.
    f = dt.Form(1, 0, 0, 1, r=7)
    inv = f.invariants(1)
    assert inv["Delta"] == "-823543", inv["Delta"]
    assert Fraction(inv["DeltaPrime"]) == Fraction(1, 2**42), inv["DeltaPrime"]
    assert f.eval(2, 1) == 127
    assert f.coefficients() == [1, 0, 0, 0, 0, 0, 0, -1]

    # Known counts at small bounds, searched well past the last solution.
    sols = f.solve(2, box_h=200)
    assert len(sols) == 3, [(s.x, s.y) for s in sols]
    assert {(s.x, s.y) for s in sols} == {(0, 1), (1, 0), (1, -1)}
    assert len(f.solve(1, box_h=200)) == 2

    # The exact tie u/v = -1 must resolve to the lower arc boundary, flagged.
    omega, tie = f.related_root(1, -1)
    assert (omega, tie) == (3, True), (omega, tie)

    part = f.partition(127, box_h=50)
    assert all(1 <= k <= 7 for k in part)
    assert sum(len(v) for v in part.values()) == len(f.solve(127, box_h=50))

    # Lemma suite: raises on any violation, returns verdict counts.
    counts = f.check_lemmas(127, box_h=50)
    assert counts["holds"] > 0 and counts["solutions"] == 5, counts

    # Entries in Q(i): twice the real part of (x + iy)^7.
    g = dt.Form((1, 0), (0, 1), (-1, 0), (0, 1), r=7, d=-1)
    assert g.d == -1 and g.eval(1, 0) == 2
    assert (1, 0) in {(s.x, s.y) for s in g.solve(2, box_h=50)}

    # Large-j family: hypothesis holds and the count respects the bound.
    k = 3_000_000
    big = dt.Form(1, k, 1, -k, r=7)
    hyp = big.hypothesis("main", 1)
    assert hyp["verdict"] is True and hyp["predicted_bound"] == 2, hyp
    assert hyp["case"] == "D_POS_ODD_INDEF"
    ver = big.verify(1, box_h=1000)
    assert ver["covered"] is True and ver["n"] == 0, ver

    # Thresholds: exact expression plus a float view; main sits below the
    # l = 1 benchmark at every tabulated point.
    expr, log10_main = dt.threshold("main", 7, 1)
    assert "7^(637/2)" in expr, expr
    assert abs(log10_main - Fraction(637, 2) * 0.8450980400142568) < 1e-9
    _, log10_siegel = dt.threshold("siegel:1", 7, 1)
    assert log10_main < log10_siegel
    rows = dt.comparison_table([7, 10], [1])
    by_r = {row[0]: row for row in rows}
    assert by_r[10][2] == 243.75, by_r[10]
    assert all(row[2] < row[4] for row in rows)

    # Exponent-tuple induction from the seed.
    chain = dt.induction_chain(7, 3)
    assert chain[0] == "(6,1,0,-1,1)" and chain[1] == "(13,5,23/5,9/5,3)", chain

    print("smoke test passed: forms, search, lemmas, thresholds, induction")


if __name__ == "__main__":
    main()
