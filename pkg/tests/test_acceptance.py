"""The acceptance gate: every criterion at its stated trial count, exact.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.  All comparisons are exact rational equalities; there are no
tolerances anywhere.
"""

import pytest

from jetweil.verify import run_suite

SEED = 20250809

CRITERIA = [
    (1, "faa-di-bruno", 100,
     "line lifts equal independent truncated-series composition, orders 1..4"),
    (2, "set-partition", 100,
     "axes closed form equals the axis-peeling recursion; order-2 display symbolic"),
    (3, "affine", 200,
     "torsor laws hold exactly for all three gluing families and coordinate jets"),
    (4, "solver", 200,
     "every gluing system is uniquely solvable; coordinate ops match under embedding"),
    (5, "naturality", 100,
     "difference/translation commute with maps, scalings, and permutations"),
    (6, "conversion", 100,
     "axes and line representations are compatible, with their affine data"),
    (7, "holonomy", 100,
     "exchange tests pass on symmetric transport and catch asymmetric transport"),
    (8, "bijectivity", 50,
     "operator probing reconstructs the jet exactly in all three representations"),
    (9, "forms", 100,
     "lift differences satisfy the form laws; form-translated lifts are lifts"),
    (10, "dimensions", 1,
     "basis sizes match the four coordinate tuple length formulas exhaustively"),
]


@pytest.mark.parametrize(
    "number,suite,trials,description", CRITERIA,
    ids=[f"criterion-{c[0]:02d}-{c[1]}" for c in CRITERIA])
def test_acceptance(number, suite, trials, description):
    report = run_suite(suite, trials, SEED)
    status = "PASS" if report.all_passed else "FAIL"
    print(f"ACCEPTANCE {number:02d} [{status}] {description} "
          f"(suite={suite}, trials={trials}, seed={SEED})")
    assert report.all_passed, [
        (p.name, p.counterexample) for p in report.failures()]
