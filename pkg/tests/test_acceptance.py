"""Acceptance criteria at desk scale, one test and one summary line per criterion.

Measured values come from :mod:`kicksim.verify`; pass/fail is re-judged
here against tolerances pinned in ``PINNED``, so a drifting threshold in
the library cannot loosen a criterion unnoticed.
"""
import math
import operator
import re

import pytest

from kicksim import verify

N_MC = 100_000
KS_ALPHA = 1e-3

OPS = {"<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge}

# (criterion, name pattern, comparison, limit); "exact" checks carry a boolean verdict
PINNED = [
    (1, r"washout visibility n=[2-5]$", "<", 0.01),
    (1, r"no-detector visibility n=[2-5]$", ">", 0.99),
    (2, r"\|visibility - overlap\| at overlap (0\.25|0\.5|0\.75)$", "<=", 0.01),
    (3, r"d\+ vs no-detector/2 max relative error$", "<", 0.01),
    (3, r"d- shift distance from 1/2 period$", "<=", 0.005),
    (4, r"kick fidelity n=[2-5] sigma=d/20$", ">=", 0.99),
    (4, r"kick fidelity n=[2-5] sigma=d/100$", ">=", 1 - 1e-6),
    (4, r"infidelity decreases over sigma sweep$", "exact", None),
    (4, r"worst factor off \(sigma/d\)\^2 fit$", "<=", 2.0),
    (5, r"kick spectrum n=[2-8]$", "exact", None),
    (6, r"shift error n=[235] j=\d$", "<=", 0.01),
    (6, r"summed conditioned visibility n=[235]$", "<", 0.01),
    (7, r"worst kick error \((at_zero|centered)\)$", "<=", 0.01),
    (7, r"worst constant-phase error \((at_zero|centered)\)$", "<=", 0.01),
    (7, r"worst kick-form fidelity \((at_zero|centered)\)$", ">=", 0.99),
    (7, r"(identity|rotation pi/6) basis disqualified$", "exact", None),
    (7, r"Fourier basis control keeps kick form$", "exact", None),
    (8, r"x0 = h / 2\(p2 - p1\)$", "exact", None),
    (8, r"position-kick fidelity at width dp/20$", ">=", 0.99),
    (8, r"duality \|F_position - F_momentum\|$", "<=", 1e-9),
    (9, r"outcome frequency deviation n=2$", "<=", 3 * math.sqrt(0.5 * 0.5 / N_MC)),
    (9, r"outcome frequency deviation n=3$", "<=", 3 * math.sqrt(1 / 3 * 2 / 3 / N_MC)),
    (9, r"KS distance which-way vs Fourier n=[23]$", "<",
     math.sqrt(-math.log(KS_ALPHA / 2) / 2) * math.sqrt(2 / N_MC)),
    (9, r"rerun bit-identical n=[23]$", "exact", None),
    (10, r"norm drift, (free evolution|far field)$", "<=", 1e-10),
    (10, r"basis round-trip max error$", "<=", 1e-10),
    (10, r"eraser decomposition max error$", "<=", 1e-10),
]

EXPECTED_COUNTS = {1: 8, 2: 3, 3: 2, 4: 10, 5: 7, 6: 10, 7: 9, 8: 3, 9: 6, 10: 4}

TITLES = {
    1: "washout and no-detector fringes",
    2: "partial which-way visibility",
    3: "eraser recovery",
    4: "kick equivalence",
    5: "kick spectrum",
    6: "fringe-shift law",
    7: "general unbiased basis",
    8: "momentum-space dual",
    9: "Monte Carlo",
    10: "numerical hygiene",
}


def judge(k, check):
    rules = [r for r in PINNED if r[0] == k and re.match(r[1], check.name)]
    assert len(rules) == 1, f"no unique pinned tolerance for {check.name!r}"
    _, _, op, limit = rules[0]
    if op == "exact":
        return bool(check.passed)
    return bool(OPS[op](check.value, limit))


def evaluate(k):
    checks = verify.CRITERIA[k]()
    verdicts = [(c, judge(k, c)) for c in checks]
    return checks, verdicts


@pytest.mark.parametrize("k", sorted(verify.CRITERIA))
def test_criterion(k, acceptance_log):
    checks, verdicts = evaluate(k)
    assert len(checks) == EXPECTED_COUNTS[k]
    failed = [c for c, ok in verdicts if not ok]
    status = "PASS" if not failed else "FAIL"
    detail = "" if not failed else " (failed: " + "; ".join(
        f"{c.name} = {c.value if isinstance(c.value, str) else f'{c.value:.6g}'}"
        for c in failed) + ")"
    line = f"criterion {k}: {status} {TITLES[k]}{detail}"
    acceptance_log.append(line)
    print(line)
    # the library's own verdicts must agree with the pinned ones
    assert all(c.passed == ok for c, ok in verdicts)
    assert not failed, line


def test_verify_all_within_budget():
    import time
    t0 = time.perf_counter()
    verify.run_suite("all")
    assert time.perf_counter() - t0 < 120


if __name__ == "__main__":
    for k in sorted(verify.CRITERIA):
        _, verdicts = evaluate(k)
        ok = all(v for _, v in verdicts)
        print(f"criterion {k}: {'PASS' if ok else 'FAIL'} {TITLES[k]}")
