"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

import time

from tricolor.exactalg import A, AlgebraContext, AlgebraElement, CycScalar, sigma
from tricolor.detform import schur_jacobi_trudi, script_PQ
from tricolor.lattice import ASM_COUNTS, enumerate_states, gamma_balance_ok
from tricolor.sampling import sample_point
from tricolor.suites import SuiteConfig, run_suite
from tricolor.transforms import FWVContext, f_function, fourier_inverse

RESULTS: list[str] = []


def report(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    RESULTS.append(line)
    assert ok, line


def suite(name: str, n_min: int, n_max: int, trials: int = 1, seed: int = 0):
    rep = run_suite(SuiteConfig(name, n_min=n_min, n_max=n_max, trials=trials, seed=seed))
    failed = [rec for rec in rep.records if not rec["pass"]]
    return rep, failed


def checks(rep, check: str) -> list[dict]:
    return [rec for rec in rep.records if rec["check"] == check]


def test_criterion_1_state_counts():
    t0 = time.perf_counter()
    counts = {n: [len(enumerate_states(n, r)) for r in range(3)] for n in range(1, 6)}
    elapsed = time.perf_counter() - t0
    ok = all(counts[n] == [ASM_COUNTS[n]] * 3 for n in counts) and elapsed < 5
    report(1, "state counts 1, 2, 7, 42, 429 per corner color", ok, f"{elapsed:.2f} s")


def test_criterion_2_closed_form():
    t0 = time.perf_counter()
    rep, failed = suite("closed-form", 1, 4, trials=25)
    elapsed = time.perf_counter() - t0
    positives = checks(rep, "zprime")
    ok = not failed and len(positives) == 4 * 3 * 25 and elapsed < 30
    report(2, "brute-force Z' equals the closed form, s-free, n = 1..4", ok, f"{len(positives)} comparisons, {elapsed:.2f} s")


def test_criterion_3_functional_equations():
    rep, failed = suite("funceq", 1, 3, trials=10)
    controls = checks(rep, "negative-control")
    ok = not failed and len(controls) == 3
    report(3, "functional equations exact, perturbed weights detected", ok, f"{len(rep.records)} checks")


def test_criterion_4_parity():
    rep, failed = suite("parity", 1, 3, trials=10)
    report(4, "W and V parity exact for n <= 3", not failed, f"{len(rep.records)} checks")


def test_criterion_5_support():
    rep, failed = suite("support", 1, 3, trials=5)
    slots = {(rec["n"], rec["side"], rec["k"]) for rec in rep.records}
    ok = not failed and len(slots) == 2 + 4 + 6
    report(5, "support of V within the exponent sets, vanishing at +-u_nu", ok, f"{len(rep.records)} checks")


def test_criterion_6_proportionality():
    rep, failed = suite("proportionality", 1, 3, trials=5)
    ok = not failed and len(rep.records) == 9
    report(6, "V / det ratio independent of u at fixed b", ok, f"{len(rep.records)} checks")


def test_criterion_7_recursions():
    rep, failed = suite("recursions", 2, 4, trials=10)
    names = {rec["check"] for rec in rep.records}
    expected = {"detP", "detQ", "zprime", "scriptP", "scriptQ", "coefficients", "zprime-wrong-specialization"}
    ok = not failed and names == expected
    report(7, "recursions exact for n = 2..4, wrong specialization detected", ok, f"{len(rep.records)} checks")


def test_criterion_8_schur():
    rep, failed = suite("schur", 1, 3, trials=5)
    exact_n1 = True
    for i in range(5):
        u1, u2 = sample_point(1, 0, i).u
        exact_n1 &= script_PQ("P", (u1, u2)) == 1
        exact_n1 &= script_PQ("Q", (u1, u2)) == u1 / u2 + u2 / u1
        exact_n1 &= (u1 * u2) ** -1 * schur_jacobi_trudi((1, 0), [u1 * u1, u2 * u2]) == u1 / u2 + u2 / u1
    report(8, "Jacobi-Trudi reproduces script P and Q for n <= 3", not failed and exact_n1, f"{len(rep.records)} checks")


def test_criterion_9_algebra():
    ok = sigma(A) ** 2 == sigma(A ** 2) ** 2 == CycScalar(-3)
    for n in (1, 2, 3):
        ctx = FWVContext(sample_point(n, 0, 0))
        ok &= all(fourier_inverse(ctx, r) == f_function(ctx, r) for r in range(3))
    for i in range(5):
        ctx = AlgebraContext(sample_point(1, 0, i).b)
        for r in range(3):
            s = AlgebraElement.generator(ctx, r)
            ok &= s * s == AlgebraElement.scalar(ctx, ctx.t[r])
    ok &= all(gamma_balance_ok(g) for n in range(1, 6) for r in range(3) for g in enumerate_states(n, r))
    report(9, "algebra identities, DFT roundtrip, s_r^2 = t_r, gamma balance n <= 5", ok)


if __name__ == "__main__":
    import sys

    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    print("\n".join(RESULTS))
    sys.exit(1 if failures else 0)
