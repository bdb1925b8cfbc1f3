"""Verification suites: each turns one family of identities into check records.

A record always carries the keys ``suite, check, n, r, side, k, point_seed,
pass, witness``; fields that do not apply are ``None``.  ``witness`` holds the
serialized residual of a failed check.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from . import detform, lattice, transforms
from .exactalg import AlgebraElement, CycScalar, UniPoly
from .lattice import ASM_COUNTS, EvaluationPoint, StateCache, VertexKind, perturbed_weight, trig_weight
from .sampling import point_seed, sample_point

SUITES = (
    "states",
    "gamma-balance",
    "funceq",
    "parity",
    "support",
    "proportionality",
    "schur",
    "recursions",
    "closed-form",
)

# (default cap, cap with allow_large, minimum n)
N_CAPS = {
    "states": (5, 6, 1),
    "gamma-balance": (5, 6, 1),
    "funceq": (3, 4, 1),
    "parity": (3, 4, 1),
    "support": (3, 3, 1),
    "proportionality": (3, 4, 1),
    "schur": (3, 4, 1),
    "recursions": (4, 5, 2),
    "closed-form": (4, 5, 1),
}

MIN_PROPORTIONALITY_POINTS = 5


class UsageError(ValueError):
    pass


@dataclass
class SuiteConfig:
    suite: str
    n_min: int = 1
    n_max: int = 3
    trials: int = 25
    seed: int = 0
    output: str = "text"
    point: EvaluationPoint | None = None
    cache: str | None = None
    allow_large: bool = False
    inject_fault: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.suite not in SUITES + ("all",):
            raise UsageError(f"unknown suite {self.suite!r}")
        if self.trials < 1:
            raise UsageError("trials must be >= 1")
        if self.n_min < 1 or self.n_max < self.n_min:
            raise UsageError("need 1 <= n-min <= n-max")
        if self.suite != "all":
            cap = N_CAPS[self.suite][1 if self.allow_large else 0]
            if self.n_max > cap:
                raise UsageError(f"suite {self.suite} supports n <= {cap}")

    def n_range(self, suite: str) -> list[int]:
        default, large, lo = N_CAPS[suite]
        hi = min(self.n_max, large if self.allow_large else default)
        return list(range(max(self.n_min, lo), hi + 1))


@dataclass
class CheckReport:
    suite: str
    params: dict
    records: list[dict]
    diagnostics: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(rec["pass"] for rec in self.records)

    def to_json(self) -> dict:
        # timings are deliberately left out so equal configs give identical bytes
        return {
            "suite": self.suite,
            "params": self.params,
            "passed": self.passed,
            "records": self.records,
            "diagnostics": self.diagnostics,
        }

    def text_lines(self) -> list[str]:
        lines = []
        for rec in self.records:
            parts = [("PASS" if rec["pass"] else "FAIL"), rec["suite"], rec["check"]]
            for key in ("n", "r", "side", "k", "point_seed"):
                if rec[key] is not None:
                    parts.append(f"{key}={rec[key]}")
            if not rec["pass"] and rec["witness"] is not None:
                parts.append(f"witness={rec['witness']}")
            lines.append(" ".join(str(p) for p in parts))
        for key, value in self.diagnostics.items():
            lines.append(f"INFO {key}: {value}")
        n_fail = sum(not rec["pass"] for rec in self.records)
        lines.append(f"{'PASS' if self.passed else 'FAIL'} {self.suite}: {len(self.records) - n_fail}/{len(self.records)} checks passed")
        return lines


def to_wire(value):
    """JSON-ready form of residuals and other exact values."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, CycScalar):
        return value.to_json()
    if isinstance(value, AlgebraElement):
        return value.to_json()
    if isinstance(value, UniPoly):
        return {"symbol": value.symbol, "terms": {str(e): to_wire(c) for e, c in sorted(value.terms.items())}}
    if isinstance(value, (list, tuple)):
        return [to_wire(v) for v in value]
    if isinstance(value, dict):
        return {str(k): to_wire(v) for k, v in value.items()}
    return str(value)


def record(suite, check, passed, *, n=None, r=None, side=None, k=None, point_seed=None, witness=None) -> dict:
    return {
        "suite": suite,
        "check": check,
        "n": n,
        "r": r,
        "side": side,
        "k": k,
        "point_seed": point_seed,
        "pass": bool(passed),
        "witness": None if passed else to_wire(witness),
    }


def _point(n: int, seed: int, index: int, fixed: EvaluationPoint | None) -> tuple[EvaluationPoint, int]:
    if fixed is not None and fixed.n == n:
        return fixed, -1
    return sample_point(n, seed, index), point_seed(seed, n, index)


# tasks (module-level so they can run in worker processes)


def _task_states(n: int, r: int, states: list | None) -> dict:
    t0 = time.perf_counter()
    fresh = lattice.enumerate_states(n, r)
    elapsed = time.perf_counter() - t0
    out = {"n": n, "r": r, "count": len(fresh), "seconds": elapsed}
    out["per_state_s_free"] = all(lattice.state_is_s_free(g) for g in fresh)
    if states is not None:
        out["cache_consistent"] = list(states) == fresh
    return out


def _task_gamma(n: int, r: int) -> list[dict]:
    bad = None
    for g in lattice.enumerate_states(n, r):
        try:
            g.validate()
        except ValueError:
            bad = g
            break
        if not lattice.gamma_balance_ok(g):
            bad = g
            break
    witness = None if bad is None else {"faces": bad.to_json()["faces"], "columns": lattice.gamma_balance(bad)}
    return [record("gamma-balance", "gamma-balance", bad is None, n=n, r=r, witness=witness)]


def _weight(inject_fault: bool):
    return perturbed_weight(VertexKind.GAMMA, 2, r=0) if inject_fault else trig_weight


def _task_funceq(n, seed, index, fixed, inject_fault) -> list[dict]:
    pt, ps = _point(n, seed, index, fixed)
    ctx = transforms.FWVContext(pt, weight=_weight(inject_fault))
    out = []
    for side in transforms.SIDES:
        for k in range(n):
            res = transforms.funceq_residuals(ctx, side, k)
            for (family, r), value in res.items():
                out.append(record("funceq", family, not value, n=n, r=r, side=side, k=k, point_seed=ps, witness=value))
    return out


def _funceq_negative_control(n, seed, fixed) -> dict:
    pt, ps = _point(n, seed, 0, fixed)
    ctx = transforms.FWVContext(pt, weight=perturbed_weight(VertexKind.GAMMA, 2, r=0))
    detected = any(v for side in transforms.SIDES for k in range(n) for v in transforms.funceq_residuals(ctx, side, k).values())
    return record("funceq", "negative-control", detected, n=n, point_seed=ps, witness="perturbation not detected")


def _task_parity(n, seed, index, fixed, inject_fault) -> list[dict]:
    pt, ps = _point(n, seed, index, fixed)
    ctx = transforms.FWVContext(pt, weight=_weight(inject_fault))
    out = []
    for side in transforms.SIDES:
        for k in range(n):
            for r in range(3):
                res = transforms.parity_residuals(ctx, r, side, k)
                for family, value in res.items():
                    out.append(record("parity", family, not value, n=n, r=r, side=side, k=k, point_seed=ps, witness=value))
    return out


def _task_support(n, seed, index, fixed, inject_fault) -> list[dict]:
    pt, ps = _point(n, seed, index, fixed)
    out = []
    for mu in range(2 * n):
        ctx = transforms.FWVContext(pt, symbolic=mu, weight=_weight(inject_fault))
        side, k = "xy"[mu % 2], mu // 2
        for r in range(3):
            rep = transforms.support_report(ctx, r)
            witness = {"support": rep.support, "allowed": rep.allowed, "vanishes": rep.vanishes}
            out.append(record("support", "V-support", rep.passed, n=n, r=r, side=side, k=k, point_seed=ps, witness=witness))
    return out


def _task_proportionality(n, seed, trials, inject_fault) -> list[dict]:
    count = max(trials, MIN_PROPORTIONALITY_POINTS)
    b = sample_point(n, seed, 0).b
    points = [sample_point(n, seed, i, b=b) for i in range(count)]
    weight = _weight(inject_fault)
    out = []
    for r in range(3):
        ratios = [transforms.proportionality_ratio(pt, r, weight) for pt in points]
        same = all(q == ratios[0] for q in ratios)
        out.append(
            record(
                "proportionality",
                f"V/det{transforms.determinant_kind(r)}",
                same,
                n=n,
                r=r,
                point_seed=point_seed(seed, n, 0),
                witness=sorted({str(q) for q in ratios}),
            )
        )
    return out


def _task_schur(n, seed, index, fixed, offset) -> list[dict]:
    pt, ps = _point(n, seed, index, fixed)
    u = pt.u
    out = []
    for kind in detform.KINDS:
        lhs = detform.script_PQ(kind, u)
        rhs = detform.schur_form(kind, u, offset)
        out.append(record("schur", f"jacobi-trudi-{kind}", lhs == rhs, n=n, point_seed=ps, witness=lhs - rhs))
        _, rem = detform.division_witness(kind, u, index % (2 * n))
        out.append(record("schur", f"division-exact-{kind}", not rem, n=n, point_seed=ps, witness=rem))
    if n == 1:
        p1 = detform.script_PQ("P", u)
        q1 = detform.script_PQ("Q", u)
        expected_q = u[0] / u[1] + u[1] / u[0]
        out.append(record("schur", "P1-is-one", p1 == 1, n=1, point_seed=ps, witness=p1))
        out.append(record("schur", "Q1-closed", q1 == expected_q, n=1, point_seed=ps, witness=q1 - expected_q))
    return out


def _task_recursions(n, seed, index, fixed, inject_fault) -> list[dict]:
    pt, ps = _point(n, seed, index, fixed)
    weight = _weight(inject_fault)
    out = []
    for which in detform.RELATIONS:
        if which == "coefficients" and n < 3:
            continue
        res = detform.recursion_residuals(which, n, pt, weight=weight)
        if which == "zprime":
            for r, value in enumerate(res):
                out.append(record("recursions", which, not value, n=n, r=r, point_seed=ps, witness=value))
        else:
            bad = [v for v in res if v]
            out.append(record("recursions", which, not bad, n=n, point_seed=ps, witness=bad))
    wrong = detform.recursion_residuals("zprime", n, pt, factor=CycScalar.a_pow(1), weight=weight)
    out.append(
        record(
            "recursions",
            "zprime-wrong-specialization",
            any(wrong),
            n=n,
            point_seed=ps,
            witness="wrong specialization satisfied the recursion",
        )
    )
    return out


def _task_closed_form(n, seed, index, fixed, inject_fault, states) -> list[dict]:
    pt, ps = _point(n, seed, index, fixed)
    rep = detform.formula_vs_bruteforce(n, pt, weight=_weight(inject_fault), states=states)
    out = []
    for row in rep["per_color"]:
        ok = row["match"] and row["s_free"]
        out.append(record("closed-form", "zprime", ok, n=n, r=row["r"], point_seed=ps, witness=row["witness"]))
    out.append(record("closed-form", "total", rep["total_match"], n=n, point_seed=ps, witness=rep["total_witness"]))
    return out


def _closed_form_negative_control(n, seed, fixed) -> dict:
    pt, ps = _point(n, seed, 0, fixed)
    rep = detform.formula_vs_bruteforce(n, pt, weight=perturbed_weight(VertexKind.BETA, -1))
    detected = not rep["passed"]
    return record("closed-form", "negative-control-beta-sign", detected, n=n, point_seed=ps, witness="sign flip not detected")


# driver


def _run_tasks(tasks: list[tuple[Callable, tuple]], workers: int) -> list:
    """Run tasks and return their results in task order."""
    if workers <= 1 or len(tasks) <= 1:
        return [fn(*args) for fn, args in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *args) for fn, args in tasks]
        return [f.result() for f in futures]


def _flatten(results) -> list[dict]:
    out = []
    for res in results:
        out.extend(res if isinstance(res, list) else [res])
    return out


def _suite_records(cfg: SuiteConfig, suite: str, cache: StateCache | None, diagnostics: dict, timings: dict) -> list[dict]:
    ns = cfg.n_range(suite)
    seed, trials, fixed, fault = cfg.seed, cfg.trials, cfg.point, cfg.inject_fault
    t0 = time.perf_counter()
    if suite == "states":
        tasks = [(_task_states, (n, r, cache.get(n, r) if cache else None)) for n in ns for r in range(3)]
        results = _run_tasks(tasks, cfg.workers)
        recs = []
        for n in ns:
            rows = [res for res in results if res["n"] == n]
            for res in rows:
                recs.append(record("states", "count", res["count"] == ASM_COUNTS[n], n=n, r=res["r"], witness=res["count"]))
                if "cache_consistent" in res:
                    recs.append(record("states", "cache-consistent", res["cache_consistent"], n=n, r=res["r"]))
            counts = {res["count"] for res in rows}
            recs.append(record("states", "r-independent", len(counts) == 1, n=n, witness=sorted(counts)))
            diagnostics[f"per_state_s_free n={n}"] = all(res["per_state_s_free"] for res in rows)
        timings["states"] = sum(res["seconds"] for res in results)
        return recs
    if suite == "gamma-balance":
        tasks = [(_task_gamma, (n, r)) for n in ns for r in range(3)]
    elif suite == "funceq":
        tasks = [(_task_funceq, (n, seed, i, fixed, fault)) for n in ns for i in range(trials)]
        tasks += [(_funceq_negative_control, (n, seed, fixed)) for n in ns]
    elif suite == "parity":
        tasks = [(_task_parity, (n, seed, i, fixed, fault)) for n in ns for i in range(trials)]
    elif suite == "support":
        tasks = [(_task_support, (n, seed, i, fixed, fault)) for n in ns for i in range(trials)]
    elif suite == "proportionality":
        tasks = [(_task_proportionality, (n, seed, trials, fault)) for n in ns]
    elif suite == "schur":
        base = sample_point(1, seed, 0) if fixed is None or fixed.n != 1 else fixed
        offsets = {kind: detform.fit_schur_offset(kind, base.u) for kind in detform.KINDS}
        diagnostics["schur_offset_fitted_at_n1"] = offsets
        diagnostics["schur_exponent_rule"] = {
            kind: f"nominal({kind}, n) + {offsets[kind]}" for kind in detform.KINDS
        }
        same = len(set(offsets.values())) == 1
        recs = [record("schur", "offset-fit", same, n=1, witness=offsets)]
        offset = offsets["P"]
        for n in ns:
            if n == 1:
                continue
            pt, _ = _point(n, seed, 0, fixed)
            for kind in detform.KINDS:
                emp = detform.empirical_schur_exponent(kind, pt.u)
                pred = detform.schur_exponent(kind, n, offset)
                recs.append(record("schur", f"exponent-affine-{kind}", emp == pred, n=n, witness={"empirical": emp, "predicted": pred}))
        tasks = [(_task_schur, (n, seed, i, fixed, offset)) for n in ns for i in range(trials)]
        recs += _flatten(_run_tasks(tasks, cfg.workers))
        timings[suite] = time.perf_counter() - t0
        return recs
    elif suite == "recursions":
        tasks = [(_task_recursions, (n, seed, i, fixed, fault)) for n in ns for i in range(trials)]
    elif suite == "closed-form":
        tasks = []
        for n in ns:
            states = {r: cache.get(n, r) for r in range(3)} if cache else None
            tasks += [(_task_closed_form, (n, seed, i, fixed, fault, states)) for i in range(trials)]
        tasks += [(_closed_form_negative_control, (n, seed, fixed)) for n in ns if n >= 2]
    else:
        raise UsageError(f"unknown suite {suite!r}")
    recs = _flatten(_run_tasks(tasks, cfg.workers))
    timings[suite] = time.perf_counter() - t0
    return recs


def run_suite(cfg: SuiteConfig) -> CheckReport:
    suites = SUITES if cfg.suite == "all" else (cfg.suite,)
    cache = StateCache(cfg.cache) if cfg.cache else None
    diagnostics: dict = {}
    timings: dict = {}
    records = []
    for suite in suites:
        records += _suite_records(cfg, suite, cache, diagnostics, timings)
    if cache:
        cache.save()
    params = {
        "n_min": cfg.n_min,
        "n_max": cfg.n_max,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "n_ranges": {s: cfg.n_range(s) for s in suites},
        "point": None if cfg.point is None else cfg.point.to_json(),
        "inject_fault": cfg.inject_fault,
    }
    return CheckReport(cfg.suite, params, records, diagnostics, timings)


def worker_count() -> int:
    """Workers allowed by TRICOLOR_THREADS (default 1)."""
    raw = os.environ.get("TRICOLOR_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"TRICOLOR_THREADS must be an integer, got {raw!r}") from None
    return max(1, min(n, os.cpu_count() or 1))
