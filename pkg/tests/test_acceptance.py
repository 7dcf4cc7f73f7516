"""The seven acceptance criteria, each at its stated tolerance and time budget.

Every test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary.  Run directly with ``python tests/test_acceptance.py``.
"""

import time

import numpy as np
import pytest

from ccrflow import ccr, elog, suites
from ccrflow.config import default_config
from ccrflow.isometric import ModuleRep

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []


def record(number, title, ok, runtime, budget, detail=""):
    line = f"criterion {number} [{title}]: {'PASS' if ok else 'FAIL'} ({runtime:.2f} s of {budget:g} s){detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return line


def run(suite, cfg=None):
    start = time.perf_counter()
    report = suites.run_suite(suite, cfg or default_config())
    return report, time.perf_counter() - start


def checks(report):
    return {c["name"]: c for c in report["checks"]}


def failures(report):
    return [c["name"] for c in report["checks"] if c["status"] != "pass"]


def test_criterion_1_weyl():
    report, dt = run("weyl")
    c = checks(report)
    ok = (
        not failures(report)
        and c["weyl.kernel_identity"]["residual"] <= 1e-12
        and c["weyl.truncated_oracle"]["tolerance"] == 1e-8
        and c["weyl.unitarity"]["residual"] < 1e-12
        and c["weyl.commutation"]["residual"] < 1e-12
        and dt < 1.0
    )
    record(1, "exponential kernel and Weyl", ok, dt, 1.0, f" failures={failures(report)}" if failures(report) else "")
    assert ok


def test_criterion_2_cone():
    report, dt = run("cone")
    c = checks(report)
    ok = (
        not failures(report)
        and c["cone.biduality"]["residual"] == 0
        and c["cone.ray_decomposition"]["residual"] < 1e-12
        and c["cone.decreasing_subsequence"]["residual"] == 0
        and dt < 1.0
    )
    record(2, "cone geometry", ok, dt, 1.0)
    assert ok


def partition_errors():
    eps = 1 / 64
    rep = ModuleRep.half_line(eps)
    ones = rep.space.from_values({i: 1.0 for i in range(64)})
    u = ccr.decomposable(rep, 1.0, ones)
    target = ones.inner(ones)
    return [abs(elog.elog_partition(rep, 1.0, u, u, n) - target) for n in (4, 16, 64)], abs(target)


def test_criterion_3_elog():
    start = time.perf_counter()
    report, _ = run("elog")
    errs, scale = partition_errors()
    dt = time.perf_counter() - start
    c = checks(report)
    # n goes 4 -> 16 -> 64: two mesh halvings per step
    per_halving = [(e2 / e1) ** 0.5 for e1, e2 in zip(errs, errs[1:])]
    ok = (
        not failures(report)
        and errs[0] > errs[1] > errs[2]
        and all(r <= 0.75 for r in per_halving)
        and errs[-1] <= 0.02 * scale
        and c["elog.gram_psd"]["residual"] >= -1e-10
        and c["elog.additivity_unit"]["residual"] < 1e-12
        and dt < 2.0
    )
    detail = f" errors={[f'{e:.3g}' for e in errs]}"
    record(3, "e-logarithm", ok, dt, 2.0, detail)
    assert ok


def test_criterion_4_injectivity():
    report, dt = run("reconstruct")
    c = checks(report)
    ok = (
        not failures(report)
        and c["reconstruct.half_line"]["residual"] < 1e-9
        and c["reconstruct.quarter_plane"]["residual"] < 1e-9
        and dt < 5.0
    )
    record(4, "injectivity", ok, dt, 5.0)
    assert ok


def test_criterion_5_cocycle():
    report, dt = run("cocycle")
    c = checks(report)
    ok = (
        not failures(report)
        and c["cocycle.identity"]["residual"] < 1e-10
        and c["cocycle.locality"]["residual"] < 1e-10
        and c["cocycle.positivity"]["residual"] >= -1e-8
        and c["cocycle.norm_formula"]["residual"] <= 1e-3
        and c["cocycle.gram_domination"]["residual"] <= 1e-8
        and c["cocycle.round_trip"]["residual"] <= 1e-9
        and dt < 5.0
    )
    record(5, "cocycles", ok, dt, 5.0)
    assert ok


def test_criterion_6_units():
    cfg = default_config()
    cfg["twisted"].update({"lambda": [1.0, 2.0], "mu": [1.0, 1.0], "expect_unit": False})
    report, dt = run("units", cfg)
    c = checks(report)
    ok = (
        not failures(report)
        and c["units.existence_grid"]["residual"] == 0
        and c["units.forward_residual"]["residual"] < 1e-10
        and c["units.scan"]["residual"] >= 0.01
        and dt < 5.0
    )
    record(6, "unitless twisted system", ok, dt, 5.0, f" scan min={c['units.scan']['residual']:.3g}")
    assert ok


def test_criterion_7_prime():
    report, dt = run("prime")
    ok = not failures(report) and dt < 10.0
    record(7, "primality", ok, dt, 10.0)
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
