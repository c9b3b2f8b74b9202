"""Acceptance criteria. Each test prints one PASS/FAIL line with its runtime."""

import json
import time

import numpy as np
import pytest

from pf_lattice.cli import main
from pf_lattice.fixtures import CORNER_NILPOTENT, SWAP_PLUS_IDENTITY, WEIGHTED_BLOCKS
from pf_lattice.perron import commuting_eigenvalue, peripheral_cycle_structure, perron_pair
from pf_lattice.verify import SuiteConfig, run_theorem_suite

from conftest import DATA

N_RANGE = (3, 4, 5, 6, 7, 8)


@pytest.fixture
def report(capsys, request):
    """Call with (ok, detail, elapsed, budget); prints the line and asserts.
    A budget of None means the criterion has no runtime bound."""
    def emit(ok, detail, elapsed, budget):
        ok = bool(ok) and (budget is None or elapsed < budget)
        limit = "no budget" if budget is None else f"budget {budget:g}s"
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {request.node.name}: {detail} ({elapsed:.2f}s, {limit})")
        assert ok, detail
    return emit


def _cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out)


def _suite(prop, trials, n_range=N_RANGE, seed=0):
    start = time.perf_counter()
    rep = run_theorem_suite(SuiteConfig(n_range=n_range, trials=trials, seed=seed, properties=(prop,)))
    res = rep.properties[0]
    detail = (f"{res.passed} pass, {res.failed} fail, {res.skipped} skipped, "
              f"worst margin {res.worst_margin}")
    return res, detail, time.perf_counter() - start


def test_criterion_1_swap_identity_fixture(capsys, report):
    start = time.perf_counter()
    k, t = DATA / "swap_identity.json", DATA / "ones4.json"
    code, rep = _cli(capsys, "analyze", k)
    st = rep["structure"]
    p_err = float(np.abs(np.array(st["projection"]) - np.eye(4)).max())
    ok = code == 0 and p_err <= 1e-9 and st["cycles"] == [[1, 2], [3], [4]] and st["period"] == 2
    ok &= _cli(capsys, "irreducible", "--plain", t)[0] == 0
    ok &= _cli(capsys, "irreducible", "--super-right", k)[0] == 0
    ok &= _cli(capsys, "irreducible", "--super-left", k)[0] == 0
    code, gaps = _cli(capsys, "commutant", "--gap", k)
    ok &= code == 0 and gaps["gap_right"] <= 1e-7 and gaps["gap_left"] <= 1e-7
    detail = f"|P - I| = {p_err:.1e}, cycles {st['cycles']}, gaps {gaps['gap_right']:.1e}/{gaps['gap_left']:.1e}"
    report(ok, detail, time.perf_counter() - start, 1)


def test_criterion_2_nilpotent_partner_eigenvalue(report):
    start = time.perf_counter()
    st = peripheral_cycle_structure(SWAP_PLUS_IDENTITY)
    ce = commuting_eigenvalue(CORNER_NILPOTENT, st, SWAP_PLUS_IDENTITY)
    s = CORNER_NILPOTENT
    resid = max(np.abs(s @ ce.x - ce.value * ce.x).max(), np.abs(s.T @ ce.xstar - ce.value * ce.xstar).max())
    ok = (ce.value <= 1e-9 and ce.x.min() >= 0 and ce.xstar.min() >= 0
          and ce.x.any() and ce.xstar.any() and resid <= 1e-9)
    report(ok, f"lambda = {ce.value:.1e}, residual {resid:.1e}", time.perf_counter() - start, 1)


def test_criterion_3_weighted_blocks_perron_pair(report):
    start = time.perf_counter()
    r, x0, _ = perron_pair(WEIGHTED_BLOCKS)
    want = np.array([1.0, 1.0, 2.0, 2.0]) / 6.0
    rel = float(np.abs(x0 / x0.sum() - want).max() / want.max())
    ok = abs(r - 6.0) <= 1e-9 and rel <= 1e-7
    report(ok, f"r = {r:.15g}, x0 relative error {rel:.1e}", time.perf_counter() - start, 1)


def test_criterion_4_commutator_nilpotency_suite(report):
    res, detail, elapsed = _suite("quasi", 200)
    report(res.failed == 0 and res.passed == 200, detail, elapsed, 60)


def test_criterion_5_irreducible_partner_suite(report):
    res, detail, elapsed = _suite("pcu1", 200)
    report(res.failed == 0 and res.passed == 200, detail, elapsed, 60)


def test_criterion_6_irreducibility_oracle(report):
    res, detail, elapsed = _suite("oracle", 500, n_range=(2, 3, 4, 5, 6))
    report(res.failed == 0 and res.passed == 500, detail, elapsed, 30)


def test_criterion_7_peripheral_structure_suite(report):
    res, detail, elapsed = _suite("hyper", 100)
    report(res.failed == 0 and res.passed == 100, detail, elapsed, 60)


def test_criterion_8_strict_comparison_suite(report):
    res, detail, elapsed = _suite("compa", 200)
    ok = res.failed == 0 and res.passed == 200 and res.worst_margin > 0
    report(ok, detail, elapsed, 30)


def test_criterion_9_suite_determinism(capsys, report):
    start = time.perf_counter()
    argv = ["suite", "--n", "4", "--trials", "100", "--seed", "42"]
    runs = []
    for _ in range(2):
        code = main(argv)
        out = capsys.readouterr().out
        kept = [line for line in out.splitlines(keepends=True) if '"wall_time"' not in line]
        assert len(kept) == len(out.splitlines()) - 1
        runs.append((code, "".join(kept)))
    ok = runs[0] == runs[1] and runs[0][0] == 0
    detail = f"exit {runs[0][0]}, reports {'identical' if runs[0][1] == runs[1][1] else 'differ'}"
    report(ok, detail, time.perf_counter() - start, None)
