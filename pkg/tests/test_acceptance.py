"""Acceptance criteria, one test per criterion, each printing a pass/fail line."""

import subprocess
import sys
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from qesdw.algebra import commutator_report
from qesdw.discrepancies import discrepancy_topics
from qesdw.models import PotentialModel
from qesdw.oracle import GridSpec, harmonic_check, separation_ladder_check
from qesdw.recurrence import RecurrenceSpec, generate_polynomials, recurrence_self_test
from qesdw.separable2d import separate, solve_2d_model1, solve_2d_model2
from qesdw.spectra import real_roots
from qesdw.tabulated import table_check
from qesdw.wavefunction import gauge_consistency, schrodinger_residual, solve_levels

SEED = 20240607


def _report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _draws(n: int, seed: int = SEED) -> list[tuple[float, float]]:
    rng = np.random.default_rng(seed)
    return [tuple(float(v) for v in rng.uniform(0.5, 3.0, 2)) for _ in range(n)]


def test_criterion_1_algebra_identities():
    t0 = time.perf_counter()
    worst = max(commutator_report(j, 12).max_defect for j in range(9))
    dt = time.perf_counter() - t0
    _report(1, "sl2 commutators, j <= 8, degree <= 12", worst <= 1e-12 and dt < 1.0,
            f"max defect {worst:.3g} <= 1e-12, {dt:.2f} s < 1 s")


def test_criterion_2_tabulated_rows():
    t0 = time.perf_counter()
    logged = discrepancy_topics()
    failures, accepted, worst_ok = [], [], 0.0
    for B, C in _draws(5):
        models = [PotentialModel.create("oned1", B=B, C=C),
                  PotentialModel.create("oned2", B=B, C=C),
                  PotentialModel.create("twod1", A=C, B=B, C=1.0)]
        for m in models:
            for j in range(4):
                chk = table_check(m, j, 1e-10)
                if chk.ok:
                    worst_ok = max(worst_ok, chk.defect)
                    continue
                cm = m.constrained(j)
                spec = RecurrenceSpec(cm, j)
                roots = real_roots(generate_polynomials(spec).critical).real
                st = max((recurrence_self_test(spec, r) for r in roots), default=0.0)
                key = f"{m.family.value}-table-j{j}"
                if st <= 1e-10 and key in logged:
                    accepted.append(key)
                else:
                    failures.append((key, chk.defect, st))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 1.0
    _report(2, "critical polynomials proportional to tabulated rows", ok,
            f"max defect of agreeing rows {worst_ok:.3g} <= 1e-10; "
            f"logged rows with passing self-test: {sorted(set(accepted))}; "
            f"unexplained: {failures}; {dt:.2f} s < 1 s")


def _levels():
    for B, C in _draws(20):
        for fam in ("oned1", "oned2"):
            m = PotentialModel.create(fam, B=B, C=C)
            for j in range(7):
                yield m, j


def test_criterion_3_operator_eigen_identity():
    t0 = time.perf_counter()
    worst, n = 0.0, 0
    for m, j in _levels():
        cm = m.constrained(j)
        spec = RecurrenceSpec(cm, j)
        for r in real_roots(generate_polynomials(spec).critical).real:
            worst = max(worst, recurrence_self_test(spec, r))
            n += 1
    dt = time.perf_counter() - t0
    _report(3, "operator eigen-identity, j <= 6, 20 draws", worst <= 1e-10 and dt < 5.0,
            f"{n} roots, max residual {worst:.3g} <= 1e-10, {dt:.2f} s < 5 s")


def test_criterion_4_schrodinger_residual():
    t0 = time.perf_counter()
    xs = np.linspace(-3.0, 3.0, 50)
    worst, least_bumped, n = 0.0, np.inf, 0
    for m, j in _levels():
        for s in solve_levels(m, j, xs=xs):
            worst = max(worst, s.max_residual)
            bumped = schrodinger_residual(s, xs, energy=float(s.energy) + 0.1).max_residual
            least_bumped = min(least_bumped, bumped)
            n += 1
    dt = time.perf_counter() - t0
    ok = worst <= 1e-8 and least_bumped > 1e-3 and dt < 5.0
    _report(4, "Schrodinger residual on 50 samples in [-3, 3]", ok,
            f"{n} levels, max residual {worst:.3g} <= 1e-8, "
            f"min residual with E + 0.1 {least_bumped:.3g} > 1e-3, {dt:.2f} s < 5 s")


def test_criterion_5_gauge_consistency():
    worst = 0.0
    for B, C in [(1.0, 1.0), (2.0, 1.0)] + _draws(3):
        for fam in ("oned1", "oned2"):
            for j in range(4):
                worst = max(worst, gauge_consistency(PotentialModel.create(fam, B=B, C=C), j).max_defect)
    _report(5, "psi''/psi + E reproduces V coefficient-wise, j = 0..3", worst <= 1e-10,
            f"max defect {worst:.3g} <= 1e-10")


def test_criterion_6_oracle():
    t0 = time.perf_counter()
    grid = GridSpec(-12.0, 12.0, 4000)
    err = gap = 0.0
    for C in (1.0, 2.0):
        err = max(err, max(r.error for r in harmonic_check(C, 6, grid)))
        gap = max(gap, max(r.gap for r in separation_ladder_check(C, 5, grid)))
    dt = time.perf_counter() - t0
    _report(6, "grid eigenvalues of -d2/dy2 + C^2 y^2 and c1 = 2Ck", err <= 1e-6 and gap <= 1e-6 and dt < 10.0,
            f"max |E_n - (2n+1)C| {err:.3g}, max |c1 - (E_k - C)| {gap:.3g} <= 1e-6, {dt:.2f} s < 10 s")


def test_criterion_7_2d_assembly():
    s = solve_2d_model1(PotentialModel.create("twod1", A=1.0, B=-1.0, C=1.0), 1, k_max=0)
    E = sorted(L.E_total for L in s.levels)
    d1 = max(abs(E[0] - (s.E0 - 2)), abs(E[1] - (s.E0 + 2))) if len(E) == 2 else np.inf
    s2 = solve_2d_model1(PotentialModel.create("twod1", A=1.0, B=1.0, C=1.0), 1, k_max=0)
    s3 = solve_2d_model2(PotentialModel.create("twod2", A1=1.0, A2=1.0, B1=1.0, B2=1.0), 0, 0)
    r3 = max((max(L.x_residual, L.y_residual) for L in s3.levels), default=np.inf)
    ok = (d1 <= 1e-10 and not s2.levels and s2.complex_root_count == 2
          and len(s3.levels) == 1 and r3 <= 1e-8)
    _report(7, "separable 2D levels", ok,
            f"twod1 (1,-1): {len(E)} levels, defect {d1:.3g}; twod1 (1,1): {len(s2.levels)} levels, "
            f"{s2.complex_root_count // 2} complex pair; twod2: {len(s3.levels)} level, "
            f"axis residual {r3:.3g}; separation offset {separate(s.model).offset_defect():.3g}")


def _cli(*argv: str) -> bytes:
    p = subprocess.run([sys.executable, "-m", "qesdw", *argv], capture_output=True, check=False)
    assert p.returncode == 0, p.stderr.decode()
    return p.stdout


def test_criterion_8_determinism():
    runs = {
        "verify": ("verify",),
        "verify json": ("verify", "--format", "json"),
        "spectrum": ("spectrum", "--model", "oned1", "-B", "1.3", "-C", "0.7", "-j", "0", "1", "2", "3"),
        "spectrum csv": ("spectrum", "--model", "oned2", "-B", "2", "-C", "1", "-j", "2", "--format", "csv"),
    }
    same = {name: _cli(*argv) == _cli(*argv) for name, argv in runs.items()}
    _report(8, "byte-identical output of consecutive runs", all(same.values()),
            ", ".join(f"{k}: {'identical' if v else 'differs'}" for k, v in same.items()))
