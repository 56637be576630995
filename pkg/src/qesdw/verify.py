"""Aggregate invariant suite: every independent route, at fixed parameters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np

from .algebra import commutator_report
from .discrepancies import discrepancy_topics
from .models import PotentialModel
from .oracle import GridSpec, harmonic_check, separation_ladder_check
from .separable2d import separate, solve_2d_model1, solve_2d_model2
from .spectra import full_spectrum
from .tabulated import TABLE_MAX_J, table_check
from .wavefunction import gauge_consistency, schrodinger_residual, solve_levels

__all__ = ["CHECK_GROUPS", "CheckResult", "VerifyConfig", "run_checks"]

CHECK_GROUPS = ("algebra", "polynomials", "selftest", "residual", "gauge", "separable2d", "oracle")


@dataclass(frozen=True)
class CheckResult:
    group: str
    name: str
    passed: bool
    value: float
    tol: float
    note: str = ""


@dataclass(frozen=True)
class VerifyConfig:
    residual_tol: float = 1e-8
    selftest_tol: float = 1e-10
    algebra_tol: float = 1e-12
    table_tol: float = 1e-10
    gauge_tol: float = 1e-10
    oracle_tol: float = 1e-6
    max_j: int = 6
    draws: int = 5
    seed: int = 0
    grid: GridSpec = GridSpec()


def one_d_models(cfg: VerifyConfig) -> list[PotentialModel]:
    """Reference points plus seeded random draws with B, C in [0.5, 3]."""
    models = [PotentialModel.create("oned1", B=1.0, C=1.0),
              PotentialModel.create("oned2", B=2.0, C=1.0)]
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.draws):
        b, c = rng.uniform(0.5, 3.0, 2)
        models.append(PotentialModel.create("oned1", B=float(b), C=float(c)))
        models.append(PotentialModel.create("oned2", B=float(b), C=float(c)))
    return models


def _label(m: PotentialModel) -> str:
    return m.family.value + "(" + ",".join(f"{k}={v:.6g}" for k, v in m.items) + ")"


def _algebra(cfg: VerifyConfig) -> Iterator[CheckResult]:
    worst = max(commutator_report(j, 12).max_defect for j in range(9))
    yield CheckResult("algebra", "commutators j<=8 deg<=12", worst <= cfg.algebra_tol, worst, cfg.algebra_tol)


def _polynomials(cfg: VerifyConfig) -> Iterator[CheckResult]:
    logged = discrepancy_topics()
    models = one_d_models(cfg) + [PotentialModel.create("twod1", A=1.0, B=-1.0, C=1.0),
                                  PotentialModel.create("twod1", A=0.7, B=1.3, C=1.0)]
    worst: dict[tuple[str, int], float] = {}
    for m in models:
        for j in range(TABLE_MAX_J + 1):
            key = (m.family.value, j)
            worst[key] = max(worst.get(key, 0.0), table_check(m, j, cfg.table_tol).defect)
    for (fam, j), d in sorted(worst.items()):
        ok = d <= cfg.table_tol
        note = ""
        if not ok and f"{fam}-table-j{j}" in logged:
            st = max((max(full_spectrum(m, j).self_test_residuals, default=0.0)
                      for m in models if m.family.value == fam), default=0.0)
            ok = st <= cfg.selftest_tol
            note = f"tabulated row differs; logged discrepancy, self-test {st:.3g}"
        yield CheckResult("polynomials", f"{fam} j={j} tabulated row", ok, d, cfg.table_tol, note)


def _selftest(cfg: VerifyConfig) -> Iterator[CheckResult]:
    worst: dict[str, float] = {}
    for m in one_d_models(cfg):
        for j in range(cfg.max_j + 1):
            r = max(full_spectrum(m, j).self_test_residuals, default=0.0)
            worst[m.family.value] = max(worst.get(m.family.value, 0.0), r)
    for fam, w in worst.items():
        yield CheckResult("selftest", f"{fam} j<={cfg.max_j} operator eigen-identity",
                          w <= cfg.selftest_tol, w, cfg.selftest_tol)


def _residual(cfg: VerifyConfig) -> Iterator[CheckResult]:
    worst: dict[str, float] = {}
    perturbed_ok = True
    for m in one_d_models(cfg):
        for j in range(cfg.max_j + 1):
            for s in solve_levels(m, j):
                worst[m.family.value] = max(worst.get(m.family.value, 0.0), s.max_residual)
                bumped = schrodinger_residual(s, energy=s.energy + 0.1).max_residual
                perturbed_ok &= bumped > 1e-3
    for fam, w in worst.items():
        yield CheckResult("residual", f"{fam} j<={cfg.max_j} Schrodinger residual",
                          w <= cfg.residual_tol, w, cfg.residual_tol)
    yield CheckResult("residual", "E + 0.1 breaks every level", perturbed_ok,
                      float(perturbed_ok), 1.0)


def _gauge(cfg: VerifyConfig) -> Iterator[CheckResult]:
    worst: dict[str, float] = {}
    for m in one_d_models(cfg):
        for j in range(4):
            d = gauge_consistency(m, j).max_defect
            worst[m.family.value] = max(worst.get(m.family.value, 0.0), d)
    for fam, w in worst.items():
        yield CheckResult("gauge", f"{fam} j<=3 psi''/psi + E = V", w <= cfg.gauge_tol, w, cfg.gauge_tol)


def _separable2d(cfg: VerifyConfig) -> Iterator[CheckResult]:
    sep = max(
        separate(PotentialModel.create("twod1", A=1.0, B=-1.0, C=1.0, alpha=a)).offset_defect()
        for a in (1.0, 2.0, 4.0)
    )
    sep = max(sep, separate(PotentialModel.create(
        "twod2", A1=1.0, A2=-0.5, B1=0.3, B2=1.0, alpha=2.0, beta=3.0)).offset_defect())
    yield CheckResult("separable2d", "g + h = V - V_ground", sep <= 1e-12, sep, 1e-12)

    s = solve_2d_model1(PotentialModel.create("twod1", A=1.0, B=-1.0, C=1.0), 1, k_max=0)
    got = sorted(L.E_total for L in s.levels)
    want = [s.E0 - 2.0, s.E0 + 2.0]
    d = max(abs(a - b) for a, b in zip(got, want)) if len(got) == 2 else float("inf")
    yield CheckResult("separable2d", "twod1 A=1 B=-1 j=1 k=0: E = E0 -+ 2", d <= 1e-10, d, 1e-10)

    s = solve_2d_model1(PotentialModel.create("twod1", A=1.0, B=1.0, C=1.0), 1, k_max=0)
    ok = not s.levels and s.x_block.complex_root_count == 2
    yield CheckResult("separable2d", "twod1 A=1 B=1 j=1 k=0: one complex pair", ok,
                      float(s.x_block.complex_root_count), 2.0)

    s = solve_2d_model2(PotentialModel.create("twod2", A1=1.0, A2=1.0, B1=1.0, B2=1.0), 0, 0)
    r = max((max(L.x_residual, L.y_residual) for L in s.levels), default=float("inf"))
    ok = len(s.levels) == 1 and r <= cfg.residual_tol
    yield CheckResult("separable2d", "twod2 jx=jy=0: one level, axis residuals", ok, r, cfg.residual_tol)

    r = 0.0
    for m, j in ((PotentialModel.create("twod1", A=0.7, B=-1.3, C=1.6), 3),):
        for L in solve_2d_model1(m, j, k_max=5).levels:
            r = max(r, L.x_residual, L.y_residual)
    for jx in range(3):
        for jy in range(3):
            m = PotentialModel.create("twod2", A1=1.0, A2=0.8, B1=-1.2, B2=-0.9)
            for L in solve_2d_model2(m, jx, jy).levels:
                r = max(r, L.x_residual, L.y_residual)
    yield CheckResult("separable2d", "2D axis residuals", r <= cfg.residual_tol, r, cfg.residual_tol)


def _oracle(cfg: VerifyConfig) -> Iterator[CheckResult]:
    for C in (1.0, 2.0):
        rows = harmonic_check(C, 6, cfg.grid)
        e = max(r.error for r in rows)
        yield CheckResult("oracle", f"harmonic C={C:g} n<=5 vs (2n+1)C", e <= cfg.oracle_tol, e, cfg.oracle_tol)
        lad = separation_ladder_check(C, 5, cfg.grid)
        g = max(r.gap for r in lad)
        yield CheckResult("oracle", f"separation constants 2Ck, C={C:g}", g <= cfg.oracle_tol, g, cfg.oracle_tol)


_GROUPS: dict[str, Callable[[VerifyConfig], Iterable[CheckResult]]] = {
    "algebra": _algebra,
    "polynomials": _polynomials,
    "selftest": _selftest,
    "residual": _residual,
    "gauge": _gauge,
    "separable2d": _separable2d,
    "oracle": _oracle,
}


def run_checks(cfg: VerifyConfig = VerifyConfig(), skip: Iterable[str] = ()) -> list[CheckResult]:
    skip = set(skip)
    unknown = skip - set(CHECK_GROUPS)
    if unknown:
        raise ValueError(f"unknown check group(s): {', '.join(sorted(unknown))}")
    out: list[CheckResult] = []
    for name in CHECK_GROUPS:
        if name not in skip:
            out.extend(_GROUPS[name](cfg))
    return out
