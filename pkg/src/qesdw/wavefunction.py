"""Eigenfunctions psi = exp(g(x)) R(x): evaluation, residuals, nodes, tails."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .algebra import CoeffVector, build_operator
from .errors import DomainError
from .models import SQRT2, Family, PotentialModel
from .recurrence import RecurrenceSpec, eigen_coefficients, refine_root
from .spectra import SpectrumResult, energy_map, full_spectrum

__all__ = [
    "EXP_CLAMP",
    "GaugeFactor",
    "Normalizability",
    "NormalizabilityReport",
    "PsiValue",
    "QesSolution",
    "ResidualReport",
    "count_nodes",
    "eval_psi",
    "gauge_consistency",
    "gauge_for",
    "node_positions",
    "normalizability_report",
    "residual_1d",
    "schrodinger_residual",
    "solve_levels",
]

EXP_CLAMP = 700.0
DEFAULT_SAMPLES = np.linspace(-3.0, 3.0, 50)


@dataclass(frozen=True)
class GaugeFactor:
    """exp(g3 x^3 + g2 x^2 + g1 x)."""

    g3: float
    g2: float
    g1: float

    @property
    def exponent(self) -> Polynomial:
        return Polynomial([0.0, self.g1, self.g2, self.g3])


def gauge_for(model: PotentialModel, j: int, axis: str = "x") -> GaugeFactor:
    """Gauge factor turning the Schrodinger operator into the QES operator.

    For the second 1D family the factor is
    exp(+B x^2 / (2 sqrt 2) + C x^3 / (3 sqrt 2)); that sign is the one
    compatible with T = -J-^2 - sqrt2 B J0 - sqrt2 C J+ and the constraint
    A = -sqrt2 C (j + 1).
    """
    p = model.params
    fam = model.family
    if fam is Family.ONED_I:
        b, c = p["B"], p["C"]
        sc = math.sqrt(c)
        return GaugeFactor(-sc / 6.0, b / (6.0 * sc), 3.0 * (j + 1) * c / (2.0 * b))
    if fam is Family.ONED_II:
        return GaugeFactor(p["C"] / (3.0 * SQRT2), p["B"] / (2.0 * SQRT2), 0.0)
    if fam is Family.TWOD_I:
        if axis == "x":
            return GaugeFactor(-p["A"] / 3.0, 0.0, -p["B"])
        return GaugeFactor(0.0, -p["C"] / 2.0, 0.0)
    if axis == "x":
        return GaugeFactor(-p["A1"] / 3.0, 0.0, -p["B1"])
    if axis == "y":
        return GaugeFactor(-p["A2"] / 3.0, 0.0, -p["B2"])
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


class Normalizability(str, enum.Enum):
    BOTH_DECAY = "both-tails-decay"
    ONE_DIVERGES = "one-tail-diverges"
    BOTH_DIVERGE = "both-tails-diverge"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class NormalizabilityReport:
    status: Normalizability
    minus_tail: str     # behaviour of the exponent as x -> -inf
    plus_tail: str      # ... and as x -> +inf
    leading: str        # dominant exponent term, e.g. "-0.1667*x^3"


def normalizability_report(gauge: GaugeFactor) -> NormalizabilityReport:
    """Sign analysis of the dominant exponent term at both ends of the line."""
    for power, coef in ((3, gauge.g3), (2, gauge.g2), (1, gauge.g1)):
        if coef != 0.0:
            break
    else:
        return NormalizabilityReport(Normalizability.UNDETERMINED, "bounded", "bounded", "0")
    plus = "diverges" if coef > 0 else "decays"
    minus_sign = coef * (-1) ** power
    minus = "diverges" if minus_sign > 0 else "decays"
    if plus == minus == "decays":
        status = Normalizability.BOTH_DECAY
    elif plus == minus == "diverges":
        status = Normalizability.BOTH_DIVERGE
    else:
        status = Normalizability.ONE_DIVERGES
    return NormalizabilityReport(status, minus, plus, f"{coef:.6g}*x^{power}")


@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    samples_used: int
    saturated: tuple[float, ...]


def residual_1d(
    gauge: GaugeFactor,
    R: CoeffVector,
    V: Polynomial,
    E: float,
    xs: Sequence[float],
    clamp: float = EXP_CLAMP,
) -> ResidualReport:
    """max |-psi'' + (V - E) psi| / (1 + |psi|) over xs for psi = exp(g) R.

    psi'' = exp(g) (R'' + 2 g' R' + (g'' + g'^2) R) is evaluated from the
    exact derivatives of the exponent and of R, in extended precision: with
    exp(g) ~ 1e6 near a node of R the double-precision cancellation alone
    would sit at the 1e-8 level.  Points with |g| > clamp are skipped and
    returned in ``saturated``.
    """
    ld = np.longdouble
    pv = np.polynomial.polynomial.polyval
    xs_ld = np.asarray(xs, dtype=ld)
    gc = np.array([0, gauge.g1, gauge.g2, gauge.g3], dtype=ld)
    ex = pv(xs_ld, gc)
    ok = np.abs(ex) <= clamp
    x = xs_ld[ok]
    rc = np.asarray(R.coeffs, dtype=ld)
    d = np.polynomial.polynomial.polyder
    r = pv(x, rc)
    r1 = pv(x, d(rc)) if rc.size > 1 else np.zeros_like(x)
    r2 = pv(x, d(rc, 2)) if rc.size > 2 else np.zeros_like(x)
    gp, gpp = pv(x, d(gc)), pv(x, d(gc, 2))
    v = pv(x, np.asarray(V.coef, dtype=ld))
    inner = -r2 - 2 * gp * r1 + (v - ld(E) - gpp - gp * gp) * r
    w = np.exp(ex[ok])
    res = np.abs(w * inner) / (1 + np.abs(w * r))
    worst = float(np.max(res)) if res.size else 0.0
    return ResidualReport(worst, int(ok.sum()), tuple(float(v) for v in xs_ld[~ok]))


@dataclass(frozen=True)
class PsiValue:
    psi: float | np.ndarray
    exponent: float | np.ndarray
    saturated: bool | np.ndarray


def _eval_gauged(gauge: GaugeFactor, R: CoeffVector, x, clamp: float = EXP_CLAMP) -> PsiValue:
    xa = np.asarray(x, dtype=float)
    ex = gauge.exponent(xa)
    sat = np.abs(ex) > clamp
    psi = np.exp(np.clip(ex, -clamp, clamp)) * R(xa)
    if xa.ndim == 0:
        return PsiValue(float(psi), float(ex), bool(sat))
    return PsiValue(psi, ex, sat)


@dataclass(frozen=True)
class QesSolution:
    """One algebraic level of a 1D family.

    ``eps``, ``energy`` and the coefficients of ``R`` are carried in
    extended precision (``np.longdouble``).
    """

    model: PotentialModel
    j: int
    index: int
    eps: float
    energy: float
    R: CoeffVector
    gauge: GaugeFactor
    node_count: int
    max_residual: float
    self_test_residual: float
    normalizable: Normalizability


def eval_psi(s: QesSolution, x) -> PsiValue:
    """psi(x) with the exponent clamped at +-700; ``saturated`` flags clamping.

    Example:
        >>> from qesdw.models import PotentialModel
        >>> sol = solve_levels(PotentialModel.create("oned1", B=1.0, C=1.0), 0)[0]
        >>> eval_psi(sol, 0.0).psi
        1.0
    """
    return _eval_gauged(s.gauge, s.R, x)


def schrodinger_residual(s: QesSolution, xs: Sequence[float] = DEFAULT_SAMPLES,
                         energy: float | None = None) -> ResidualReport:
    E = s.energy if energy is None else energy
    return residual_1d(s.gauge, s.R, s.model.potential(), E, xs)


def node_positions(R: CoeffVector, interval: tuple[float, float],
                   resolution: float = 1e-3, xtol: float = 1e-12) -> tuple[float, ...]:
    """Sign changes of R on a scan of step resolution*(hi-lo), bisected to xtol."""
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    if R.degree < 1:
        return ()
    n = int(round(1.0 / resolution)) + 1
    xs = np.linspace(lo, hi, n)
    sg = np.sign(R(xs).astype(float))
    keep = sg != 0.0
    xs, sg = xs[keep], sg[keep]
    out: list[float] = []
    for i in np.flatnonzero(sg[1:] != sg[:-1]):
        a, b, fa = xs[i], xs[i + 1], R(xs[i])
        while b - a > xtol:
            mid = 0.5 * (a + b)
            fm = R(mid)
            if fm == 0.0:
                a = b = mid
                break
            if np.sign(fm) == np.sign(fa):
                a, fa = mid, fm
            else:
                b = mid
        out.append(0.5 * (a + b))
    return tuple(out)


def count_nodes(R: CoeffVector, interval: tuple[float, float], resolution: float = 1e-3) -> int:
    return len(node_positions(R, interval, resolution))


def solve_levels(model: PotentialModel, j: int, xs: Sequence[float] = DEFAULT_SAMPLES,
                 node_interval: tuple[float, float] = (-10.0, 10.0),
                 tol: float | None = None) -> list[QesSolution]:
    """Every algebraic level at index j, with R, nodes, residual and tail diagnosis."""
    spec = full_spectrum(model, j) if tol is None else full_spectrum(model, j, tol)
    return solutions_from_spectrum(spec, xs, node_interval)


def solutions_from_spectrum(spec: SpectrumResult, xs: Sequence[float] = DEFAULT_SAMPLES,
                            node_interval: tuple[float, float] = (-10.0, 10.0)) -> list[QesSolution]:
    model, j = spec.model, spec.j
    rspec = RecurrenceSpec(model, j)
    T = rspec.operator
    gauge = gauge_for(model, j)
    norm = normalizability_report(gauge).status
    out = []
    for i, (eps0, st) in enumerate(zip(spec.eps_roots, spec.self_test_residuals)):
        eps = refine_root(rspec, eps0)
        E = energy_map(model, j, eps)
        R = eigen_coefficients(T, eps)
        res = residual_1d(gauge, R, model.potential(), E, xs)
        out.append(QesSolution(
            model=model, j=j, index=i, eps=eps, energy=E, R=R, gauge=gauge,
            node_count=count_nodes(R, node_interval), max_residual=res.max_residual,
            self_test_residual=st, normalizable=norm,
        ))
    return out


@dataclass(frozen=True)
class GaugeConsistency:
    drift_defect: float        # -2 g' against the first-order part of T
    potential_defect: float    # reconstructed V against V, coefficient-wise
    level_defects: tuple[float, ...]   # per level: R'' + 2g'R' + (E + g'' + g'^2) R against V R

    @property
    def max_defect(self) -> float:
        return max((self.drift_defect, self.potential_defect) + self.level_defects)


def _rel(a: Polynomial, b: Polynomial) -> float:
    n = max(a.coef.size, b.coef.size)
    x, y = np.pad(a.coef, (0, n - a.coef.size)), np.pad(b.coef, (0, n - b.coef.size))
    return float(np.max(np.abs(x - y)) / max(np.max(np.abs(y)), np.finfo(float).tiny))


def gauge_consistency(model: PotentialModel, j: int) -> GaugeConsistency:
    """Expand psi''/psi + E for psi = exp(g) R and compare with V(x).

    With T R = eps R the expansion reduces to the polynomial identity
    V = (E - eps) + g'' + g'^2 + m(x), where m is the zeroth-order part of T,
    provided -2 g' equals T's drift.  Both identities are checked
    coefficient-wise, and so is the level-by-level product form.
    """
    if model.family.dimension != 1:
        raise DomainError("gauge_consistency is for 1D families")
    spec = full_spectrum(model, j)
    cm = spec.model
    T = build_operator(cm, j)
    if T.cMM != -1.0:
        raise DomainError("gauge identity assumes a -J-^2 kinetic term")
    g = gauge_for(cm, j).exponent
    g1, g2 = g.deriv(), g.deriv(2)
    drift = _rel(-2.0 * g1, Polynomial(T.drift()))
    shift = energy_map(cm, j, 0.0)           # E - eps, independent of eps
    V = cm.potential()
    V_rec = shift + g2 + g1 * g1 + Polynomial(T.multiplier())
    pot = _rel(V_rec, V)
    levels = []
    rspec = RecurrenceSpec(cm, j)
    for eps0 in spec.eps_roots:
        eps = refine_root(rspec, eps0)
        E = energy_map(cm, j, eps)
        R = Polynomial(eigen_coefficients(T, eps).coeffs.astype(float))
        lhs = R.deriv(2) + 2.0 * g1 * R.deriv() + (E + g2 + g1 * g1) * R
        levels.append(_rel(lhs, V * R))
    return GaugeConsistency(drift, pot, tuple(levels))
