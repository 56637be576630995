"""Separable two-dimensional problems: psi(x, y) = R(x) Q(y) exp(-W(x) - F(y)).

Writing V = W'^2 - W'' + F'^2 - F'' + E0 + g(x) + h(y) and factoring out
psi0 = exp(-W - F) leaves two ordinary equations

    -R'' + 2 W' R' + g R = (E - E0 - c1) R,
    -Q'' + 2 F' Q' + h Q = c1 Q,

coupled only through the separation constant c1.  Drifts and offsets are
obtained by differentiating the exponents, never transcribed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .algebra import CoeffVector
from .errors import AccuracyWarning, DomainError
from .models import Family, PotentialModel, _check_index
from .recurrence import (
    RecurrenceSpec,
    eigen_coefficients,
    generate_polynomials,
    recurrence_self_test,
    refine_root,
)
from .spectra import DEFAULT_ROOT_TOL, ground_energy, real_roots
from .wavefunction import DEFAULT_SAMPLES, EXP_CLAMP, GaugeFactor, gauge_for, residual_1d

__all__ = [
    "AxisBlock",
    "SeparatedProblem",
    "TwoDLevel",
    "TwoDSpectrum",
    "eval_1F1",
    "eval_psi_2d",
    "hermite_q",
    "kummer_series",
    "quantize_separation_constant",
    "separate",
    "solve_2d_model1",
    "solve_2d_model2",
    "y_solution",
]

KUMMER_RTOL = 1e-16
KUMMER_MAX_TERMS = 500


# ---------------------------------------------------------------------------
# separation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeparatedProblem:
    model: PotentialModel        # carries alpha (and beta)
    W: Polynomial
    F: Polynomial
    E0: float
    x_drift: Polynomial          # 2 W'
    y_drift: Polynomial          # 2 F'
    g: Polynomial                # x-offset
    h: Polynomial                # y-offset
    x_shift: float               # share of E0 carried by the x-axis
    y_shift: float
    ground_potential: tuple[Polynomial, Polynomial] = field(repr=False)

    def offset_defect(self) -> float:
        """Coefficient defect of g + h against V - V_ground, per axis."""
        vx, vy = self.model.axis_potentials()
        gx, gy = self.ground_potential
        return max(_coef_defect(self.g, vx - gx), _coef_defect(self.h, vy - gy))


def _coef_defect(a: Polynomial, b: Polynomial) -> float:
    n = max(a.coef.size, b.coef.size)
    x = np.pad(a.coef, (0, n - a.coef.size))
    y = np.pad(b.coef, (0, n - b.coef.size))
    return float(np.max(np.abs(x - y)) / max(1.0, float(np.max(np.abs(y)))))


def _exponents(model: PotentialModel) -> tuple[Polynomial, Polynomial]:
    p = model.params
    if model.family is Family.TWOD_I:
        return Polynomial([0.0, p["B"], 0.0, p["A"] / 3.0]), Polynomial([0.0, 0.0, p["C"] / 2.0])
    if model.family is Family.TWOD_II:
        return (Polynomial([0.0, p["B1"], 0.0, p["A1"] / 3.0]),
                Polynomial([0.0, p["B2"], 0.0, p["A2"] / 3.0]))
    raise DomainError("separate() needs a 2D family")


def separate(model: PotentialModel) -> SeparatedProblem:
    """Split a 2D model into its x- and y-equations.

    Missing state parameters default to 1 (the ground-state potential).
    The ground potential W'^2 - W'' (+ E0 on the x side) and F'^2 - F'' is
    the f = 0 form of the general identity for V in terms of the exponents.

    Example:
        >>> sp = separate(PotentialModel.create("twod1", A=1, B=1, C=1))
        >>> sp.x_drift.coef.tolist(), sp.y_drift.coef.tolist()
        ([2.0, 0.0, 2.0], [0.0, 2.0])
    """
    if model.family.dimension != 2:
        raise DomainError("separate() needs a 2D family")
    fill = {k: 1.0 for k in ("alpha", "beta") if k in _state_names(model) and model.get(k) is None}
    model = model.replace(**fill)
    W, F = _exponents(model)
    E0 = ground_energy(model)
    gx = W.deriv() ** 2 - W.deriv(2)
    gy = F.deriv() ** 2 - F.deriv(2)
    vx, vy = model.axis_potentials()
    # constant parts split E0 between the axes; g and h carry no constant
    shift_x, shift_y = vx.coef[0] - gx.coef[0], vy.coef[0] - gy.coef[0]
    if abs(shift_x + shift_y - E0) > 1e-12 * max(1.0, abs(E0)):
        raise AssertionError("ground energy does not match the potential constants")
    ground = (gx + shift_x, gy + shift_y)
    g, h = (vx - ground[0]).trim(), (vy - ground[1]).trim()
    return SeparatedProblem(model, W, F, E0, 2.0 * W.deriv(), 2.0 * F.deriv(), g, h,
                            float(shift_x), float(shift_y), ground)


def _state_names(model: PotentialModel) -> tuple[str, ...]:
    return ("alpha",) if model.family is Family.TWOD_I else ("alpha", "beta")


# ---------------------------------------------------------------------------
# y-direction: oscillator ladder and 1F1
# ---------------------------------------------------------------------------

def quantize_separation_constant(c: float, k: int) -> float:
    """c1 = 2 c k, the value at which the y-series terminates at degree k."""
    if isinstance(k, bool) or not float(k).is_integer() or k < 0:
        raise ValueError(f"k must be a non-negative integer, got {k!r}")
    if not c > 0:
        raise DomainError("oscillator stiffness must be positive")
    return 2.0 * c * int(k)


def kummer_series(a: float, b: float, z: float) -> tuple[float, int]:
    """Direct Kummer sum of M(a, b, z) and the number of terms used."""
    neg_int_a = a <= 0 and float(a).is_integer()
    stop = int(-a) + 1 if neg_int_a else KUMMER_MAX_TERMS
    if b <= 0 and float(b).is_integer() and not (neg_int_a and -a < -b + 1):
        raise DomainError(f"b = {b} is a non-positive integer and the series does not terminate first")
    term, total = 1.0, 1.0
    n = 1
    while n < stop:
        term *= (a + n - 1) / (b + n - 1) * z / n
        total += term
        n += 1
        if not neg_int_a and abs(term) < KUMMER_RTOL * abs(total):
            return total, n
    if not neg_int_a:
        warnings.warn(f"1F1({a}, {b}, {z}) not converged after {KUMMER_MAX_TERMS} terms",
                      AccuracyWarning, stacklevel=3)
    return total, n


def eval_1F1(a: float, b: float, z: float) -> float:
    """Confluent hypergeometric M(a, b, z).

    Non-terminating series with z < 0 go through M(a, b, z) =
    e^z M(b - a, b, -z) so that no alternating cancellation occurs.

    Example:
        >>> eval_1F1(-1, 0.5, 2.0)
        -3.0
    """
    a, b, z = float(a), float(b), float(z)
    if z == 0.0:
        return 1.0
    if z < 0 and not (a <= 0 and a.is_integer()):
        return math.exp(z) * kummer_series(b - a, b, -z)[0]
    return kummer_series(a, b, z)[0]


def hermite_q(c: float, k: int) -> CoeffVector:
    """Monic degree-k solution of -Q'' + 2 c y Q' = 2 c k Q.

    Built from the terminating series: M(-k/2, 1/2, c y^2) for even k and
    y M(-(k-1)/2, 3/2, c y^2) for odd k.

    Example:
        >>> hermite_q(1.0, 2)
        CoeffVector([-0.5, 0.0, 1.0])
    """
    quantize_separation_constant(c, k)
    odd = k % 2
    a, b = -(k - odd) / 2.0, 0.5 + odd
    coeffs = np.zeros(k + 1)
    term = 1.0
    for n in range(int(-a) + 1):
        coeffs[2 * n + odd] = term
        term *= (a + n) / (b + n) * c / (n + 1)
    return CoeffVector(coeffs / coeffs[k] + 0.0)


def y_solution(c: float, c1: float, n1: float = 1.0, n2: float = 0.0) -> Callable[[float], float]:
    """General y-factor n1 M(-c1/(4c), 1/2, c y^2) + n2 y M(1/2 - c1/(4c), 3/2, c y^2)."""
    if not c > 0:
        raise DomainError("oscillator stiffness must be positive")
    a = -c1 / (4.0 * c)

    def q(y: float) -> float:
        z = c * y * y
        return n1 * eval_1F1(a, 0.5, z) + n2 * y * eval_1F1(a + 0.5, 1.5, z)

    return q


# ---------------------------------------------------------------------------
# level assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AxisBlock:
    """Algebraic block of one axis: critical polynomial and its real roots."""

    axis: str
    j: int
    critical: Polynomial = field(repr=False)
    roots: tuple[float, ...]
    multiplicity: tuple[int, ...]
    complex_root_count: int
    self_test_residuals: tuple[float, ...]
    refined: tuple = field(repr=False, default=())


def _axis_block(model: PotentialModel, j: int, axis: str, tol: float) -> AxisBlock:
    spec = RecurrenceSpec(model, j, axis)
    fam = generate_polynomials(spec)
    rs = real_roots(fam.critical, tol)
    refined = tuple(refine_root(spec, r) for r in rs.real)
    st = tuple(recurrence_self_test(spec, r, critical=fam.critical) for r in rs.real)
    return AxisBlock(axis, j, fam.critical, tuple(float(r) for r in refined),
                     rs.multiplicity, rs.complex_count, st, refined)


@dataclass(frozen=True)
class TwoDLevel:
    k: int                 # y label: oscillator index (twod1) or y-root index (twod2)
    r: int                 # x-root index
    c1: float
    eps_x: float           # x-block eigenvalue E - E0 - c1
    E_total: float
    R: CoeffVector
    Q: CoeffVector
    q_description: dict
    x_energy: float
    y_energy: float
    x_residual: float
    y_residual: float
    gauge_x: GaugeFactor
    gauge_y: GaugeFactor


@dataclass(frozen=True)
class TwoDSpectrum:
    model: PotentialModel
    E0: float
    levels: tuple[TwoDLevel, ...]
    x_block: AxisBlock
    y_block: AxisBlock | None
    k_values: tuple[int, ...]

    @property
    def complex_root_count(self) -> int:
        """Complex roots of the x critical polynomial (and of the y one, if any)."""
        n = self.x_block.complex_root_count
        return n + (self.y_block.complex_root_count if self.y_block else 0)


def _level(sp: SeparatedProblem, k: int, r: int, c1, eps_x, R: CoeffVector, Q: CoeffVector,
           qdesc: dict, gx: GaugeFactor, gy: GaugeFactor, xs: Sequence[float]) -> TwoDLevel:
    vx, vy = sp.model.axis_potentials()
    ex = eps_x + sp.x_shift
    ey = c1 + sp.y_shift
    E = sp.E0 + c1 + eps_x
    rx = residual_1d(gx, R, vx, ex, xs).max_residual
    ry = residual_1d(gy, Q, vy, ey, xs).max_residual
    return TwoDLevel(k, r, float(c1), float(eps_x), float(E), R, Q, qdesc,
                     float(ex), float(ey), rx, ry, gx, gy)


def solve_2d_model1(model: PotentialModel, j: int, k_max: int = 5,
                    xs: Sequence[float] = DEFAULT_SAMPLES,
                    tol: float = DEFAULT_ROOT_TOL) -> TwoDSpectrum:
    """Levels of the quartic-x, harmonic-y family with alpha = j + 1.

    The x-block does not depend on c1, so its roots are shared by every
    rung k = 0 .. k_max of the y-ladder; E = E0 + 2 C k + eps_x.
    """
    if model.family is not Family.TWOD_I:
        raise DomainError("solve_2d_model1 needs family twod1")
    j = _check_index(j)
    k_max = _check_index(k_max, "k_max")
    sp = separate(model.constrained(j))
    m = sp.model
    c = m["C"]
    block = _axis_block(m, j, "x", tol)
    T = RecurrenceSpec(m, j, "x").operator
    gx, gy = gauge_for(m, j, "x"), gauge_for(m, j, "y")
    Rs = [eigen_coefficients(T, e) for e in block.refined]
    levels = []
    for k in range(k_max + 1):
        c1 = quantize_separation_constant(c, k)
        Q = hermite_q(c, k)
        odd = k % 2
        qdesc = {"branch": "odd" if odd else "even", "a": -(k - odd) / 2.0,
                 "b": 0.5 + odd, "z": f"{c!r}*y^2", "n1": 0.0 if odd else 1.0,
                 "n2": 1.0 if odd else 0.0}
        for r, (e, R) in enumerate(zip(block.refined, Rs)):
            levels.append(_level(sp, k, r, c1, e, R, Q, qdesc, gx, gy, xs))
    levels.sort(key=lambda L: (L.E_total, L.k, L.r))
    return TwoDSpectrum(m, sp.E0, tuple(levels), block, None, tuple(range(k_max + 1)))


def solve_2d_model2(model: PotentialModel, j_x: int, j_y: int,
                    xs: Sequence[float] = DEFAULT_SAMPLES,
                    tol: float = DEFAULT_ROOT_TOL) -> TwoDSpectrum:
    """Levels of the doubly quartic family with alpha = j_x + 1, beta = j_y + 1.

    The y-block roots are the admissible c1; the x-block roots eps_x give
    E = E0 + c1 + eps_x for every pair.
    """
    if model.family is not Family.TWOD_II:
        raise DomainError("solve_2d_model2 needs family twod2")
    j_x, j_y = _check_index(j_x, "j_x"), _check_index(j_y, "j_y")
    sp = separate(model.constrained(j_x, j_y))
    m = sp.model
    yb = _axis_block(m, j_y, "y", tol)
    xb = _axis_block(m, j_x, "x", tol)
    Tx, Ty = RecurrenceSpec(m, j_x, "x").operator, RecurrenceSpec(m, j_y, "y").operator
    gx, gy = gauge_for(m, j_x, "x"), gauge_for(m, j_y, "y")
    Rs = [eigen_coefficients(Tx, e) for e in xb.refined]
    levels = []
    for k, c1 in enumerate(yb.refined):
        Q = eigen_coefficients(Ty, c1)
        qdesc = {"branch": "qes", "j_y": j_y}
        for r, (e, R) in enumerate(zip(xb.refined, Rs)):
            levels.append(_level(sp, k, r, c1, e, R, Q, qdesc, gx, gy, xs))
    levels.sort(key=lambda L: (L.E_total, L.k, L.r))
    return TwoDSpectrum(m, sp.E0, tuple(levels), xb, yb, tuple(range(len(yb.refined))))


def eval_psi_2d(level: TwoDLevel, xs: Sequence[float], ys: Sequence[float],
                clamp: float = EXP_CLAMP) -> tuple[np.ndarray, np.ndarray]:
    """psi on the tensor grid xs x ys (rows follow x) and its saturation mask."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    ex = level.gauge_x.exponent(x)[:, None] + level.gauge_y.exponent(y)[None, :]
    sat = np.abs(ex) > clamp
    fx = level.R(x).astype(float)[:, None]
    fy = level.Q(y).astype(float)[None, :]
    return np.exp(np.clip(ex, -clamp, clamp)) * fx * fy, sat
