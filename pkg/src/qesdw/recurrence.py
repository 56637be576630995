"""Spectral polynomials P_m(eps) and the critical polynomial.

For an operator T = -J-^2 + cM J- + c0 J0 + cP J+ + cId the polynomials
obey the four-term recurrence

    cMM m(m-1) P_{m-2} + cM m P_{m-1} + (c0 (m - j/2) + cId - eps) P_m
        + cP (m - j) P_{m+1} = 0,          P_0 = 1,

whose weights are the matrix elements <n|T|m>.  The P_{m+1} weight vanishes
at m = j, and the left-hand side at that index is a degree-(j+1) polynomial
in eps (the *critical* polynomial) whose roots are the eigenvalues of T on
the invariant subspace.

Because the weights are read off column-wise, (P_0(eps), ..., P_j(eps)) is a
*left* eigenvector of the matrix of T.  The coefficients of the eigen-
polynomial R(x) itself are the right eigenvector; :func:`eigen_coefficients`
generates them with the transposed recurrence, run downward from x^j.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .algebra import AlgebraicOperator, CoeffVector, apply_operator, build_operator
from .errors import DegenerateParameterError
from .models import PotentialModel, _check_index

__all__ = [
    "PolynomialFamily",
    "critical_value",
    "RecurrenceSpec",
    "eigen_coefficients",
    "generate_polynomials",
    "proportionality_check",
    "recurrence_self_test",
    "refine_root",
]

EPS = Polynomial([0.0, 1.0])


@dataclass(frozen=True)
class RecurrenceSpec:
    """Recurrence for one model, representation index and (2D) axis."""

    model: PotentialModel
    j: int
    axis: str = "x"

    def __post_init__(self) -> None:
        object.__setattr__(self, "j", _check_index(self.j))

    @cached_property
    def operator(self) -> AlgebraicOperator:
        return build_operator(self.model, self.j, self.axis)

    def weights(self, m: int) -> tuple[float, float, float, float]:
        """Weights of (P_{m-2}, P_{m-1}, P_m, P_{m+1}) at index m.

        The P_m weight excludes the ``-eps`` term.
        """
        T = self.operator
        return (
            T.cMM * m * (m - 1),
            T.cM * m,
            T.c0 * (m - self.j / 2.0) + T.cId,
            T.cP * (m - self.j),
        )


@dataclass(frozen=True)
class PolynomialFamily:
    polys: tuple[Polynomial, ...]   # P_0 .. P_j
    critical: Polynomial            # degree j + 1

    @property
    def j(self) -> int:
        return len(self.polys) - 1


def _row(spec: RecurrenceSpec, P: Sequence[Polynomial], m: int) -> Polynomial:
    w2, w1, w0, _ = spec.weights(m)
    out = (w0 - EPS) * P[m]
    if m >= 1:
        out = out + w1 * P[m - 1]
    if m >= 2:
        out = out + w2 * P[m - 2]
    return out


def generate_polynomials(spec: RecurrenceSpec) -> PolynomialFamily:
    """Run the recurrence from P_0 = 1 up to the critical index m = j."""
    P: list[Polynomial] = [Polynomial([1.0])]
    for m in range(spec.j):
        w_up = spec.weights(m)[3]
        if w_up == 0.0:
            raise DegenerateParameterError(
                f"P_{m + 1} weight vanishes at m={m} < j={spec.j}; cannot advance"
            )
        P.append(-_row(spec, P, m) / w_up)
    critical = _row(spec, P, spec.j)
    for m, p in enumerate(P + [critical]):
        if p.degree() != m or p.coef[-1] == 0.0:
            raise DegenerateParameterError(f"P_{m} has degree {p.degree()}, expected {m}")
    return PolynomialFamily(tuple(P), critical)


def _coeffs(p: Polynomial | Sequence[float]) -> np.ndarray:
    c = p.coef if isinstance(p, Polynomial) else np.asarray(p, dtype=float)
    return np.asarray(c, dtype=float)


def proportionality_check(
    p: Polynomial | Sequence[float], q: Polynomial | Sequence[float], tol: float = 1e-10
) -> tuple[bool, float]:
    """Whether p = lam * q for one scalar lam, within relative tolerance tol.

    The defect is max|p - lam q| / max|p| with lam the least-squares scale.

    Example:
        >>> proportionality_check([-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0])
        (True, 2.0)
    """
    a, b = _coeffs(p), _coeffs(q)
    n = max(a.size, b.size)
    a = np.pad(a, (0, n - a.size))
    b = np.pad(b, (0, n - b.size))
    if not np.any(a) or not np.any(b):
        raise ValueError("proportionality_check needs two nonzero polynomials")
    lam = float(a @ b / (b @ b))
    defect = float(np.max(np.abs(a - lam * b)) / np.max(np.abs(a)))
    return defect <= tol, lam


def proportionality_defect(p: Polynomial | Sequence[float], q: Polynomial | Sequence[float]) -> float:
    a, b = _coeffs(p), _coeffs(q)
    n = max(a.size, b.size)
    a = np.pad(a, (0, n - a.size))
    b = np.pad(b, (0, n - b.size))
    lam = a @ b / (b @ b)
    return float(np.max(np.abs(a - lam * b)) / np.max(np.abs(a)))


def critical_value(spec: RecurrenceSpec, eps) -> tuple:
    """Critical polynomial and its eps-derivative at one point.

    The recurrence is run on numbers rather than polynomials, carrying the
    derivative alongside; the arithmetic type follows ``eps`` so an
    ``np.longdouble`` argument gives an extended-precision evaluation.
    """
    one = eps * 0 + 1
    P, dP = [one], [one * 0]

    def row(m: int):
        w2, w1, w0, _ = spec.weights(m)
        v = (w0 - eps) * P[m]
        d = (w0 - eps) * dP[m] - P[m]
        if m >= 1:
            v, d = v + w1 * P[m - 1], d + w1 * dP[m - 1]
        if m >= 2:
            v, d = v + w2 * P[m - 2], d + w2 * dP[m - 2]
        return v, d

    for m in range(spec.j):
        w_up = spec.weights(m)[3]
        if w_up == 0.0:
            raise DegenerateParameterError(f"P_{m + 1} weight vanishes at m={m}")
        v, d = row(m)
        P.append(-v / w_up)
        dP.append(-d / w_up)
    return row(spec.j)


def refine_root(spec: RecurrenceSpec, eps: float, maxiter: int = 8) -> np.longdouble:
    """Newton-refine a critical root in extended precision."""
    x = np.longdouble(eps)
    tiny = 4 * np.finfo(np.longdouble).eps
    for _ in range(maxiter):
        f, df = critical_value(spec, x)
        if df == 0:
            break
        step = f / df
        x_new = x - step
        f_new, _ = critical_value(spec, x_new)
        if abs(f_new) > abs(f):
            break
        x = x_new
        if abs(step) <= tiny * max(abs(x), 1):
            break
    return x


def eigen_coefficients(T: AlgebraicOperator, eps: float) -> CoeffVector:
    """Coefficients of R(x) with T R = eps R, for eps an eigenvalue of T.

    Rows n = j .. 1 of (T - eps) u = 0 are solved downward for u_{n-1},
    starting from u_j = 1; row 0 is the consistency condition, satisfied
    exactly when eps is a root of the critical polynomial.  The result is
    normalized to R(0) = 1 unless the constant term is negligible, in which
    case the largest coefficient is set to 1.
    """
    j = T.j
    if T.cP == 0.0 and j > 0:
        raise DegenerateParameterError("J+ coefficient is zero; R cannot be generated")
    dtype = np.longdouble if isinstance(eps, np.longdouble) else float
    u = np.zeros(j + 3, dtype=dtype)
    u[j] = 1
    for n in range(j, 0, -1):
        s = (T.c0 * (n - j / 2.0) + T.cId - eps) * u[n]
        s += T.cM * (n + 1) * u[n + 1]
        s += T.cMM * (n + 2) * (n + 1) * u[n + 2]
        u[n - 1] = -s / (T.cP * (n - 1 - j))
    u = u[: j + 1]
    big = np.max(np.abs(u))
    if abs(u[0]) > 1e-8 * big:
        u = u / u[0]
    else:
        k = int(np.argmax(np.abs(u)))
        u = u / u[k]
    return CoeffVector(u)


def _is_root(p: Polynomial, x: float, tol: float) -> bool:
    # measured at |x| >= 1 so that a root near zero is judged on the full scale
    scale = float(np.polynomial.polynomial.polyval(max(abs(x), 1.0), np.abs(p.coef)))
    return abs(p(x)) <= tol * max(scale, np.finfo(float).tiny)


def recurrence_self_test(spec: RecurrenceSpec, eps_root: float, root_tol: float = 1e-8,
                         critical: Polynomial | None = None) -> float:
    """Relative residual ||T R - eps R|| / ||R|| of the generated eigenpolynomial.

    Raises ValueError if ``eps_root`` is not a root of the critical polynomial
    within ``root_tol`` (relative to the absolute-coefficient scale at
    max(|eps|, 1)).  Pass ``critical`` to skip regenerating the family.
    """
    if critical is None:
        critical = generate_polynomials(spec).critical
    if not _is_root(critical, eps_root, root_tol):
        raise ValueError(f"{eps_root!r} is not a root of the critical polynomial")
    T = spec.operator
    eps = refine_root(spec, eps_root)
    R = eigen_coefficients(T, eps)
    resid = apply_operator(T, R) - R.scale(eps)
    return float(resid.max_abs() / R.max_abs())
