"""Closed-form low-order critical polynomials in their commonly printed form.

These are kept as an independent route to the recurrence output for
j = 0..3.  Each row is a polynomial in the tabulated variable; for the
quartic-x two-dimensional family that variable is u = -eps with eps the
x-block eigenvalue, and :func:`tabulated_in_eps` applies the substitution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DomainError
from .models import Family, PotentialModel, _check_index
from .recurrence import RecurrenceSpec, generate_polynomials, proportionality_defect

__all__ = ["TableCheck", "TABLE_MAX_J", "table_check", "tabulated", "tabulated_in_eps"]

TABLE_MAX_J = 3
_S2 = math.sqrt(2.0)


def _oned1(j: int, B: float, C: float) -> list[float]:
    c52 = C**2.5
    if j == 0:
        return [0.0, 1.0]
    if j == 1:
        return [-B**3 - 54 * c52, 0.0, 9 * B * C]
    if j == 2:
        return [36 * B * C**2, -4 * (B**3 + 81 * c52), 0.0, 9 * B * C]
    return [B**6 + 216 * B**3 * c52 + 11664 * C**5, 216 * B**2 * C**3,
            -(10 * B**4 * C + 1080 * B * C**3.5), 0.0, 9 * B**2 * C**2]


def _oned2(j: int, B: float, C: float) -> list[float]:
    if j == 0:
        return [0.0, 1.0]
    if j == 1:
        return [-B**2, 0.0, 2.0]
    if j == 2:
        return [-4 * _S2 * B * C, -2 * _S2 * B**2 + 4 * C, 0.0, _S2]
    return [9 * B**2 * (B**2 - 4 * _S2 * C), 96 * B * C, -20 * (B**2 - 2 * _S2 * C), 0.0, 4.0]


def _twod1(j: int, A: float, B: float) -> list[float]:
    ab, a2 = A * B, A * A
    if j == 0:
        return [0.0, 1.0]
    if j == 1:
        return [4 * ab, 0.0, 1.0]
    if j == 2:
        return [-16 * a2, 16 * ab, 0.0, 1.0]
    return [144 * a2 * B * B, -96 * a2, 40 * ab, 0.0, 1.0]


def tabulated(model: PotentialModel, j: int) -> Polynomial:
    """Tabulated critical polynomial at index j, in its own variable."""
    j = _check_index(j)
    if j > TABLE_MAX_J:
        raise DomainError(f"tabulated rows exist for j <= {TABLE_MAX_J}")
    p = model.params
    if model.family is Family.ONED_I:
        return Polynomial(_oned1(j, p["B"], p["C"]))
    if model.family is Family.ONED_II:
        return Polynomial(_oned2(j, p["B"], p["C"]))
    if model.family is Family.TWOD_I:
        return Polynomial(_twod1(j, p["A"], p["B"]))
    raise DomainError("no tabulated rows for family twod2")


def tabulated_in_eps(model: PotentialModel, j: int) -> Polynomial:
    """The tabulated row rewritten in the recurrence's spectral variable."""
    t = tabulated(model, j)
    if model.family is Family.TWOD_I:
        return Polynomial(t.coef * (-1.0) ** np.arange(t.coef.size))
    return t


@dataclass(frozen=True)
class TableCheck:
    family: str
    j: int
    defect: float
    scale: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.defect <= self.tol


def table_check(model: PotentialModel, j: int, tol: float = 1e-10) -> TableCheck:
    """Coefficient-wise proportionality of the generated and tabulated rows."""
    m = model.constrained(j)
    gen = generate_polynomials(RecurrenceSpec(m, j)).critical
    tab = tabulated_in_eps(m, j)
    defect = proportionality_defect(gen, tab)
    a, b = gen.coef, np.pad(tab.coef, (0, max(0, gen.coef.size - tab.coef.size)))
    scale = float(a @ b / (b @ b))
    return TableCheck(model.family.value, j, defect, scale, tol)
