"""Critical polynomials to physical spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DomainError
from .models import SQRT2, Family, PotentialModel, _check_index
from .recurrence import RecurrenceSpec, generate_polynomials, recurrence_self_test

__all__ = [
    "RootSet",
    "SpectrumResult",
    "StationaryPoint",
    "energy_map",
    "full_spectrum",
    "ground_energy",
    "is_symmetric",
    "qes_constraint",
    "real_roots",
    "stationary_points",
]

DEFAULT_ROOT_TOL = 1e-9
CLUSTER_TOL = 1e-6


@dataclass(frozen=True)
class RootSet:
    real: tuple[float, ...]
    multiplicity: tuple[int, ...]
    complex_count: int


def real_roots(p: Polynomial, tol: float = DEFAULT_ROOT_TOL) -> RootSet:
    """Real roots of ``p`` from the balanced companion matrix, Newton-polished.

    Eigenvalues within ``CLUSTER_TOL * (1 + |z|)`` of a cluster centre are
    grouped; a group counts as one real root of that multiplicity when the
    imaginary part of its centre is below ``tol * (1 + |Re|)``.
    """
    c = np.trim_zeros(np.asarray(p.coef, dtype=float), "b")
    if c.size < 2:
        raise ValueError("real_roots needs a polynomial of degree >= 1")
    if not np.all(np.isfinite(c)):
        raise ValueError("polynomial has non-finite coefficients")
    # LAPACK geev balances the companion matrix before the QR sweep.
    ev = np.linalg.eigvals(np.polynomial.polynomial.polycompanion(c))
    dp = np.polynomial.polynomial.polyder(c)
    # A k-fold root splits into a ring of radius ~eps**(1/k); regroup first.
    groups: list[list[complex]] = []
    for z in sorted(ev, key=lambda z: (z.real, z.imag)):
        for g in groups:
            centre = sum(g) / len(g)
            if abs(z - centre) < CLUSTER_TOL * (1.0 + abs(centre)):
                g.append(z)
                break
        else:
            groups.append([z])
    merged: list[float] = []
    mult: list[int] = []
    n_complex = 0
    for g in groups:
        z = sum(g) / len(g)
        if abs(z.imag) >= tol * (1.0 + abs(z.real)):
            n_complex += len(g)
            continue
        r = float(z.real)
        if len(g) == 1:
            d = np.polynomial.polynomial.polyval(r, dp)
            if d != 0.0:
                fr = np.polynomial.polynomial.polyval(r, c)
                r_new = r - fr / d
                if abs(np.polynomial.polynomial.polyval(r_new, c)) <= abs(fr):
                    r = float(r_new)
        merged.append(r)
        mult.append(len(g))
    order = np.argsort(merged, kind="stable")
    merged = [merged[i] for i in order]
    mult = [mult[i] for i in order]
    return RootSet(tuple(merged), tuple(mult), n_complex)


def qes_constraint(model: PotentialModel, j: int, j_y: int | None = None) -> dict[str, float]:
    """Parameter values the QES construction forces at index j.

    Example:
        >>> qes_constraint(PotentialModel.create("oned2", B=2.0, C=1.0), 0)
        {'A': -1.4142135623730951}
    """
    return model.forced_values(j, j_y)


def ground_energy(model: PotentialModel) -> float:
    """Energy of the ground state exp(-W - F) for the 2D families."""
    p = model.params
    if model.family is Family.TWOD_I:
        return p["C"] - p["B"] ** 2
    if model.family is Family.TWOD_II:
        return -(p["B1"] ** 2 + p["B2"] ** 2)
    raise DomainError("ground_energy is defined for the 2D families")


def energy_map(model: PotentialModel, j: int, eps: float, c1: float = 0.0) -> float:
    """Physical energy of the level whose T-eigenvalue is ``eps``.

    1D families return E directly.  For the 2D families ``eps`` is the
    x-block eigenvalue, ``c1`` the separation constant, and the total energy
    E = E0 + c1 + eps is returned.
    """
    j = _check_index(j)
    p = model.params
    if model.family is Family.ONED_I:
        b, c = p["B"], p["C"]
        return eps - (j + 1) * b / (3.0 * math.sqrt(c)) - (3.0 * (j + 1) * c / (2.0 * b)) ** 2
    if model.family is Family.ONED_II:
        return p["V0"] + eps - (j + 1) * p["B"] / SQRT2
    return ground_energy(model) + c1 + eps


@dataclass(frozen=True)
class StationaryPoint:
    x: float
    kind: str       # "minimum", "maximum" or "inflection"
    value: float


def stationary_points(V: Polynomial, tol: float = 1e-12) -> tuple[StationaryPoint, ...]:
    dV = V.deriv()
    if dV.degree() < 1 or not np.any(dV.coef):
        return ()
    roots = real_roots(dV, 1e-9)
    d2 = V.deriv(2)
    out = []
    for r in roots.real:
        curv = float(d2(r))
        scale = tol * (1.0 + float(np.max(np.abs(d2.coef))))
        kind = "minimum" if curv > scale else "maximum" if curv < -scale else "inflection"
        out.append(StationaryPoint(r, kind, float(V(r))))
    return tuple(out)


def is_symmetric(model: PotentialModel, rel_tol: float = 1e-12) -> bool:
    """The symmetric-well condition 2 B^2 = 9 A C of the cubic-quartic family."""
    if model.family is not Family.ONED_I:
        raise DomainError("symmetry condition is defined for oned1")
    a = model.get("A")
    if a is None:
        raise DomainError("A is not set; constrain the model first")
    lhs, rhs = 2.0 * model["B"] ** 2, 9.0 * a * model["C"]
    return math.isclose(lhs, rhs, rel_tol=rel_tol, abs_tol=rel_tol)


@dataclass(frozen=True)
class SpectrumResult:
    model: PotentialModel          # carries the forced parameter values
    j: int
    eps_roots: tuple[float, ...]
    multiplicity: tuple[int, ...]
    complex_root_count: int
    energies: tuple[float, ...]
    constraint: dict[str, float]
    self_test_residuals: tuple[float, ...]
    critical: Polynomial = field(repr=False)

    def __post_init__(self) -> None:
        if sum(self.multiplicity) + self.complex_root_count != self.j + 1:
            raise AssertionError("root count does not match the critical degree")


def full_spectrum(model: PotentialModel, j: int, tol: float = DEFAULT_ROOT_TOL) -> SpectrumResult:
    """All algebraic levels of a 1D family at representation index j."""
    if model.family.dimension != 1:
        raise DomainError("full_spectrum is for 1D families; use separable2d for 2D")
    j = _check_index(j)
    constraint = qes_constraint(model, j)
    constrained = model.replace(**constraint)
    spec = RecurrenceSpec(constrained, j)
    fam = generate_polynomials(spec)
    roots = real_roots(fam.critical, tol)
    energies = tuple(energy_map(constrained, j, e) for e in roots.real)
    residuals = tuple(recurrence_self_test(spec, e, critical=fam.critical) for e in roots.real)
    return SpectrumResult(
        model=constrained,
        j=j,
        eps_roots=roots.real,
        multiplicity=roots.multiplicity,
        complex_root_count=roots.complex_count,
        energies=energies,
        constraint=constraint,
        self_test_residuals=residuals,
        critical=fam.critical,
    )
