"""sl(2, R) generators acting on polynomial coefficient vectors.

The generators are realized as first-order differential operators

    J+ = x^2 d/dx - j x,    J0 = x d/dx - j/2,    J- = d/dx,

which act on the monomial x^m as

    J- x^m = m x^(m-1),   J0 x^m = (m - j/2) x^m,   J+ x^m = (m - j) x^(m+1).

For integer j >= 0 the span of {1, x, ..., x^j} is invariant under every
operator built from J-^2, J-, J0 and J+, which is what makes a finite part
of the spectrum algebraic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .models import SQRT2, Family, PotentialModel, _check_index

__all__ = [
    "AlgebraicOperator",
    "CoeffVector",
    "CommutatorReport",
    "GeneratorKind",
    "apply_generator",
    "apply_operator",
    "build_operator",
    "commutator_report",
    "operator_matrix",
]


class GeneratorKind(enum.Enum):
    JPLUS = "J+"
    JZERO = "J0"
    JMINUS = "J-"


class CoeffVector:
    """Dense real polynomial in x, constant coefficient first.

    Trailing zeros are allowed in storage; :attr:`degree` ignores them and
    the empty vector is the zero polynomial (degree -1).
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[float] = ()) -> None:
        # float64 unless an extended-precision array is handed in
        if isinstance(coeffs, np.ndarray) and coeffs.dtype == np.longdouble:
            c = np.array(coeffs, dtype=np.longdouble).ravel()
        else:
            c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                         dtype=float).ravel()
        c.setflags(write=False)
        self._c = c

    @classmethod
    def monomial(cls, m: int, value: float = 1.0) -> "CoeffVector":
        c = np.zeros(m + 1)
        c[m] = value
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self._c)
        return int(nz[-1]) if nz.size else -1

    def __len__(self) -> int:
        return self._c.size

    def __repr__(self) -> str:
        return f"CoeffVector({self._c.tolist()!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoeffVector):
            return NotImplemented
        return np.array_equal(self.trimmed().coeffs, other.trimmed().coeffs)

    def trimmed(self) -> "CoeffVector":
        return CoeffVector(self._c[: self.degree + 1])

    def padded(self, size: int) -> np.ndarray:
        out = np.zeros(max(size, self._c.size), dtype=self._c.dtype)
        out[: self._c.size] = self._c
        return out

    def __add__(self, other: "CoeffVector") -> "CoeffVector":
        n = max(len(self), len(other))
        return CoeffVector(np.add(self.padded(n), other.padded(n)))

    def __sub__(self, other: "CoeffVector") -> "CoeffVector":
        n = max(len(self), len(other))
        return CoeffVector(np.subtract(self.padded(n), other.padded(n)))

    def scale(self, s: float) -> "CoeffVector":
        return CoeffVector(np.multiply(s, self._c))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._c))) if self._c.size else 0.0

    def deriv(self, k: int = 1) -> "CoeffVector":
        return CoeffVector(np.polynomial.polynomial.polyder(self._c, k) if self._c.size else ())

    def __call__(self, x):
        if not self._c.size:
            return np.zeros_like(np.asarray(x, dtype=float))
        return np.polynomial.polynomial.polyval(x, self._c)


def _as_coeffs(p: CoeffVector | Sequence[float]) -> np.ndarray:
    return p.coeffs if isinstance(p, CoeffVector) else np.asarray(p, dtype=float)


def apply_generator(gen: GeneratorKind, j: int, p: CoeffVector | Sequence[float]) -> CoeffVector:
    """Exact image of ``p`` under one generator of the realization.

    Example:
        >>> apply_generator(GeneratorKind.JMINUS, 0, [0, 0, 0, 1])
        CoeffVector([0.0, 0.0, 3.0])
    """
    j = _check_index(j)
    c = _as_coeffs(p)
    m = np.arange(c.size, dtype=c.dtype)
    if gen is GeneratorKind.JMINUS:
        return CoeffVector((m * c)[1:])
    if gen is GeneratorKind.JZERO:
        return CoeffVector((m - j / 2.0) * c)
    out = np.zeros(c.size + 1, dtype=c.dtype)
    out[1:] = (m - j) * c
    return CoeffVector(out)


@dataclass(frozen=True)
class CommutatorReport:
    """Largest output coefficient of each commutator defect, scaled to unit max."""

    j: int
    max_degree: int
    plus_minus: float   # [J+, J-] + 2 J0
    zero_plus: float    # [J0, J+] - J+
    zero_minus: float   # [J0, J-] + J-

    @property
    def max_defect(self) -> float:
        return max(self.plus_minus, self.zero_plus, self.zero_minus)

    def as_dict(self) -> dict[str, float]:
        return {
            "[J+,J-]+2J0": self.plus_minus,
            "[J0,J+]-J+": self.zero_plus,
            "[J0,J-]+J-": self.zero_minus,
        }


def commutator_report(j: int, max_degree: int) -> CommutatorReport:
    """Check the three sl(2) commutation relations on x^0 .. x^max_degree."""
    j = _check_index(j)
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    P, Z, M = GeneratorKind.JPLUS, GeneratorKind.JZERO, GeneratorKind.JMINUS

    def ap(g: GeneratorKind, v: CoeffVector) -> CoeffVector:
        return apply_generator(g, j, v)

    worst = [0.0, 0.0, 0.0]
    for m in range(max_degree + 1):
        e = CoeffVector.monomial(m)
        pm, mp = ap(P, ap(M, e)), ap(M, ap(P, e))
        zp, pz = ap(Z, ap(P, e)), ap(P, ap(Z, e))
        zm, mz = ap(Z, ap(M, e)), ap(M, ap(Z, e))
        terms = [
            (pm - mp) + ap(Z, e).scale(2.0),
            (zp - pz) - ap(P, e),
            (zm - mz) + ap(M, e),
        ]
        scales = [
            max(pm.max_abs(), mp.max_abs(), 1.0),
            max(zp.max_abs(), pz.max_abs(), 1.0),
            max(zm.max_abs(), mz.max_abs(), 1.0),
        ]
        for i, (t, s) in enumerate(zip(terms, scales)):
            worst[i] = max(worst[i], t.max_abs() / s)
    return CommutatorReport(j, max_degree, *worst)


@dataclass(frozen=True)
class AlgebraicOperator:
    """T = cMM J-^2 + cM J- + c0 J0 + cP J+ + cId on the spin-j/2 module."""

    cMM: float
    cM: float
    c0: float
    cP: float
    cId: float
    j: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "j", _check_index(self.j))
        for name in ("cMM", "cM", "c0", "cP", "cId"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"operator coefficient {name} is not finite")
            object.__setattr__(self, name, v)

    @property
    def coefficients(self) -> tuple[float, float, float, float, float]:
        return (self.cMM, self.cM, self.c0, self.cP, self.cId)

    def drift(self) -> np.ndarray:
        """Coefficients of the first-derivative term cM + c0 x + cP x^2."""
        return np.array([self.cM, self.c0, self.cP])

    def multiplier(self) -> np.ndarray:
        """Coefficients of the zeroth-order term -(c0 j/2) + cId - cP j x."""
        return np.array([self.cId - self.c0 * self.j / 2.0, -self.cP * self.j])


def apply_operator(T: AlgebraicOperator, p: CoeffVector | Sequence[float]) -> CoeffVector:
    j = T.j
    v = p if isinstance(p, CoeffVector) else CoeffVector(p)
    out = CoeffVector(())
    if T.cMM:
        mm = apply_generator(GeneratorKind.JMINUS, j, apply_generator(GeneratorKind.JMINUS, j, v))
        out = out + mm.scale(T.cMM)
    if T.cM:
        out = out + apply_generator(GeneratorKind.JMINUS, j, v).scale(T.cM)
    if T.c0:
        out = out + apply_generator(GeneratorKind.JZERO, j, v).scale(T.c0)
    if T.cP:
        out = out + apply_generator(GeneratorKind.JPLUS, j, v).scale(T.cP)
    if T.cId:
        out = out + v.scale(T.cId)
    if len(out) == 0:
        return CoeffVector(np.zeros(len(v), dtype=v.coeffs.dtype))
    return out


def operator_matrix(T: AlgebraicOperator) -> np.ndarray:
    """Matrix of T on the basis 1, x, ..., x^j; column m holds T x^m."""
    n = T.j + 1
    M = np.zeros((n, n))
    for m in range(n):
        M[:, m] = apply_operator(T, CoeffVector.monomial(m)).padded(n)[:n]
    return M


def build_operator(model: PotentialModel, j: int, axis: str = "x") -> AlgebraicOperator:
    """The QES operator of a model family at representation index j.

    For the 2D families ``axis`` selects the x- or y-factor; the first 2D
    family is only polynomial-quasi-exactly solvable along x.
    """
    j = _check_index(j)
    p = model.params
    fam = model.family
    if fam is Family.ONED_I:
        b, c = p["B"], p["C"]
        sc = math.sqrt(c)
        return AlgebraicOperator(-1.0, -3.0 * (j + 1) * c / b, -2.0 * b / (3.0 * sc), sc, 0.0, j)
    if fam is Family.ONED_II:
        return AlgebraicOperator(-1.0, 0.0, -SQRT2 * p["B"], -SQRT2 * p["C"], 0.0, j)
    if fam is Family.TWOD_I:
        if axis != "x":
            raise DomainError("the y-factor of twod1 is a harmonic oscillator, not a QES block")
        return AlgebraicOperator(-1.0, 2.0 * p["B"], 0.0, 2.0 * p["A"], 0.0, j)
    if axis == "x":
        return AlgebraicOperator(-1.0, 2.0 * p["B1"], 0.0, 2.0 * p["A1"], 0.0, j)
    if axis == "y":
        return AlgebraicOperator(-1.0, 2.0 * p["B2"], 0.0, 2.0 * p["A2"], 0.0, j)
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
