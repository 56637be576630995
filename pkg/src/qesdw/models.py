"""Potential families and their parameter guards."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterator

from numpy.polynomial import Polynomial

from .errors import DomainError

SQRT2 = math.sqrt(2.0)


class Family(str, enum.Enum):
    """Tag selecting one of the four potential families."""

    ONED_I = "oned1"
    ONED_II = "oned2"
    TWOD_I = "twod1"
    TWOD_II = "twod2"

    @property
    def dimension(self) -> int:
        return 1 if self in (Family.ONED_I, Family.ONED_II) else 2


# Canonical parameter order per family. Names listed in _DERIVED are outputs
# of the QES constraint and may be absent until `constrained` is called.
_PARAMS: dict[Family, tuple[str, ...]] = {
    Family.ONED_I: ("A", "B", "C"),
    Family.ONED_II: ("V0", "A", "B", "C"),
    Family.TWOD_I: ("A", "B", "C", "alpha"),
    Family.TWOD_II: ("A1", "A2", "B1", "B2", "alpha", "beta"),
}
_DERIVED: dict[Family, tuple[str, ...]] = {
    Family.ONED_I: ("A",),
    Family.ONED_II: ("A",),
    Family.TWOD_I: ("alpha",),
    Family.TWOD_II: ("alpha", "beta"),
}
_DEFAULTS: dict[Family, dict[str, float]] = {
    Family.ONED_II: {"V0": 0.0},
}


def _check_index(j: object, name: str = "j") -> int:
    if isinstance(j, bool) or not isinstance(j, (int,)) and not (
        isinstance(j, float) and j.is_integer()
    ):
        raise ValueError(f"{name} must be a non-negative integer, got {j!r}")
    j = int(j)
    if j < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {j}")
    return j


@dataclass(frozen=True)
class PotentialModel:
    """A potential family together with its real parameters.

    Parameters that the QES construction forces (``A`` for the 1D families,
    the state parameters ``alpha``/``beta`` for the 2D ones) may be left
    out; :meth:`constrained` returns a copy carrying the forced values.

    Example:
        >>> m = PotentialModel.create("oned1", B=1.0, C=1.0)
        >>> m["B"], m.get("A")
        (1.0, None)
    """

    family: Family
    items: tuple[tuple[str, float], ...] = field(default=())

    def __post_init__(self) -> None:
        allowed = _PARAMS[self.family]
        values = dict(self.items)
        for name in values:
            if name not in allowed:
                raise DomainError(
                    f"parameter {name!r} is not defined for family {self.family.value}"
                )
        required = [p for p in allowed if p not in _DERIVED[self.family]]
        for name, default in _DEFAULTS.get(self.family, {}).items():
            values.setdefault(name, default)
        missing = [p for p in required if p not in values]
        if missing:
            raise DomainError(f"missing parameter(s) {', '.join(missing)}")
        for name, v in values.items():
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
        ordered = tuple((p, float(values[p])) for p in allowed if p in values)
        object.__setattr__(self, "items", ordered)
        self._check_guards()

    @classmethod
    def create(cls, family: Family | str, **params: float) -> "PotentialModel":
        return cls(Family(family), tuple((k, float(v)) for k, v in params.items()))

    # -- mapping access -------------------------------------------------
    def __getitem__(self, name: str) -> float:
        for k, v in self.items:
            if k == name:
                return v
        raise KeyError(name)

    def get(self, name: str, default: float | None = None) -> float | None:
        try:
            return self[name]
        except KeyError:
            return default

    def __iter__(self) -> Iterator[str]:
        return (k for k, _ in self.items)

    @property
    def params(self) -> dict[str, float]:
        return dict(self.items)

    def replace(self, **params: float) -> "PotentialModel":
        values = self.params
        values.update({k: float(v) for k, v in params.items()})
        return PotentialModel(self.family, tuple(values.items()))

    # -- guards -----------------------------------------------------------
    def _check_guards(self) -> None:
        p = self.params
        fam = self.family
        if fam is Family.ONED_I:
            if p["B"] == 0.0:
                raise DomainError("B must be nonzero")
            if p["C"] <= 0.0:
                raise DomainError("C must be positive")
        elif fam is Family.ONED_II:
            if p["C"] == 0.0:
                raise DomainError("C must be nonzero")
        elif fam is Family.TWOD_I:
            if p["A"] == 0.0:
                raise DomainError("A must be nonzero")
            if p["C"] <= 0.0:
                raise DomainError("C must be positive")
        elif fam is Family.TWOD_II:
            if p["A1"] == 0.0:
                raise DomainError("A1 must be nonzero")
            if p["A2"] == 0.0:
                raise DomainError("A2 must be nonzero")

    # -- QES constraint -----------------------------------------------------
    def forced_values(self, j: int, j_y: int | None = None) -> dict[str, float]:
        """Values of the parameters the construction pins at representation index j.

        For the second 2D family ``j`` is the x-index and ``j_y`` the
        y-index (defaulting to ``j``).
        """
        j = _check_index(j)
        p = self.params
        fam = self.family
        if fam is Family.ONED_I:
            b, c = p["B"], p["C"]
            return {"A": (2.0 * b**3 - 27.0 * (j + 1) * c**2.5) / (9.0 * b * c)}
        if fam is Family.ONED_II:
            return {"A": -SQRT2 * p["C"] * (j + 1)}
        if fam is Family.TWOD_I:
            return {"alpha": float(j + 1)}
        j_y = j if j_y is None else _check_index(j_y, "j_y")
        return {"alpha": float(j + 1), "beta": float(j_y + 1)}

    def constrained(self, j: int, j_y: int | None = None) -> "PotentialModel":
        return self.replace(**self.forced_values(j, j_y))

    # -- potentials ---------------------------------------------------------
    def _need(self, name: str) -> float:
        v = self.get(name)
        if v is None:
            raise DomainError(
                f"{name} is fixed by the QES constraint; call constrained(j) first"
            )
        return v

    def potential(self) -> Polynomial:
        """V(x) of a 1D family as a polynomial in x."""
        p = self.params
        if self.family is Family.ONED_I:
            a = self._need("A")
            return Polynomial([0.0, 0.0, a / 2.0, -p["B"] / 3.0, p["C"] / 4.0])
        if self.family is Family.ONED_II:
            a = self._need("A")
            b, c = p["B"], p["C"]
            return Polynomial([p["V0"], -a, b * b / 2.0, b * c, c * c / 2.0])
        raise DomainError("potential() is for 1D families; use axis_potentials()")

    def axis_potentials(self) -> tuple[Polynomial, Polynomial]:
        """(V_x, V_y) with V(x, y) = V_x(x) + V_y(y) for a 2D family.

        The quadratic and linear x-coefficients are those for which the
        stated ground state exp(-W - F) is an exact eigenfunction at
        alpha = 1 (see ``separable2d``).
        """
        p = self.params
        if self.family is Family.TWOD_I:
            a, b, c = p["A"], p["B"], p["C"]
            alpha = self._need("alpha")
            vx = Polynomial([0.0, -2.0 * a * alpha, 2.0 * a * b, 0.0, a * a])
            vy = Polynomial([0.0, 0.0, c * c])
            return vx, vy
        if self.family is Family.TWOD_II:
            a1, a2, b1, b2 = p["A1"], p["A2"], p["B1"], p["B2"]
            alpha, beta = self._need("alpha"), self._need("beta")
            vx = Polynomial([0.0, -2.0 * a1 * alpha, 2.0 * a1 * b1, 0.0, a1 * a1])
            vy = Polynomial([0.0, -2.0 * a2 * beta, 2.0 * a2 * b2, 0.0, a2 * a2])
            return vx, vy
        raise DomainError("axis_potentials() is for 2D families; use potential()")

    def to_json(self) -> dict[str, float]:
        return self.params
